#pragma once

#include "magschro/calculus.hpp"
#include "magschro/error.hpp"
#include "magschro/estimates.hpp"
#include "magschro/expr.hpp"
#include "magschro/family.hpp"
#include "magschro/fields.hpp"
#include "magschro/graph.hpp"
#include "magschro/graph_io.hpp"
#include "magschro/hypothesis.hpp"
#include "magschro/metric.hpp"
#include "magschro/random.hpp"
#include "magschro/scalar.hpp"
#include "magschro/spectral.hpp"
#include "magschro/suites.hpp"
#include "magschro/worked_example.hpp"
