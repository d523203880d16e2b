// Acceptance run: one PASS/FAIL line per criterion, tolerances fixed here.
// Exit status is nonzero when any criterion fails.

#include <sys/wait.h>

#include <array>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "magschro/magschro.hpp"

using namespace magschro;

namespace {

constexpr double kIdentityTol = 1e-10;
constexpr double kIdentitySeconds = 30;
constexpr int kSquareSamples = 10000;
constexpr double kOracleTol = 1e-12;
constexpr double kHermitianTol = 1e-12;
constexpr double kFlipTol = 1e-12;
constexpr std::size_t kFlippedEdges = 10;

struct Line {
  int id;
  std::string name;
  bool pass;
  std::string detail;
};

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(3);
  os << x;
  return os.str();
}

Line identities() {
  const auto res = run_identity_suite(42, 200, kIdentityTol);
  std::string detail;
  double worst = 0;
  for (const auto& l : res.lines) {
    detail += l.name + " " + std::to_string(l.violations) + "/" + std::to_string(l.cases) + ", ";
    worst = std::max(worst, l.worst_relative);
  }
  detail += "worst relative " + fmt(worst) + ", " + fmt(res.seconds) + " s";
  return {1, "identity suites", res.pass() && res.seconds < kIdentitySeconds, detail};
}

Line square_average() {
  const auto l = run_square_average_suite(2, kSquareSamples);
  return {2, "square-average inequality", l.violations == 0 && l.cases == kSquareSamples,
          std::to_string(l.violations) + " violations in " + std::to_string(l.cases) + " samples"};
}

Line truncation_oracle() {
  Random rnd(10);
  double worst = 0, worst_hermitian = 0;
  int functions = 0;
  auto probe = [&](const WeightedGraph& g, const std::vector<VertexId>& window, int count) {
    const auto T = assemble_truncation(g, window);
    worst_hermitian = std::max(worst_hermitian, T.w_hermitian_defect());
    for (int j = 0; j < count; ++j, ++functions) {
      const auto u = rnd.vertex_function(window, rnd.uniform(0.1, 1));
      const auto Mu = T.apply(u), Hu = schrodinger_apply(g, u);
      double diff = 0, scale = 0;
      for (VertexId x : window) {
        diff = std::max(diff, std::abs(Mu(x) - Hu(x)));
        scale = std::max(scale, std::abs(Hu(x)));
      }
      worst = std::max(worst, scale > 0 ? diff / scale : diff);
    }
  };
  const auto ex = worked_example_graph();
  for (int K : {10, 50, 200}) probe(ex, prefix_window(K), 10);
  for (int k = 0; k < 35; ++k) {
    const auto g = rnd.graph();
    auto window = g.vertices();
    window.resize(std::max<std::size_t>(1, window.size() / 2 + 1));
    probe(g, window, 2);
  }
  return {10, "truncation oracle", worst <= kOracleTol && worst_hermitian <= kHermitianTol,
          std::to_string(functions) + " functions, max relative |Mu - Hu| " + fmt(worst) +
              ", max w-Hermitian defect " + fmt(worst_hermitian)};
}

double rel(std::complex<double> a, std::complex<double> b, double scale) {
  return std::abs(a - b) / std::max(scale, 1e-300);
}

Line orientation_flip() {
  Random rnd(11);
  double inner = 0, codiff = 0, residuals = 0, sumI = 0, js = 0;
  for (int k = 0; k < 50; ++k) {
    const auto g = rnd.graph({.min_vertices = 8});
    const auto f = g.with_flipped(rnd.edges(g, kFlippedEdges));
    const auto V = g.vertices();
    const auto u = rnd.vertex_function(V), v = rnd.vertex_function(V);
    const auto Y = rnd.edge_function(g, V), Z = rnd.edge_function(g, V);

    const auto ia = inner_a(g, Y, Z);
    inner = std::max(inner, rel(ia, inner_a(f, Y, Z), norm_a(g, Y) * norm_a(g, Z)));

    const auto dg = delta_sigma(g, Y), df = delta_sigma(f, Y);
    double scale = 0;
    for (const auto& [x, val] : dg) scale = std::max(scale, std::abs(val));
    for (VertexId x : V) codiff = std::max(codiff, rel(dg(x), df(x), scale));

    for (const auto& r : {leibniz_residual(f, u, v), delta_product_residual(f, u, Y), adjointness_residual(f, u, Y),
                          composition_residual(f, u), symmetry_residual(f, u, v)})
      residuals = std::max(residuals, r.relative());

    const auto phi = rnd.vertex_function(V, 0.7, true);
    const double Ig = sum_I(g, u, phi);
    sumI = std::max(sumI, std::abs(Ig - sum_I(f, u, phi)) / std::max(Ig, 1e-300));

    const double s = rnd.log_uniform(0.5, 20);
    const auto jg = J_s_detailed(g, u, v, {1}, s), jf = J_s_detailed(f, u, v, {1}, s);
    js = std::max(js, rel(jg.value, jf.value, jg.scale));
  }
  const bool pass = inner <= kFlipTol && codiff <= kFlipTol && residuals <= kFlipTol && sumI <= kFlipTol &&
                    js <= kFlipTol;
  return {11, "orientation-flip invariance", pass,
          "max relative change: inner_a " + fmt(inner) + ", delta_sigma Y " + fmt(codiff) +
              ", residuals after flip " + fmt(residuals) + ", sum_I " + fmt(sumI) + ", J_s " + fmt(js)};
}

Line cli() {
  std::string detail;
  bool pass = true;

  const char* exe = MAGSCHRO_CLI_PATH;
  const std::string cmd = std::string("\"") + exe + "\" reproduce paper-example 2>&1";
  std::string output;
  int status = -1;
  if (FILE* pipe = popen(cmd.c_str(), "r")) {
    std::array<char, 4096> buf;
    while (std::fgets(buf.data(), buf.size(), pipe)) output += buf.data();
    const int raw = pclose(pipe);
    status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  }
  int asserted = 0;
  for (int id = 3; id <= 9; ++id) asserted += output.find("PASS  [" + std::to_string(id) + "]") != std::string::npos;
  pass = pass && status == 0 && asserted == 7;
  detail += "reproduce exit " + std::to_string(status) + ", " + std::to_string(asserted) + "/7 of checks 3-9 pass";

  Random rnd(12);
  bool stable = true;
  for (int k = 0; k < 20; ++k) {
    const std::string once = serialize_graph(rnd.graph());
    stable = stable && serialize_graph(read_graph(once)) == once;
  }
  pass = pass && stable;
  detail += std::string("; round-trip ") + (stable ? "byte-stable" : "NOT stable");

  const double w3 = parse_expr("-(n^2)")(3);
  pass = pass && w3 == -9;
  detail += "; -(n^2) at 3 = " + fmt(w3);
  return {12, "command line", pass, detail};
}

}  // namespace

int main() {
  std::vector<Line> lines;
  auto emit = [&](const Line& l) {
    std::cout << (l.pass ? "PASS" : "FAIL") << "  criterion " << l.id << " (" << l.name << "): " << l.detail
              << std::endl;
    lines.push_back(l);
  };

  emit(identities());
  emit(square_average());
  for (const auto& c : run_worked_example()) emit({c.id, c.name, c.pass, c.detail});
  emit(truncation_oracle());
  emit(orientation_flip());
  emit(cli());

  int failed = 0;
  for (const auto& l : lines) failed += !l.pass;
  std::cout << (lines.size() - failed) << "/" << lines.size() << " criteria pass" << std::endl;
  return failed == 0 ? 0 : 1;
}
