#pragma once

// Scalar plumbing shared by the double-precision and exact-rational code
// paths. Everything in fields/calculus is written against ScalarTraits so the
// same template verifies identities in both arithmetics.

#include <cmath>
#include <complex>
#include <ostream>

#include <boost/multiprecision/cpp_int.hpp>

namespace magschro {

using Rational = boost::multiprecision::cpp_rational;

/// Minimal complex number over an exact field. std::complex<T> is only
/// specified for floating-point T.
template <class Real>
struct ExactComplex {
  Real re{0};
  Real im{0};

  ExactComplex() = default;
  ExactComplex(Real r) : re(std::move(r)) {}  // NOLINT(google-explicit-constructor)
  ExactComplex(Real r, Real i) : re(std::move(r)), im(std::move(i)) {}

  ExactComplex& operator+=(const ExactComplex& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  ExactComplex& operator-=(const ExactComplex& o) {
    re -= o.re;
    im -= o.im;
    return *this;
  }
  ExactComplex& operator*=(const ExactComplex& o) {
    Real r = re * o.re - im * o.im;
    im = re * o.im + im * o.re;
    re = std::move(r);
    return *this;
  }
  ExactComplex& operator/=(const ExactComplex& o) {
    const Real d = o.re * o.re + o.im * o.im;
    Real r = (re * o.re + im * o.im) / d;
    im = (im * o.re - re * o.im) / d;
    re = std::move(r);
    return *this;
  }

  friend ExactComplex operator+(ExactComplex a, const ExactComplex& b) { return a += b; }
  friend ExactComplex operator-(ExactComplex a, const ExactComplex& b) { return a -= b; }
  friend ExactComplex operator*(ExactComplex a, const ExactComplex& b) { return a *= b; }
  friend ExactComplex operator/(ExactComplex a, const ExactComplex& b) { return a /= b; }
  friend ExactComplex operator-(const ExactComplex& a) { return {-a.re, -a.im}; }
  friend bool operator==(const ExactComplex& a, const ExactComplex& b) {
    return a.re == b.re && a.im == b.im;
  }
  friend std::ostream& operator<<(std::ostream& os, const ExactComplex& z) {
    return os << '(' << z.re << ',' << z.im << ')';
  }
};

template <class Real>
struct ScalarTraits;

template <>
struct ScalarTraits<double> {
  using real_type = double;
  using complex_type = std::complex<double>;

  static complex_type conj(const complex_type& z) { return std::conj(z); }
  static double norm(const complex_type& z) { return std::norm(z); }
  static double real(const complex_type& z) { return z.real(); }
  static double imag(const complex_type& z) { return z.imag(); }
  static double to_double(double x) { return x; }
  static bool is_finite(const complex_type& z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
  }
};

template <>
struct ScalarTraits<Rational> {
  using real_type = Rational;
  using complex_type = ExactComplex<Rational>;

  static complex_type conj(const complex_type& z) { return {z.re, -z.im}; }
  static Rational norm(const complex_type& z) { return z.re * z.re + z.im * z.im; }
  static const Rational& real(const complex_type& z) { return z.re; }
  static const Rational& imag(const complex_type& z) { return z.im; }
  static double to_double(const Rational& x) { return x.convert_to<double>(); }
  static bool is_finite(const complex_type&) { return true; }
};

template <class Real>
using complex_t = typename ScalarTraits<Real>::complex_type;

/// |z| as a double, exact zero preserved.
template <class Real>
double magnitude(const complex_t<Real>& z) {
  return std::sqrt(ScalarTraits<Real>::to_double(ScalarTraits<Real>::norm(z)));
}

/// Exact conversion: every finite double is a dyadic rational.
inline Rational to_rational(double x) { return Rational(x); }

}  // namespace magschro
