#pragma once

#include <boost/multiprecision/mpfr.hpp>

namespace iwasawa {

using Real = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<0>,
                                           boost::multiprecision::et_off>;

/// Sets the default MPFR working precision (decimal digits) for the lifetime
/// of the object. The Boost version we build against keeps this setting
/// process-wide, so numerical code runs on one thread at a time.
class PrecisionScope {
public:
  explicit PrecisionScope(unsigned digits) : saved_(Real::default_precision()) {
    Real::default_precision(digits);
  }
  ~PrecisionScope() { Real::default_precision(saved_); }
  PrecisionScope(const PrecisionScope&) = delete;
  PrecisionScope& operator=(const PrecisionScope&) = delete;

private:
  unsigned saved_;
};

/// Minimal complex number over Real; std::complex is not specified for
/// non-builtin element types.
struct Complex {
  Real re;
  Real im;

  Complex() : re(0), im(0) {}
  Complex(Real r, Real i) : re(std::move(r)), im(std::move(i)) {}

  Complex operator+(const Complex& o) const { return {re + o.re, im + o.im}; }
  Complex operator-(const Complex& o) const { return {re - o.re, im - o.im}; }
  Complex operator*(const Complex& o) const {
    return {re * o.re - im * o.im, re * o.im + im * o.re};
  }
  Complex operator*(const Real& s) const { return {re * s, im * s}; }
  Complex& operator+=(const Complex& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  Complex conj() const { return {re, -im}; }
  Real abs() const { return boost::multiprecision::sqrt(re * re + im * im); }
};

/// pi at the current default precision.
inline Real pi() {
  Real x;
  mpfr_const_pi(x.backend().data(), MPFR_RNDN);
  return x;
}

/// e^{2 pi i t}
inline Complex unit_circle(const Real& t) {
  const Real angle = 2 * pi() * t;
  return {boost::multiprecision::cos(angle), boost::multiprecision::sin(angle)};
}

}  // namespace iwasawa
