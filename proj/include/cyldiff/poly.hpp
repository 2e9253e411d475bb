#pragma once

#include <complex>
#include <initializer_list>
#include <vector>

namespace cyldiff {

// Real polynomial in r, coefficients in ascending powers.
class Polynomial {
 public:
  Polynomial() = default;
  Polynomial(std::initializer_list<double> coeffs) : c_(coeffs) { trim(); }
  explicit Polynomial(std::vector<double> coeffs) : c_(std::move(coeffs)) { trim(); }

  static Polynomial constant(double value) { return Polynomial{value}; }

  double operator()(double r) const noexcept {
    double acc = 0.0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * r + *it;
    return acc;
  }

  // Zero polynomial has degree -1.
  int degree() const noexcept { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const noexcept { return c_.empty(); }
  const std::vector<double>& coefficients() const noexcept { return c_; }

  Polynomial derivative() const;

  Polynomial& operator+=(const Polynomial& o);
  Polynomial& operator-=(const Polynomial& o);
  Polynomial& operator*=(double s);

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(Polynomial a, double s) { return a *= s; }
  friend Polynomial operator*(double s, Polynomial a) { return a *= s; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator-(Polynomial a) { return a *= -1.0; }

  friend bool operator==(const Polynomial&, const Polynomial&) = default;

 private:
  void trim();
  std::vector<double> c_;
};

// Complex-valued polynomial in r stored as a (real part, imaginary part) pair.
struct ComplexPoly {
  Polynomial re;
  Polynomial im;

  std::complex<double> operator()(double r) const noexcept { return {re(r), im(r)}; }
  bool is_zero() const noexcept { return re.is_zero() && im.is_zero(); }
  int degree() const noexcept { return re.degree() > im.degree() ? re.degree() : im.degree(); }

  ComplexPoly derivative() const { return {re.derivative(), im.derivative()}; }
  ComplexPoly conj() const { return {re, -im}; }

  ComplexPoly& operator+=(const ComplexPoly& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  ComplexPoly& operator-=(const ComplexPoly& o) {
    re -= o.re;
    im -= o.im;
    return *this;
  }

  friend ComplexPoly operator+(ComplexPoly a, const ComplexPoly& b) { return a += b; }
  friend ComplexPoly operator-(ComplexPoly a, const ComplexPoly& b) { return a -= b; }
  friend ComplexPoly operator*(const ComplexPoly& a, const ComplexPoly& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend ComplexPoly operator*(std::complex<double> s, const ComplexPoly& a) {
    return {a.re * s.real() - a.im * s.imag(), a.im * s.real() + a.re * s.imag()};
  }
  friend bool operator==(const ComplexPoly&, const ComplexPoly&) = default;
};

}  // namespace cyldiff
