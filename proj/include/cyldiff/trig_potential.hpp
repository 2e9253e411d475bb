#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <map>
#include <vector>

#include "cyldiff/poly.hpp"

namespace cyldiff {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

// Reduces an angle into [0, 1).
inline double wrap_unit(double theta) noexcept {
  double w = theta - std::floor(theta);
  return w >= 1.0 ? 0.0 : w;
}

// Real trigonometric polynomial in theta with polynomial r-dependence:
//   g(theta, r) = sum_{|k| <= d} c_k(r) exp(2 pi i k theta),  c_{-k} = conj(c_k).
// Only k >= 0 is stored; negative harmonics are the conjugates, so evaluation
// is real by construction.
class TrigPotential {
 public:
  TrigPotential() = default;

  // harmonics[k] is c_k for k = 0..d. The k = 0 term must be real.
  explicit TrigPotential(std::vector<ComplexPoly> harmonics);

  // Builds from an explicit map over k in [-d, d]. Entries given for only one
  // of +-k are mirrored; if both are present they must be conjugate within tol.
  static TrigPotential from_harmonics(const std::map<int, ComplexPoly>& coeffs, double tol = 1e-12);

  static TrigPotential constant(Polynomial value);
  static TrigPotential constant(double value) { return constant(Polynomial::constant(value)); }
  // amplitude(r) * cos(2 pi k theta) and amplitude(r) * sin(2 pi k theta).
  static TrigPotential cosine(int k, Polynomial amplitude = Polynomial{1.0});
  static TrigPotential sine(int k, Polynomial amplitude = Polynomial{1.0});

  int degree() const noexcept { return static_cast<int>(h_.size()) - 1; }
  bool is_zero() const noexcept { return h_.empty(); }

  // Coefficient polynomial of harmonic k (any sign); zero outside [-d, d].
  ComplexPoly harmonic(int k) const;
  std::complex<double> coeff(int k, double r) const;
  // c_0(r) .. c_d(r).
  std::vector<std::complex<double>> coeffs_at(double r) const;

  double operator()(double theta, double r) const noexcept {
    return eval_unit(std::polar(1.0, kTwoPi * theta), r);
  }
  // Evaluation given unit = exp(2 pi i theta), so several potentials at the
  // same angle share one sincos.
  double eval_unit(std::complex<double> unit, double r) const noexcept;

  TrigPotential d_theta() const;
  TrigPotential d_r() const;
  // Keeps harmonics k (k >= 0 tested; the mirror follows) for which keep(k).
  TrigPotential filtered(const std::function<bool(int)>& keep) const;

  TrigPotential& operator+=(const TrigPotential& o);
  TrigPotential& operator-=(const TrigPotential& o);
  TrigPotential& operator*=(double s);

  friend TrigPotential operator+(TrigPotential a, const TrigPotential& b) { return a += b; }
  friend TrigPotential operator-(TrigPotential a, const TrigPotential& b) { return a -= b; }
  friend TrigPotential operator*(TrigPotential a, double s) { return a *= s; }
  friend TrigPotential operator*(double s, TrigPotential a) { return a *= s; }
  // Pointwise product; degree adds.
  friend TrigPotential operator*(const TrigPotential& a, const TrigPotential& b);

  const std::vector<ComplexPoly>& nonnegative_harmonics() const noexcept { return h_; }

 private:
  void trim();
  std::vector<ComplexPoly> h_;
};

// Integral over one period of f*g for real trig polynomials, evaluated on
// coefficient vectors c_0..c_d (conjugate-symmetric extension implied).
double fourier_pairing(const std::vector<std::complex<double>>& f,
                       const std::vector<std::complex<double>>& g) noexcept;

}  // namespace cyldiff
