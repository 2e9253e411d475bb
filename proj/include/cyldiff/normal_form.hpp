#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "cyldiff/dynamics.hpp"
#include "cyldiff/potentials.hpp"

namespace cyldiff {

// Smooth plateau: 1 on |x| <= 1, 0 on |x| >= 2, exp(-1/t) glue in between.
double bump_mu(double x) noexcept;

struct NormalFormParams {
  double beta = 0.05;
  int quadrature_nodes = 4096;  // only for the quadrature cross-check of the drift
};

struct Rational {
  long p = 0;
  long q = 1;
  double value() const noexcept { return static_cast<double>(p) / static_cast<double>(q); }
  friend bool operator==(const Rational&, const Rational&) = default;
};

// S_1^k(r) for a given Ev, without building a NormalForm.
std::complex<double> s1_coefficient(int k, double r, double beta, const TrigPotential& Ev);

struct CorrectionFields {
  TrigPotential E1;    // -sum i (Ev^k)'(r) / (2 pi k) e^{2 pi i k theta}
  TrigPotential E3;    // same with r = p/q frozen, harmonics q | k removed
  TrigPotential Evpq;  // harmonics of Ev with q | k inside the Fourier support
};

CorrectionFields correction_fields(const TrigPotential& Ev, Rational pq, const std::vector<int>& support);

// S_1 and its partial derivatives at a point (t = theta, r = r tilde).
struct GeneratingDerivs {
  double s = 0, t = 0, r = 0, tt = 0, tr = 0, rr = 0;
};

// Mollified first-order generating function and the quantities derived from
// it for the averaged map.
class NormalForm {
 public:
  NormalForm(const SystemPotentials& pots, NormalFormParams params);

  const NormalFormParams& params() const noexcept { return params_; }
  const ExpectedDifference& expected() const noexcept { return ed_; }
  int degree() const noexcept { return d_; }
  const std::vector<int>& support() const noexcept { return support_; }

  double mu_k(int k, double r) const;
  std::complex<double> s1(int k, double r) const;
  // S_1^k and its first two r-derivatives.
  struct CoeffJet {
    std::complex<double> v, d1, d2;
  };
  CoeffJet s1_jet(int k, double r) const;
  GeneratingDerivs s1_field(double theta, double r) const;

  // Nearest p/q with q <= 2d and |r - p/q| < width, if any.
  std::optional<Rational> resonance_within(double r, double width) const;

  // Drift by Fourier pairing. Throws ResonantInput within beta of a resonance.
  double drift(double r) const;
  // The same integral by trapezoidal quadrature of the pointwise integrand.
  double drift_quadrature(double r) const;
  double sigma2(double r) const { return sigma_squared(ed_.v, r); }

  // Second-order term of the conjugated averaged map's r-component.
  double E2(double theta, double r) const;
  // dS(theta) + Ev(theta) - dS(theta + r), all at r.
  double homological_residual(double theta, double r) const;
  // True when every mu_k(r) vanishes, so S_1 solves the homological equation.
  bool mollifier_inactive(double r) const;

  CorrectionFields corrections(Rational pq) const { return correction_fields(ed_.Ev, pq, support_); }

  // Truncated second-order expansions of Phi and its inverse.
  State phi(State tilde, double eps) const;
  State phi_inverse(State st, double eps) const;
  // The exact change of variables generated by theta*r~ + eps*S_1(theta, r~),
  // solved by fixed-point iteration.
  State phi_exact(State tilde, double eps) const;
  State phi_inverse_exact(State st, double eps) const;

 private:
  SystemPotentials pots_;
  ExpectedDifference ed_;
  NormalFormParams params_;
  int d_ = 1;
  std::vector<int> support_;
};

double drift_b(const MapSystem& sys, double r, const NormalFormParams& params);

struct ScalingReport {
  std::vector<double> eps;
  std::vector<double> max_residual;
  double exponent = 0.0;
};

enum class ResidualForm { Far, Near };

// r-component of Phi^{-1} o Ef o Phi minus its normal form (r + eps^2 E2 far
// from resonances, r + eps Ev_{p,q} near p/q) on a theta x r grid, for each eps.
ScalingReport conjugacy_residual(const MapSystem& sys, const NormalForm& nf, Interval window,
                                 const std::vector<double>& eps_list, ResidualForm form = ResidualForm::Far,
                                 int theta_points = 64, int r_points = 21);

// max over the grid of |Phi^{-1}(Phi(x)) - x| with the truncated expansions.
ScalingReport phi_roundtrip(const NormalForm& nf, Interval window, const std::vector<double>& eps_list,
                            int theta_points = 64, int r_points = 21);

}  // namespace cyldiff
