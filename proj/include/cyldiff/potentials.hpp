#pragma once

#include <string>
#include <utility>
#include <vector>

#include "cyldiff/trig_potential.hpp"

namespace cyldiff {

struct Interval {
  double lo = 0.0;
  double hi = 1.0;
};

// The six potentials of the two random maps f_{+1}, f_{-1}.
struct SystemPotentials {
  TrigPotential u_plus, u_minus;
  TrigPotential v_plus, v_minus;
  TrigPotential w_plus, w_minus;

  const TrigPotential& u(int omega) const noexcept { return omega > 0 ? u_plus : u_minus; }
  const TrigPotential& v(int omega) const noexcept { return omega > 0 ? v_plus : v_minus; }
  const TrigPotential& w(int omega) const noexcept { return omega > 0 ? w_plus : w_minus; }

  // Largest harmonic present in any of the six potentials.
  int degree() const noexcept;

  // u_1 = v_1 = cos 2 pi theta, u_{-1} = v_{-1} = sin 2 pi theta, w = 0.
  static SystemPotentials cos_sin();
};

struct ExpectedDifference {
  TrigPotential Eu, Ev;  // half-sums
  TrigPotential u, v;    // half-differences
  TrigPotential Ew;      // half-sum of w
};

ExpectedDifference expected_difference(const SystemPotentials& sys);

inline double eval(const TrigPotential& pot, double theta, double r) noexcept { return pot(theta, r); }

// int_0^1 v^2 dtheta by Parseval.
double sigma_squared(const SystemPotentials& sys, double r);
double sigma_squared(const TrigPotential& v, double r);

// Harmonics k > 0 for which (Eu^k, Ev^k) is not the zero function.
std::vector<int> fourier_support(const SystemPotentials& sys);

// max over theta and r in range of |v_{+1}|, |v_{-1}| (sampled).
double max_abs_v(const SystemPotentials& sys, Interval r_range, int r_samples = 33);

struct HypothesisResult {
  std::string name;
  bool pass = false;
  bool required = true;
  std::string detail;
  std::vector<double> witnesses;  // angles, r values or rationals, per hypothesis
};

struct HypothesisReport {
  std::vector<HypothesisResult> results;

  bool required_pass() const;
  const HypothesisResult& get(const std::string& name) const;
  std::vector<std::string> failed_required() const;
};

struct HypothesisOptions {
  int r_grid = 101;                 // sample points for the sigma^2 minimum
  double sigma_tol = 1e-12;         // H1 threshold on min sigma^2
  double coeff_tol = 1e-12;         // H0 tolerance on the mean coefficient
  int samples_per_degree = 64;      // root scan resolution
  double common_zero_tol = 1e-9;    // two roots closer than this are one
  double nondegenerate_tol = 1e-8;  // |derivative| at a simple root
  double ill_conditioned_hi = 1e-6; // |derivative| in [tol, hi) is ambiguous
};

// H0..H3 are required; H4 (period-q orbits), H5 (resonant normal-form zeros)
// and the |v_i| <= 1 normalization are reported but advisory. Throws
// IllConditioned when a root derivative lands inside the ambiguity band.
HypothesisReport check_hypotheses(const SystemPotentials& sys, Interval r_range,
                                  const HypothesisOptions& opt = {});

// Harmonics k != 0 of Ev with q | k and |k| in support (the part of Ev that
// survives averaging along a rotation by p/q).
TrigPotential resonant_harmonics(const TrigPotential& Ev, int q, const std::vector<int>& support);

// Reduced rationals p/q with 1 <= q <= q_max inside [lo, hi], sorted by value.
std::vector<std::pair<long, long>> rationals_in(Interval range, long q_max);

long gcd_long(long a, long b) noexcept;

}  // namespace cyldiff
