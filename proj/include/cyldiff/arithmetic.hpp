#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cyldiff/normal_form.hpp"
#include "cyldiff/potentials.hpp"

namespace cyldiff {

// Exponents governing the strip decomposition of the action line.
struct StripParams {
  int l = 6;
  int d = 1;
  double gamma = 0.81;
  double nu = 0.25;
  double R = 1.0 / 4.0;
  double rho = 1.0 / 16.0;
  double b = 3.0 / 32.0;
  double tau = 0.02;
  double beta = 0.05;
  double kappa = 0.2;
  double delta = 0.01;
  double a = 0.55;

  // Derives nu, R, rho, b and validates every admissibility constraint;
  // throws std::invalid_argument naming the violated one.
  static StripParams make(int l, double gamma, double tau, double beta, double kappa, double delta, int d,
                          double a = 0.55);

  double zeta() const noexcept;
};

struct BestRational {
  long p = 0;
  long q = 1;
  double error = 0.0;
};

// Continued-fraction convergents of r with denominator <= q_limit.
std::vector<Rational> convergents(double r, long q_limit);

// p/q minimising |r - p/q| over 1 <= q <= q_max; ties go to the smaller q.
BestRational best_rational(double r, long q_max);

enum class StripKind { TotallyIrrational, ImaginaryRational, Resonant };

std::string to_string(StripKind k);

struct StripClass {
  Interval interval;
  StripKind kind = StripKind::TotallyIrrational;
  std::optional<Rational> witness;
};

// Resonant if some p/q with q <= 2d lies within 2 beta; otherwise imaginary
// rational if exactly one p/q with 2d < q < eps^{-b} lies within eps^nu;
// otherwise totally irrational. Two imaginary-rational witnesses throw
// AmbiguousClass.
StripClass classify(Interval strip, const StripParams& params, double eps);

// Consecutive strips of width eps^gamma covering range.
std::vector<StripClass> classify_range(Interval range, const StripParams& params, double eps);

struct IrMeasure {
  double measure = 0.0;
  double bound = 0.0;  // eps^rho
  long count = 0;      // rationals in the union
  bool within_bound = false;
};

// Lebesgue measure of the union over reduced p/q in range with
// q_min < q <= eps^{-b} of [p/q - h, p/q + h], h = width_factor * eps^nu,
// intersected with range.
IrMeasure ir_measure(const StripParams& params, double eps, Interval range = {0.0, 1.0}, double width_factor = 1.0,
                     long q_min = 0);

struct Ergodization {
  long N = 0;
  long p = 0;
  double bound = 0.0;     // eps^{-(nu + b + 2 tau)}
  double residual = 0.0;  // |N r* - p|
};

// Throws NotTIAdmissible when some p/q with q <= eps^{-b} lies within eps^nu of r*.
Ergodization ergodization_time(double r_star, const StripParams& params, double eps);

// |N * mean(g) - sum_{k < N} g(theta* + k r*, r*)|.
double birkhoff_deviation(const TrigPotential& g, double theta_star, double r_star, long N);

}  // namespace cyldiff
