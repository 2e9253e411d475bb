#pragma once

#include <functional>
#include <vector>

namespace cyldiff {

struct RootScanOptions {
  int samples = 64;           // equispaced sample count on [0, 1)
  double x_tol = 1e-12;       // bisection stopping width
  // A local minimum of |f| counts as a touching root when |f| there is below
  // tangency_tol * max|f| over the samples.
  double tangency_tol = 1e-10;
};

struct RootScan {
  std::vector<double> crossings;   // sign changes, refined by bisection
  std::vector<double> tangencies;  // touching zeros without a sign change
  bool identically_zero = false;
  double max_abs = 0.0;

  std::vector<double> all() const;
};

// Zeros of a 1-periodic function on [0, 1).
RootScan periodic_roots(const std::function<double(double)>& f, const RootScanOptions& opt = {});

// Minimal circular distance between two angles.
double circle_distance(double a, double b) noexcept;

}  // namespace cyldiff
