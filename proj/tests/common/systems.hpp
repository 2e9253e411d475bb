#pragma once

#include <cmath>
#include <functional>
#include <map>
#include <random>

#include "cyldiff/potentials.hpp"
#include "cyldiff/trig_potential.hpp"

namespace cyldiff::testing {

inline Polynomial random_poly(std::mt19937_64& g, int rdeg, double scale = 1.0) {
  std::uniform_real_distribution<double> U(-scale, scale);
  std::vector<double> c(static_cast<std::size_t>(rdeg) + 1);
  for (auto& x : c) x = U(g);
  return Polynomial(c);
}

// Random real trig polynomial of degree d with degree-rdeg r-dependence.
inline TrigPotential random_potential(std::mt19937_64& g, int d, int rdeg, bool zero_mean, double scale = 1.0) {
  std::map<int, ComplexPoly> h;
  if (!zero_mean) h[0] = ComplexPoly{random_poly(g, rdeg, scale), {}};
  for (int k = 1; k <= d; ++k) h[k] = ComplexPoly{random_poly(g, rdeg, scale), random_poly(g, rdeg, scale)};
  return TrigPotential::from_harmonics(h);
}

// Composite Simpson on [0, 1] with n (even) panels.
inline double simpson(const std::function<double(double)>& f, int n = 2000) {
  const double h = 1.0 / n;
  double s = f(0.0) + f(1.0);
  for (int i = 1; i < n; ++i) s += f(i * h) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

// Exact area-preserving system from a generating function P(theta, R) with
// one harmonic: Ev = -P_theta, Eu = P_R - P_theta, Ew = P_thetaR * P_theta.
// The symbol-dependent part of v is a random zero-mean harmonic, so H1 holds.
inline SystemPotentials exact_system(std::mt19937_64& g) {
  const TrigPotential P = random_potential(g, 1, 2, false, 0.3);
  const TrigPotential Pt = P.d_theta();
  const TrigPotential Ev = -1.0 * Pt;
  const TrigPotential Eu = P.d_r() - Pt;
  const TrigPotential Ew = Pt.d_r() * Pt;
  const TrigPotential dv = random_potential(g, 1, 0, true, 0.3);
  SystemPotentials s;
  s.u_plus = s.u_minus = Eu;
  s.v_plus = Ev + dv;
  s.v_minus = Ev - dv;
  s.w_plus = s.w_minus = Ew;
  return s;
}

}  // namespace cyldiff::testing
