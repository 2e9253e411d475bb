#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "cyldiff/potentials.hpp"

namespace cyldiff {

struct State {
  double theta = 0.0;  // in [0, 1)
  double r = 0.0;
};

// Symbols are +1 / -1.
using Word = std::vector<std::int8_t>;

// Extra per-step terms standing in for the O(eps^{1+a}) and O(eps^{2+a})
// remainders. An empty function contributes zero.
using RemainderHook = std::function<double(double theta, double r, int omega, double eps)>;

struct RemainderHooks {
  RemainderHook theta;
  RemainderHook r;
  bool empty() const noexcept { return !theta && !r; }
};

class MapSystem {
 public:
  MapSystem(SystemPotentials potentials, double epsilon, double a = 0.55, int smoothness = 7,
            RemainderHooks hooks = {});

  const SystemPotentials& potentials() const noexcept { return pots_; }
  const ExpectedDifference& expected() const noexcept { return ed_; }
  double epsilon() const noexcept { return eps_; }
  double a() const noexcept { return a_; }
  int smoothness() const noexcept { return l_; }
  int degree() const noexcept { return pots_.degree(); }
  const RemainderHooks& hooks() const noexcept { return hooks_; }

  MapSystem with_epsilon(double epsilon) const;
  MapSystem with_hooks(RemainderHooks hooks) const;

  // Partial derivatives of the per-symbol potentials, used by inverse_step.
  struct Partials {
    TrigPotential u_t, u_r, v_t, v_r, w_t, w_r;
  };
  const Partials& partials(int omega) const noexcept { return omega > 0 ? dp_[0] : dp_[1]; }

 private:
  SystemPotentials pots_;
  ExpectedDifference ed_;
  double eps_;
  double a_;
  int l_;
  RemainderHooks hooks_;
  Partials dp_[2];
};

// One application of f_omega. Throws NonFiniteState if the new r is not finite.
State step(const MapSystem& sys, State st, int omega);

// trajectory[0] = st0, trajectory[k+1] = step(trajectory[k], word[k]).
std::vector<State> iterate(const MapSystem& sys, State st0, const Word& word);

// The averaged map with Eu, Ev, Ew and no remainders.
State expected_step(const MapSystem& sys, State st);

// Solves step(sys, x, omega) = st for x by Newton iteration.
State inverse_step(const MapSystem& sys, State st, int omega, double tol = 1e-14, int max_iter = 50);

struct FirstOrderPrediction {
  double theta_hat = 0.0;  // reduced mod 1
  double r_hat = 0.0;
  double defect = 0.0;     // |r_n - r_hat|
};

// Evaluates the first-order sums for theta_n and r_n along the trajectory
// generated by word from st0.
FirstOrderPrediction first_order_prediction(const MapSystem& sys, State st0, const Word& word);

// Bounded omega-dependent remainders of sizes amplitude*eps^{1+a} (theta)
// and amplitude*eps^{2+a} (r).
RemainderHooks stress_hooks(double amplitude, double a);

// Columns k, omega_k, theta_k, r_k; the last row has omega 0.
void write_trajectory_csv(const std::string& path, const std::vector<State>& traj, const Word& word);

}  // namespace cyldiff
