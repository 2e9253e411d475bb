#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "cyldiff/arithmetic.hpp"
#include "cyldiff/dynamics.hpp"
#include "cyldiff/rng.hpp"

namespace cyldiff {

using ScalarField = std::function<double(double)>;

enum class InitialMode {
  Fixed,         // (theta, r) as given
  UniformTheta,  // theta ~ U[0, 1), r fixed
  UniformTorus,  // theta ~ U[0, 1), r ~ U[r_lo, r_hi)
};

struct InitialCondition {
  InitialMode mode = InitialMode::Fixed;
  double theta = 0.0;
  double r = 0.0;
  double r_lo = 0.0;
  double r_hi = 1.0;
};

struct EnsembleSpec {
  MapSystem sys;
  InitialCondition initial;
  double s = 1.0;
  std::size_t M = 1000;
  std::uint64_t seed = 1;
  unsigned threads = 0;  // 0: hardware concurrency

  // n = round(s / eps^2).
  std::size_t steps() const;
  // Throws std::invalid_argument unless M >= 1, s > 0, eps > 0 and n eps^2 is within 1% of s.
  void validate() const;
};

// Documented splitting scheme, echoed into reports.
inline constexpr const char* kRngScheme =
    "xoshiro256** per trajectory; state from splitmix64 keyed by finalize(seed) ^ rotl(finalize(index), 32)";

struct EnsembleResult {
  std::vector<double> displacement;  // r_n - r_0 per trajectory
  std::vector<State> initial;
  std::vector<State> final_state;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  long long omega_sum = 0;  // sum of all symbols drawn
  std::string scheme = kRngScheme;
};

// Draws the initial state and the symbols of trajectory `index`; calls
// on_state(k, state_k) for k = 0..n-1 before each step if provided.
State simulate_trajectory(const EnsembleSpec& spec, std::size_t index,
                          const std::function<void(std::size_t, const State&)>& on_state = {},
                          long long* omega_sum = nullptr);

EnsembleResult run_ensemble(const EnsembleSpec& spec);

enum class ExitSide { Down, Up, FinalTime };
std::string to_string(ExitSide s);

struct ExitRecord {
  std::size_t trajectory = 0;
  Interval strip;
  std::size_t entry = 0;
  std::size_t exit = 0;
  ExitSide side = ExitSide::FinalTime;
  double r_exit = 0.0;
};

struct ExitExperiment {
  std::vector<ExitRecord> records;
  double window_lo = 0.0;  // eps^{-2(1-gamma)+delta}
  double window_hi = 0.0;  // eps^{-2(1-gamma)-delta}
  std::size_t boundary_exits = 0;
  std::size_t final_time = 0;
  std::size_t below = 0;  // boundary exits earlier than window_lo
  std::size_t above = 0;  // boundary exits later than window_hi
  double outside_fraction = 0.0;
  std::vector<double> exit_times;  // sorted, boundary exits only (empirical CDF support)
};

// M trajectories start at the strip midpoint with uniform theta; each stops
// at the first step that comes eps-close to, or crosses, a strip edge, or at
// n_max (tagged final-time).
ExitExperiment exit_time_experiment(const MapSystem& sys, Interval strip, std::size_t M, std::uint64_t seed,
                                    double gamma, double delta, std::size_t n_max, unsigned threads = 0);

// Probability of reaching r_left before r_right from r for the diffusion
// with drift b and variance sigma2: int_r^{r_right} m / int_{r_left}^{r_right} m,
// m(x) = exp(-int_{r_left}^x 2b/sigma2). Throws DegenerateVariance.
double hitting_probability(double r, double r_left, double r_right, const ScalarField& b, const ScalarField& sigma2);

struct WalkLattice {
  std::vector<double> nodes;  // strictly increasing
  double cell_mass = 0.0;     // common value of int_{r_j}^{r_{j+1}} m
};

// Nodes with equal scale-function increments starting from range.lo with
// first spacing A * scale; covers range. b = 0 gives r_j = lo + j A scale.
WalkLattice calibrate_lattice(const ScalarField& b, const ScalarField& sigma2, double A, Interval range,
                              double scale = 1.0);

struct WalkStats {
  std::vector<double> nodes;
  std::vector<std::size_t> up;      // transitions node j -> j+1
  std::vector<std::size_t> down;    // transitions node j -> j-1
  std::vector<std::size_t> visits;  // arrivals at node j (including starts)
  std::size_t trajectories = 0;
};

// Trajectories start at a uniformly chosen interior node with uniform theta
// and move between neighbouring nodes (eps-close or crossing counts as
// arrival) until an end node or n_steps.
WalkStats walk_experiment(const MapSystem& sys, const WalkLattice& lattice, std::size_t trajectories,
                          std::size_t n_steps, std::uint64_t seed, unsigned threads = 0);

struct NodeHitting {
  std::vector<double> nodes;
  std::vector<std::size_t> up;          // samples from node j reaching j+1 first
  std::vector<std::size_t> down;        // samples reaching j-1 first
  std::vector<std::size_t> unresolved;  // neither within n_max steps
  std::size_t samples_per_node = 0;
};

// For every interior node j, M trajectories start at r = r_j with uniform
// theta and run until they arrive at r_{j-1} or r_{j+1} (same arrival rule as
// the walk) or n_max steps pass. Sample i of node j uses stream j * M + i.
NodeHitting node_hitting(const MapSystem& sys, const WalkLattice& lattice, std::size_t M, std::size_t n_max,
                         std::uint64_t seed, unsigned threads = 0);

struct VisitCensus {
  std::size_t total_visits = 0;
  std::size_t flagged_visits = 0;
  double visit_fraction = 0.0;
  double node_fraction = 0.0;  // |B| / #nodes
};

VisitCensus visit_census(const WalkStats& walk, const std::vector<bool>& flagged);

// Flags nodes whose eps^gamma strip is imaginary rational.
std::vector<bool> imaginary_rational_nodes(const WalkLattice& lattice, const StripParams& params, double eps);

}  // namespace cyldiff
