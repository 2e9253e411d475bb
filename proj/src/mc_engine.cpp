#include "cyldiff/mc_engine.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <stdexcept>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>

#include "cyldiff/errors.hpp"

namespace cyldiff {

std::size_t EnsembleSpec::steps() const {
  const double eps = sys.epsilon();
  if (!(eps > 0.0)) return 0;
  return static_cast<std::size_t>(std::llround(s / (eps * eps)));
}

void EnsembleSpec::validate() const {
  if (M < 1) throw std::invalid_argument("EnsembleSpec: M must be at least 1");
  if (!(s > 0.0)) throw std::invalid_argument("EnsembleSpec: s must be positive");
  const double eps = sys.epsilon();
  if (!(eps > 0.0)) throw std::invalid_argument("EnsembleSpec: epsilon must be positive");
  const double realized = static_cast<double>(steps()) * eps * eps;
  if (std::abs(realized - s) > 0.01 * s)
    throw std::invalid_argument("EnsembleSpec: n eps^2 is not within 1% of s");
  if (initial.mode == InitialMode::UniformTorus && !(initial.r_hi > initial.r_lo))
    throw std::invalid_argument("EnsembleSpec: uniform initial r range is empty");
}

namespace {

State draw_initial(const InitialCondition& ic, Xoshiro256& gen) {
  switch (ic.mode) {
    case InitialMode::Fixed: return {wrap_unit(ic.theta), ic.r};
    case InitialMode::UniformTheta: return {gen.uniform(), ic.r};
    case InitialMode::UniformTorus: {
      const double th = gen.uniform();
      return {th, ic.r_lo + (ic.r_hi - ic.r_lo) * gen.uniform()};
    }
  }
  return {};
}

}  // namespace

State simulate_trajectory(const EnsembleSpec& spec, std::size_t index,
                          const std::function<void(std::size_t, const State&)>& on_state, long long* omega_sum) {
  Xoshiro256 gen = Xoshiro256::stream(spec.seed, index);
  State st = draw_initial(spec.initial, gen);
  SymbolSource symbols(gen);
  const std::size_t n = spec.steps();
  long long osum = 0;
  for (std::size_t k = 0; k < n; ++k) {
    if (on_state) on_state(k, st);
    const int om = symbols.next();
    osum += om;
    try {
      st = step(spec.sys, st, om);
    } catch (const NonFiniteState&) {
      throw NonFiniteState(k, index);
    }
  }
  if (omega_sum) *omega_sum = osum;
  return st;
}

EnsembleResult run_ensemble(const EnsembleSpec& spec) {
  spec.validate();
  EnsembleResult res;
  res.n = spec.steps();
  res.seed = spec.seed;
  res.displacement.resize(spec.M);
  res.initial.resize(spec.M);
  res.final_state.resize(spec.M);
  std::vector<long long> osums(spec.M, 0);
  parallel_for(spec.M, spec.threads, [&](std::size_t i) {
    State start{};
    const State end = simulate_trajectory(
        spec, i, [&](std::size_t k, const State& s) { if (k == 0) start = s; }, &osums[i]);
    if (res.n == 0) start = end;
    res.initial[i] = start;
    res.final_state[i] = end;
    res.displacement[i] = end.r - start.r;
  });
  for (long long o : osums) res.omega_sum += o;
  return res;
}

std::string to_string(ExitSide s) {
  switch (s) {
    case ExitSide::Down: return "down";
    case ExitSide::Up: return "up";
    case ExitSide::FinalTime: return "final";
  }
  return "?";
}

ExitExperiment exit_time_experiment(const MapSystem& sys, Interval strip, std::size_t M, std::uint64_t seed,
                                    double gamma, double delta, std::size_t n_max, unsigned threads) {
  const double eps = sys.epsilon();
  if (!(eps > 0.0)) throw std::invalid_argument("exit_time_experiment: epsilon must be positive");
  if (!(strip.hi > strip.lo)) throw std::invalid_argument("exit_time_experiment: empty strip");
  ExitExperiment out;
  out.window_lo = std::pow(eps, -2.0 * (1.0 - gamma) + delta);
  out.window_hi = std::pow(eps, -2.0 * (1.0 - gamma) - delta);
  out.records.resize(M);
  const double mid = 0.5 * (strip.lo + strip.hi);
  parallel_for(M, threads, [&](std::size_t i) {
    Xoshiro256 gen = Xoshiro256::stream(seed, i);
    State st{gen.uniform(), mid};
    SymbolSource symbols(gen);
    ExitRecord rec;
    rec.trajectory = i;
    rec.strip = strip;
    rec.entry = 0;
    rec.exit = n_max;
    rec.side = ExitSide::FinalTime;
    for (std::size_t k = 1; k <= n_max; ++k) {
      try {
        st = step(sys, st, symbols.next());
      } catch (const NonFiniteState&) {
        throw NonFiniteState(k - 1, i);
      }
      if (st.r >= strip.hi - eps) {
        rec.exit = k;
        rec.side = ExitSide::Up;
        break;
      }
      if (st.r <= strip.lo + eps) {
        rec.exit = k;
        rec.side = ExitSide::Down;
        break;
      }
    }
    rec.r_exit = st.r;
    out.records[i] = rec;
  });
  for (const auto& rec : out.records) {
    if (rec.side == ExitSide::FinalTime) {
      ++out.final_time;
      continue;
    }
    ++out.boundary_exits;
    const double t = static_cast<double>(rec.exit);
    out.exit_times.push_back(t);
    if (t < out.window_lo) ++out.below;
    if (t > out.window_hi) ++out.above;
  }
  std::sort(out.exit_times.begin(), out.exit_times.end());
  out.outside_fraction =
      out.boundary_exits == 0 ? 0.0 : static_cast<double>(out.below + out.above) / static_cast<double>(out.boundary_exits);
  return out;
}

namespace {

constexpr double kQuadTol = 1e-13;

template <class F>
double integrate(F&& f, double a, double b) {
  if (a == b) return 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 15, kQuadTol);
}

void require_variance(const ScalarField& sigma2, double lo, double hi, const char* who) {
  const int n = 257;
  double m = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) m = std::min(m, sigma2(lo + (hi - lo) * i / (n - 1)));
  if (!(m > 1e-12))
    throw DegenerateVariance(std::string(who) + ": sigma^2 falls to " + std::to_string(m) + " on the interval");
}

// -int_a^x 2b/sigma2.
double log_scale_density(const ScalarField& b, const ScalarField& sigma2, double a, double x) {
  return -integrate([&](double t) { return 2.0 * b(t) / sigma2(t); }, a, x);
}

}  // namespace

double hitting_probability(double r, double r_left, double r_right, const ScalarField& b, const ScalarField& sigma2) {
  if (!(r_left < r_right)) throw std::invalid_argument("hitting_probability: need r_left < r_right");
  if (r < r_left || r > r_right) throw std::invalid_argument("hitting_probability: r outside [r_left, r_right]");
  require_variance(sigma2, r_left, r_right, "hitting_probability");
  if (r == r_left) return 1.0;
  if (r == r_right) return 0.0;
  auto m = [&](double x) { return std::exp(log_scale_density(b, sigma2, r_left, x)); };
  const double upper = integrate(m, r, r_right);
  const double total = integrate(m, r_left, r_right);
  return upper / total;
}

WalkLattice calibrate_lattice(const ScalarField& b, const ScalarField& sigma2, double A, Interval range,
                              double scale) {
  if (!(A > 0.0) || !(scale > 0.0)) throw std::invalid_argument("calibrate_lattice: A and scale must be positive");
  if (!(range.hi > range.lo)) throw std::invalid_argument("calibrate_lattice: empty range");
  require_variance(sigma2, range.lo, range.hi, "calibrate_lattice");
  WalkLattice lat;
  const double first = A * scale;
  lat.nodes.push_back(range.lo);
  lat.nodes.push_back(range.lo + first);
  // log m at the current node, relative to range.lo.
  double log_m = log_scale_density(b, sigma2, range.lo, range.lo + first);
  lat.cell_mass = integrate([&](double x) { return std::exp(log_scale_density(b, sigma2, range.lo, x)); }, range.lo,
                            range.lo + first);
  const std::size_t max_nodes = 1000000;
  while (lat.nodes.back() < range.hi) {
    if (lat.nodes.size() >= max_nodes) throw std::runtime_error("calibrate_lattice: node limit reached");
    const double x0 = lat.nodes.back();
    const double base = log_m;
    auto mass = [&](double x) {
      return integrate([&](double t) { return std::exp(base + log_scale_density(b, sigma2, x0, t)); }, x0, x) -
             lat.cell_mass;
    };
    double hi = x0 + (x0 - lat.nodes[lat.nodes.size() - 2]);
    double f_hi = mass(hi);
    int expand = 0;
    while (f_hi < 0.0) {
      hi = x0 + 2.0 * (hi - x0);
      f_hi = mass(hi);
      if (++expand > 60) throw std::runtime_error("calibrate_lattice: cannot bracket next node");
    }
    double x1 = hi;
    if (f_hi > 0.0) {
      boost::uintmax_t iters = 200;
      const auto tol = boost::math::tools::eps_tolerance<double>(50);
      const auto [lo_b, hi_b] = boost::math::tools::toms748_solve(mass, x0, hi, -lat.cell_mass, f_hi, tol, iters);
      x1 = 0.5 * (lo_b + hi_b);
    }
    log_m = base + log_scale_density(b, sigma2, x0, x1);
    lat.nodes.push_back(x1);
  }
  return lat;
}

WalkStats walk_experiment(const MapSystem& sys, const WalkLattice& lattice, std::size_t trajectories,
                          std::size_t n_steps, std::uint64_t seed, unsigned threads) {
  const auto& x = lattice.nodes;
  if (x.size() < 3) throw std::invalid_argument("walk_experiment: lattice needs an interior node");
  const double eps = sys.epsilon();
  WalkStats ws;
  ws.nodes = x;
  ws.up.assign(x.size(), 0);
  ws.down.assign(x.size(), 0);
  ws.visits.assign(x.size(), 0);
  ws.trajectories = trajectories;
  std::mutex mu;
  const std::size_t last = x.size() - 1;
  parallel_for(trajectories, threads, [&](std::size_t i) {
    Xoshiro256 gen = Xoshiro256::stream(seed, i);
    std::size_t j = 1 + static_cast<std::size_t>(gen() % (last - 1));
    State st{gen.uniform(), x[j]};
    SymbolSource symbols(gen);
    std::vector<std::size_t> up(x.size(), 0), down(x.size(), 0), visits(x.size(), 0);
    ++visits[j];
    for (std::size_t k = 0; k < n_steps && j != 0 && j != last; ++k) {
      try {
        st = step(sys, st, symbols.next());
      } catch (const NonFiniteState&) {
        throw NonFiniteState(k, i);
      }
      if (st.r >= x[j + 1] - eps) {
        ++up[j];
        ++j;
        ++visits[j];
      } else if (st.r <= x[j - 1] + eps) {
        ++down[j];
        --j;
        ++visits[j];
      }
    }
    std::lock_guard<std::mutex> lock(mu);
    for (std::size_t n = 0; n < x.size(); ++n) {
      ws.up[n] += up[n];
      ws.down[n] += down[n];
      ws.visits[n] += visits[n];
    }
  });
  return ws;
}

NodeHitting node_hitting(const MapSystem& sys, const WalkLattice& lattice, std::size_t M, std::size_t n_max,
                         std::uint64_t seed, unsigned threads) {
  const auto& x = lattice.nodes;
  if (x.size() < 3) throw std::invalid_argument("node_hitting: lattice needs an interior node");
  if (M < 1) throw std::invalid_argument("node_hitting: M must be positive");
  const double eps = sys.epsilon();
  const std::size_t interior = x.size() - 2;
  // +1 up, -1 down, 0 unresolved
  std::vector<signed char> outcome(interior * M, 0);
  parallel_for(interior * M, threads, [&](std::size_t idx) {
    const std::size_t j = 1 + idx / M;
    Xoshiro256 gen = Xoshiro256::stream(seed, idx);
    State st{gen.uniform(), x[j]};
    SymbolSource symbols(gen);
    for (std::size_t k = 0; k < n_max; ++k) {
      try {
        st = step(sys, st, symbols.next());
      } catch (const NonFiniteState&) {
        throw NonFiniteState(k, idx);
      }
      if (st.r >= x[j + 1] - eps) {
        outcome[idx] = 1;
        return;
      }
      if (st.r <= x[j - 1] + eps) {
        outcome[idx] = -1;
        return;
      }
    }
  });
  NodeHitting h;
  h.nodes = x;
  h.samples_per_node = M;
  h.up.assign(x.size(), 0);
  h.down.assign(x.size(), 0);
  h.unresolved.assign(x.size(), 0);
  for (std::size_t idx = 0; idx < outcome.size(); ++idx) {
    const std::size_t j = 1 + idx / M;
    if (outcome[idx] > 0) ++h.up[j];
    else if (outcome[idx] < 0) ++h.down[j];
    else ++h.unresolved[j];
  }
  return h;
}

VisitCensus visit_census(const WalkStats& walk, const std::vector<bool>& flagged) {
  if (flagged.size() != walk.visits.size()) throw std::invalid_argument("visit_census: flag vector size mismatch");
  VisitCensus c;
  std::size_t nflag = 0;
  for (std::size_t j = 0; j < flagged.size(); ++j) {
    c.total_visits += walk.visits[j];
    if (flagged[j]) {
      c.flagged_visits += walk.visits[j];
      ++nflag;
    }
  }
  c.visit_fraction = c.total_visits == 0 ? 0.0 : static_cast<double>(c.flagged_visits) / c.total_visits;
  c.node_fraction = flagged.empty() ? 0.0 : static_cast<double>(nflag) / flagged.size();
  return c;
}

std::vector<bool> imaginary_rational_nodes(const WalkLattice& lattice, const StripParams& params, double eps) {
  const double w = std::pow(eps, params.gamma);
  std::vector<bool> out;
  out.reserve(lattice.nodes.size());
  for (double x : lattice.nodes)
    out.push_back(classify({x - 0.5 * w, x + 0.5 * w}, params, eps).kind == StripKind::ImaginaryRational);
  return out;
}

}  // namespace cyldiff
