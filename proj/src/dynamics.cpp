#include "cyldiff/dynamics.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include "cyldiff/errors.hpp"

namespace cyldiff {

namespace {

MapSystem::Partials make_partials(const TrigPotential& u, const TrigPotential& v, const TrigPotential& w) {
  return {u.d_theta(), u.d_r(), v.d_theta(), v.d_r(), w.d_theta(), w.d_r()};
}

double lifted_difference(double a, double b) {
  // a - b reduced into [-1/2, 1/2).
  double d = a - b;
  return d - std::floor(d + 0.5);
}

}  // namespace

MapSystem::MapSystem(SystemPotentials potentials, double epsilon, double a, int smoothness,
                     RemainderHooks hooks)
    : pots_(std::move(potentials)), eps_(epsilon), a_(a), l_(smoothness), hooks_(std::move(hooks)) {
  if (!(epsilon >= 0.0 && epsilon <= 0.2))
    throw std::invalid_argument("MapSystem: epsilon must lie in [0, 0.2]");
  if (!(a > 0.5)) throw std::invalid_argument("MapSystem: a must exceed 1/2");
  if (smoothness < 7) throw std::invalid_argument("MapSystem: smoothness l must be at least 7");
  ed_ = expected_difference(pots_);
  dp_[0] = make_partials(pots_.u_plus, pots_.v_plus, pots_.w_plus);
  dp_[1] = make_partials(pots_.u_minus, pots_.v_minus, pots_.w_minus);
}

MapSystem MapSystem::with_epsilon(double epsilon) const {
  MapSystem copy = *this;
  if (!(epsilon >= 0.0 && epsilon <= 0.2))
    throw std::invalid_argument("MapSystem: epsilon must lie in [0, 0.2]");
  copy.eps_ = epsilon;
  return copy;
}

MapSystem MapSystem::with_hooks(RemainderHooks hooks) const {
  MapSystem copy = *this;
  copy.hooks_ = std::move(hooks);
  return copy;
}

State step(const MapSystem& sys, State st, int omega) {
  const auto& p = sys.potentials();
  const double eps = sys.epsilon();
  const auto z = std::polar(1.0, kTwoPi * st.theta);
  const double u = p.u(omega).eval_unit(z, st.r);
  const double v = p.v(omega).eval_unit(z, st.r);
  const double w = p.w(omega).eval_unit(z, st.r);
  const auto& hk = sys.hooks();
  const double h1 = hk.theta ? hk.theta(st.theta, st.r, omega, eps) : 0.0;
  const double h2 = hk.r ? hk.r(st.theta, st.r, omega, eps) : 0.0;
  State out;
  out.theta = wrap_unit(st.theta + st.r + eps * u + h1);
  out.r = st.r + eps * v + eps * eps * w + h2;
  if (!std::isfinite(out.r) || !std::isfinite(out.theta)) throw NonFiniteState(0);
  return out;
}

std::vector<State> iterate(const MapSystem& sys, State st0, const Word& word) {
  std::vector<State> traj;
  traj.reserve(word.size() + 1);
  traj.push_back(st0);
  for (std::size_t k = 0; k < word.size(); ++k) {
    try {
      traj.push_back(step(sys, traj.back(), word[k]));
    } catch (const NonFiniteState&) {
      throw NonFiniteState(k);
    }
  }
  return traj;
}

State expected_step(const MapSystem& sys, State st) {
  const auto& e = sys.expected();
  const double eps = sys.epsilon();
  const auto z = std::polar(1.0, kTwoPi * st.theta);
  State out;
  out.theta = wrap_unit(st.theta + st.r + eps * e.Eu.eval_unit(z, st.r));
  out.r = st.r + eps * e.Ev.eval_unit(z, st.r) + eps * eps * e.Ew.eval_unit(z, st.r);
  if (!std::isfinite(out.r)) throw NonFiniteState(0);
  return out;
}

State inverse_step(const MapSystem& sys, State target, int omega, double tol, int max_iter) {
  const auto& p = sys.potentials();
  const auto& d = sys.partials(omega);
  const double eps = sys.epsilon();
  const auto& hk = sys.hooks();
  // Start from the inverse twist.
  State x{wrap_unit(target.theta - target.r), target.r};
  for (int it = 0; it < max_iter; ++it) {
    const auto z = std::polar(1.0, kTwoPi * x.theta);
    const double h1 = hk.theta ? hk.theta(x.theta, x.r, omega, eps) : 0.0;
    const double h2 = hk.r ? hk.r(x.theta, x.r, omega, eps) : 0.0;
    const double f1 = lifted_difference(x.theta + x.r + eps * p.u(omega).eval_unit(z, x.r) + h1, target.theta);
    const double f2 =
        x.r + eps * p.v(omega).eval_unit(z, x.r) + eps * eps * p.w(omega).eval_unit(z, x.r) + h2 - target.r;
    // Hook derivatives are neglected: they are O(eps^{1+a}) and only slow convergence.
    const double j11 = 1.0 + eps * d.u_t.eval_unit(z, x.r);
    const double j12 = 1.0 + eps * d.u_r.eval_unit(z, x.r);
    const double j21 = eps * d.v_t.eval_unit(z, x.r) + eps * eps * d.w_t.eval_unit(z, x.r);
    const double j22 = 1.0 + eps * d.v_r.eval_unit(z, x.r) + eps * eps * d.w_r.eval_unit(z, x.r);
    const double det = j11 * j22 - j12 * j21;
    const double dt = (f1 * j22 - f2 * j12) / det;
    const double dr = (j11 * f2 - j21 * f1) / det;
    x.theta = wrap_unit(x.theta - dt);
    x.r -= dr;
    if (std::abs(dt) < tol && std::abs(dr) < tol) break;
  }
  return x;
}

FirstOrderPrediction first_order_prediction(const MapSystem& sys, State st0, const Word& word) {
  const std::vector<State> traj = iterate(sys, st0, word);
  const auto& e = sys.expected();
  const double eps = sys.epsilon();
  const std::size_t n = word.size();
  double theta_sum = 0.0;
  double r_sum = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const State& s = traj[k];
    const auto z = std::polar(1.0, kTwoPi * s.theta);
    const double om = word[k];
    const double weight = static_cast<double>(n - k - 1);
    const double Ev = e.Ev.eval_unit(z, s.r);
    const double v = e.v.eval_unit(z, s.r);
    theta_sum += e.Eu.eval_unit(z, s.r) + om * e.u.eval_unit(z, s.r) + weight * (Ev + om * v);
    r_sum += Ev + om * v;
  }
  FirstOrderPrediction out;
  out.theta_hat = wrap_unit(st0.theta + static_cast<double>(n) * st0.r + eps * theta_sum);
  out.r_hat = st0.r + eps * r_sum;
  out.defect = std::abs(traj.back().r - out.r_hat);
  return out;
}

RemainderHooks stress_hooks(double amplitude, double a) {
  RemainderHooks h;
  h.theta = [amplitude, a](double theta, double r, int omega, double eps) {
    return amplitude * std::pow(eps, 1.0 + a) * omega * std::cos(kTwoPi * (theta + r));
  };
  h.r = [amplitude, a](double theta, double, int omega, double eps) {
    return amplitude * std::pow(eps, 2.0 + a) * (0.5 + 0.5 * omega * std::sin(kTwoPi * theta));
  };
  return h;
}

void write_trajectory_csv(const std::string& path, const std::vector<State>& traj, const Word& word) {
  std::ofstream os(path);
  if (!os) throw IOFailure("cannot open " + path + " for writing");
  os.precision(17);
  os << "k,omega_k,theta_k,r_k\n";
  for (std::size_t k = 0; k < traj.size(); ++k) {
    const int om = k < word.size() ? word[k] : 0;
    os << k << ',' << om << ',' << traj[k].theta << ',' << traj[k].r << '\n';
  }
  if (!os) throw IOFailure("write failed for " + path);
}

}  // namespace cyldiff
