#include "cyldiff/arithmetic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "cyldiff/errors.hpp"

namespace cyldiff {

namespace {

constexpr double kGuard = 1e-12;

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(std::string("StripParams: ") + what);
}

long double abs_error(double r, long p, long q) {
  return std::fabs(static_cast<long double>(r) - static_cast<long double>(p) / static_cast<long double>(q));
}

// Largest integer strictly below x (with a relative guard band).
long floor_strict(double x) {
  const double shrunk = x * (1.0 - kGuard);
  long n = static_cast<long>(std::ceil(shrunk)) - 1;
  return std::max(n, 0L);
}

// Largest integer not above x (with a relative guard band).
long floor_guarded(double x) { return static_cast<long>(std::floor(x * (1.0 + kGuard))); }

struct CfState {
  std::vector<Rational> conv;
  // Partial quotient that would follow the last stored convergent, if the
  // expansion continues.
  std::optional<long double> next_a;
};

CfState expand(double r, long q_limit) {
  CfState st;
  long h2 = 0, k2 = 1, h1 = 1, k1 = 0;
  long double x = r;
  for (int it = 0; it < 80; ++it) {
    const long double a = std::floor(x);
    // k = a k1 + k2 would exceed the limit: stop before overflowing.
    if (k1 > 0 && a > static_cast<long double>(q_limit - k2) / static_cast<long double>(k1)) {
      st.next_a = a;
      break;
    }
    const long ai = static_cast<long>(a);
    const long h = ai * h1 + h2;
    const long k = ai * k1 + k2;
    if (k > q_limit) {
      st.next_a = a;
      break;
    }
    st.conv.push_back({h, k});
    h2 = h1;
    k2 = k1;
    h1 = h;
    k1 = k;
    const long double frac = x - a;
    if (frac == 0.0L || std::abs(static_cast<long double>(r) * k - h) == 0.0L) break;
    x = 1.0L / frac;
  }
  return st;
}

}  // namespace

StripParams StripParams::make(int l, double gamma, double tau, double beta, double kappa, double delta, int d,
                              double a) {
  require(l >= 6, "smoothness l must be at least 6");
  require(d >= 1, "degree d must be positive");
  require(gamma > 0.8 && gamma < 0.8 + 1.0 / 40.0, "gamma must lie in (4/5, 4/5 + 1/40)");
  require(tau > 0.0 && tau < 1.0 / 40.0, "tau must lie in (0, 1/40)");
  require(beta > 0.0, "beta must be positive");
  require(kappa > 1.0 / 11.0 && kappa < 1.0 / 3.0, "kappa must lie in (1/11, 1/3)");
  require(delta > 0.0, "delta must be positive");
  require(a > 0.5, "a must exceed 1/2");
  StripParams p;
  p.l = l;
  p.d = d;
  p.gamma = gamma;
  p.nu = 0.25;
  p.R = static_cast<double>(l - 5) / static_cast<double>(l - 2);
  p.rho = p.R * p.nu;
  p.b = 0.5 * (p.nu - p.rho);
  p.tau = tau;
  p.beta = beta;
  p.kappa = kappa;
  p.delta = delta;
  p.a = a;
  require(2.0 * (1.0 - gamma) - p.nu - p.b >= 1.0 / 160.0 - 1e-15, "2(1 - gamma) - nu - b must be at least 1/160");
  return p;
}

double StripParams::zeta() const noexcept { return std::min({tau - delta, 0.2 - 3.0 * delta, a - delta}); }

std::vector<Rational> convergents(double r, long q_limit) { return expand(r, q_limit).conv; }

BestRational best_rational(double r, long q_max) {
  if (q_max < 1) throw std::invalid_argument("best_rational: q_max must be at least 1");
  if (!std::isfinite(r)) throw std::invalid_argument("best_rational: r must be finite");
  const CfState st = expand(r, q_max);
  std::vector<Rational> cands = st.conv;
  if (st.next_a && !st.conv.empty()) {
    const Rational last = st.conv.back();
    const Rational prev = st.conv.size() >= 2 ? st.conv[st.conv.size() - 2] : Rational{1, 0};
    const long j = (q_max - prev.q) / last.q;
    if (j >= 1) cands.push_back({prev.p + j * last.p, prev.q + j * last.q});
  }
  // Also the integer on the far side, which the expansion never visits when r < floor(r) + 1/2.
  cands.push_back({static_cast<long>(std::floor(r)) + 1, 1});
  BestRational best{0, 0, std::numeric_limits<double>::infinity()};
  long double best_err = std::numeric_limits<long double>::infinity();
  for (const Rational& c : cands) {
    if (c.q < 1 || c.q > q_max) continue;
    const long g = std::gcd(c.p, c.q);
    const Rational red{c.p / g, c.q / g};
    const long double e = abs_error(r, red.p, red.q);
    if (e < best_err || (e == best_err && red.q < best.q)) {
      best_err = e;
      best = {red.p, red.q, static_cast<double>(e)};
    }
  }
  return best;
}

std::string to_string(StripKind k) {
  switch (k) {
    case StripKind::TotallyIrrational: return "TI";
    case StripKind::ImaginaryRational: return "IR";
    case StripKind::Resonant: return "resonant";
  }
  return "?";
}

namespace {

double distance_to(Interval iv, double x) { return std::max({0.0, iv.lo - x, x - iv.hi}); }

}  // namespace

StripClass classify(Interval strip, const StripParams& params, double eps) {
  if (!(strip.hi >= strip.lo)) throw std::invalid_argument("classify: empty interval");
  if (!(eps > 0.0)) throw std::invalid_argument("classify: eps must be positive");
  StripClass out;
  out.interval = strip;
  const long q_low = 2L * params.d;

  // Low-order resonances within 2 beta.
  std::optional<Rational> res;
  double res_dist = std::numeric_limits<double>::infinity();
  for (long q = 1; q <= q_low; ++q) {
    const long p_lo = static_cast<long>(std::ceil((strip.lo - 2.0 * params.beta) * q));
    const long p_hi = static_cast<long>(std::floor((strip.hi + 2.0 * params.beta) * q));
    for (long p = p_lo; p <= p_hi; ++p) {
      if (std::gcd(p, q) != 1) continue;
      const double dist = distance_to(strip, static_cast<double>(p) / q);
      if (dist < 2.0 * params.beta && dist < res_dist) {
        res_dist = dist;
        res = Rational{p, q};
      }
    }
  }
  if (res) {
    out.kind = StripKind::Resonant;
    out.witness = res;
    return out;
  }

  const double reach = std::pow(eps, params.nu);
  const long q_high = floor_strict(std::pow(eps, -params.b));
  std::vector<Rational> witnesses;
  for (long q = q_low + 1; q <= q_high; ++q) {
    const long p_lo = static_cast<long>(std::ceil((strip.lo - reach) * q - kGuard));
    const long p_hi = static_cast<long>(std::floor((strip.hi + reach) * q + kGuard));
    for (long p = p_lo; p <= p_hi; ++p) {
      if (std::gcd(p, q) != 1) continue;
      if (distance_to(strip, static_cast<double>(p) / q) <= reach * (1.0 + kGuard)) witnesses.push_back({p, q});
    }
  }
  if (witnesses.size() > 1)
    throw AmbiguousClass("classify: " + std::to_string(witnesses.size()) + " imaginary-rational witnesses near [" +
                         std::to_string(strip.lo) + ", " + std::to_string(strip.hi) + "]");
  if (witnesses.size() == 1) {
    out.kind = StripKind::ImaginaryRational;
    out.witness = witnesses.front();
  }
  return out;
}

std::vector<StripClass> classify_range(Interval range, const StripParams& params, double eps) {
  const double width = std::pow(eps, params.gamma);
  std::vector<StripClass> out;
  const long n = std::max(1L, static_cast<long>(std::ceil((range.hi - range.lo) / width - 1e-9)));
  out.reserve(static_cast<std::size_t>(n));
  for (long i = 0; i < n; ++i) {
    const double lo = range.lo + width * static_cast<double>(i);
    const double hi = std::min(range.hi, lo + width);
    out.push_back(classify({lo, hi}, params, eps));
  }
  return out;
}

IrMeasure ir_measure(const StripParams& params, double eps, Interval range, double width_factor, long q_min) {
  const double h = width_factor * std::pow(eps, params.nu);
  const long q_max = std::max(1L, floor_guarded(std::pow(eps, -params.b)));
  std::vector<std::pair<double, double>> ivs;
  IrMeasure out;
  for (long q = std::max(1L, q_min + 1); q <= q_max; ++q) {
    const long p_lo = static_cast<long>(std::ceil(range.lo * q - kGuard));
    const long p_hi = static_cast<long>(std::floor(range.hi * q + kGuard));
    for (long p = p_lo; p <= p_hi; ++p) {
      if (std::gcd(p, q) != 1) continue;
      const double c = static_cast<double>(p) / q;
      ivs.emplace_back(std::max(range.lo, c - h), std::min(range.hi, c + h));
      ++out.count;
    }
  }
  std::sort(ivs.begin(), ivs.end());
  double total = 0.0;
  double cur_lo = 0.0, cur_hi = 0.0;
  bool open = false;
  for (const auto& [lo, hi] : ivs) {
    if (!open) {
      cur_lo = lo;
      cur_hi = hi;
      open = true;
    } else if (lo <= cur_hi) {
      cur_hi = std::max(cur_hi, hi);
    } else {
      total += cur_hi - cur_lo;
      cur_lo = lo;
      cur_hi = hi;
    }
  }
  if (open) total += cur_hi - cur_lo;
  out.measure = total;
  out.bound = std::pow(eps, params.rho);
  out.within_bound = total <= out.bound;
  return out;
}

Ergodization ergodization_time(double r_star, const StripParams& params, double eps) {
  const double reach = std::pow(eps, params.nu);
  const long q_b = std::max(1L, floor_guarded(std::pow(eps, -params.b)));
  const BestRational near = best_rational(r_star, q_b);
  if (near.error < reach)
    throw NotTIAdmissible("ergodization_time: " + std::to_string(near.p) + "/" + std::to_string(near.q) +
                          " lies within eps^nu of r*");
  Ergodization out;
  const double expo = params.nu + params.b + 2.0 * params.tau;
  out.bound = std::pow(eps, -expo);
  const long q_cap = floor_guarded(out.bound);
  const std::vector<Rational> conv = convergents(r_star, q_cap);
  if (conv.empty()) throw std::logic_error("ergodization_time: no convergent below the bound");
  const Rational last = conv.back();
  out.N = last.q;
  out.p = last.p;
  out.residual = static_cast<double>(
      std::fabs(static_cast<long double>(out.N) * static_cast<long double>(r_star) - static_cast<long double>(out.p)));
  if (out.residual > 2.0 * std::pow(eps, expo))
    throw std::logic_error("ergodization_time: convergent residual exceeds 2 eps^{nu+b+2tau}");
  return out;
}

double birkhoff_deviation(const TrigPotential& g, double theta_star, double r_star, long N) {
  const double mean = g.coeff(0, r_star).real();
  double sum = 0.0;
  for (long k = 0; k < N; ++k)
    sum += g(wrap_unit(theta_star + static_cast<double>(k) * r_star), r_star);
  return std::abs(static_cast<double>(N) * mean - sum);
}

}  // namespace cyldiff
