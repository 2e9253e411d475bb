#include "cyldiff/normal_form.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "cyldiff/errors.hpp"
#include "cyldiff/roots.hpp"
#include "cyldiff/stats.hpp"

namespace cyldiff {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;

// Value with first and second derivative in one variable.
template <class T>
struct Jet {
  T v{}, d1{}, d2{};
};

template <class T>
Jet<T> operator+(const Jet<T>& a, const Jet<T>& b) {
  return {a.v + b.v, a.d1 + b.d1, a.d2 + b.d2};
}
template <class T>
Jet<T> operator-(const Jet<T>& a, const Jet<T>& b) {
  return {a.v - b.v, a.d1 - b.d1, a.d2 - b.d2};
}
template <class T>
Jet<T> operator*(const Jet<T>& a, const Jet<T>& b) {
  return {a.v * b.v, a.d1 * b.v + a.v * b.d1, a.d2 * b.v + T(2) * a.d1 * b.d1 + a.v * b.d2};
}
template <class T>
Jet<T> operator/(const Jet<T>& a, const Jet<T>& b) {
  const T q = a.v / b.v;
  const T q1 = (a.d1 - q * b.d1) / b.v;
  const T q2 = (a.d2 - T(2) * q1 * b.d1 - q * b.d2) / b.v;
  return {q, q1, q2};
}
template <class T>
Jet<T> jet_exp(const Jet<T>& a) {
  const T e = std::exp(a.v);
  return {e, e * a.d1, e * (a.d2 + a.d1 * a.d1)};
}

Jet<std::complex<double>> to_complex(const Jet<double>& a) { return {a.v, a.d1, a.d2}; }

double glue(double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; }

Jet<double> bump_jet(const Jet<double>& x) {
  const double ax = std::abs(x.v);
  if (ax <= 1.0) return {1.0, 0.0, 0.0};
  if (ax >= 2.0) return {0.0, 0.0, 0.0};
  const double sgn = x.v < 0.0 ? -1.0 : 1.0;
  const Jet<double> t{2.0 - ax, -sgn * x.d1, -sgn * x.d2};
  const Jet<double> one{1.0, 0.0, 0.0};
  const Jet<double> a = jet_exp(Jet<double>{-1.0, 0.0, 0.0} / t);
  const Jet<double> b = jet_exp(Jet<double>{-1.0, 0.0, 0.0} / (one - t));
  return a / (a + b);
}

// |1 - e^{2 pi i k r}| / (2 pi |k| beta) = |sin(pi k r)| / (pi |k| beta), as a jet in r.
Jet<double> mollifier_argument(int k, double r, double beta) {
  const double w = kPi * k;
  const double s = std::sin(w * r);
  const double c = std::cos(w * r);
  const double sgn = s < 0.0 ? -1.0 : 1.0;
  const double scale = 1.0 / (kPi * std::abs(k) * beta);
  return {sgn * s * scale, sgn * w * c * scale, -sgn * w * w * s * scale};
}

Jet<std::complex<double>> poly_jet(const ComplexPoly& c, double r) {
  const ComplexPoly d1 = c.derivative();
  return {c(r), d1(r), d1.derivative()(r)};
}

NormalForm::CoeffJet s1_jet_impl(int k, double r, double beta, const TrigPotential& Ev) {
  using C = std::complex<double>;
  if (k == 0 || std::abs(k) > Ev.degree()) return {};
  if (k < 0) {
    const auto j = s1_jet_impl(-k, r, beta, Ev);
    return {std::conj(j.v), std::conj(j.d1), std::conj(j.d2)};
  }
  const ComplexPoly coeff = Ev.harmonic(k);
  if (coeff.is_zero()) return {};
  const Jet<double> mu = bump_jet(mollifier_argument(k, r, beta));
  if (mu.v == 1.0) return {};
  const Jet<double> one_minus_mu{1.0 - mu.v, -mu.d1, -mu.d2};
  const double w = kTwoPi * k;
  const C z = std::polar(1.0, w * r);
  const C iw(0.0, w);
  // 2 pi k (1 - e^{2 pi i k r})
  const Jet<C> den{w * (C(1.0) - z), -w * iw * z, -w * iw * iw * z};
  const Jet<C> num = Jet<C>{C(0.0, 1.0), C(0.0), C(0.0)} * poly_jet(coeff, r) * to_complex(one_minus_mu);
  const Jet<C> s = num / den;
  return {s.v, s.d1, s.d2};
}

long farey_order(int d) { return 2L * std::max(d, 1); }

}  // namespace

double bump_mu(double x) noexcept {
  const double ax = std::abs(x);
  if (ax <= 1.0) return 1.0;
  if (ax >= 2.0) return 0.0;
  const double t = 2.0 - ax;
  const double a = glue(t);
  const double b = glue(1.0 - t);
  return a / (a + b);
}

std::complex<double> s1_coefficient(int k, double r, double beta, const TrigPotential& Ev) {
  if (!(beta > 0.0)) throw std::invalid_argument("s1_coefficient: beta must be positive");
  return s1_jet_impl(k, r, beta, Ev).v;
}

CorrectionFields correction_fields(const TrigPotential& Ev, Rational pq, const std::vector<int>& support) {
  if (pq.q < 1 || std::gcd(pq.p, pq.q) != 1)
    throw std::invalid_argument("correction_fields: p/q must be reduced with q >= 1");
  const int d = Ev.degree();
  std::vector<ComplexPoly> e1(static_cast<std::size_t>(std::max(d, 0)) + 1);
  std::vector<ComplexPoly> e3(e1.size());
  for (int k = 1; k <= d; ++k) {
    const std::complex<double> factor(0.0, -1.0 / (kTwoPi * k));
    const ComplexPoly dEv = Ev.harmonic(k).derivative();
    e1[static_cast<std::size_t>(k)] = factor * dEv;
    // k p / q is an integer exactly when q divides k.
    if (k % pq.q != 0) {
      const std::complex<double> c = factor * dEv(pq.value());
      e3[static_cast<std::size_t>(k)] = ComplexPoly{Polynomial{c.real()}, Polynomial{c.imag()}};
    }
  }
  CorrectionFields out;
  out.E1 = TrigPotential(std::move(e1));
  out.E3 = TrigPotential(std::move(e3));
  out.Evpq = resonant_harmonics(Ev, static_cast<int>(pq.q), support);
  return out;
}

NormalForm::NormalForm(const SystemPotentials& pots, NormalFormParams params)
    : pots_(pots), ed_(expected_difference(pots)), params_(params) {
  if (!(params.beta > 0.0)) throw std::invalid_argument("NormalForm: beta must be positive");
  d_ = std::max(pots.degree(), 1);
  support_ = fourier_support(pots);
  // The mollifier transition reaches 3 beta on each side of a resonance;
  // neighbouring windows must not overlap.
  const long Q = farey_order(d_);
  const double gap = Q == 1 ? 1.0 : 1.0 / static_cast<double>(Q * (Q - 1));
  if (!(6.0 * params.beta < gap))
    throw std::invalid_argument("NormalForm: beta = " + std::to_string(params.beta) +
                                " makes resonance windows overlap (need 6 beta < " + std::to_string(gap) + ")");
}

double NormalForm::mu_k(int k, double r) const {
  if (k == 0) return 1.0;
  return bump_jet(mollifier_argument(k, r, params_.beta)).v;
}

std::complex<double> NormalForm::s1(int k, double r) const { return s1_jet_impl(k, r, params_.beta, ed_.Ev).v; }

NormalForm::CoeffJet NormalForm::s1_jet(int k, double r) const { return s1_jet_impl(k, r, params_.beta, ed_.Ev); }

GeneratingDerivs NormalForm::s1_field(double theta, double r) const {
  GeneratingDerivs g;
  const std::complex<double> unit = std::polar(1.0, kTwoPi * theta);
  std::complex<double> e = unit;
  for (int k = 1; k <= ed_.Ev.degree(); ++k, e *= unit) {
    const CoeffJet j = s1_jet(k, r);
    if (j.v == 0.0 && j.d1 == 0.0 && j.d2 == 0.0) continue;
    const std::complex<double> iw(0.0, kTwoPi * k);
    g.s += 2.0 * (j.v * e).real();
    g.t += 2.0 * (iw * j.v * e).real();
    g.r += 2.0 * (j.d1 * e).real();
    g.tt += 2.0 * (iw * iw * j.v * e).real();
    g.tr += 2.0 * (iw * j.d1 * e).real();
    g.rr += 2.0 * (j.d2 * e).real();
  }
  return g;
}

std::optional<Rational> NormalForm::resonance_within(double r, double width) const {
  std::optional<Rational> best;
  double best_dist = width;
  const long Q = farey_order(d_);
  for (long q = 1; q <= Q; ++q) {
    const long p = std::lround(r * static_cast<double>(q));
    if (std::gcd(p, q) != 1) continue;
    const double dist = std::abs(r - static_cast<double>(p) / static_cast<double>(q));
    if (dist < best_dist) {
      best_dist = dist;
      best = Rational{p, q};
    }
  }
  return best;
}

double NormalForm::drift(double r) const {
  if (auto pq = resonance_within(r, params_.beta))
    throw ResonantInput("drift: r = " + std::to_string(r) + " is within beta of " + std::to_string(pq->p) + "/" +
                        std::to_string(pq->q));
  const int n = std::max({ed_.Ev.degree(), ed_.Eu.degree(), 0}) + 1;
  using C = std::complex<double>;
  std::vector<C> dEv_t(n), Eu(n), dS_t(n), g(n);
  for (int k = 0; k < n; ++k) {
    const C iw(0.0, kTwoPi * k);
    const C ev = ed_.Ev.coeff(k, r);
    const C eu = ed_.Eu.coeff(k, r);
    const C ev_r = ed_.Ev.harmonic(k).derivative()(r);
    dEv_t[k] = iw * ev;
    Eu[k] = eu;
    dS_t[k] = k == 0 ? C(0.0) : iw * s1(k, r);
    g[k] = ev_r - iw * ev + iw * eu;
  }
  return ed_.Ew.coeff(0, r).real() - fourier_pairing(dEv_t, Eu) + fourier_pairing(dS_t, g);
}

double NormalForm::drift_quadrature(double r) const {
  if (auto pq = resonance_within(r, params_.beta))
    throw ResonantInput("drift: r = " + std::to_string(r) + " is within beta of " + std::to_string(pq->p) + "/" +
                        std::to_string(pq->q));
  const TrigPotential Ev_t = ed_.Ev.d_theta();
  const TrigPotential Ev_r = ed_.Ev.d_r();
  const TrigPotential Eu_t = ed_.Eu.d_theta();
  const int n = params_.quadrature_nodes;
  double acc = 0.0;
  for (int j = 0; j < n; ++j) {
    const double th = static_cast<double>(j) / n;
    const auto z = std::polar(1.0, kTwoPi * th);
    const GeneratingDerivs s = s1_field(th, r);
    acc += ed_.Ew.eval_unit(z, r) - Ev_t.eval_unit(z, r) * ed_.Eu.eval_unit(z, r) +
           s.t * (Ev_r.eval_unit(z, r) - Ev_t.eval_unit(z, r) + Eu_t.eval_unit(z, r));
  }
  return acc / n;
}

double NormalForm::E2(double theta, double r) const {
  const GeneratingDerivs s0 = s1_field(theta, r);
  const GeneratingDerivs s1 = s1_field(theta + r, r);
  const auto z = std::polar(1.0, kTwoPi * theta);
  const double Ew = ed_.Ew.eval_unit(z, r);
  const double Eu = ed_.Eu.eval_unit(z, r);
  const double Ev = ed_.Ev.eval_unit(z, r);
  const double Ev_t = ed_.Ev.d_theta().eval_unit(z, r);
  const double Ev_r = ed_.Ev.d_r().eval_unit(z, r);
  return Ew - Ev_t * s0.r + Ev_r * s0.t - s0.tt * s0.r - s1.tt * (Eu + s0.t - s0.r) -
         s1.tr * (Ev + s0.t - s1.t);
}

double NormalForm::homological_residual(double theta, double r) const {
  return s1_field(theta, r).t + ed_.Ev(theta, r) - s1_field(theta + r, r).t;
}

bool NormalForm::mollifier_inactive(double r) const {
  for (int k = 1; k <= ed_.Ev.degree(); ++k)
    if (mu_k(k, r) != 0.0) return false;
  return true;
}

State NormalForm::phi(State x, double eps) const {
  const GeneratingDerivs s = s1_field(x.theta, x.r);
  return {wrap_unit(x.theta - eps * s.r + eps * eps * s.tr * s.r), x.r + eps * s.t - eps * eps * s.tt * s.r};
}

State NormalForm::phi_inverse(State x, double eps) const {
  const GeneratingDerivs s = s1_field(x.theta, x.r);
  return {wrap_unit(x.theta + eps * s.r - eps * eps * s.rr * s.t), x.r - eps * s.t + eps * eps * s.tr * s.t};
}

State NormalForm::phi_exact(State x, double eps) const {
  // theta~ = theta + eps S_r(theta, r~),  r = r~ + eps S_theta(theta, r~).
  double th = x.theta;
  for (int it = 0; it < 200; ++it) {
    const double next = x.theta - eps * s1_field(th, x.r).r;
    const bool done = std::abs(next - th) < 1e-16;
    th = next;
    if (done) break;
  }
  return {wrap_unit(th), x.r + eps * s1_field(th, x.r).t};
}

State NormalForm::phi_inverse_exact(State x, double eps) const {
  double rt = x.r;
  for (int it = 0; it < 200; ++it) {
    const double next = x.r - eps * s1_field(x.theta, rt).t;
    const bool done = std::abs(next - rt) < 1e-16;
    rt = next;
    if (done) break;
  }
  return {wrap_unit(x.theta + eps * s1_field(x.theta, rt).r), rt};
}

double drift_b(const MapSystem& sys, double r, const NormalFormParams& params) {
  return NormalForm(sys.potentials(), params).drift(r);
}

namespace {

std::vector<double> grid(Interval w, int n) {
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = n == 1 ? w.lo : w.lo + (w.hi - w.lo) * i / (n - 1);
  return out;
}

}  // namespace

ScalingReport conjugacy_residual(const MapSystem& sys, const NormalForm& nf, Interval window,
                                 const std::vector<double>& eps_list, ResidualForm form, int theta_points,
                                 int r_points) {
  const std::vector<double> rs = grid(window, r_points);
  const double beta = nf.params().beta;
  std::optional<Rational> center;
  if (form == ResidualForm::Far) {
    for (double r : rs)
      if (auto pq = nf.resonance_within(r, beta))
        throw ResonantInput("conjugacy_residual: window point " + std::to_string(r) + " is within beta of " +
                            std::to_string(pq->p) + "/" + std::to_string(pq->q));
  } else {
    center = nf.resonance_within(0.5 * (window.lo + window.hi), beta / 2);
    if (!center) throw std::invalid_argument("conjugacy_residual: near-resonant window must sit within beta/2 of p/q");
    for (double r : rs)
      if (std::abs(r - center->value()) > beta / 2)
        throw std::invalid_argument("conjugacy_residual: near-resonant window exceeds beta/2");
  }
  const TrigPotential Evpq = center ? nf.corrections(*center).Evpq : TrigPotential{};

  ScalingReport rep;
  for (double eps : eps_list) {
    const MapSystem s = sys.with_epsilon(eps);
    double worst = 0.0;
    for (double r : rs) {
      for (int i = 0; i < theta_points; ++i) {
        const double th = static_cast<double>(i) / theta_points;
        const State out = nf.phi_inverse_exact(expected_step(s, nf.phi_exact({th, r}, eps)), eps);
        const double model = form == ResidualForm::Far ? r + eps * eps * nf.E2(th, r) : r + eps * Evpq(th, r);
        worst = std::max(worst, std::abs(out.r - model));
      }
    }
    rep.eps.push_back(eps);
    rep.max_residual.push_back(worst);
  }
  rep.exponent = fit_exponent(rep.eps, rep.max_residual);
  return rep;
}

ScalingReport phi_roundtrip(const NormalForm& nf, Interval window, const std::vector<double>& eps_list,
                            int theta_points, int r_points) {
  const std::vector<double> rs = grid(window, r_points);
  ScalingReport rep;
  for (double eps : eps_list) {
    double worst = 0.0;
    for (double r : rs) {
      for (int i = 0; i < theta_points; ++i) {
        const State x{static_cast<double>(i) / theta_points, r};
        const State y = nf.phi_inverse(nf.phi(x, eps), eps);
        worst = std::max({worst, circle_distance(y.theta, x.theta), std::abs(y.r - x.r)});
      }
    }
    rep.eps.push_back(eps);
    rep.max_residual.push_back(worst);
  }
  rep.exponent = fit_exponent(rep.eps, rep.max_residual);
  return rep;
}

}  // namespace cyldiff
