#include "cyldiff/potentials.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "cyldiff/errors.hpp"
#include "cyldiff/roots.hpp"

namespace cyldiff {

int SystemPotentials::degree() const noexcept {
  return std::max({u_plus.degree(), u_minus.degree(), v_plus.degree(), v_minus.degree(),
                   w_plus.degree(), w_minus.degree(), 0});
}

SystemPotentials SystemPotentials::cos_sin() {
  SystemPotentials s;
  s.u_plus = s.v_plus = TrigPotential::cosine(1);
  s.u_minus = s.v_minus = TrigPotential::sine(1);
  return s;
}

ExpectedDifference expected_difference(const SystemPotentials& sys) {
  ExpectedDifference e;
  e.Eu = 0.5 * (sys.u_plus + sys.u_minus);
  e.Ev = 0.5 * (sys.v_plus + sys.v_minus);
  e.u = 0.5 * (sys.u_plus - sys.u_minus);
  e.v = 0.5 * (sys.v_plus - sys.v_minus);
  e.Ew = 0.5 * (sys.w_plus + sys.w_minus);
  return e;
}

double sigma_squared(const TrigPotential& v, double r) {
  const auto c = v.coeffs_at(r);
  return fourier_pairing(c, c);
}

double sigma_squared(const SystemPotentials& sys, double r) {
  return sigma_squared(0.5 * (sys.v_plus - sys.v_minus), r);
}

std::vector<int> fourier_support(const SystemPotentials& sys) {
  const ExpectedDifference e = expected_difference(sys);
  std::vector<int> out;
  const int d = std::max(e.Eu.degree(), e.Ev.degree());
  for (int k = 1; k <= d; ++k)
    if (!e.Eu.harmonic(k).is_zero() || !e.Ev.harmonic(k).is_zero()) out.push_back(k);
  return out;
}

double max_abs_v(const SystemPotentials& sys, Interval r_range, int r_samples) {
  const int d = std::max(sys.degree(), 1);
  const int nt = 64 * d;
  double m = 0.0;
  const int nr = std::max(r_samples, 2);
  for (int j = 0; j < nr; ++j) {
    const double r = r_range.lo + (r_range.hi - r_range.lo) * j / (nr - 1);
    for (int i = 0; i < nt; ++i) {
      const auto z = std::polar(1.0, kTwoPi * i / nt);
      m = std::max({m, std::abs(sys.v_plus.eval_unit(z, r)), std::abs(sys.v_minus.eval_unit(z, r))});
    }
  }
  return m;
}

long gcd_long(long a, long b) noexcept { return std::gcd(a, b); }

std::vector<std::pair<long, long>> rationals_in(Interval range, long q_max) {
  std::vector<std::pair<long, long>> out;
  for (long q = 1; q <= q_max; ++q) {
    const long p_lo = static_cast<long>(std::ceil(range.lo * static_cast<double>(q) - 1e-12));
    const long p_hi = static_cast<long>(std::floor(range.hi * static_cast<double>(q) + 1e-12));
    for (long p = p_lo; p <= p_hi; ++p)
      if (std::gcd(p, q) == 1) out.emplace_back(p, q);
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return a.first * b.second < b.first * a.second;
  });
  return out;
}

TrigPotential resonant_harmonics(const TrigPotential& Ev, int q, const std::vector<int>& support) {
  return Ev.filtered([&](int k) {
    return k != 0 && k % q == 0 && std::find(support.begin(), support.end(), k) != support.end();
  });
}

bool HypothesisReport::required_pass() const {
  return std::all_of(results.begin(), results.end(),
                     [](const HypothesisResult& h) { return !h.required || h.pass; });
}

const HypothesisResult& HypothesisReport::get(const std::string& name) const {
  for (const auto& h : results)
    if (h.name == name) return h;
  throw std::out_of_range("no hypothesis named " + name);
}

std::vector<std::string> HypothesisReport::failed_required() const {
  std::vector<std::string> out;
  for (const auto& h : results)
    if (h.required && !h.pass) out.push_back(h.name);
  return out;
}

namespace {

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(12);
  os << x;
  return os.str();
}

bool has_root_near(const RootScan& scan, double theta, double tol) {
  if (scan.identically_zero) return true;
  for (double t : scan.all())
    if (circle_distance(t, theta) <= tol) return true;
  return false;
}

HypothesisResult check_h0(const SystemPotentials& sys, const HypothesisOptions& opt) {
  HypothesisResult h{"H0", true, true, "", {}};
  double worst = 0.0;
  for (const TrigPotential* v : {&sys.v_plus, &sys.v_minus}) {
    const ComplexPoly c0 = v->harmonic(0);
    for (double c : c0.re.coefficients()) worst = std::max(worst, std::abs(c));
  }
  h.pass = worst <= opt.coeff_tol;
  h.witnesses = {worst};
  h.detail = h.pass ? "v_{+1}, v_{-1} have zero mean"
                    : "mean coefficient of v_i is nonzero (max |coeff| " + fmt(worst) + ")";
  return h;
}

HypothesisResult check_h1(const SystemPotentials& sys, Interval range, const HypothesisOptions& opt) {
  HypothesisResult h{"H1", true, true, "", {}};
  const TrigPotential v = 0.5 * (sys.v_plus - sys.v_minus);
  double min_s = std::numeric_limits<double>::infinity();
  double at = range.lo;
  const int n = std::max(opt.r_grid, 2);
  for (int j = 0; j < n; ++j) {
    const double r = range.lo + (range.hi - range.lo) * j / (n - 1);
    const double s = sigma_squared(v, r);
    if (s < min_s) {
      min_s = s;
      at = r;
    }
  }
  h.pass = min_s > opt.sigma_tol;
  h.witnesses = {at, min_s};
  h.detail = "min sigma^2 = " + fmt(min_s) + " at r = " + fmt(at);
  return h;
}

HypothesisResult check_h2(const SystemPotentials& sys) {
  return {"H2", true, true, "trigonometric polynomials of degree " + std::to_string(sys.degree()), {}};
}

HypothesisResult check_h3(const SystemPotentials& sys, Interval range, const HypothesisOptions& opt) {
  HypothesisResult h{"H3", true, true, "", {}};
  const int d = std::max(sys.degree(), 1);
  RootScanOptions ro;
  ro.samples = opt.samples_per_degree * d;
  const long n_lo = static_cast<long>(std::ceil(range.lo));
  const long n_hi = static_cast<long>(std::floor(range.hi));
  int checked = 0;
  for (long n = n_lo; n <= n_hi; ++n) {
    ++checked;
    const double r = static_cast<double>(n);
    const RootScan a = periodic_roots([&](double t) { return sys.v_plus(t, r); }, ro);
    const RootScan b = periodic_roots([&](double t) { return sys.v_minus(t, r); }, ro);
    if (a.identically_zero && b.identically_zero) {
      h.pass = false;
      h.witnesses.insert(h.witnesses.end(), {r, 0.0});
      continue;
    }
    const RootScan& scan = a.identically_zero ? b : a;
    const RootScan& other = a.identically_zero ? a : b;
    for (double t : scan.all()) {
      if (has_root_near(other, t, opt.common_zero_tol)) {
        h.pass = false;
        h.witnesses.insert(h.witnesses.end(), {r, t});
      }
    }
  }
  if (checked == 0)
    h.detail = "no integer r in range";
  else if (h.pass)
    h.detail = "v_{+1}, v_{-1} share no zero at " + std::to_string(checked) + " integer r";
  else
    h.detail = "common zero of v_{+1}, v_{-1} (witnesses are (r, theta) pairs)";
  return h;
}

HypothesisResult check_h4(const SystemPotentials& sys, Interval range, const HypothesisOptions& opt) {
  HypothesisResult h{"H4", true, false, "", {}};
  const int d = std::max(sys.degree(), 1);
  RootScanOptions ro;
  ro.samples = opt.samples_per_degree * d * 2;
  std::string failures;
  for (const auto& [p, q] : rationals_in(range, 2L * d)) {
    const double r = static_cast<double>(p) / static_cast<double>(q);
    const double qd = static_cast<double>(q);
    auto sum_minus = [&](double t) {
      double acc = 0.0;
      for (long k = 1; k <= q; ++k) acc += sys.v_minus(wrap_unit(t + k / qd), r);
      return acc;
    };
    auto diff = [&](double t) { return sys.v_minus(t, r) - sys.v_plus(t, r); };
    const RootScan A = periodic_roots(sum_minus, ro);
    const RootScan D = periodic_roots(diff, ro);
    bool common = false;
    double witness = 0.0;
    if (D.identically_zero) {
      common = A.identically_zero || !A.all().empty();
      witness = A.identically_zero ? 0.0 : (A.all().empty() ? 0.0 : A.all().front());
    } else {
      for (double root : D.all()) {
        for (long j = 1; j <= q && !common; ++j) {
          const double c = wrap_unit(root - j / qd);
          bool all_zero = true;
          for (long k = 1; k <= q && all_zero; ++k)
            all_zero = has_root_near(D, wrap_unit(c + k / qd), opt.common_zero_tol);
          if (all_zero && has_root_near(A, c, opt.common_zero_tol)) {
            common = true;
            witness = c;
          }
        }
        if (common) break;
      }
    }
    if (common) {
      h.pass = false;
      h.witnesses.insert(h.witnesses.end(), {static_cast<double>(p), static_cast<double>(q), witness});
      failures += (failures.empty() ? "" : ", ") + std::to_string(p) + "/" + std::to_string(q);
    }
  }
  h.detail = h.pass ? "no common periodic orbit of period <= 2d"
                    : "both alternatives vanish at p/q = " + failures;
  return h;
}

HypothesisResult check_h5(const SystemPotentials& sys, Interval range, const HypothesisOptions& opt) {
  HypothesisResult h{"H5", true, false, "", {}};
  const int d = std::max(sys.degree(), 1);
  const ExpectedDifference e = expected_difference(sys);
  const std::vector<int> support = fourier_support(sys);
  RootScanOptions ro;
  ro.samples = opt.samples_per_degree * d;
  int vacuous = 0;
  int examined = 0;
  std::string failures;
  for (const auto& [p, q] : rationals_in(range, 2L * d)) {
    const double r = static_cast<double>(p) / static_cast<double>(q);
    const TrigPotential Evpq = resonant_harmonics(e.Ev, static_cast<int>(q), support);
    const TrigPotential dEvpq = Evpq.d_theta();
    const RootScan scan = periodic_roots([&](double t) { return Evpq(t, r); }, ro);
    ++examined;
    if (scan.identically_zero) {
      ++vacuous;
      continue;
    }
    bool bad = !scan.tangencies.empty();
    double min_deriv = std::numeric_limits<double>::infinity();
    for (double t : scan.crossings) min_deriv = std::min(min_deriv, std::abs(dEvpq(t, r)));
    const auto& c = scan.crossings;
    for (std::size_t i = 0; i + 1 < c.size(); ++i)
      if (circle_distance(c[i], c[i + 1]) <= opt.common_zero_tol) bad = true;
    if (c.size() > 1 && circle_distance(c.front(), c.back()) <= opt.common_zero_tol) bad = true;
    if (min_deriv < opt.nondegenerate_tol) bad = true;
    if (!bad && min_deriv < opt.ill_conditioned_hi)
      throw IllConditioned("H5: root derivative " + fmt(min_deriv) + " at p/q = " + std::to_string(p) +
                           "/" + std::to_string(q) + " is inside the ambiguity band");
    if (bad) {
      h.pass = false;
      h.witnesses.insert(h.witnesses.end(), {static_cast<double>(p), static_cast<double>(q)});
      failures += (failures.empty() ? "" : ", ") + std::to_string(p) + "/" + std::to_string(q);
    }
  }
  if (!h.pass)
    h.detail = "degenerate or repeated zeros of Ev_{p,q} at p/q = " + failures;
  else
    h.detail = "simple distinct zeros at " + std::to_string(examined - vacuous) + " rationals; " +
               std::to_string(vacuous) + " with Ev_{p,q} identically zero";
  return h;
}

}  // namespace

HypothesisReport check_hypotheses(const SystemPotentials& sys, Interval r_range,
                                  const HypothesisOptions& opt) {
  if (!std::isfinite(r_range.lo) || !std::isfinite(r_range.hi) || r_range.hi < r_range.lo)
    throw std::invalid_argument("check_hypotheses: r_range must be a finite interval");
  HypothesisReport rep;
  rep.results.push_back(check_h0(sys, opt));
  rep.results.push_back(check_h1(sys, r_range, opt));
  rep.results.push_back(check_h2(sys));
  rep.results.push_back(check_h3(sys, r_range, opt));
  rep.results.push_back(check_h4(sys, r_range, opt));
  rep.results.push_back(check_h5(sys, r_range, opt));
  const double m = max_abs_v(sys, r_range);
  rep.results.push_back({"normalization", m <= 1.0 + 1e-12, false, "max |v_i| = " + fmt(m), {m}});
  return rep;
}

}  // namespace cyldiff
