#include "cyldiff/stats.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "cyldiff/errors.hpp"

namespace cyldiff {

Moments moments(const std::vector<double>& x) {
  Moments m;
  m.n = x.size();
  if (x.empty()) return m;
  double sum = 0.0;
  for (double v : x) sum += v;
  m.mean = sum / static_cast<double>(m.n);
  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (double v : x) {
    const double d = v - m.mean;
    const double d2 = d * d;
    m2 += d2;
    m3 += d2 * d;
    m4 += d2 * d2;
  }
  const double n = static_cast<double>(m.n);
  m.variance = m.n > 1 ? m2 / (n - 1.0) : 0.0;
  if (m2 > 0.0) {
    m2 /= n;
    m3 /= n;
    m4 /= n;
    m.skewness = m3 / std::pow(m2, 1.5);
    m.excess_kurtosis = m4 / (m2 * m2) - 3.0;
  }
  return m;
}

double normal_cdf(double x, double mean, double variance) noexcept {
  return 0.5 * std::erfc(-(x - mean) / std::sqrt(2.0 * variance));
}

double ks_statistic(std::vector<double> samples, double mean, double variance) {
  if (samples.empty()) return 0.0;
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double F = normal_cdf(samples[i], mean, variance);
    d = std::max({d, (static_cast<double>(i) + 1.0) / n - F, F - static_cast<double>(i) / n});
  }
  return d;
}

double anderson_darling(std::vector<double> samples, double mean, double variance) {
  if (samples.empty()) return 0.0;
  std::sort(samples.begin(), samples.end());
  const std::size_t n = samples.size();
  const double sd = std::sqrt(variance);
  auto log_cdf = [&](double z) { return std::log(std::max(0.5 * std::erfc(-z / std::sqrt(2.0)), 1e-300)); };
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double zi = (samples[i] - mean) / sd;
    const double zj = (samples[n - 1 - i] - mean) / sd;
    acc += (2.0 * static_cast<double>(i) + 1.0) * (log_cdf(zi) + log_cdf(-zj));
  }
  return -static_cast<double>(n) - acc / static_cast<double>(n);
}

double fit_exponent(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("fit_exponent: need matching sizes >= 2");
  for (double v : y)
    if (!(v > 0.0)) return std::numeric_limits<double>::infinity();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

nlohmann::json to_json(const TestReport& r) {
  return {{"test", r.test}, {"statistic", r.statistic}, {"threshold", r.threshold}, {"pass", r.pass},
          {"M", r.M},       {"seed", r.seed},           {"params", r.params}};
}

CltResult clt_test(const std::vector<double>& samples, double s, double b, double sigma2, std::uint64_t seed,
                   const CltThresholds& thr) {
  if (samples.size() < 1000)
    throw InsufficientSamples("clt_test: " + std::to_string(samples.size()) + " samples, need at least 1000");
  CltResult out;
  out.ref_mean = s * b;
  out.ref_variance = s * sigma2;
  if (!(out.ref_variance > 0.0)) throw DegenerateVariance("clt_test: reference variance s * sigma^2 is not positive");
  // Sorting first makes every statistic independent of sample order.
  std::vector<double> sorted = samples;
  std::sort(sorted.begin(), sorted.end());
  out.m = moments(sorted);
  out.ks = ks_statistic(sorted, out.ref_mean, out.ref_variance);
  out.anderson_darling = anderson_darling(sorted, out.ref_mean, out.ref_variance);
  const bool ks_ok = out.ks <= thr.ks;
  const bool var_ok = std::abs(out.m.variance / out.ref_variance - 1.0) <= thr.variance_rel;
  const bool mean_ok = std::abs(out.m.mean - out.ref_mean) <= thr.mean_abs;
  TestReport& r = out.report;
  r.test = "clt";
  r.statistic = out.ks;
  r.threshold = thr.ks;
  r.pass = ks_ok && var_ok && mean_ok;
  r.M = samples.size();
  r.seed = seed;
  r.params = {{"s", s},
              {"b", b},
              {"sigma2", sigma2},
              {"reference_mean", out.ref_mean},
              {"reference_variance", out.ref_variance},
              {"mean", out.m.mean},
              {"variance", out.m.variance},
              {"skewness", out.m.skewness},
              {"excess_kurtosis", out.m.excess_kurtosis},
              {"anderson_darling", out.anderson_darling},
              {"variance_rel_threshold", thr.variance_rel},
              {"mean_abs_threshold", thr.mean_abs},
              {"ks_pass", ks_ok},
              {"variance_pass", var_ok},
              {"mean_pass", mean_ok}};
  return out;
}

DiffusionCoeffs DiffusionCoeffs::constant(double b, double sigma2) {
  return {[b](double) { return b; }, [sigma2](double) { return sigma2; }};
}

DiffusionCoeffs DiffusionCoeffs::tabulated(std::vector<double> r, std::vector<double> b, std::vector<double> sigma2) {
  if (r.size() < 1 || r.size() != b.size() || r.size() != sigma2.size())
    throw std::invalid_argument("DiffusionCoeffs::tabulated: table sizes differ");
  if (!std::is_sorted(r.begin(), r.end())) throw std::invalid_argument("DiffusionCoeffs::tabulated: grid not sorted");
  auto interp = [r](std::vector<double> y) {
    return [r, y = std::move(y)](double x) {
      if (x <= r.front()) return y.front();
      if (x >= r.back()) return y.back();
      const auto it = std::upper_bound(r.begin(), r.end(), x);
      const std::size_t j = static_cast<std::size_t>(it - r.begin());
      const double t = (x - r[j - 1]) / (r[j] - r[j - 1]);
      return y[j - 1] + t * (y[j] - y[j - 1]);
    };
  };
  return {interp(std::move(b)), interp(std::move(sigma2))};
}

TestFunction TestFunction::constant(double c) {
  return {"constant", [c](double) { return c; }, [](double) { return 0.0; }, [](double) { return 0.0; }};
}

TestFunction TestFunction::monomial(int degree) {
  switch (degree) {
    case 1: return {"r", [](double r) { return r; }, [](double) { return 1.0; }, [](double) { return 0.0; }};
    case 2: return {"r^2", [](double r) { return r * r; }, [](double r) { return 2.0 * r; }, [](double) { return 2.0; }};
    case 3:
      return {"r^3", [](double r) { return r * r * r; }, [](double r) { return 3.0 * r * r; },
              [](double r) { return 6.0 * r; }};
    default: throw std::invalid_argument("TestFunction::monomial: degree must be 1, 2 or 3");
  }
}

TestFunction TestFunction::bump(double center, double radius) {
  if (!(radius > 0.0)) throw std::invalid_argument("TestFunction::bump: radius must be positive");
  auto parts = [center, radius](double r, int order) {
    const double z = (r - center) / radius;
    if (std::abs(z) >= 1.0) return 0.0;
    const double w = 1.0 - z * z;
    const double phi = std::exp(-1.0 / w);
    if (order == 0) return phi;
    const double g1 = -2.0 * z / (w * w);
    if (order == 1) return phi * g1 / radius;
    const double g2 = -2.0 / (w * w) - 8.0 * z * z / (w * w * w);
    return phi * (g1 * g1 + g2) / (radius * radius);
  };
  return {"bump", [parts](double r) { return parts(r, 0); }, [parts](double r) { return parts(r, 1); },
          [parts](double r) { return parts(r, 2); }};
}

MartingaleEstimate martingale_residual(const EnsembleSpec& spec, const TestFunction& f, const DiffusionCoeffs& coeffs) {
  spec.validate();
  if (spec.M < 2) throw InsufficientSamples("martingale_residual: need at least 2 trajectories");
  const double eps = spec.sys.epsilon();
  std::vector<double> eta(spec.M, 0.0);
  parallel_for(spec.M, spec.threads, [&](std::size_t i) {
    double acc = 0.0;
    double r0 = 0.0;
    const State end = simulate_trajectory(spec, i, [&](std::size_t k, const State& s) {
      if (k == 0) r0 = s.r;
      acc += coeffs.b(s.r) * f.df(s.r) + 0.5 * coeffs.sigma2(s.r) * f.d2f(s.r);
    });
    eta[i] = f.f(end.r) - f.f(r0) - eps * eps * acc;
  });
  const Moments m = moments(eta);
  MartingaleEstimate out;
  out.estimate = m.mean;
  out.standard_error = std::sqrt(m.variance / static_cast<double>(spec.M));
  out.M = spec.M;
  out.eps = eps;
  return out;
}

std::vector<double> birkhoff_weights(const TrigPotential& g, double theta_star, double alpha, double r, std::size_t n) {
  std::vector<double> v(n);
  for (std::size_t k = 0; k < n; ++k) v[k] = g(wrap_unit(theta_star + static_cast<double>(k) * alpha), r);
  return v;
}

WeightedCltResult weighted_bernoulli_clt(const std::vector<double>& v, std::size_t M, std::uint64_t seed, double sigma2,
                                         unsigned threads, double ks_threshold, double variance_rel) {
  if (v.empty()) throw std::invalid_argument("weighted_bernoulli_clt: empty weight sequence");
  if (M < 1) throw InsufficientSamples("weighted_bernoulli_clt: need at least one sample");
  WeightedCltResult out;
  out.sigma2 = sigma2;
  out.scaled.assign(M, 0.0);
  const double root_n = std::sqrt(static_cast<double>(v.size()));
  parallel_for(M, threads, [&](std::size_t i) {
    Xoshiro256 gen = Xoshiro256::stream(seed, i);
    SymbolSource symbols(gen);
    double s = 0.0;
    for (double vk : v) s += symbols.next() > 0 ? vk : -vk;
    out.scaled[i] = s / root_n;
  });
  std::vector<double> sorted = out.scaled;
  std::sort(sorted.begin(), sorted.end());
  out.m = moments(sorted);
  TestReport& r = out.report;
  r.test = "weighted_bernoulli_clt";
  r.M = M;
  r.seed = seed;
  if (sigma2 > 0.0) {
    out.ks = ks_statistic(sorted, 0.0, sigma2);
    r.statistic = out.ks;
    r.threshold = ks_threshold;
    r.pass = out.ks <= ks_threshold && std::abs(out.m.variance / sigma2 - 1.0) <= variance_rel;
  } else {
    // Degenerate limit: every sample must sit at zero.
    const double spread = std::max(std::abs(sorted.front()), std::abs(sorted.back()));
    r.statistic = spread;
    r.threshold = 0.0;
    r.pass = spread == 0.0;
  }
  r.params = {{"n", v.size()},
              {"sigma2", sigma2},
              {"mean", out.m.mean},
              {"variance", out.m.variance},
              {"variance_rel_threshold", variance_rel}};
  return out;
}

Histogram histogram(const std::vector<double>& samples, const HistogramSpec& spec) {
  if (spec.bins < 2) throw std::invalid_argument("histogram: need at least 2 bins");
  if (!(spec.hi > spec.lo)) throw std::invalid_argument("histogram: empty range");
  Histogram h;
  const double width = (spec.hi - spec.lo) / static_cast<double>(spec.bins);
  h.count.assign(spec.bins, 0);
  for (std::size_t i = 0; i < spec.bins; ++i) {
    h.left.push_back(spec.lo + width * static_cast<double>(i));
    h.right.push_back(i + 1 == spec.bins ? spec.hi : spec.lo + width * static_cast<double>(i + 1));
  }
  for (double x : samples) {
    if (!(x >= spec.lo && x <= spec.hi)) continue;
    std::size_t j = static_cast<std::size_t>((x - spec.lo) / width);
    if (j >= spec.bins) j = spec.bins - 1;
    ++h.count[j];
  }
  const double total = static_cast<double>(samples.size());
  for (std::size_t i = 0; i < spec.bins; ++i)
    h.density.push_back(total == 0.0 ? 0.0 : static_cast<double>(h.count[i]) / (total * width));
  return h;
}

Histogram emit_histogram(const std::vector<double>& samples, const HistogramSpec& spec, const std::string& csv_path,
                         double ref_mean, double ref_variance) {
  const Histogram h = histogram(samples, spec);
  std::ofstream os(csv_path);
  if (!os) throw IOFailure("cannot open " + csv_path + " for writing");
  os.precision(17);
  os << "bin_left,bin_right,count,density\n";
  for (std::size_t i = 0; i < h.count.size(); ++i)
    os << h.left[i] << ',' << h.right[i] << ',' << h.count[i] << ',' << h.density[i] << '\n';
  if (!os) throw IOFailure("write failed for " + csv_path);

  std::filesystem::path side(csv_path);
  side.replace_extension(".json");
  std::ofstream js(side);
  if (!js) throw IOFailure("cannot open " + side.string() + " for writing");
  const nlohmann::json meta = {{"bins", spec.bins},
                               {"lo", spec.lo},
                               {"hi", spec.hi},
                               {"samples", samples.size()},
                               {"reference", {{"distribution", "normal"}, {"mean", ref_mean}, {"variance", ref_variance}}}};
  js << meta.dump(2) << '\n';
  if (!js) throw IOFailure("write failed for " + side.string());
  return h;
}

}  // namespace cyldiff
