#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cyldiff/mc_engine.hpp"
#include "cyldiff/normal_form.hpp"

namespace cyldiff {

struct Moments {
  std::size_t n = 0;
  double mean = 0.0;
  double variance = 0.0;  // unbiased
  double skewness = 0.0;
  double excess_kurtosis = 0.0;
};

Moments moments(const std::vector<double>& x);

double normal_cdf(double x, double mean, double variance) noexcept;

// sup |F_n - F| against N(mean, variance).
double ks_statistic(std::vector<double> samples, double mean, double variance);
// Anderson-Darling A^2 against N(mean, variance). No pass threshold attached.
double anderson_darling(std::vector<double> samples, double mean, double variance);

// Least-squares slope of log y against log x. Returns +infinity if any y is
// zero (the quantity vanishes faster than any power).
double fit_exponent(const std::vector<double>& x, const std::vector<double>& y);

struct TestReport {
  std::string test;
  double statistic = 0.0;
  double threshold = 0.0;
  bool pass = false;
  std::size_t M = 0;
  std::uint64_t seed = 0;
  nlohmann::json params = nlohmann::json::object();
};

nlohmann::json to_json(const TestReport& r);

struct CltThresholds {
  double ks = 0.03;
  double variance_rel = 0.07;
  double mean_abs = 0.01;
};

struct CltResult {
  TestReport report;  // statistic is the KS distance
  Moments m;
  double ks = 0.0;
  double anderson_darling = 0.0;
  double ref_mean = 0.0;
  double ref_variance = 0.0;
};

// Compares displacements with N(s b, s sigma2). Throws InsufficientSamples below 1000.
CltResult clt_test(const std::vector<double>& samples, double s, double b, double sigma2, std::uint64_t seed = 0,
                   const CltThresholds& thr = {});

// Drift and variance of the limiting diffusion.
struct DiffusionCoeffs {
  ScalarField b;
  ScalarField sigma2;

  static DiffusionCoeffs constant(double b, double sigma2);
  // Piecewise-linear interpolation, constant beyond the ends.
  static DiffusionCoeffs tabulated(std::vector<double> r, std::vector<double> b, std::vector<double> sigma2);
};

struct TestFunction {
  std::string name;
  ScalarField f, df, d2f;

  static TestFunction constant(double c = 1.0);
  static TestFunction monomial(int degree);  // r, r^2, r^3
  // exp(-1 / (1 - z^2)) with z = (r - center) / radius, zero outside.
  static TestFunction bump(double center, double radius);
};

struct MartingaleEstimate {
  double estimate = 0.0;
  double standard_error = 0.0;
  std::size_t M = 0;
  double eps = 0.0;
};

// Monte Carlo mean of f(r_n) - f(r_0) - eps^2 sum_{k<n} (b f' + sigma2 f''/2)(r_k).
// Throws InsufficientSamples if M < 2.
MartingaleEstimate martingale_residual(const EnsembleSpec& spec, const TestFunction& f, const DiffusionCoeffs& coeffs);

struct WeightedCltResult {
  TestReport report;  // statistic is the KS distance of S_n / sqrt(n)
  Moments m;
  double ks = 0.0;
  double sigma2 = 0.0;
  std::vector<double> scaled;  // S_n / sqrt(n) per sample
};

// S_n = sum_k v_k omega_k with fair symbols; S_n / sqrt(n) is compared with
// N(0, sigma2).
WeightedCltResult weighted_bernoulli_clt(const std::vector<double>& v, std::size_t M, std::uint64_t seed, double sigma2,
                                         unsigned threads = 0, double ks_threshold = 0.03,
                                         double variance_rel = 0.05);

// v_k = g(theta* + k alpha, r) for k < n.
std::vector<double> birkhoff_weights(const TrigPotential& g, double theta_star, double alpha, double r, std::size_t n);

struct HistogramSpec {
  std::size_t bins = 50;
  double lo = -1.0;
  double hi = 1.0;
};

struct Histogram {
  std::vector<double> left, right, density;
  std::vector<std::size_t> count;
};

Histogram histogram(const std::vector<double>& samples, const HistogramSpec& spec);

// Writes bin_left,bin_right,count,density to csv_path and the reference
// normal parameters to the sidecar (csv_path with extension .json). Throws IOFailure.
Histogram emit_histogram(const std::vector<double>& samples, const HistogramSpec& spec, const std::string& csv_path,
                         double ref_mean, double ref_variance);

}  // namespace cyldiff
