#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "cyldiff/errors.hpp"
#include "cyldiff/stats.hpp"

using namespace cyldiff;

namespace {

std::vector<double> normal_samples(std::size_t n, double mean, double sd, std::uint64_t seed) {
  std::mt19937_64 g(seed);
  std::normal_distribution<double> N(mean, sd);
  std::vector<double> x(n);
  for (auto& v : x) v = N(g);
  return x;
}

EnsembleSpec cos_sin_spec(double eps, double s, std::size_t M, std::uint64_t seed) {
  return EnsembleSpec{MapSystem(SystemPotentials::cos_sin(), eps),
                      {InitialMode::UniformTorus, 0.0, 0.0, 0.0, 1.0},
                      s,
                      M,
                      seed,
                      0};
}

}  // namespace

TEST_CASE("moments and normal cdf") {
  const auto m = moments({1.0, 2.0, 3.0, 4.0});
  CHECK(m.n == 4);
  CHECK(m.mean == doctest::Approx(2.5));
  CHECK(m.variance == doctest::Approx(5.0 / 3.0));
  CHECK(m.skewness == doctest::Approx(0.0));
  CHECK(normal_cdf(0.0, 0.0, 1.0) == doctest::Approx(0.5));
  CHECK(normal_cdf(1.96, 0.0, 1.0) == doctest::Approx(0.9750021048517795).epsilon(1e-12));
  CHECK(normal_cdf(-40.0, 0.0, 1.0) >= 0.0);
}

TEST_CASE("KS on a reference sample and the DKW envelope") {
  // DKW: P(D > t) <= 2 exp(-2 M t^2); at 1% t = sqrt(ln(200) / (2M)).
  const std::size_t M = 2000;
  const double t = std::sqrt(std::log(200.0) / (2.0 * M));
  int exceed = 0;
  for (int rep = 0; rep < 100; ++rep)
    if (ks_statistic(normal_samples(M, 0.0, 1.0, 1000 + rep), 0.0, 1.0) > t) ++exceed;
  CHECK(exceed <= 4);  // binomial(100, 0.01) tail
  CHECK(ks_statistic(normal_samples(5000, 0.0, 1.0, 3), 0.0, 1.0) <= 1.36 / std::sqrt(5000.0));
  CHECK(ks_statistic(normal_samples(5000, 0.5, 1.0, 3), 0.0, 1.0) > 0.1);
  CHECK(anderson_darling(normal_samples(5000, 0.0, 1.0, 4), 0.0, 1.0) < 3.9);
}

TEST_CASE("fit exponent") {
  std::vector<double> x{0.02, 0.01, 0.005}, y;
  for (double v : x) y.push_back(7.0 * v * v * v);
  CHECK(fit_exponent(x, y) == doctest::Approx(3.0));
  y[1] = 0.0;
  CHECK(std::isinf(fit_exponent(x, y)));
}

TEST_CASE("clt test on synthetic reference samples") {
  const auto x = normal_samples(20000, 0.1, 0.5, 8);
  const auto res = clt_test(x, 1.0, 0.1, 0.25, 8);
  CHECK(res.report.pass);
  CHECK(res.ks <= 1.63 / std::sqrt(20000.0));  // 1% critical value
  CHECK(res.report.test == "clt");
  CHECK(res.report.M == 20000);
  const auto j = to_json(res.report);
  for (const char* key : {"test", "statistic", "threshold", "pass", "M", "seed", "params"}) CHECK(j.contains(key));

  auto shuffled = x;
  std::shuffle(shuffled.begin(), shuffled.end(), std::mt19937_64(1));
  const auto res2 = clt_test(shuffled, 1.0, 0.1, 0.25, 8);
  CHECK(to_json(res2.report).dump() == j.dump());

  CHECK_THROWS_AS(clt_test(std::vector<double>(999, 0.0), 1.0, 0.0, 1.0), InsufficientSamples);
  CHECK_THROWS_AS(clt_test(x, 1.0, 0.0, 0.0), DegenerateVariance);
}

TEST_CASE("variance scales as s sigma^2, not s^2 sigma^2") {
  // Independent reimplementation of the cos/sin map with its own RNG.
  auto variance = [](double eps, double s, std::size_t M) {
    std::mt19937_64 g(2718);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    const auto n = static_cast<std::size_t>(std::llround(s / (eps * eps)));
    std::vector<double> d(M);
    for (auto& out : d) {
      double th = U(g), r = U(g);
      const double r0 = r;
      for (std::size_t k = 0; k < n; ++k) {
        const double a = 2.0 * std::acos(-1.0) * th;
        const double f = (g() & 1u) ? std::cos(a) : std::sin(a);
        th += r + eps * f;
        th -= std::floor(th);
        r += eps * f;
      }
      out = r - r0;
    }
    return moments(d).variance;
  };
  const double v2 = variance(0.05, 2.0, 3000);
  // s sigma^2 = 0.5; s^2 sigma^2 = 1.0.
  CHECK(std::abs(v2 - 0.5) < std::abs(v2 - 1.0));
  CHECK(v2 == doctest::Approx(0.5).epsilon(0.35));
}

TEST_CASE("diffusion coefficients and test functions") {
  const auto c = DiffusionCoeffs::constant(0.2, 0.25);
  CHECK(c.b(3.0) == 0.2);
  const auto t = DiffusionCoeffs::tabulated({0.0, 1.0}, {0.0, 1.0}, {1.0, 3.0});
  CHECK(t.b(0.25) == doctest::Approx(0.25));
  CHECK(t.sigma2(2.0) == doctest::Approx(3.0));
  const auto cube = TestFunction::monomial(3);
  CHECK(cube.f(2.0) == 8.0);
  CHECK(cube.df(2.0) == 12.0);
  CHECK(cube.d2f(2.0) == 12.0);
  const auto bump = TestFunction::bump(0.5, 0.2);
  CHECK(bump.f(0.8) == 0.0);
  CHECK(bump.f(0.5) == doctest::Approx(std::exp(-1.0)));
  const double h = 1e-5;
  CHECK(bump.df(0.55) == doctest::Approx((bump.f(0.55 + h) - bump.f(0.55 - h)) / (2 * h)).epsilon(1e-6));
  CHECK(bump.d2f(0.55) ==
        doctest::Approx((bump.f(0.55 + h) - 2 * bump.f(0.55) + bump.f(0.55 - h)) / (h * h)).epsilon(1e-4));
}

TEST_CASE("martingale residual") {
  const auto coeffs = DiffusionCoeffs::constant(0.0, 0.25);
  SUBCASE("constant f is exactly zero") {
    const auto e = martingale_residual(cos_sin_spec(0.05, 1.0, 200, 3), TestFunction::constant(2.0), coeffs);
    CHECK(e.estimate == 0.0);
    CHECK(e.standard_error == 0.0);
  }
  SUBCASE("linear f with b = 0 is the mean displacement") {
    const auto spec = cos_sin_spec(0.05, 1.0, 500, 4);
    const auto e = martingale_residual(spec, TestFunction::monomial(1), coeffs);
    const auto res = run_ensemble(spec);
    CHECK(std::abs(e.estimate - moments(res.displacement).mean) <= 1e-14);
    CHECK(std::abs(e.estimate) <= 3.0 * e.standard_error);
  }
  CHECK_THROWS_AS(martingale_residual(cos_sin_spec(0.05, 1.0, 1, 3), TestFunction::constant(), coeffs),
                  InsufficientSamples);
}

TEST_CASE("weighted Bernoulli CLT") {
  SUBCASE("unit weights: classical CLT") {
    // Var of the +-1 sum is exactly n; sample-variance SE at M = 2e4 is about 0.01.
    const auto r = weighted_bernoulli_clt(std::vector<double>(2000, 1.0), 20000, 5, 1.0, 0);
    CHECK(r.m.variance == doctest::Approx(1.0).epsilon(0.04));
    CHECK(r.report.pass);
  }
  SUBCASE("zero weights are degenerate at zero") {
    const auto r = weighted_bernoulli_clt(std::vector<double>(100, 0.0), 50, 5, 0.0, 0);
    CHECK(r.report.pass);
    for (double x : r.scaled) CHECK(x == 0.0);
  }
  SUBCASE("Birkhoff weights along a golden rotation") {
    const double alpha = 0.5 * (std::sqrt(5.0) - 1.0);
    const auto v = birkhoff_weights(TrigPotential::cosine(1), 0.0, alpha, 0.0, 4000);
    double sq = 0.0;
    for (double x : v) sq += x * x;
    CHECK(sq / v.size() == doctest::Approx(0.5).epsilon(1e-3));
    const auto r = weighted_bernoulli_clt(v, 4000, 6, 0.5, 0);
    CHECK(r.m.variance == doctest::Approx(0.5).epsilon(0.07));
  }
}

TEST_CASE("histograms") {
  const HistogramSpec spec{5, -1.0, 1.0};
  const auto empty = histogram({}, spec);
  CHECK(std::all_of(empty.count.begin(), empty.count.end(), [](std::size_t c) { return c == 0; }));
  const auto one = histogram({0.0}, spec);
  CHECK(one.count == std::vector<std::size_t>{0, 0, 1, 0, 0});
  CHECK_THROWS_AS(histogram({}, HistogramSpec{1, 0.0, 1.0}), std::invalid_argument);

  namespace fs = std::filesystem;
  fs::create_directories(CYLDIFF_TEST_TMP);
  const std::string path = (fs::path(CYLDIFF_TEST_TMP) / "hist.csv").string();
  const auto x = normal_samples(20000, 0.0, 0.5, 21);
  const auto h = emit_histogram(x, HistogramSpec{41, -2.05, 2.05}, path, 0.0, 0.25);
  // Density at the central bin within 15% of the N(0, 1/4) peak.
  const double peak = 1.0 / std::sqrt(2.0 * std::acos(-1.0) * 0.25);
  CHECK(h.density[20] == doctest::Approx(peak).epsilon(0.15));
  std::ifstream csv(path);
  std::string header;
  std::getline(csv, header);
  CHECK(header == "bin_left,bin_right,count,density");
  std::ifstream side((fs::path(CYLDIFF_TEST_TMP) / "hist.json").string());
  std::stringstream ss;
  ss << side.rdbuf();
  const auto j = nlohmann::json::parse(ss.str());
  CHECK(j["reference"]["variance"] == 0.25);
  CHECK(j["bins"] == 41);
  CHECK_THROWS_AS(emit_histogram(x, spec, "/nonexistent/dir/h.csv", 0.0, 1.0), IOFailure);
}
