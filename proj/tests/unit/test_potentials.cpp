#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "cyldiff/errors.hpp"
#include "cyldiff/potentials.hpp"
#include "systems.hpp"

using namespace cyldiff;

TEST_CASE("expected and difference potentials of the cos/sin example") {
  const auto ed = expected_difference(SystemPotentials::cos_sin());
  for (double t = 0.0; t < 1.0; t += 0.07) {
    const double c = std::cos(kTwoPi * t), s = std::sin(kTwoPi * t);
    CHECK(ed.v(t, 0.3) == doctest::Approx(0.5 * (c - s)));
    CHECK(ed.Ev(t, 0.3) == doctest::Approx(0.5 * (c + s)));
    CHECK(ed.Eu(t, 0.3) == doctest::Approx(0.5 * (c + s)));
  }
  CHECK(ed.Ew.is_zero());
}

TEST_CASE("difference vanishes for equal potentials, halves for one-sided") {
  SystemPotentials sys;
  sys.v_plus = sys.v_minus = TrigPotential::cosine(2);
  CHECK(expected_difference(sys).v.is_zero());

  SystemPotentials one;
  one.v_plus = TrigPotential::sine(1, Polynomial{1.0, 2.0});
  const auto ed = expected_difference(one);
  for (double t : {0.1, 0.4}) {
    CHECK(ed.Ev(t, 0.5) == doctest::Approx(0.5 * one.v_plus(t, 0.5)));
    CHECK(ed.v(t, 0.5) == doctest::Approx(0.5 * one.v_plus(t, 0.5)));
  }
}

TEST_CASE("expected potential is the pointwise half-sum") {
  std::mt19937_64 g(3);
  for (int trial = 0; trial < 10; ++trial) {
    SystemPotentials sys;
    sys.v_plus = testing::random_potential(g, 3, 2, true);
    sys.v_minus = testing::random_potential(g, 3, 2, true);
    const auto ed = expected_difference(sys);
    for (double t : {0.0, 0.33, 0.8})
      for (double r : {-0.5, 0.25, 1.5})
        CHECK(std::abs(ed.Ev(t, r) - 0.5 * (sys.v_plus(t, r) + sys.v_minus(t, r))) <= 1e-14);
  }
}

TEST_CASE("sigma squared") {
  const auto cs = SystemPotentials::cos_sin();
  for (double r : {0.0, 0.3, 0.77}) CHECK(sigma_squared(cs, r) == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(sigma_squared(SystemPotentials{}, 0.2) == 0.0);
  // 1e4-point quadrature of v^2 with v = (cos - sin) / 2.
  const auto v = expected_difference(cs).v;
  double q = 0.0;
  const int n = 10000;
  for (int i = 0; i < n; ++i) q += std::pow(v((i + 0.5) / n, 0.0), 2) / n;
  CHECK(std::abs(sigma_squared(cs, 0.0) - q) < 1e-12);
}

TEST_CASE("Parseval for random degree <= 5 systems") {
  std::mt19937_64 g(5);
  for (int trial = 0; trial < 15; ++trial) {
    SystemPotentials sys;
    const int d = 1 + trial % 5;
    sys.v_plus = testing::random_potential(g, d, 2, true);
    sys.v_minus = testing::random_potential(g, d, 2, true);
    const auto v = expected_difference(sys).v;
    for (double r : {0.1, 0.6}) {
      const double quad = testing::simpson([&](double t) { return v(t, r) * v(t, r); }, 4000);
      CHECK(std::abs(sigma_squared(sys, r) - quad) <= 1e-10);
    }
  }
}

TEST_CASE("hypotheses on the cos/sin example") {
  const auto rep = check_hypotheses(SystemPotentials::cos_sin(), {0.0, 1.0});
  CHECK(rep.get("H0").pass);
  CHECK(rep.get("H1").pass);
  CHECK(rep.get("H2").pass);
  CHECK(rep.get("H3").pass);
  CHECK(rep.required_pass());
  // The zeros 1/8, 5/8 of sin - cos are half a turn apart, so rotation by
  // 1/2 carries a common periodic orbit.
  CHECK_FALSE(rep.get("H4").pass);
  CHECK_FALSE(rep.get("H4").required);
  CHECK(rep.get("normalization").pass);
}

TEST_CASE("H1 fails when v_1 = v_-1") {
  SystemPotentials sys;
  sys.u_plus = sys.u_minus = TrigPotential::cosine(1);
  sys.v_plus = sys.v_minus = TrigPotential::cosine(1);
  const auto rep = check_hypotheses(sys, {0.0, 1.0});
  CHECK_FALSE(rep.get("H1").pass);
  CHECK_FALSE(rep.required_pass());
  const auto failed = rep.failed_required();
  CHECK(std::find(failed.begin(), failed.end(), "H1") != failed.end());
}

TEST_CASE("H3 fails at the common zero of cos and -cos") {
  SystemPotentials sys;
  sys.v_plus = TrigPotential::cosine(1);
  sys.v_minus = -1.0 * TrigPotential::cosine(1);
  const auto rep = check_hypotheses(sys, {0.0, 1.0});
  const auto& h3 = rep.get("H3");
  CHECK_FALSE(h3.pass);
  const bool has_quarter = std::any_of(h3.witnesses.begin(), h3.witnesses.end(),
                                       [](double t) { return std::abs(t - 0.25) < 1e-9; });
  CHECK(has_quarter);
}

TEST_CASE("H0 agrees with the exact equispaced mean") {
  std::mt19937_64 g(9);
  for (int trial = 0; trial < 10; ++trial) {
    const int d = 1 + trial % 3;
    SystemPotentials sys;
    sys.v_plus = testing::random_potential(g, d, 1, trial % 2 == 0);
    sys.v_minus = testing::random_potential(g, d, 1, true);
    const auto rep = check_hypotheses(sys, {0.0, 1.0});
    // 4d + 1 nodes integrate every trig polynomial of degree <= 2d exactly.
    const int nodes = 4 * d + 1;
    double worst = 0.0;
    for (double r : {0.0, 0.5, 1.0})
      for (const auto* v : {&sys.v_plus, &sys.v_minus}) {
        double m = 0.0;
        for (int i = 0; i < nodes; ++i) m += (*v)(static_cast<double>(i) / nodes, r) / nodes;
        worst = std::max(worst, std::abs(m));
      }
    CHECK(rep.get("H0").pass == (worst <= 1e-12));
  }
}

TEST_CASE("nearly degenerate resonant zero is ill-conditioned") {
  // Ev = A cos 2 pi theta at the integer resonances has simple roots with
  // |derivative| = 2 pi A inside the ambiguity band [1e-8, 1e-6).
  const double A = 5e-8 / kTwoPi;
  SystemPotentials sys;
  sys.v_plus = A * TrigPotential::cosine(1) + TrigPotential::sine(1);
  sys.v_minus = A * TrigPotential::cosine(1) - TrigPotential::sine(1);
  CHECK_THROWS_AS(check_hypotheses(sys, {0.0, 1.0}), IllConditioned);
}

TEST_CASE("rationals in a range") {
  const auto rs = rationals_in({0.0, 1.0}, 3);
  const std::vector<std::pair<long, long>> want{{0, 1}, {1, 3}, {1, 2}, {2, 3}, {1, 1}};
  CHECK(rs == want);
  CHECK(gcd_long(12, 18) == 6);
}

TEST_CASE("Fourier support and resonant harmonics") {
  SystemPotentials sys;
  sys.v_plus = sys.v_minus = TrigPotential::cosine(1) + TrigPotential::cosine(2);
  const auto sup = fourier_support(sys);
  CHECK(sup == std::vector<int>{1, 2});
  const auto Ev = expected_difference(sys).Ev;
  const auto r2 = resonant_harmonics(Ev, 2, sup);
  CHECK(r2.coeff(1, 0.0) == std::complex<double>(0.0, 0.0));
  CHECK(r2.coeff(2, 0.0) == std::complex<double>(0.5, 0.0));
  CHECK(max_abs_v(SystemPotentials::cos_sin(), {0.0, 1.0}) == doctest::Approx(1.0).epsilon(1e-3));
}
