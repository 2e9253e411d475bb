#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "cyldiff/errors.hpp"
#include "cyldiff/normal_form.hpp"
#include "systems.hpp"

using namespace cyldiff;

namespace {

const double kPi = std::acos(-1.0);

SystemPotentials cos_sin_with_w(double c) {
  SystemPotentials s = SystemPotentials::cos_sin();
  s.w_plus = s.w_minus = TrigPotential::constant(c);
  return s;
}

}  // namespace

TEST_CASE("bump plateau, support and glue") {
  CHECK(bump_mu(0.5) == 1.0);
  CHECK(bump_mu(-1.0) == 1.0);
  CHECK(bump_mu(3.0) == 0.0);
  CHECK(bump_mu(2.0) == 0.0);
  CHECK(bump_mu(1.5) == doctest::Approx(0.5).epsilon(1e-15));
  // Golden value of the exp(-1/t) glue.
  CHECK(bump_mu(1.25) == doctest::Approx(1.0 / (1.0 + std::exp(-8.0 / 3.0))).epsilon(1e-14));
  double prev = 1.0;
  for (double x = 1.0; x <= 2.0; x += 0.01) {
    const double m = bump_mu(x);
    CHECK(m <= prev);
    CHECK(m == doctest::Approx(1.0 - bump_mu(3.0 - x)).epsilon(1e-12));
    prev = m;
  }
}

TEST_CASE("S1 coefficient by hand") {
  // Ev = cos 2 pi theta has Ev^1 = 1/2; at r = 1/2 the divisor 1 - e^{i pi} = 2
  // and mu_1 = mu(1 / (pi beta)) = 0, so S_1^1 = i (1/2) / (2 pi * 2).
  const auto s = s1_coefficient(1, 0.5, 0.01, TrigPotential::cosine(1));
  CHECK(std::abs(s - std::complex<double>(0.0, 1.0 / (8.0 * kPi))) < 1e-15);
  // Independent evaluation of the displayed formula at a generic point.
  const double r = 0.3, beta = 0.02;
  const TrigPotential Ev = TrigPotential::sine(2, Polynomial{1.0, 0.5});
  const std::complex<double> I(0.0, 1.0);
  const std::complex<double> c2 = Ev.coeff(2, r);
  const std::complex<double> want = I * c2 / (2.0 * kPi * 2.0 * (1.0 - std::exp(2.0 * kPi * I * 2.0 * r)));
  CHECK(std::abs(s1_coefficient(2, r, beta, Ev) - want) < 1e-14);
}

TEST_CASE("S1 vanishes on the resonant plateau and for zero harmonics") {
  const TrigPotential Ev = TrigPotential::cosine(1) + TrigPotential::cosine(2);
  const double beta = 0.01;
  for (double dr : {-0.005, 0.0, 0.004}) {
    CHECK(s1_coefficient(1, 0.0 + dr, beta, Ev) == std::complex<double>(0.0, 0.0));
    CHECK(s1_coefficient(2, 0.5 + dr, beta, Ev) == std::complex<double>(0.0, 0.0));
  }
  CHECK(s1_coefficient(3, 0.3, beta, Ev) == std::complex<double>(0.0, 0.0));
  CHECK(s1_coefficient(1, 0.3, beta, TrigPotential::cosine(2)) == std::complex<double>(0.0, 0.0));
}

TEST_CASE("mollifier cases") {
  const NormalForm nf(SystemPotentials::cos_sin(), {0.05});
  CHECK(nf.mu_k(1, 0.01) == 1.0);
  CHECK(nf.mu_k(1, 0.3) == 0.0);
  const double m = nf.mu_k(1, 0.1);
  CHECK(m >= 0.0);
  CHECK(m <= 1.0);
  CHECK(nf.mollifier_inactive(0.3));
  CHECK_FALSE(nf.mollifier_inactive(0.02));
}

TEST_CASE("beta must separate resonance windows") {
  SystemPotentials d2;
  d2.v_plus = TrigPotential::cosine(2);
  d2.v_minus = TrigPotential::sine(1);
  CHECK_THROWS_AS(NormalForm(d2, {0.05}), std::invalid_argument);
  CHECK_NOTHROW(NormalForm(d2, {0.01}));
  CHECK_THROWS_AS(NormalForm(SystemPotentials::cos_sin(), {0.0}), std::invalid_argument);
}

TEST_CASE("drift of the cos/sin example vanishes") {
  const NormalForm nf(SystemPotentials::cos_sin(), {0.05});
  for (double r = 0.11; r < 0.4; r += 0.02) CHECK(std::abs(nf.drift(r)) <= 1e-12);
  CHECK(nf.sigma2(0.3) == doctest::Approx(0.25));
  CHECK_THROWS_AS(nf.drift(0.52), ResonantInput);
  CHECK_THROWS_AS(drift_b(MapSystem(SystemPotentials::cos_sin(), 0.01), 0.98, {0.05}), ResonantInput);
}

TEST_CASE("constant w gives drift c") {
  const MapSystem sys(cos_sin_with_w(0.3), 0.01);
  for (double r : {0.15, 0.3, 0.7}) {
    CHECK(drift_b(sys, r, {0.05}) == doctest::Approx(0.3).epsilon(1e-12));
    const NormalForm nf(sys.potentials(), {0.05});
    CHECK(nf.drift_quadrature(r) == doctest::Approx(0.3).epsilon(1e-10));
  }
}

TEST_CASE("exact systems have zero drift") {
  std::mt19937_64 g(2024);
  for (int trial = 0; trial < 5; ++trial) {
    const SystemPotentials sys = testing::exact_system(g);
    const NormalForm nf(sys, {0.01});
    for (double r = 0.0; r < 1.0; r += 0.037) {
      if (nf.resonance_within(r, 0.01)) continue;
      CHECK(std::abs(nf.drift(r)) <= 1e-8);
    }
  }
}

TEST_CASE("Fourier-pairing drift matches quadrature on random systems") {
  std::mt19937_64 g(17);
  for (int trial = 0; trial < 5; ++trial) {
    SystemPotentials sys;
    sys.u_plus = testing::random_potential(g, 1, 2, true, 0.5);
    sys.u_minus = testing::random_potential(g, 1, 2, true, 0.5);
    sys.v_plus = testing::random_potential(g, 1, 2, true, 0.5);
    sys.v_minus = testing::random_potential(g, 1, 2, true, 0.5);
    sys.w_plus = testing::random_potential(g, 1, 1, false, 0.5);
    sys.w_minus = testing::random_potential(g, 1, 1, false, 0.5);
    const NormalForm nf(sys, {0.05});
    for (double r : {0.13, 0.27, 0.36, 0.63, 0.81}) {
      if (nf.resonance_within(r, 0.05)) continue;
      CHECK(nf.drift(r) == doctest::Approx(nf.drift_quadrature(r)).epsilon(1e-9));
    }
  }
}

TEST_CASE("drift is bounded on the nonresonant grid") {
  std::mt19937_64 g(31);
  SystemPotentials sys;
  sys.u_plus = sys.u_minus = testing::random_potential(g, 1, 1, true);
  sys.v_plus = testing::random_potential(g, 1, 1, true);
  sys.v_minus = testing::random_potential(g, 1, 1, true);
  const NormalForm nf(sys, {0.05});
  double worst = 0.0;
  for (double r = 0.0; r <= 1.0; r += 0.005)
    if (!nf.resonance_within(r, 0.05)) worst = std::max(worst, std::abs(nf.drift(r)));
  CHECK(std::isfinite(worst));
  CHECK(worst < 100.0);
}

TEST_CASE("correction fields") {
  const std::vector<int> sup{1};
  const auto flat = correction_fields(TrigPotential::cosine(1), {0, 1}, sup);
  CHECK(flat.E1.is_zero());
  for (double t : {0.0, 0.2, 0.7}) CHECK(flat.Evpq(t, 0.0) == doctest::Approx(std::cos(kTwoPi * t)));
  const auto half = correction_fields(TrigPotential::cosine(1), {1, 2}, sup);
  CHECK(half.Evpq.is_zero());

  // E1 = -sum i (Ev^k)'(r) / (2 pi k) e^{2 pi i k theta}; for Ev = r cos 2 pi theta
  // this is sin(2 pi theta) / (2 pi).
  const auto lin = correction_fields(TrigPotential::cosine(1, Polynomial{0.0, 1.0}), {1, 3}, sup);
  for (double t : {0.1, 0.35}) CHECK(lin.E1(t, 0.4) == doctest::Approx(std::sin(kTwoPi * t) / kTwoPi));
}

TEST_CASE("homological identity where the mollifier is inactive") {
  const NormalForm nf(SystemPotentials::cos_sin(), {0.05});
  double worst = 0.0;
  int checked = 0;
  for (int j = 0; j < 64; ++j) {
    const double r = (j + 0.5) / 64.0;
    if (!nf.mollifier_inactive(r)) continue;
    for (int i = 0; i < 512; ++i) {
      worst = std::max(worst, std::abs(nf.homological_residual(i / 512.0, r)));
      ++checked;
    }
  }
  CHECK(checked > 0);
  CHECK(worst <= 1e-10);
}

TEST_CASE("Phi is the identity when S1 vanishes or eps = 0") {
  const NormalForm zero(SystemPotentials{}, {0.05});
  const State x{0.3, 0.4};
  const State y = zero.phi(x, 0.02);
  CHECK(y.theta == x.theta);
  CHECK(y.r == x.r);
  const NormalForm nf(SystemPotentials::cos_sin(), {0.05});
  const State z = nf.phi(x, 0.0);
  CHECK(z.theta == x.theta);
  CHECK(z.r == x.r);
}

TEST_CASE("Phi is eps-close to the identity and inverts to third order") {
  const NormalForm nf(SystemPotentials::cos_sin(), {0.05});
  double worst = 0.0;
  for (double eps : {0.02, 0.01}) {
    for (int i = 0; i < 32; ++i)
      for (double r : {0.2, 0.3}) {
        const State x{i / 32.0, r};
        const State y = nf.phi(x, eps);
        const double dth = std::min(std::abs(y.theta - x.theta), 1.0 - std::abs(y.theta - x.theta));
        worst = std::max(worst, std::max(dth, std::abs(y.r - x.r)) / eps);
      }
  }
  CHECK(worst < 1.0);
  const auto rt = phi_roundtrip(nf, {0.15, 0.35}, {0.02, 0.01, 0.005});
  CHECK(rt.exponent >= 2.9);
  CHECK(rt.exponent <= 3.3);
  // Exact change of variables inverts to rounding.
  const State x{0.42, 0.27};
  const State back = nf.phi_inverse_exact(nf.phi_exact(x, 0.01), 0.01);
  CHECK(back.r == doctest::Approx(x.r).epsilon(1e-12));
  CHECK(back.theta == doctest::Approx(x.theta).epsilon(1e-12));
}

TEST_CASE("conjugacy residual: integrable system is exactly zero") {
  const MapSystem sys(SystemPotentials{}, 0.01);
  const NormalForm nf(sys.potentials(), {0.05});
  const auto rep = conjugacy_residual(sys, nf, {0.2, 0.3}, {0.02, 0.01});
  for (double m : rep.max_residual) CHECK(m == 0.0);
}

TEST_CASE("conjugacy residual near a resonance is second order") {
  // d = 2 so that 1/2 carries the surviving harmonic k = 2.
  SystemPotentials sys;
  sys.u_plus = sys.v_plus = TrigPotential::cosine(2) + TrigPotential::sine(1);
  sys.u_minus = sys.v_minus = TrigPotential::sine(2) + 0.5 * TrigPotential::cosine(1);
  const double beta = 0.01;
  const MapSystem m(sys, 0.01);
  const NormalForm nf(sys, {beta});
  const auto rep = conjugacy_residual(m, nf, {0.5 - 0.4 * beta, 0.5 + 0.4 * beta}, {0.02, 0.01, 0.005},
                                      ResidualForm::Near);
  CHECK(rep.exponent >= 1.9);
}
