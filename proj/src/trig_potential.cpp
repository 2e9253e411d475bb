#include "cyldiff/trig_potential.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace cyldiff {

namespace {

bool polys_close(const Polynomial& a, const Polynomial& b, double tol) {
  const auto& ca = a.coefficients();
  const auto& cb = b.coefficients();
  const std::size_t n = std::max(ca.size(), cb.size());
  for (std::size_t i = 0; i < n; ++i) {
    const double x = i < ca.size() ? ca[i] : 0.0;
    const double y = i < cb.size() ? cb[i] : 0.0;
    if (std::abs(x - y) > tol) return false;
  }
  return true;
}

}  // namespace

TrigPotential::TrigPotential(std::vector<ComplexPoly> harmonics) : h_(std::move(harmonics)) {
  if (!h_.empty() && !h_[0].im.is_zero())
    throw std::invalid_argument("TrigPotential: zeroth harmonic must be real");
  trim();
}

TrigPotential TrigPotential::from_harmonics(const std::map<int, ComplexPoly>& coeffs, double tol) {
  int d = 0;
  for (const auto& [k, _] : coeffs) d = std::max(d, std::abs(k));
  std::vector<ComplexPoly> h(static_cast<std::size_t>(d) + 1);
  for (int k = 0; k <= d; ++k) {
    auto pos = coeffs.find(k);
    auto neg = coeffs.find(-k);
    if (k == 0) {
      if (pos == coeffs.end()) continue;
      if (!polys_close(pos->second.im, Polynomial{}, tol))
        throw std::invalid_argument("TrigPotential: harmonic 0 has a non-zero imaginary part");
      h[0] = ComplexPoly{pos->second.re, {}};
      continue;
    }
    if (pos != coeffs.end() && neg != coeffs.end()) {
      const ComplexPoly mirrored = neg->second.conj();
      if (!polys_close(pos->second.re, mirrored.re, tol) ||
          !polys_close(pos->second.im, mirrored.im, tol))
        throw std::invalid_argument("TrigPotential: harmonics " + std::to_string(k) + " and " +
                                    std::to_string(-k) + " are not conjugate");
      h[static_cast<std::size_t>(k)] = pos->second;
    } else if (pos != coeffs.end()) {
      h[static_cast<std::size_t>(k)] = pos->second;
    } else if (neg != coeffs.end()) {
      h[static_cast<std::size_t>(k)] = neg->second.conj();
    }
  }
  return TrigPotential(std::move(h));
}

TrigPotential TrigPotential::constant(Polynomial value) {
  return TrigPotential(std::vector<ComplexPoly>{ComplexPoly{std::move(value), {}}});
}

TrigPotential TrigPotential::cosine(int k, Polynomial amplitude) {
  if (k == 0) return constant(std::move(amplitude));
  k = std::abs(k);
  std::vector<ComplexPoly> h(static_cast<std::size_t>(k) + 1);
  h[static_cast<std::size_t>(k)] = ComplexPoly{amplitude * 0.5, {}};
  return TrigPotential(std::move(h));
}

TrigPotential TrigPotential::sine(int k, Polynomial amplitude) {
  if (k == 0) return {};
  const double sign = k > 0 ? 1.0 : -1.0;
  k = std::abs(k);
  // sin(x) = (e^{ix} - e^{-ix}) / (2i): c_k = -i/2.
  std::vector<ComplexPoly> h(static_cast<std::size_t>(k) + 1);
  h[static_cast<std::size_t>(k)] = ComplexPoly{{}, amplitude * (-0.5 * sign)};
  return TrigPotential(std::move(h));
}

ComplexPoly TrigPotential::harmonic(int k) const {
  const int a = std::abs(k);
  if (a > degree()) return {};
  const ComplexPoly& c = h_[static_cast<std::size_t>(a)];
  return k >= 0 ? c : c.conj();
}

std::complex<double> TrigPotential::coeff(int k, double r) const {
  const int a = std::abs(k);
  if (a > degree()) return {};
  const std::complex<double> c = h_[static_cast<std::size_t>(a)](r);
  return k >= 0 ? c : std::conj(c);
}

std::vector<std::complex<double>> TrigPotential::coeffs_at(double r) const {
  std::vector<std::complex<double>> out(h_.size());
  for (std::size_t k = 0; k < h_.size(); ++k) out[k] = h_[k](r);
  return out;
}

double TrigPotential::eval_unit(std::complex<double> unit, double r) const noexcept {
  if (h_.empty()) return 0.0;
  double acc = h_[0].re(r);
  std::complex<double> z = unit;
  std::complex<double> harmonic_sum{};
  for (std::size_t k = 1; k < h_.size(); ++k) {
    if (!h_[k].is_zero()) harmonic_sum += h_[k](r) * z;
    z *= unit;
  }
  return acc + 2.0 * harmonic_sum.real();
}

TrigPotential TrigPotential::d_theta() const {
  std::vector<ComplexPoly> h(h_.size());
  for (std::size_t k = 1; k < h_.size(); ++k)
    h[k] = std::complex<double>(0.0, kTwoPi * static_cast<double>(k)) * h_[k];
  return TrigPotential(std::move(h));
}

TrigPotential TrigPotential::d_r() const {
  std::vector<ComplexPoly> h(h_.size());
  for (std::size_t k = 0; k < h_.size(); ++k) h[k] = h_[k].derivative();
  return TrigPotential(std::move(h));
}

TrigPotential TrigPotential::filtered(const std::function<bool(int)>& keep) const {
  std::vector<ComplexPoly> h(h_.size());
  for (std::size_t k = 0; k < h_.size(); ++k)
    if (keep(static_cast<int>(k))) h[k] = h_[k];
  return TrigPotential(std::move(h));
}

TrigPotential& TrigPotential::operator+=(const TrigPotential& o) {
  if (o.h_.size() > h_.size()) h_.resize(o.h_.size());
  for (std::size_t k = 0; k < o.h_.size(); ++k) h_[k] += o.h_[k];
  trim();
  return *this;
}

TrigPotential& TrigPotential::operator-=(const TrigPotential& o) {
  if (o.h_.size() > h_.size()) h_.resize(o.h_.size());
  for (std::size_t k = 0; k < o.h_.size(); ++k) h_[k] -= o.h_[k];
  trim();
  return *this;
}

TrigPotential& TrigPotential::operator*=(double s) {
  for (auto& c : h_) {
    c.re *= s;
    c.im *= s;
  }
  trim();
  return *this;
}

TrigPotential operator*(const TrigPotential& a, const TrigPotential& b) {
  if (a.is_zero() || b.is_zero()) return {};
  const int da = a.degree();
  const int db = b.degree();
  std::vector<ComplexPoly> h(static_cast<std::size_t>(da + db) + 1);
  for (int j = -da; j <= da; ++j) {
    const ComplexPoly cj = a.harmonic(j);
    if (cj.is_zero()) continue;
    for (int m = -db; m <= db; ++m) {
      const int k = j + m;
      if (k < 0) continue;
      const ComplexPoly cm = b.harmonic(m);
      if (cm.is_zero()) continue;
      h[static_cast<std::size_t>(k)] += cj * cm;
    }
  }
  // The product is real, so the zeroth harmonic's imaginary part cancels up
  // to rounding; drop it.
  h[0].im = Polynomial{};
  return TrigPotential(std::move(h));
}

void TrigPotential::trim() {
  while (!h_.empty() && h_.back().is_zero()) h_.pop_back();
}

double fourier_pairing(const std::vector<std::complex<double>>& f,
                       const std::vector<std::complex<double>>& g) noexcept {
  const std::size_t n = std::min(f.size(), g.size());
  if (n == 0) return 0.0;
  double acc = f[0].real() * g[0].real();
  for (std::size_t k = 1; k < n; ++k) acc += 2.0 * (f[k] * std::conj(g[k])).real();
  return acc;
}

}  // namespace cyldiff
