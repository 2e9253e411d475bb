#include "cyldiff/poly.hpp"

#include <algorithm>

namespace cyldiff {

void Polynomial::trim() {
  while (!c_.empty() && c_.back() == 0.0) c_.pop_back();
}

Polynomial Polynomial::derivative() const {
  if (c_.size() <= 1) return {};
  std::vector<double> d(c_.size() - 1);
  for (std::size_t i = 1; i < c_.size(); ++i) d[i - 1] = static_cast<double>(i) * c_[i];
  return Polynomial(std::move(d));
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), 0.0);
  for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
  trim();
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), 0.0);
  for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
  trim();
  return *this;
}

Polynomial& Polynomial::operator*=(double s) {
  for (double& x : c_) x *= s;
  trim();
  return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<double> out(a.c_.size() + b.c_.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.c_.size(); ++i)
    for (std::size_t j = 0; j < b.c_.size(); ++j) out[i + j] += a.c_[i] * b.c_[j];
  return Polynomial(std::move(out));
}

}  // namespace cyldiff
