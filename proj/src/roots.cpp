#include "cyldiff/roots.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/tools/minima.hpp>

namespace cyldiff {

std::vector<double> RootScan::all() const {
  std::vector<double> out = crossings;
  out.insert(out.end(), tangencies.begin(), tangencies.end());
  std::sort(out.begin(), out.end());
  return out;
}

double circle_distance(double a, double b) noexcept {
  double d = std::fmod(std::abs(a - b), 1.0);
  return std::min(d, 1.0 - d);
}

namespace {

double bisect(const std::function<double(double)>& f, double lo, double hi, double flo, double tol) {
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double reduce(double x) {
  x -= std::floor(x);
  return x >= 1.0 ? 0.0 : x;
}

}  // namespace

RootScan periodic_roots(const std::function<double(double)>& f, const RootScanOptions& opt) {
  const int n = std::max(opt.samples, 8);
  std::vector<double> x(static_cast<std::size_t>(n));
  std::vector<double> y(static_cast<std::size_t>(n));
  RootScan scan;
  for (int i = 0; i < n; ++i) {
    x[static_cast<std::size_t>(i)] = static_cast<double>(i) / n;
    y[static_cast<std::size_t>(i)] = f(x[static_cast<std::size_t>(i)]);
    scan.max_abs = std::max(scan.max_abs, std::abs(y[static_cast<std::size_t>(i)]));
  }
  if (scan.max_abs <= 1e-14) {
    scan.identically_zero = true;
    return scan;
  }

  auto at = [&](int i) { return y[static_cast<std::size_t>((i % n + n) % n)]; };
  for (int i = 0; i < n; ++i) {
    const double a = at(i);
    const double b = at(i + 1);
    const double xa = static_cast<double>(i) / n;
    if (a == 0.0) {
      // An exact zero sample is a crossing only if the neighbours change sign.
      const double l = at(i - 1);
      if ((l < 0.0) != (b < 0.0) || l == 0.0 || b == 0.0)
        scan.crossings.push_back(xa);
      else
        scan.tangencies.push_back(xa);
      continue;
    }
    if (b != 0.0 && (a < 0.0) != (b < 0.0))
      scan.crossings.push_back(reduce(bisect(f, xa, xa + 1.0 / n, a, opt.x_tol)));
  }

  const double floor_abs = opt.tangency_tol * scan.max_abs;
  for (int i = 0; i < n; ++i) {
    const double a = at(i - 1);
    const double c = at(i);
    const double b = at(i + 1);
    if (a == 0.0 || b == 0.0 || c == 0.0) continue;
    if ((a < 0.0) != (c < 0.0) || (b < 0.0) != (c < 0.0)) continue;
    if (std::abs(c) > std::abs(a) || std::abs(c) > std::abs(b)) continue;
    const double xc = static_cast<double>(i) / n;
    auto absf = [&](double t) { return std::abs(f(t)); };
    const auto [xm, fm] = boost::math::tools::brent_find_minima(absf, xc - 1.0 / n, xc + 1.0 / n,
                                                                std::numeric_limits<double>::digits);
    if (fm <= floor_abs) scan.tangencies.push_back(reduce(xm));
  }

  std::sort(scan.crossings.begin(), scan.crossings.end());
  std::sort(scan.tangencies.begin(), scan.tangencies.end());
  return scan;
}

}  // namespace cyldiff
