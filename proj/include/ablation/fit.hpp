#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

namespace ablation {

// Least-squares slope of y against x.
inline double ls_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("ls_slope: need matching samples, n >= 2");
  double n = double(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
  }
  double mx = sx / n, my = sy / n;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("ls_slope: degenerate abscissas");
  return sxy / sxx;
}

inline double median(std::vector<double> v) {
  if (v.empty()) throw std::invalid_argument("median: empty");
  std::sort(v.begin(), v.end());
  std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// Observed convergence order from three values at grid refinement factor 2:
// order = log2(|v1 - v0| / |v2 - v1|).
inline double richardson_order(double v0, double v1, double v2) {
  double d0 = std::abs(v1 - v0), d1 = std::abs(v2 - v1);
  if (d1 == 0.0) throw std::invalid_argument("richardson_order: stalled");
  return std::log2(d0 / d1);
}

// Richardson extrapolation of a pth-order pair (coarse, fine at half step).
inline double richardson_extrapolate(double coarse, double fine, double p = 2) {
  double w = std::pow(2.0, p);
  return (w * fine - coarse) / (w - 1.0);
}

}  // namespace ablation
