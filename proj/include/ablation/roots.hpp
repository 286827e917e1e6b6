#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <utility>

namespace ablation {

struct RootError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Bisection on a sign change. rel_tol is relative to the midpoint magnitude
// (plus a small absolute floor so brackets straddling zero terminate).
template <class F>
double bisect(F&& f, double lo, double hi, double f_lo, double f_hi,
              double rel_tol = 1e-12, int max_iter = 200) {
  if (f_lo == 0.0) return lo;
  if (f_hi == 0.0) return hi;
  if ((f_lo > 0) == (f_hi > 0)) throw RootError("bisect: no sign change");
  for (int i = 0; i < max_iter; ++i) {
    double mid = 0.5 * (lo + hi);
    if (hi - lo <= rel_tol * (std::abs(mid) + 1e-30)) return mid;
    double f_mid = f(mid);
    if (f_mid == 0.0) return mid;
    if ((f_mid > 0) == (f_lo > 0)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
      f_hi = f_mid;
    }
  }
  return 0.5 * (lo + hi);
}

template <class F>
double bisect(F&& f, double lo, double hi, double rel_tol = 1e-12,
              int max_iter = 200) {
  double f_lo = f(lo), f_hi = f(hi);
  return bisect(f, lo, hi, f_lo, f_hi, rel_tol, max_iter);
}

// One secant step from the two best bracket points; falls back to the
// midpoint when the secant leaves the bracket.
template <class F>
double secant_polish(F&& f, double a, double b) {
  double fa = f(a), fb = f(b);
  if (fa == fb) return 0.5 * (a + b);
  double x = b - fb * (b - a) / (fb - fa);
  double lo = std::min(a, b), hi = std::max(a, b);
  if (!(x > lo && x < hi)) return 0.5 * (a + b);
  return x;
}

}  // namespace ablation
