#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

namespace ablation {

// Tridiagonal system solver (Thomas algorithm), no pivoting. The matrices in
// this project are diagonally dominant or shifted SPD, so this is safe.
struct Tridiag {
  std::vector<double> lower;  // a[1..n-1], a[0] unused
  std::vector<double> diag;   // d[0..n-1]
  std::vector<double> upper;  // c[0..n-2], c[n-1] unused

  std::size_t size() const { return diag.size(); }

  std::vector<double> solve(const std::vector<double>& rhs) const {
    std::size_t n = diag.size();
    std::vector<double> cp(n), dp(n), x(n);
    double den = diag[0];
    if (den == 0.0) throw std::runtime_error("tridiag: zero pivot");
    cp[0] = upper.empty() ? 0.0 : upper[0] / den;
    dp[0] = rhs[0] / den;
    for (std::size_t i = 1; i < n; ++i) {
      den = diag[i] - lower[i] * cp[i - 1];
      if (den == 0.0) throw std::runtime_error("tridiag: zero pivot");
      cp[i] = (i + 1 < n ? upper[i] : 0.0) / den;
      dp[i] = (rhs[i] - lower[i] * dp[i - 1]) / den;
    }
    x[n - 1] = dp[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) x[i] = dp[i] - cp[i] * x[i + 1];
    return x;
  }

  std::vector<double> apply(const std::vector<double>& v) const {
    std::size_t n = diag.size();
    std::vector<double> r(n);
    for (std::size_t i = 0; i < n; ++i) {
      double s = diag[i] * v[i];
      if (i > 0) s += lower[i] * v[i - 1];
      if (i + 1 < n) s += upper[i] * v[i + 1];
      r[i] = s;
    }
    return r;
  }
};

// A nonsymmetric tridiagonal T with off-diagonal products a_{i+1} c_i > 0 is
// diagonally similar to the symmetric S with s_i = -sqrt(a_{i+1} c_i) (same
// spectrum). Building S directly avoids forming the similarity weights, whose
// dynamic range is exponential across boundary layers.
inline Tridiag symmetrize(const Tridiag& t) {
  std::size_t n = t.size();
  Tridiag s;
  s.diag = t.diag;
  s.lower.assign(n, 0.0);
  s.upper.assign(n, 0.0);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    double prod = t.upper[i] * t.lower[i + 1];
    if (prod <= 0.0)
      throw std::runtime_error("tridiag: not symmetrizable (off-diagonal sign)");
    double off = -std::sqrt(prod);
    if (t.upper[i] > 0.0) off = -off;
    s.upper[i] = off;
    s.lower[i + 1] = off;
  }
  return s;
}

}  // namespace ablation
