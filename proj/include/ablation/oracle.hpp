#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "ablation/fit.hpp"
#include "ablation/model.hpp"
#include "ablation/tridiag.hpp"
#include "ablation/wave.hpp"

namespace ablation {

struct OracleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Uniform cell-centered grid: nodes at (i+1/2) h, no node on a domain edge.
struct FdGrid {
  double lo, hi;
  std::size_t n;
  double h;
  std::vector<double> x;

  FdGrid(double lo_, double hi_, std::size_t n_) : lo(lo_), hi(hi_), n(n_) {
    if (n < 100) throw std::invalid_argument("fd: need n >= 100");
    if (!(hi > lo)) throw std::invalid_argument("fd: empty domain");
    h = (hi - lo) / double(n);
    x.resize(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = lo + (i + 0.5) * h;
  }
};

namespace detail {

// Smallest generalized eigenvalue of A v = lambda W v (A symmetric tridiag,
// W diagonal positive) by inverse iteration with Rayleigh-quotient stopping.
inline double smallest_generalized(const Tridiag& A, const std::vector<double>& W,
                                   std::vector<double>* vec_out = nullptr,
                                   int max_iter = 400) {
  std::size_t n = A.size();
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = 1.0;
  double lam = 0.0, lam_prev = 0.0, delta_prev = 1e300;
  for (int it = 0; it < max_iter; ++it) {
    std::vector<double> rhs(n);
    for (std::size_t i = 0; i < n; ++i) rhs[i] = W[i] * v[i];
    v = A.solve(rhs);
    double nrm = 0.0;
    for (std::size_t i = 0; i < n; ++i) nrm += W[i] * v[i] * v[i];
    nrm = std::sqrt(nrm);
    for (std::size_t i = 0; i < n; ++i) v[i] /= nrm;
    auto Av = A.apply(v);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      num += v[i] * Av[i];
      den += W[i] * v[i] * v[i];
    }
    lam = num / den;
    double delta = std::abs(lam - lam_prev);
    bool tight = delta <= 1e-13 * std::abs(lam);
    // Rayleigh-quotient roundoff floors the attainable delta; accept once the
    // iteration stops improving below a safe relative level.
    bool stalled =
        it > 20 && delta <= 1e-9 * std::abs(lam) && delta >= 0.5 * delta_prev;
    if (it > 3 && (tight || stalled)) {
      if (vec_out) *vec_out = v;
      return lam;
    }
    lam_prev = lam;
    delta_prev = std::max(delta, 1e-300);
  }
  throw OracleError("fd: inverse iteration did not converge");
}

}  // namespace detail

// Finite-difference estimate of the hot-zone principal eigenvalue from the
// divergence form -(zeta^g v')' + b zeta^{g-1} v = sigma zeta^{g-1} v,
// g = 1/(m-2). Flux-zero at zeta = 0 (the weight vanishes there, encoding
// the C^1 boundary condition), homogeneous value condition at L.
inline double fd_hotzone_sigma0(double m, double B, double L, std::size_t n,
                                std::vector<double>* vec_out = nullptr) {
  if (n < 1000) throw std::invalid_argument("fd_hotzone: need n >= 1000");
  FdGrid grid(0.0, L, n);
  double g = 1.0 / (m - 2.0), h = grid.h;
  Tridiag A;
  A.diag.assign(n, 0.0);
  A.lower.assign(n, 0.0);
  A.upper.assign(n, 0.0);
  std::vector<double> W(n);
  // The weights zeta^{g-1} and b zeta^{g-1} are integrable-singular at the
  // origin; midpoint sampling there costs an O(sqrt(h)) eigenvalue error, so
  // cells carry their exact averages instead.
  for (std::size_t i = 0; i < n; ++i) {
    double zl = i * h, zr = (i + 1) * h;
    double wl = std::pow(zl, g) / (h * h);
    double wr = std::pow(zr, g) / (h * h);
    if (i + 1 == n) wr *= 2.0;  // value condition at the face L, half spacing
    double bcell = B * (std::pow(zr, 3.0 * g + 1.0) - std::pow(zl, 3.0 * g + 1.0)) /
                   ((3.0 * g + 1.0) * h);
    A.diag[i] = wl + wr + bcell;
    if (i > 0) A.lower[i] = -wl;
    if (i + 1 < n) A.upper[i] = -wr;
    W[i] = (std::pow(zr, g) - std::pow(zl, g)) / (g * h);
  }
  return detail::smallest_generalized(A, W, vec_out);
}

// Domain-independent wrapper: doubles L at fixed spacing (n grows with L)
// until the truncation error is below the settling tolerance.
inline double fd_hotzone_sigma0_auto(double m, double B, std::size_t n,
                                     std::vector<double>* vec_out = nullptr) {
  double L = 4.0;
  double h = L / double(n);
  double prev = fd_hotzone_sigma0(m, B, L, n, vec_out);
  for (int i = 0; i < 8; ++i) {
    L *= 2.0;
    std::size_t nn = std::size_t(L / h + 0.5);
    double cur = fd_hotzone_sigma0(m, B, L, nn, vec_out);
    if (std::abs(cur - prev) <= 1e-9 * std::abs(cur)) return cur;
    prev = cur;
  }
  throw OracleError("fd_hotzone: eigenvalue did not settle in L");
}

namespace detail {

// Row coefficients of the full linearized operator
//   T u = -p u'' + (c - 2p'/(m-2)) u' + (k^2 p^{m/(m-2)} - p'' - G'(p)) u
// on a cell-centered grid with Dirichlet ends.
inline Tridiag full_operator(const FdGrid& grid, const WaveSolution& wave,
                             double k) {
  std::size_t n = grid.n;
  double h = grid.h, m = wave.m;
  Tridiag T;
  T.diag.assign(n, 0.0);
  T.lower.assign(n, 0.0);
  T.upper.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    auto s = wave.eval(grid.x[i]);
    double dG = wave.reaction->derivative(std::min(s.p, 1.0));
    double diff = s.p / (h * h);
    double adv = (wave.c - 2.0 * s.dp / (m - 2.0)) / (2.0 * h);
    double pot = k * k * std::pow(s.p, m / (m - 2.0)) - s.ddp - dG;
    double lower = -diff - adv, upper = -diff + adv;
    // Dirichlet: ghost value -u_0 mirrors across the boundary face
    T.diag[i] = 2.0 * diff + pot;
    if (i > 0) T.lower[i] = lower; else T.diag[i] -= lower;
    if (i + 1 < n) T.upper[i] = upper; else T.diag[i] -= upper;
  }
  return T;
}

}  // namespace detail

// Domain for the full-problem verifiers: covers the maximal-decay tail on
// the left (u ~ e^{c x/eps} scale) and the k-rate decay on the right. The
// ablation layer (width eps/c) gets nodes_per_layer cells.
inline FdGrid full_problem_grid(const WaveSolution& wave, double k,
                                double nodes_per_layer = 60.0,
                                std::size_t n_cap = 400000) {
  double eps = wave.epsilon, c = wave.c;
  double x_lo = -40.0 * eps / c;
  double x_hi = wave.x_theta + 35.0 / k + 1.0;
  double h = (eps / c) / nodes_per_layer;
  std::size_t n = std::size_t((x_hi - x_lo) / h) + 1;
  n = std::min(std::max<std::size_t>(n, 20000), n_cap);
  return FdGrid(x_lo, x_hi, n);
}

// Smallest eigenvalue of the full linearized problem by inverse iteration on
// the diagonally symmetrized tridiagonal operator.
inline double fd_full_smallest(double epsilon, double k, const WaveSolution& wave,
                               const FdGrid& grid,
                               std::vector<double>* vec_out = nullptr) {
  if (wave.epsilon != epsilon)
    throw std::invalid_argument("fd_full: wave/epsilon mismatch");
  Tridiag T = detail::full_operator(grid, wave, k);
  Tridiag S = symmetrize(T);
  std::vector<double> W(grid.n, 1.0);
  return detail::smallest_generalized(S, W, vec_out);
}

// Exponential decay rate of the k-th transversal mode under the linearized
// evolution dU/dt = -T U: implicit Euler marching seeded with the maximal
// decay datum p', log-norm fit over the last half of [0, t_end], then the
// exact de-biasing lambda = (e^{r dt} - 1)/dt of the implicit-Euler rate.
// t_end <= 0 picks the duration from the measured decay itself. dt defaults
// to 1e-3 of the unit-length diffusion time at the hot side (p = 1).
inline double relaxation_rate(double epsilon, double k, const WaveSolution& wave,
                              double t_end, const FdGrid& grid,
                              double dt = 1e-3) {
  if (wave.epsilon != epsilon)
    throw std::invalid_argument("relaxation: wave/epsilon mismatch");
  Tridiag T = detail::full_operator(grid, wave, k);
  std::vector<double> u(grid.n);
  for (std::size_t i = 0; i < grid.n; ++i) u[i] = wave.eval(grid.x[i]).dp;

  Tridiag M = T;
  for (std::size_t i = 0; i < grid.n; ++i) {
    M.diag[i] = 1.0 + dt * T.diag[i];
    if (i > 0) M.lower[i] = dt * T.lower[i];
    if (i + 1 < grid.n) M.upper[i] = dt * T.upper[i];
  }

  auto norm_of = [&](const std::vector<double>& v) {
    double s = 0.0;
    for (double w : v) s += w * w;
    return std::sqrt(s * grid.h);
  };

  std::vector<double> times, lognorms;
  double n0 = norm_of(u);
  double t = 0.0;
  times.push_back(t);
  lognorms.push_back(0.0);
  bool fixed_end = t_end > 0.0;
  double horizon = fixed_end ? t_end : 1e9;
  int guard = 0;
  while (t < horizon) {
    u = M.solve(u);
    t += dt;
    double ln = std::log(norm_of(u) / n0);
    times.push_back(t);
    lognorms.push_back(ln);
    if (!fixed_end && ln < -14.0) break;
    if (++guard > 4000000) throw OracleError("relaxation: too many steps");
  }
  std::size_t half = times.size() / 2;
  std::vector<double> tt(times.begin() + half, times.end());
  std::vector<double> ll(lognorms.begin() + half, lognorms.end());
  for (std::size_t i = 1; i < ll.size(); ++i)
    if (ll[i] > ll[i - 1] + 1e-12)
      throw OracleError("relaxation: non-monotone norm tail, extend t_end");
  double r = -ls_slope(tt, ll);
  return std::expm1(r * dt) / dt;
}

// Front speed of the planar nonlinear problem, marched semi-implicitly in a
// frame moving at the reference speed; the measured speed is the frame speed
// plus the residual drift of the theta level set.
inline double nonlinear_front_speed(double epsilon, const ModelParams& params,
                                    double t_end, double smoothing_width = 0.5,
                                    double dt = 1e-3) {
  ModelParams pp = params;
  pp.epsilon = epsilon;
  pp.validate();
  WaveSolution wave = solve_wave(pp);
  const ReactionTerm& G = *wave.reaction;
  double m = params.m, c_frame = wave.c;

  double x_lo = -30.0 * epsilon / wave.c - 2.0;
  double x_hi = wave.x_theta + 18.0;
  double h_target = (epsilon / wave.c) / 25.0;
  std::size_t n = std::size_t((x_hi - x_lo) / h_target) + 1;
  n = std::min(std::max<std::size_t>(n, 40000), std::size_t(600000));
  FdGrid grid(x_lo, x_hi, n);
  double h = grid.h;

  std::vector<double> mu(grid.n);
  for (std::size_t i = 0; i < grid.n; ++i) {
    double s = std::tanh(grid.x[i] / smoothing_width);
    mu[i] = epsilon + (1.0 - epsilon) * 0.5 * (1.0 + s);
  }

  auto level_set = [&](const std::vector<double>& v) -> double {
    for (std::size_t i = 0; i + 1 < grid.n; ++i) {
      if ((v[i] - params.theta) * (v[i + 1] - params.theta) <= 0.0 &&
          v[i] != v[i + 1]) {
        double f = (params.theta - v[i]) / (v[i + 1] - v[i]);
        return grid.x[i] + f * h;
      }
    }
    throw OracleError("front: theta level set left the domain");
  };

  std::vector<double> times, fronts;
  double t = 0.0;
  while (t < t_end) {
    // (I + dt (c_frame Dx - mu^n Dxx)) mu^{n+1} = mu^n + dt (explicit terms)
    Tridiag Mt;
    Mt.diag.assign(grid.n, 0.0);
    Mt.lower.assign(grid.n, 0.0);
    Mt.upper.assign(grid.n, 0.0);
    std::vector<double> rhs(grid.n);
    for (std::size_t i = 0; i < grid.n; ++i) {
      double diff = mu[i] / (h * h);
      double adv = c_frame / (2.0 * h);
      Mt.diag[i] = 1.0 + dt * 2.0 * diff;
      double lower = dt * (-diff - adv), upper = dt * (-diff + adv);
      double mu_l = i > 0 ? mu[i - 1] : epsilon;
      double mu_r = i + 1 < grid.n ? mu[i + 1] : 1.0;
      if (i > 0) Mt.lower[i] = lower; else rhs[i] -= lower * epsilon;
      if (i + 1 < grid.n) Mt.upper[i] = upper; else rhs[i] -= upper * 1.0;
      double dmu = (mu_r - mu_l) / (2.0 * h);
      rhs[i] += mu[i] + dt * (dmu * dmu / (m - 2.0) + G(std::clamp(mu[i], 0.0, 1.0)));
    }
    mu = Mt.solve(rhs);
    t += dt;
    times.push_back(t);
    fronts.push_back(level_set(mu));
  }
  std::size_t half = times.size() / 2;
  std::vector<double> tt(times.begin() + half, times.end());
  std::vector<double> ff(fronts.begin() + half, fronts.end());
  double drift = ls_slope(tt, ff);
  // level set drifts by -(c_measured - c_frame) in the moving frame
  return c_frame - drift;
}

}  // namespace ablation
