#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <stdexcept>
#include <vector>

#include "ablation/model.hpp"
#include "ablation/ode.hpp"
#include "ablation/roots.hpp"

namespace ablation {

struct WaveError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Phase-plane slope of the wave on the reaction-free side, p in [eps, theta]:
//   U(p) = (m-2) c [1 - (eps/p)^{1/(m-2)}].
inline double phase_slope(double p, double c, double epsilon, double m) {
  if (!(p >= epsilon)) throw std::domain_error("phase_slope: p < epsilon");
  return (m - 2.0) * c * (1.0 - std::pow(epsilon / p, 1.0 / (m - 2.0)));
}

// Same quantity through w = (p - eps)/eps. Stable down to w ~ 1e-300, where
// the direct form would cancel to zero.
inline double phase_slope_w(double w, double c, double m) {
  return (m - 2.0) * c * (-std::expm1(-std::log1p(w) / (m - 2.0)));
}

// Curvature on the reaction-free side: p'' = c eps^{1/(m-2)} U(p)/p^{1+1/(m-2)}.
inline double second_derivative(double p, double c, double epsilon, double m) {
  double u = phase_slope(p, c, epsilon, m);
  return c * std::pow(epsilon / p, 1.0 / (m - 2.0)) * u / p;
}

inline double second_derivative_w(double w, double c, double epsilon, double m) {
  double u = phase_slope_w(w, c, m);
  return (c / epsilon) * u * std::exp(-(1.0 + 1.0 / (m - 2.0)) * std::log1p(w));
}

namespace detail {

enum class Shot { Overshoot, Undershoot };

// Hot-side Cauchy problem p(0) = theta, p'(0) = alpha:
//   p'' = ((c - p'/(m-2)) p' - G(p)) / p.
// Trajectories either exceed 1 (overshoot) or turn around below it
// (undershoot); the separatrix is the wave tail.
inline Shot shoot_classify(double c, double alpha, const ReactionTerm& G,
                           double m, double theta) {
  if (alpha <= 0.0) return Shot::Undershoot;
  auto rhs = [&](double, const Vec<2>& y) -> Vec<2> {
    double p = y[0], dp = y[1];
    double g = p >= 1.0 ? 0.0 : G(std::max(p, 0.0));
    return {dp, ((c - dp / (m - 2.0)) * dp - g) / std::max(p, 1e-12)};
  };
  auto solver = make_dopri5<2>(rhs, StepControl{1e-10, 1e-12});
  Vec<2> y{theta, alpha};
  double t = 0.0, h = 1e-3;
  const double t_max = 2000.0;
  while (t < t_max) {
    if (t + h > t_max) h = t_max - t;
    solver.step(t, y, h);
    if (y[0] > 1.0) return Shot::Overshoot;
    if (y[1] <= 0.0 && y[0] < 1.0 - 1e-9) return Shot::Undershoot;
  }
  throw WaveError("shoot: classification inconclusive");
}

}  // namespace detail

// Matched hot-side slope alpha_0(c): the unique shooting slope at p = theta
// for which p -> 1 monotonically. Bracketed in [0, 10(m-2)c].
inline double shoot_alpha0(double c, const ReactionTerm& G, double m,
                           double theta, double tol = 1e-12) {
  double cap = 10.0 * (m - 2.0) * c;
  if (detail::shoot_classify(c, cap, G, m, theta) == detail::Shot::Undershoot)
    throw WaveError("shoot: bracket cap undershoots (alpha0 above 10(m-2)c)");
  // Absolute floor: above the hot-side degenerate speed alpha0 collapses to
  // zero and a purely relative criterion would never terminate.
  double floor_abs = 1e-13 * (m - 2.0) * c;
  double lo = 0.0, hi = cap;
  while (hi - lo > tol * hi + floor_abs) {
    double mid = 0.5 * (lo + hi);
    if (detail::shoot_classify(c, mid, G, m, theta) == detail::Shot::Overshoot)
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

struct WaveSample {
  double x, p, dp, ddp;
};

struct WaveOptions {
  double speed_tol = 1e-10;
  double alpha_tol = 1e-12;
  double left_dt = 0.002;     // spacing of the t = log w grid
  double left_depth = 60.0;   // integrate until xi <= -left_depth / c
  double hot_dx = 0.002;      // uniform hot-side output spacing
  double tail_switch = 1e-3;  // hand over to the linear tail below this 1-p
  double tail_floor = 1e-12;  // stored tail rows reach down to 1-p ~ this
};

// The planar travelling wave in the shifted frame: the limit profile p_0 has
// its slope discontinuity at x = 0, and every profile is pinned to
// p(x_theta) = theta with x_theta = theta/((m-2) c0).
class WaveSolution {
 public:
  double m = 0, epsilon = 0, theta = 0;
  double c = 0;        // wave speed (c_eps; equals c0 for the limit wave)
  double c0 = 0;       // limit speed, (m-2) c0 = alpha0(c0)
  double alpha0 = 0;   // hot-side matched slope at p = theta
  double x_theta = 0;  // theta / ((m-2) c0)
  double A = 0;        // c0 / ((m-2) c0)^{1/(m-2)}
  double fixed_point_residual = 0;
  double tail_rate = 0;  // stable decay exponent at p = 1 (negative)

  std::vector<WaveSample> grid;

  bool is_limit() const { return epsilon == 0.0; }

  // Exact-form slope through w = (p - eps)/eps.
  double slope_w(double w) const { return phase_slope_w(w, c, m); }

  // dxi/dt along the left parameterization, t = log w.
  double xi_rate(double t) const {
    double w = std::exp(t);
    if (w < 1e-290) return 1.0 / c;
    return w / slope_w(w);
  }

  WaveSample eval(double x) const {
    if (is_limit()) {
      if (x <= 0.0) return {x, 0.0, 0.0, 0.0};
      if (x <= x_theta)
        return {x, (m - 2.0) * c0 * x, (m - 2.0) * c0, 0.0};
      return eval_hot(x);
    }
    if (x <= x_theta) return eval_cold(x);
    return eval_hot(x);
  }

  // Layer parameter t = log((p-eps)/eps) at a given x <= x_theta, from the
  // stored monotone map (exponential continuation left of the map).
  double t_at_x(double x) const {
    if (x <= left_x.front())
      return left_t.front() + c * (x - left_x.front()) / epsilon;
    return invert_left(x);
  }

  // Cold/linear zone: invert the map, then use the phase-plane closed forms.
  WaveSample eval_cold(double x) const {
    double t = t_at_x(x);
    double w = std::exp(t);
    double p = epsilon * (1.0 + w);
    return {x, p, slope_w(w), second_derivative_w(w, c, epsilon, m)};
  }

  WaveSample eval_hot(double x) const {
    if (x >= hot_x.back()) {
      double u = (1.0 - hot_p.back()) * std::exp(tail_rate * (x - hot_x.back()));
      return {x, 1.0 - u, -tail_rate * u, -tail_rate * tail_rate * u};
    }
    auto it = std::upper_bound(hot_x.begin(), hot_x.end(), x);
    std::size_t i = std::max<std::ptrdiff_t>(1, it - hot_x.begin()) - 1;
    i = std::min(i, hot_x.size() - 2);
    double x0 = hot_x[i], x1 = hot_x[i + 1];
    double h = x1 - x0, s = (x - x0) / h;
    double p0 = hot_p[i], p1 = hot_p[i + 1];
    double d0 = hot_dp[i] * h, d1 = hot_dp[i + 1] * h;
    double h00 = (1 + 2 * s) * (1 - s) * (1 - s), h10 = s * (1 - s) * (1 - s);
    double h01 = s * s * (3 - 2 * s), h11 = s * s * (s - 1);
    double p = h00 * p0 + h10 * d0 + h01 * p1 + h11 * d1;
    double dh00 = 6 * s * (s - 1), dh10 = (1 - s) * (1 - 3 * s);
    double dh01 = 6 * s * (1 - s), dh11 = s * (3 * s - 2);
    double dp = (dh00 * p0 + dh10 * d0 + dh01 * p1 + dh11 * d1) / h;
    return {x, p, dp, hot_curvature(p, dp)};
  }

  double hot_curvature(double p, double dp) const {
    double g = p >= 1.0 ? 0.0 : (*reaction)(std::max(p, 0.0));
    return ((c - dp / (m - 2.0)) * dp - g) / p;
  }

  // Left map (uniform t grid with x(t)) and hot table; exposed for the
  // cold-zone machinery, which lays its own grid over the parameterization.
  std::vector<double> left_t, left_x;
  std::vector<double> hot_x, hot_p, hot_dp;
  std::shared_ptr<const ReactionTerm> reaction;

 private:
  double invert_left(double x) const {
    auto it = std::upper_bound(left_x.begin(), left_x.end(), x);
    std::size_t i = std::max<std::ptrdiff_t>(1, it - left_x.begin()) - 1;
    i = std::min(i, left_x.size() - 2);
    double t0 = left_t[i], t1 = left_t[i + 1];
    double ht = t1 - t0;
    double x0 = left_x[i], x1 = left_x[i + 1];
    double d0 = xi_rate(t0) * epsilon * ht, d1 = xi_rate(t1) * epsilon * ht;
    double s = (x - x0) / (x1 - x0);
    for (int n = 0; n < 10; ++n) {
      double h00 = (1 + 2 * s) * (1 - s) * (1 - s), h10 = s * (1 - s) * (1 - s);
      double h01 = s * s * (3 - 2 * s), h11 = s * s * (s - 1);
      double xs = h00 * x0 + h10 * d0 + h01 * x1 + h11 * d1;
      double dh00 = 6 * s * (s - 1), dh10 = (1 - s) * (1 - 3 * s);
      double dh01 = 6 * s * (1 - s), dh11 = s * (3 * s - 2);
      double dxs = (dh00 * x0 + dh10 * d0 + dh01 * x1 + dh11 * d1);
      if (dxs == 0.0) break;
      double step = (xs - x) / dxs;
      s -= step;
      if (std::abs(step) < 1e-15) break;
    }
    s = std::clamp(s, 0.0, 1.0);
    return t0 + s * ht;
  }
};

namespace detail {

// F(c) = (m-2) c kappa - alpha0(c) is strictly increasing (alpha0 is
// decreasing in c). A cap failure in the shooting bracket means
// alpha0(c) > 10 (m-2) c, hence F < 0 at that c.
inline double solve_speed(const ReactionTerm& G, double m, double theta,
                          double kappa, double tol) {
  auto F = [&](double c) -> double {
    try {
      return (m - 2.0) * c * kappa - shoot_alpha0(c, G, m, theta);
    } catch (const WaveError&) {
      return -1.0;
    }
  };
  double lo = 1.0;
  double f_lo = F(lo);
  int guard = 0;
  while (f_lo > 0.0) {
    lo *= 0.5;
    f_lo = F(lo);
    if (++guard > 60) throw WaveError("wave: no lower bracket for the speed");
  }
  double hi = 2.0 * lo;
  double f_hi = F(hi);
  guard = 0;
  while (f_hi <= 0.0) {
    hi *= 2.0;
    f_hi = F(hi);
    if (++guard > 60) throw WaveError("wave: no upper bracket for the speed");
  }
  return bisect(F, lo, hi, f_lo, f_hi, tol);
}

inline void build_hot_side(WaveSolution& w, const WaveOptions& opt) {
  const ReactionTerm& G = *w.reaction;
  double m = w.m;
  auto rhs = [&](double, const Vec<2>& y) -> Vec<2> {
    double p = y[0], dp = y[1];
    double g = p >= 1.0 ? 0.0 : G(std::max(p, 0.0));
    return {dp, ((w.c - dp / (m - 2.0)) * dp - g) / p};
  };
  auto solver = make_dopri5<2>(rhs, StepControl{1e-11, 1e-13});
  Vec<2> y{w.theta, w.alpha0};
  double x = w.x_theta;
  w.hot_x.push_back(x);
  w.hot_p.push_back(y[0]);
  w.hot_dp.push_back(y[1]);
  int guard = 0;
  while (1.0 - y[0] > opt.tail_switch) {
    solver.integrate(x, x + opt.hot_dx, y);
    x += opt.hot_dx;
    w.hot_x.push_back(x);
    w.hot_p.push_back(std::min(y[0], 1.0));
    w.hot_dp.push_back(std::max(y[1], 0.0));
    if (++guard > 2'000'000) throw WaveError("wave: hot tail runaway");
  }
}

inline void assemble_grid(WaveSolution& w, const WaveOptions& opt) {
  if (!w.is_limit()) {
    for (std::size_t i = 0; i + 1 < w.left_t.size(); ++i) {
      double t = w.left_t[i], wv = std::exp(t);
      w.grid.push_back({w.left_x[i], w.epsilon * (1.0 + wv), w.slope_w(wv),
                        second_derivative_w(wv, w.c, w.epsilon, w.m)});
    }
  } else {
    w.grid.push_back({-0.5 * w.x_theta, 0.0, 0.0, 0.0});
    const int n_lin = 256;
    for (int i = 0; i < n_lin; ++i) {
      double x = w.x_theta * i / n_lin;
      w.grid.push_back({x, (w.m - 2.0) * w.c0 * x, (w.m - 2.0) * w.c0, 0.0});
    }
  }
  for (std::size_t i = 0; i < w.hot_x.size(); ++i)
    w.grid.push_back({w.hot_x[i], w.hot_p[i], w.hot_dp[i],
                      w.hot_curvature(w.hot_p[i], w.hot_dp[i])});
  double lam = -w.tail_rate;
  double u_end = 1.0 - w.hot_p.back();
  double dx = std::min(0.005, 1.7e-3 / lam);
  int n = int(std::log(u_end / opt.tail_floor) / (lam * dx)) + 1;
  for (int i = 1; i <= n; ++i) {
    double x = w.hot_x.back() + i * dx;
    double u = u_end * std::exp(-lam * i * dx);
    w.grid.push_back({x, 1.0 - u, lam * u, -lam * lam * u});
  }
}

inline WaveSolution build_wave(const ModelParams& params, double eps,
                               const WaveOptions& opt) {
  double m = params.m, theta = params.theta;
  WaveSolution w;
  w.m = m;
  w.epsilon = eps;
  w.theta = theta;
  w.reaction = std::make_shared<ReactionTerm>(default_reaction(params));
  const ReactionTerm& G = *w.reaction;

  w.c0 = solve_speed(G, m, theta, 1.0, opt.speed_tol);
  if (eps > 0.0) {
    double kappa = -std::expm1(std::log(eps / theta) / (m - 2.0));
    w.c = solve_speed(G, m, theta, kappa, opt.speed_tol);
    w.alpha0 = shoot_alpha0(w.c, G, m, theta, opt.alpha_tol);
    w.fixed_point_residual =
        std::abs((m - 2.0) * w.c * kappa - w.alpha0) / w.alpha0;
  } else {
    w.c = w.c0;
    w.alpha0 = shoot_alpha0(w.c0, G, m, theta, opt.alpha_tol);
    w.fixed_point_residual =
        std::abs((m - 2.0) * w.c0 - w.alpha0) / w.alpha0;
  }
  w.x_theta = theta / ((m - 2.0) * w.c0);
  w.A = w.c0 / std::pow((m - 2.0) * w.c0, 1.0 / (m - 2.0));
  double dG1 = G.derivative(1.0);
  w.tail_rate = 0.5 * (w.c - std::sqrt(w.c * w.c - 4.0 * dG1));

  if (eps > 0.0) {
    // Left map: integrate dxi/dt = e^t / U(t) from the anchor p = theta
    // (t_theta, xi = x_theta/eps) down until xi <= -left_depth / c.
    double t_theta = std::log(theta / eps - 1.0);
    double xi_stop = -opt.left_depth / w.c;
    std::vector<double> ts{t_theta}, xis{w.x_theta / eps};
    auto rhs = [&w](double t, const Vec<1>&) -> Vec<1> { return {w.xi_rate(t)}; };
    auto solver = make_dopri5<1>(rhs, StepControl{1e-12, 1e-14});
    Vec<1> y{xis.back()};
    double t = t_theta;
    while (xis.back() > xi_stop) {
      double t_next = t - opt.left_dt;
      solver.integrate(t, t_next, y);
      t = t_next;
      ts.push_back(t);
      xis.push_back(y[0]);
      if (ts.size() > 4'000'000) throw WaveError("wave: left map runaway");
    }
    w.left_t.assign(ts.rbegin(), ts.rend());
    w.left_x.resize(xis.size());
    for (std::size_t i = 0; i < xis.size(); ++i)
      w.left_x[i] = eps * xis[xis.size() - 1 - i];
  }

  build_hot_side(w, opt);
  assemble_grid(w, opt);
  return w;
}

}  // namespace detail

// Travelling wave for 0 < eps < theta. The speed c_eps solves the matching
// fixed point (m-2) c [1 - (eps/theta)^{1/(m-2)}] = alpha0(c).
inline WaveSolution solve_wave(const ModelParams& params, WaveOptions opt = {}) {
  params.validate();
  return detail::build_wave(params, params.epsilon, opt);
}

// Limit profile (eps = 0): zero left of the kink, exactly linear up to
// p = theta, hot-side ODE beyond; c0 solves (m-2) c0 = alpha0(c0).
inline WaveSolution solve_limit_wave(const ModelParams& params,
                                     WaveOptions opt = {}) {
  ModelParams q = params;
  q.epsilon = 0.5 * params.theta;
  q.validate();
  return detail::build_wave(params, 0.0, opt);
}

struct Landmarks {
  double x_eps;   // eps^{1-a}
  double xi_eps;  // eps^{-a}
  double a;       // (m-2)/(m-1) (1 + eta/2)
  double A;       // linear-zone curvature constant
};

inline Landmarks landmarks(const WaveSolution& wave, const ModelParams& params) {
  Landmarks l;
  l.a = params.exponent_a();
  l.x_eps = std::pow(wave.epsilon, 1.0 - l.a);
  l.xi_eps = std::pow(wave.epsilon, -l.a);
  l.A = wave.A;
  return l;
}

}  // namespace ablation
