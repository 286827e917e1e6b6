#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "ablation/model.hpp"
#include "ablation/ode.hpp"
#include "ablation/wave.hpp"

namespace ablation {

struct ColdError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct RegimeError : ColdError {
  using ColdError::ColdError;
};

// Characteristic exponential rates of the linearized problem at x = -infty:
//   r± = (c ± sqrt(c^2 + 4 eps (k^2 eps^{m/(m-2)} - s))) / (2 eps).
// Maximal decay corresponds to r+.
inline std::pair<double, double> characteristic_rates(double epsilon, double k,
                                                      double s, double c,
                                                      double m) {
  if (!(epsilon > 0.0 && k >= 0.0))
    throw std::domain_error("characteristic_rates: need epsilon > 0, k >= 0");
  double disc = c * c + 4.0 * epsilon * (k * k * std::pow(epsilon, m / (m - 2.0)) - s);
  if (disc < 0.0)
    throw ColdError("characteristic_rates: complex rates (s too large)");
  double root = std::sqrt(disc);
  return {(c - root) / (2.0 * epsilon), (c + root) / (2.0 * epsilon)};
}

namespace detail {

// Cumulative integral on a uniform grid, fourth order (corrected trapezoid
// with one-sided ends). out[0] = 0.
inline std::vector<double> cumulative(const std::vector<double>& f, double h) {
  std::size_t n = f.size();
  std::vector<double> out(n, 0.0);
  if (n < 4) throw std::invalid_argument("cumulative: need >= 4 nodes");
  for (std::size_t i = 0; i + 1 < n; ++i) {
    double inc;
    if (i == 0)
      inc = h / 24.0 * (9.0 * f[0] + 19.0 * f[1] - 5.0 * f[2] + f[3]);
    else if (i + 2 == n)
      inc = h / 24.0 * (9.0 * f[n - 1] + 19.0 * f[n - 2] - 5.0 * f[n - 3] + f[n - 4]);
    else
      inc = h / 24.0 * (-f[i - 1] + 13.0 * f[i] + 13.0 * f[i + 1] - f[i + 2]);
    out[i + 1] = out[i] + inc;
  }
  return out;
}

// Five-point centered stencils on a uniform grid (one-sided at the ends).
inline std::vector<double> deriv1_uniform(const std::vector<double>& f, double h) {
  std::size_t n = f.size();
  std::vector<double> d(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (i >= 2 && i + 2 < n)
      d[i] = (f[i - 2] - 8.0 * f[i - 1] + 8.0 * f[i + 1] - f[i + 2]) / (12.0 * h);
    else if (i == 0)
      d[i] = (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]) /
             (12.0 * h);
    else if (i == 1)
      d[i] = (-3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + f[4]) /
             (12.0 * h);
    else if (i + 1 == n)
      d[i] = (25.0 * f[n - 1] - 48.0 * f[n - 2] + 36.0 * f[n - 3] -
              16.0 * f[n - 4] + 3.0 * f[n - 5]) /
             (12.0 * h);
    else  // i == n-2
      d[i] = (3.0 * f[n - 1] + 10.0 * f[n - 2] - 18.0 * f[n - 3] +
              6.0 * f[n - 4] - f[n - 5]) /
             (12.0 * h);
  }
  return d;
}

inline std::vector<double> deriv2_uniform(const std::vector<double>& f, double h) {
  std::size_t n = f.size();
  std::vector<double> d(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (i >= 2 && i + 2 < n)
      d[i] = (-f[i - 2] + 16.0 * f[i - 1] - 30.0 * f[i] + 16.0 * f[i + 1] -
              f[i + 2]) /
             (12.0 * h * h);
    else if (i >= 1 && i + 1 < n)
      d[i] = (f[i - 1] - 2.0 * f[i] + f[i + 1]) / (h * h);
    else if (i == 0)
      d[i] = (2.0 * f[0] - 5.0 * f[1] + 4.0 * f[2] - f[3]) / (h * h);
    else
      d[i] = (2.0 * f[n - 1] - 5.0 * f[n - 2] + 4.0 * f[n - 3] - f[n - 4]) /
             (h * h);
  }
  return d;
}

}  // namespace detail

// Boundary-layer grid and the principal-operator machinery on
// I = [xi_start, xi_eps], parameterized by t = log((p - eps)/eps). The
// parameterization is logarithmic in the layer variable, which resolves the
// e^{c xi} transition uniformly and makes every quadrature run on a uniform
// t grid.
class ColdZone {
 public:
  double m, epsilon, c;
  double xi_start, xi_eps;
  double dt;
  std::vector<double> t, xi, q, dq, ddq, Phi, rate;  // rate = dxi/dt

  ColdZone(const WaveSolution& wave, const ModelParams& params,
           std::size_t n = 4000)
      : m(wave.m), epsilon(wave.epsilon), c(wave.c) {
    if (wave.is_limit()) throw std::invalid_argument("coldzone: needs eps > 0");
    double a = params.exponent_a();
    xi_eps = std::pow(epsilon, -a);
    xi_start = -50.0 / c;
    double t_eps = wave.t_at_x(epsilon * xi_eps);
    double t_start = wave.t_at_x(epsilon * xi_start);
    dt = (t_eps - t_start) / double(n - 1);
    t.resize(n);
    for (std::size_t i = 0; i < n; ++i) t[i] = t_start + dt * double(i);
    t.back() = t_eps;

    // xi by integrating dxi/dt backward from the anchor xi(t_eps) = xi_eps
    xi.assign(n, 0.0);
    rate.resize(n);
    q.resize(n);
    dq.resize(n);
    ddq.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      double w = std::exp(t[i]);
      rate[i] = wave.xi_rate(t[i]);
      q[i] = 1.0 + w;
      dq[i] = wave.slope_w(w);
      ddq[i] = c * dq[i] * std::exp(-(1.0 + 1.0 / (m - 2.0)) * std::log1p(w));
    }
    {
      auto rhs = [&wave](double tt, const Vec<1>&) -> Vec<1> {
        return {wave.xi_rate(tt)};
      };
      auto solver = make_dopri5<1>(rhs, StepControl{1e-12, 1e-14});
      Vec<1> y{xi_eps};
      double tt = t_eps;
      xi[n - 1] = xi_eps;
      for (std::size_t i = n - 1; i-- > 0;) {
        solver.integrate(tt, t[i], y);
        tt = t[i];
        xi[i] = y[0];
      }
    }
    // Phi = int c/q dxi from xi_start
    std::vector<double> integ(n);
    for (std::size_t i = 0; i < n; ++i) integ[i] = c / q[i] * rate[i];
    Phi = detail::cumulative(integ, dt);
  }

  std::size_t size() const { return t.size(); }

  // Solution of L f = g with f(xi_eps) = 0 and maximal decay, by the Duhamel
  // representation f = q' * Out, Out(xi) = int_xi^{xi_eps} e^{-Phi} I,
  // I(z) = int_{-infty}^z e^{Phi} g/(q q'). Exponentials are shifted by
  // Phi(xi_eps) so every stored factor stays in range.
  struct DuhamelResult {
    std::vector<double> f;
    double exit_slope;  // f'(xi_eps) = -q'(xi_eps) I(xi_eps)
  };

  DuhamelResult duhamel(const std::vector<double>& g) const {
    std::size_t n = size();
    if (g.size() != n) throw std::invalid_argument("duhamel: size mismatch");
    double phi_ref = Phi.back();
    std::vector<double> integ(n);
    for (std::size_t i = 0; i < n; ++i)
      integ[i] = std::exp(Phi[i] - phi_ref) * g[i] / (q[i] * dq[i]) * rate[i];
    std::vector<double> I = detail::cumulative(integ, dt);
    for (std::size_t i = 0; i < n; ++i)
      integ[i] = std::exp(phi_ref - Phi[i]) * I[i] * rate[i];
    std::vector<double> J = detail::cumulative(integ, dt);
    double J_end = J.back();
    DuhamelResult r;
    r.f.resize(n);
    for (std::size_t i = 0; i < n; ++i) r.f[i] = dq[i] * (J_end - J[i]);
    r.exit_slope = -dq.back() * I.back();
    return r;
  }

  // Discrete application of L = -q d2/dxi2 + (c - 2q'/(m-2)) d/dxi - q''
  // through the t parameterization (uniform five-point stencils).
  std::vector<double> apply_L(const std::vector<double>& f) const {
    std::size_t n = size();
    if (f.size() != n) throw std::invalid_argument("apply_L: size mismatch");
    auto ft = detail::deriv1_uniform(f, dt);
    auto ftt = detail::deriv2_uniform(f, dt);
    auto rt = detail::deriv1_uniform(rate, dt);
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
      double fx = ft[i] / rate[i];
      double fxx = (ftt[i] - fx * rt[i]) / (rate[i] * rate[i]);
      out[i] = -q[i] * fxx + (c - 2.0 * dq[i] / (m - 2.0)) * fx - ddq[i] * f[i];
    }
    return out;
  }
};

struct ColdExpansion {
  std::vector<double> xi;
  std::vector<double> v0, v1, v2;
  std::vector<double> h;  // h = s - k^2 eps^{m/(m-2)} q^{m/(m-2)}
  double s, sigma;
  double exit_value;       // v(xi_eps) = 1 by normalization
  double exit_slope;       // v0' + eps (v1' + v2') at xi_eps
  double v0_exit_slope, v1_exit_slope, v2_exit_slope;
  double sup_v0, sup_eps_v1, sup_eps_v2;
};

namespace detail {

inline double sup_norm(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s = std::max(s, std::abs(x));
  return s;
}

}  // namespace detail

// Asymptotic expansion v = v0 + eps v1 + eps v2 in the cold zone for
// s = (m-2) c sigma k^{1-1/(m-1)}: L v0 = 0 (v0 = q'/q'(xi_eps)),
// L v1 = h v0, and v2 from a two-term Neumann inversion of
// (Id - eps L^{-1} h) v2 = L^{-1}(eps h v1).
inline ColdExpansion build_expansion(double s, double k, const ColdZone& zone,
                                     const ModelParams& params) {
  if (!regime_contains(zone.epsilon, k, params))
    throw RegimeError("build_expansion: (eps, k) outside the frequency regime");
  std::size_t n = zone.size();
  ColdExpansion e;
  e.xi = zone.xi;
  e.s = s;
  e.sigma = s / ((params.m - 2.0) * zone.c *
                 std::pow(k, params.dispersion_exponent()));

  double dq_exit = zone.dq.back();
  e.v0.resize(n);
  for (std::size_t i = 0; i < n; ++i) e.v0[i] = zone.dq[i] / dq_exit;
  e.v0_exit_slope = zone.ddq.back() / dq_exit;

  double kfac = k * k * std::pow(zone.epsilon, params.m / (params.m - 2.0));
  e.h.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    e.h[i] = s - kfac * std::pow(zone.q[i], params.m / (params.m - 2.0));

  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i) g[i] = e.h[i] * e.v0[i];
  auto r1 = zone.duhamel(g);
  e.v1 = r1.f;
  e.v1_exit_slope = r1.exit_slope;

  double eps = zone.epsilon;
  for (std::size_t i = 0; i < n; ++i) g[i] = eps * e.h[i] * e.v1[i];
  auto u = zone.duhamel(g);
  for (std::size_t i = 0; i < n; ++i) g[i] = eps * e.h[i] * u.f[i];
  auto u2 = zone.duhamel(g);
  e.v2.resize(n);
  for (std::size_t i = 0; i < n; ++i) e.v2[i] = u.f[i] + u2.f[i];
  e.v2_exit_slope = u.exit_slope + u2.exit_slope;

  e.exit_value = 1.0;
  e.exit_slope =
      e.v0_exit_slope + eps * (e.v1_exit_slope + e.v2_exit_slope);

  e.sup_v0 = detail::sup_norm(e.v0);
  e.sup_eps_v1 = eps * detail::sup_norm(e.v1);
  e.sup_eps_v2 = eps * detail::sup_norm(e.v2);
  if (!(e.sup_eps_v2 <= e.sup_eps_v1 && e.sup_eps_v1 <= e.sup_v0))
    throw RegimeError("build_expansion: expansion ordering violated (eps too large)");
  return e;
}

struct ExitConditions {
  double value;  // 1 by normalization
  double slope;
};

inline ExitConditions exit_conditions(double s, double k, const ColdZone& zone,
                                      const ModelParams& params) {
  auto e = build_expansion(s, k, zone, params);
  return {e.exit_value, e.exit_slope};
}

// Analytic d(exit slope)/d sigma: h depends on sigma only through
// s = (m-2) c k^{1-1/(m-1)} sigma, so every term differentiates into more
// Duhamel solves with forcing multiples of ds/dsigma.
inline double exit_sigma_derivative(double sigma, double k, const ColdZone& zone,
                                    const ModelParams& params) {
  double kpow = std::pow(k, params.dispersion_exponent());
  double s_sigma = (params.m - 2.0) * zone.c * kpow;
  double s = s_sigma * sigma;
  auto e = build_expansion(s, k, zone, params);
  std::size_t n = zone.size();
  double eps = zone.epsilon;

  std::vector<double> g(n);
  // z1 = L^{-1}(s_sigma v0)
  for (std::size_t i = 0; i < n; ++i) g[i] = s_sigma * e.v0[i];
  auto z1 = zone.duhamel(g);
  // u = L^{-1}(eps h v1), du = L^{-1}(eps (s_sigma v1 + h z1))
  for (std::size_t i = 0; i < n; ++i) g[i] = eps * e.h[i] * e.v1[i];
  auto u = zone.duhamel(g);
  for (std::size_t i = 0; i < n; ++i)
    g[i] = eps * (s_sigma * e.v1[i] + e.h[i] * z1.f[i]);
  auto du = zone.duhamel(g);
  // v2 = u + eps L^{-1}(h u):
  // dv2 = du + eps L^{-1}(s_sigma u + h du)
  for (std::size_t i = 0; i < n; ++i)
    g[i] = eps * (s_sigma * u.f[i] + e.h[i] * du.f[i]);
  auto du2 = zone.duhamel(g);
  double dv2_slope = du.exit_slope + du2.exit_slope;
  return eps * (z1.exit_slope + dv2_slope);
}

}  // namespace ablation
