#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "ablation/ode.hpp"
#include "ablation/ray.hpp"

namespace ablation {

struct HotError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct HotInconclusive : HotError {
  using HotError::HotError;
};

// Asymptotic eigenproblem on the half line:
//   -zeta v'' - v'/(m-2) + b(zeta) v = sigma v,   b(zeta) = B zeta^{m/(m-2)},
// with C^1 regularity at zeta = 0 and decay at infinity as boundary
// conditions. B = ((m-2) c0)^{2/(m-2)} when derived from the wave.
struct HotProblem {
  double m;
  double B;

  static HotProblem from_wave_speed(double m, double c0) {
    return {m, std::pow((m - 2.0) * c0, 2.0 / (m - 2.0))};
  }

  double b(double zeta) const { return B * std::pow(zeta, m / (m - 2.0)); }

  // First crossing b(zeta) = sigma; zero for sigma <= 0.
  double zeta_sigma(double sigma) const {
    if (sigma <= 0.0) return 0.0;
    return std::pow(sigma / B, (m - 2.0) / m);
  }
};

enum class HotFate { BlowUpPlus, Decay, BlowUpMinus };

struct HotSolution {
  std::vector<double> zeta, v, dv;
  HotFate fate = HotFate::BlowUpPlus;
  std::optional<double> first_zero;
};

// Frobenius coefficients of the reduced equation zeta w'' + w'/(m-2) +
// sigma w = 0: a_{n+1} = -sigma a_n / ((n+1)(n + 1/(m-2))), a_0 = 1.
inline std::vector<double> series_coefficients(double sigma, double m, int n) {
  std::vector<double> a(n + 1);
  a[0] = 1.0;
  for (int i = 0; i < n; ++i)
    a[i + 1] = -sigma * a[i] / ((i + 1.0) * (i + 1.0 / (m - 2.0)));
  return a;
}

// Launch values (v, v') at 0 < zeta_bar << 1 for the regular solution with
// v(0) = 1, v'(0) = -(m-2) sigma. Includes the first correction from the
// fractional-power coefficient b: d zeta^p with p = 1 + m/(m-2).
inline std::pair<double, double> series_launch(double sigma, double zeta_bar,
                                               double m, double B,
                                               int n_terms = 20) {
  if (!(zeta_bar > 0.0 && zeta_bar <= 1e-3))
    throw std::domain_error("series_launch: need 0 < zeta_bar <= 1e-3");
  if (n_terms < 5) throw HotError("series_launch: n_terms < 5");
  auto a = series_coefficients(sigma, m, n_terms);
  double v = 0.0;
  for (int n = n_terms; n >= 1; --n) v = (v + a[n]) * zeta_bar;
  v += a[0];
  double dv = 0.0, zp = 1.0;
  for (int n = 1; n <= n_terms; ++n) {
    dv += n * a[n] * zp;
    zp *= zeta_bar;
  }
  double tail = std::abs(a[n_terms]) * std::pow(zeta_bar, n_terms);
  if (tail > 1e-14 * std::max(1.0, std::abs(v)))
    throw HotError("series_launch: truncation above tolerance, raise n_terms");
  double p = 1.0 + m / (m - 2.0);
  double d = B / (p * (p - 1.0 + 1.0 / (m - 2.0)));
  v += d * std::pow(zeta_bar, p);
  dv += d * p * std::pow(zeta_bar, p - 1.0);
  return {v, dv};
}

struct HotOptions {
  double zeta_bar = 1e-6;
  int n_terms = 20;
  double decay_rel = 1e-10;  // |v| below this fraction of the running max
  double blow_abs = 1e8;
  double log_switch = 1e-2;  // integrate in log zeta below this
  StepControl ctl{1e-10, 1e-14};
};

// Shoot from the regular launch and classify the fate at infinity. The
// trichotomy conditions (Prop.: sign and slope beyond zeta_sigma) are exact;
// the thresholds only shortcut the integration. Throws HotInconclusive when
// zeta_max is reached undecided.
inline HotSolution integrate_and_classify(double sigma, const HotProblem& prob,
                                          double zeta_max, HotOptions opt = {}) {
  double zsig = prob.zeta_sigma(sigma);
  if (!(zeta_max >= 4.0 * std::max(1.0, zsig)))
    throw std::domain_error("classify: need zeta_max >= 4 max(1, zeta_sigma)");
  auto [v0, dv0] = series_launch(sigma, opt.zeta_bar, prob.m, prob.B, opt.n_terms);

  HotSolution sol;
  double running_max = std::abs(v0);
  std::optional<HotFate> fate;
  double prev_z = opt.zeta_bar, prev_v = v0;

  auto record = [&](double z, double v, double dv) {
    running_max = std::max(running_max, std::abs(v));
    if (!sol.first_zero && v * prev_v < 0.0)
      sol.first_zero = prev_z + (z - prev_z) * prev_v / (prev_v - v);
    sol.zeta.push_back(z);
    sol.v.push_back(v);
    sol.dv.push_back(dv);
    prev_z = z;
    prev_v = v;
    if (std::abs(v) < opt.decay_rel * running_max) {
      double rate = std::sqrt(std::max(prob.b(z) - sigma, 0.0) / z);
      if (rate > 0.0 && v != 0.0) {
        double slope = dv / v;
        if (std::abs(slope + rate) <= 0.35 * (std::abs(slope) + rate)) {
          fate = HotFate::Decay;
          return false;
        }
      }
    }
    if (z >= zsig) {
      if (v > 0.0 && dv >= 0.0) {
        fate = HotFate::BlowUpPlus;
        return false;
      }
      if (v < 0.0 && dv <= 0.0) {
        fate = HotFate::BlowUpMinus;
        return false;
      }
    }
    if (std::abs(v) > opt.blow_abs * running_max && z >= zsig) {
      fate = v > 0.0 ? HotFate::BlowUpPlus : HotFate::BlowUpMinus;
      return false;
    }
    return true;
  };

  record(opt.zeta_bar, v0, dv0);

  // Near-singular region in l = log zeta: v_ll = (1 - 1/(m-2)) v_l +
  // e^l (b - sigma) v, with v_l = zeta v'.
  double z_switch = std::min(opt.log_switch, zeta_max);
  if (!fate && opt.zeta_bar < z_switch) {
    auto rhs = [&](double l, const Vec<2>& y) -> Vec<2> {
      double z = std::exp(l);
      return {y[1],
              (1.0 - 1.0 / (prob.m - 2.0)) * y[1] + z * (prob.b(z) - sigma) * y[0]};
    };
    auto solver = make_dopri5<2>(rhs, opt.ctl);
    Vec<2> y{v0, opt.zeta_bar * dv0};
    double l = std::log(opt.zeta_bar), l_end = std::log(z_switch);
    solver.integrate(l, l_end, y, [&](double ll, Vec<2>& yy) {
      double z = std::exp(ll);
      return record(z, yy[0], yy[1] / z);
    });
    if (!fate) {
      v0 = y[0];
      dv0 = y[1] / z_switch;
    }
  }
  if (!fate) {
    auto rhs = [&](double z, const Vec<2>& y) -> Vec<2> {
      return {y[1], (-y[1] / (prob.m - 2.0) + (prob.b(z) - sigma) * y[0]) / z};
    };
    auto solver = make_dopri5<2>(rhs, opt.ctl);
    Vec<2> y{v0, dv0};
    double z = std::max(opt.zeta_bar, z_switch);
    solver.integrate(z, zeta_max, y,
                     [&](double zz, Vec<2>& yy) { return record(zz, yy[0], yy[1]); });
  }
  if (!fate)
    throw HotInconclusive("classify: undecided at zeta_max, enlarge the domain");
  sol.fate = *fate;
  return sol;
}

namespace detail {

inline HotFate fate_with_retries(double sigma, const HotProblem& prob,
                                 const HotOptions& opt) {
  double zmax = 4.0 * std::max(1.0, prob.zeta_sigma(sigma));
  for (int tries = 0; tries < 10; ++tries) {
    try {
      return integrate_and_classify(sigma, prob, zmax, opt).fate;
    } catch (const HotInconclusive&) {
      zmax *= 2.0;
    }
  }
  throw HotError("classify: still undecided after domain enlargement");
}

}  // namespace detail

struct PrincipalSigma {
  double sigma0;
  HotSolution eigenfunction;
};

// Principal eigenvalue by bisection on the BlowUpPlus/other transition:
// below sigma0 every solution blows to +infinity, above it goes negative.
inline PrincipalSigma principal_sigma(const HotProblem& prob, double tol = 1e-10,
                                      HotOptions opt = {}) {
  if (!(tol > 0.0)) throw std::domain_error("principal_sigma: tol <= 0");
  double lo = 0.0, hi = 1.0;
  int guard = 0;
  while (detail::fate_with_retries(hi, prob, opt) == HotFate::BlowUpPlus) {
    lo = hi;
    hi *= 2.0;
    if (++guard > 50) throw HotError("principal_sigma: no upper bracket");
  }
  while (hi - lo > tol * hi) {
    double mid = 0.5 * (lo + hi);
    if (detail::fate_with_retries(mid, prob, opt) == HotFate::BlowUpPlus)
      lo = mid;
    else
      hi = mid;
  }
  double sigma0 = 0.5 * (lo + hi);

  // Eigenfunction at the bisection midpoint. The decay threshold is relaxed
  // to what a sigma-window of width tol can track before the complementary
  // mode re-emerges (~sqrt(tol) of the running max).
  HotOptions eopt = opt;
  eopt.decay_rel = std::max(opt.decay_rel, 50.0 * std::sqrt(tol));
  HotSolution eig;
  try {
    eig = integrate_and_classify(
        sigma0, prob, 4.0 * std::max(1.0, prob.zeta_sigma(sigma0)), eopt);
  } catch (const HotInconclusive&) {
    eig = integrate_and_classify(
        sigma0, prob, 16.0 * std::max(1.0, prob.zeta_sigma(sigma0)), eopt);
  }
  std::size_t keep = eig.zeta.size();
  for (std::size_t i = 0; i < eig.zeta.size(); ++i) {
    if (!(eig.v[i] > 0.0) || !(eig.dv[i] < 0.0)) {
      keep = i;
      break;
    }
  }
  eig.zeta.resize(keep);
  eig.v.resize(keep);
  eig.dv.resize(keep);
  eig.fate = HotFate::Decay;
  return {sigma0, eig};
}

inline double gamma0_of(double m, double c0, double sigma0) {
  return (m - 2.0) * c0 * sigma0;
}

// Scaling of the principal eigenvalue in the coefficient B (zeta = lambda t
// maps (B, sigma) to (B lambda^{2(m-1)/(m-2)}, lambda sigma)).
inline double sigma0_scaling_exponent(double m) {
  return (m - 2.0) / (2.0 * (m - 1.0));
}

// Stable right branch on [zeta0, zeta_max], normalized v(zeta0) = 1.
// Launched on the WKB direction far beyond zeta_max and integrated backward,
// which washes out the launch error exponentially.
inline HotSolution stable_right_branch(double sigma, double zeta0,
                                       const HotProblem& prob, double zeta_max,
                                       StepControl ctl = {1e-10, 1e-14}) {
  if (!(zeta0 > 0.0 && zeta_max > zeta0))
    throw std::domain_error("stable_right_branch: need 0 < zeta0 < zeta_max");
  double nu = 1.0 + 1.0 / (prob.m - 2.0);
  double sb = std::sqrt(prob.B);
  double zl = std::pow(std::pow(zeta_max, nu) + 35.0 * nu / sb, 1.0 / nu);
  RayState st;
  st.pos = zl;
  st.v = 1.0;
  st.dv = -sb * std::pow(zl, 1.0 / (prob.m - 2.0));
  st.renormalize();
  std::vector<RaySample> samples;
  auto coeffs = [&](double z) {
    return std::pair{(prob.b(z) - sigma) / z, -1.0 / ((prob.m - 2.0) * z)};
  };
  ray_integrate(st, zeta0, coeffs, ctl, &samples);

  HotSolution sol;
  sol.fate = HotFate::Decay;
  double ref_log = st.log_mag;
  double ref_v = st.v;
  for (auto it = samples.rbegin(); it != samples.rend(); ++it) {
    if (it->pos > zeta_max) continue;
    double scale = std::exp(it->log_mag - ref_log) / ref_v;
    sol.zeta.push_back(it->pos);
    sol.v.push_back(it->v * scale);
    sol.dv.push_back(it->dv * scale);
  }
  return sol;
}

struct L0Inverse {
  std::vector<double> zeta, v;
  double f0;  // forcing at zero (for the boundary identity v'(0) = -(m-2) f(0))
};

// Resolvent at sigma = 0: v = vbar(zeta) Int_zeta^inf [1/(vbar^2 s^g)]
// (Int_0^s vbar t^{g-1} f dt) ds with g = 1/(m-2) and vbar the regular
// sigma = 0 solution. Quadratures run in the stretched variable tau =
// zeta^g, which absorbs the endpoint singularity of the inner weight.
inline L0Inverse apply_L0_inverse(const std::function<double(double)>& f,
                                  const HotProblem& prob, std::size_t n = 4000) {
  double m = prob.m, g = 1.0 / (m - 2.0);
  double nu = 1.0 + g, sb = std::sqrt(prob.B);
  double zeta_end = std::pow(22.0 * nu / sb, 1.0 / nu);
  double tau_end = std::pow(zeta_end, g);

  std::vector<double> tau(n + 1), zeta(n + 1), vbar(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    tau[i] = tau_end * double(i) / double(n);
    zeta[i] = std::pow(tau[i], m - 2.0);
  }

  // regular sigma = 0 solution: v = 1 + d zeta^p near zero, then integrated
  double zeta_bar = 1e-7;
  auto [vb, dvb] = series_launch(0.0, zeta_bar, m, prob.B);
  {
    auto rhs = [&](double z, const Vec<2>& y) -> Vec<2> {
      return {y[1], (-y[1] / (m - 2.0) + prob.b(z) * y[0]) / z};
    };
    auto solver = make_dopri5<2>(rhs, StepControl{1e-12, 1e-14});
    Vec<2> y{vb, dvb};
    double z = zeta_bar;
    vbar[0] = 1.0;
    for (std::size_t i = 1; i <= n; ++i) {
      if (zeta[i] > z) {
        solver.integrate(z, zeta[i], y);
        z = zeta[i];
        vbar[i] = y[0];
      } else {
        // node below the series launch point: evaluate the series directly
        vbar[i] = series_launch(0.0, std::max(zeta[i], 1e-30), m, prob.B).first;
      }
    }
  }

  // inner(s) = (1/g) int_0^{s^g} vbar f dtau
  std::vector<double> inner(n + 1, 0.0);
  for (std::size_t i = 1; i <= n; ++i) {
    double fi = f(zeta[i]), fim = f(zeta[i - 1]);
    inner[i] = inner[i - 1] + 0.5 * (vbar[i] * fi + vbar[i - 1] * fim) *
                                  (tau[i] - tau[i - 1]) / g;
  }
  // outer integrand in tau: (1/g) inner(tau) tau^{1/g - 2} / vbar^2;
  // inner ~ tau near zero, so the product vanishes like tau^{m-3}
  std::vector<double> w(n + 1, 0.0);
  for (std::size_t i = 1; i <= n; ++i)
    w[i] = inner[i] * std::pow(tau[i], m - 4.0) / (g * vbar[i] * vbar[i]);

  L0Inverse out;
  out.f0 = f(0.0);
  out.zeta = zeta;
  out.v.assign(n + 1, 0.0);
  for (std::size_t i = n; i-- > 0;)
    out.v[i] = out.v[i + 1] + 0.5 * (w[i] + w[i + 1]) * (tau[i + 1] - tau[i]);
  for (std::size_t i = 0; i <= n; ++i) out.v[i] *= vbar[i];
  return out;
}

}  // namespace ablation
