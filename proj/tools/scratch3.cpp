// Temporary numerical exploration driver: cold zone (removed before release).
#include <cstdio>

#include "ablation/coldzone.hpp"
#include "ablation/wave.hpp"

using namespace ablation;

int main() {
  setbuf(stdout, nullptr);
  ModelParams p;
  for (int j : {3, 4, 5}) {
    p.epsilon = std::pow(10.0, -j);
    double k = std::pow(p.epsilon, -4.0 / 9.0);
    WaveSolution w = solve_wave(p);
    ColdZone zone(w, p);
    std::printf("eps=1e-%d k=%.3f  xi=[%.2f, %.2f] n=%zu Phi_end=%.3f\n", j, k,
                zone.xi.front(), zone.xi.back(), zone.size(), zone.Phi.back());

    // L annihilates q'
    auto Lq = zone.apply_L(zone.dq);
    double resid = 0, scale = 0;
    for (std::size_t i = 0; i < zone.size(); ++i) {
      resid = std::max(resid, std::abs(Lq[i]));
      scale = std::max(scale, std::abs(zone.ddq[i]));
    }
    std::printf("  |L q'| = %.3e  (vs |q''| = %.3e, ratio %.2e)\n", resid, scale,
                resid / scale);

    // Duhamel with g = q': expect f = (xi_eps - xi) q' / c
    auto r = zone.duhamel(zone.dq);
    double gap = 0;
    for (std::size_t i = 0; i < zone.size(); ++i) {
      double expect = (zone.xi_eps - zone.xi[i]) * zone.dq[i] / zone.c;
      gap = std::max(gap, std::abs(r.f[i] - expect));
    }
    std::printf("  duhamel(q') vs (xi_eps-xi)q'/c: sup gap %.3e (f scale %.3e)\n",
                gap, (zone.xi_eps - zone.xi.front()) * zone.dq.back() / zone.c);

    // residual of L(L^{-1} g) - g for a smooth forcing
    std::vector<double> g(zone.size());
    for (std::size_t i = 0; i < zone.size(); ++i)
      g[i] = zone.dq[i] * (1.0 + std::sin(0.03 * zone.xi[i]));
    auto fr = zone.duhamel(g);
    auto Lf = zone.apply_L(fr.f);
    double rres = 0, gs = 0;
    for (std::size_t i = 5; i + 5 < zone.size(); ++i) {
      rres = std::max(rres, std::abs(Lf[i] - g[i]));
      gs = std::max(gs, std::abs(g[i]));
    }
    std::printf("  |L L^-1 g - g| / |g| = %.3e\n", rres / gs);

    // exit conditions at sigma = sigma0-ish
    double sigma = 0.24;
    double kpow = std::pow(k, p.dispersion_exponent());
    double s = (p.m - 2.0) * w.c * kpow * sigma;
    auto ec = exit_conditions(s, k, zone, p);
    double lead = -p.epsilon * s / w.c;
    std::printf("  exit slope=%.6e  leading=-eps*s/c=%.6e  ratio=%.6f\n", ec.slope,
                lead, ec.slope / lead);

    // sigma derivative: analytic vs centered FD vs leading term
    double dslope = exit_sigma_derivative(sigma, k, zone, p);
    double hh = 1e-4;
    auto e1 = exit_conditions((p.m - 2.0) * w.c * kpow * (sigma + hh), k, zone, p);
    auto e0 = exit_conditions((p.m - 2.0) * w.c * kpow * (sigma - hh), k, zone, p);
    double fd = (e1.slope - e0.slope) / (2.0 * hh);
    double lead_d = -(p.m - 2.0) * p.epsilon * kpow;
    std::printf("  d(slope)/dsigma: analytic=%.6e fd=%.6e (rel %.2e) leading=%.6e ratio=%.4f\n",
                dslope, fd, std::abs(dslope / fd - 1.0), lead_d, dslope / lead_d);

    // expansion ordering
    auto e = build_expansion(s, k, zone, p);
    std::printf("  sups: v0=%.3e  eps v1=%.3e  eps v2=%.3e ; v1'(exit)*eps=%.4e\n",
                e.sup_v0, e.sup_eps_v1, e.sup_eps_v2,
                p.epsilon * e.v1_exit_slope);
    // h ~ s uniformity
    double hdev = 0;
    for (std::size_t i = 0; i < zone.size(); ++i)
      hdev = std::max(hdev, std::abs(e.h[i] / s - 1.0));
    std::printf("  max |h/s - 1| = %.4f\n", hdev);
  }
  return 0;
}
