// Temporary numerical exploration driver: hot zone (removed before release).
#include <chrono>
#include <cstdio>

#include "ablation/hotzone.hpp"
#include "ablation/oracle.hpp"
#include "ablation/wave.hpp"

using namespace ablation;
using clk = std::chrono::steady_clock;

static double now_s(clk::time_point t0) {
  return std::chrono::duration<double>(clk::now() - t0).count();
}

int main() {
  setbuf(stdout, nullptr);
  // shooting sigma0 at m = 4, B = 1
  {
    auto t0 = clk::now();
    HotProblem prob{4.0, 1.0};
    auto ps = principal_sigma(prob);
    std::printf("[m=4,B=1] sigma0 = %.12f  (%.2f s), eig samples=%zu, v'(0)=%.6f vs %.6f\n",
                ps.sigma0, now_s(t0), ps.eigenfunction.zeta.size(),
                ps.eigenfunction.dv.front(), -(4.0 - 2.0) * ps.sigma0);
    t0 = clk::now();
    double fd1 = fd_hotzone_sigma0_auto(4.0, 1.0, 4000);
    std::printf("  fd(n=4000) = %.12f (%.2f s) rel gap %.2e\n", fd1, now_s(t0),
                std::abs(fd1 - ps.sigma0) / ps.sigma0);
    double fd2 = fd_hotzone_sigma0_auto(4.0, 1.0, 8000);
    double fdx = richardson_extrapolate(fd1, fd2);
    std::printf("  fd(n=8000) = %.12f  richardson = %.12f rel gap %.2e\n", fd2,
                fdx, std::abs(fdx - ps.sigma0) / ps.sigma0);
  }
  // m = 7/2 with B from the wave speed
  {
    ModelParams p;
    WaveSolution w = solve_limit_wave(p);
    HotProblem prob = HotProblem::from_wave_speed(p.m, w.c0);
    auto t0 = clk::now();
    auto ps = principal_sigma(prob);
    std::printf("[m=3.5,B=%.6f] sigma0 = %.12f (%.2f s) gamma0 = %.12f\n",
                prob.B, ps.sigma0, now_s(t0),
                gamma0_of(p.m, w.c0, ps.sigma0));
    double fd1 = fd_hotzone_sigma0_auto(p.m, prob.B, 4000);
    double fd2 = fd_hotzone_sigma0_auto(p.m, prob.B, 8000);
    double fdx = richardson_extrapolate(fd1, fd2);
    std::printf("  fd richardson = %.12f rel gap %.2e\n", fdx,
                std::abs(fdx - ps.sigma0) / ps.sigma0);
    // scaling law
    double e = sigma0_scaling_exponent(p.m);
    for (double B : {0.5, 1.0, 2.0}) {
      auto s = principal_sigma(HotProblem{p.m, B});
      std::printf("  B=%.1f sigma0=%.12f  sigma0*B^-e=%.12f\n", B, s.sigma0,
                  s.sigma0 * std::pow(B, -e));
    }
    // fate scan sanity
    auto f0 = integrate_and_classify(0.0, prob, 4.0);
    auto fbig = integrate_and_classify(10.0 * ps.sigma0, prob,
                                       4.0 * std::max(1.0, prob.zeta_sigma(10.0 * ps.sigma0)));
    std::printf("  fate(0)=%d fate(10 sigma0)=%d first_zero=%g\n", (int)f0.fate,
                (int)fbig.fate, fbig.first_zero.value_or(-1.0));
    // right branch WKB check at m=4, B=1
    HotProblem p41{4.0, 1.0};
    auto rb = stable_right_branch(1.0, 1.0, p41, 12.0);
    std::size_t last = rb.zeta.size() - 1;
    double slope = rb.dv[last] / rb.v[last];
    double wkb = -std::sqrt(p41.B) * std::pow(rb.zeta[last], 0.5);
    std::printf("  right branch: zeta=%.3f slope=%.6f wkb=%.6f rel=%.3e, v(zeta0)=%.15f\n",
                rb.zeta[last], slope, wkb, std::abs(slope / wkb - 1.0),
                rb.v.front());
  }
  return 0;
}
