// Temporary numerical exploration driver (removed before release).
#include <cstdio>

#include "ablation/wave.hpp"

using namespace ablation;

int main() {
  ModelParams p;  // m = 3.5, theta = 0.5, g0 = 1
  for (double eps : {1e-2, 1e-3, 1e-4}) {
    p.epsilon = eps;
    WaveSolution w = solve_wave(p);
    std::printf("eps=%.0e  c=%.12f  c0=%.12f  alpha0=%.12f  x_theta=%.6f  A=%.6f  resid=%.2e\n",
                eps, w.c, w.c0, w.alpha0, w.x_theta, w.A,
                w.fixed_point_residual);
    std::printf("  grid=%zu  left=[%g..%g] hot=[%g..%g] tail_rate=%g\n",
                w.grid.size(), w.left_x.front(), w.left_x.back(),
                w.hot_x.front(), w.hot_x.back(), w.tail_rate);
    // sanity: pinning and continuity at x_theta
    auto s = w.eval(w.x_theta - 1e-9);
    std::printf("  p(x_theta-)=%.12f  dp=%.12f vs alpha0=%.12f\n", s.p, s.dp,
                w.alpha0);
    auto s2 = w.eval(0.5 * w.x_theta);
    std::printf("  p(x_theta/2)=%.12f dp=%.12f ddp=%.6e\n", s2.p, s2.dp, s2.ddp);
  }
  WaveSolution w0 = solve_limit_wave(ModelParams{});
  std::printf("limit: c0=%.12f alpha0=%.12f (m-2)c0=%.12f\n", w0.c0, w0.alpha0,
              (w0.m - 2.0) * w0.c0);
  return 0;
}
