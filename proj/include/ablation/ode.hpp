#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <algorithm>
#include <stdexcept>

namespace ablation {

// Dormand-Prince 5(4) embedded pair with PI step-size control.
// State is a fixed-size array; the right-hand side is any callable
// f(t, y) -> Vec. All solvers in this project integrate 1- or 2-vectors,
// so a compile-time size is enough.
template <std::size_t N>
using Vec = std::array<double, N>;

template <std::size_t N>
inline Vec<N> axpy(double a, const Vec<N>& x, const Vec<N>& y) {
  Vec<N> r;
  for (std::size_t i = 0; i < N; ++i) r[i] = a * x[i] + y[i];
  return r;
}

struct StepControl {
  double rtol = 1e-10;
  double atol = 1e-12;
  double h_min = 1e-300;
  double h_max = 1e300;
  double safety = 0.9;
};

template <std::size_t N, class Rhs>
class Dopri5 {
 public:
  Dopri5(Rhs rhs, StepControl ctl) : rhs_(rhs), ctl_(ctl) {}

  // One accepted step from (t, y); h carries the proposed size in and the
  // next proposal out. Direction is sign(h).
  void step(double& t, Vec<N>& y, double& h) {
    for (int attempt = 0; attempt < 64; ++attempt) {
      Vec<N> y5, y4;
      stages(t, y, h, y5, y4);
      double err = 0.0;
      for (std::size_t i = 0; i < N; ++i) {
        double sc = ctl_.atol + ctl_.rtol * std::max(std::abs(y[i]), std::abs(y5[i]));
        double e = (y5[i] - y4[i]) / sc;
        err += e * e;
      }
      err = std::sqrt(err / N);
      if (!std::isfinite(err)) {
        h *= 0.1;
        continue;
      }
      if (err <= 1.0 || std::abs(h) <= ctl_.h_min * (1.0 + std::abs(t))) {
        t += h;
        y = y5;
        double fac = ctl_.safety * std::pow(err > 0 ? err : 1e-16, -0.2);
        fac = std::clamp(fac, 0.2, 5.0);
        h = std::copysign(std::min(std::abs(h) * fac, ctl_.h_max), h);
        return;
      }
      double fac = std::max(0.1, ctl_.safety * std::pow(err, -0.2));
      h *= fac;
    }
    throw std::runtime_error("ode: step size underflow");
  }

  // Integrate to t_end exactly (last step clipped). Observer is called after
  // every accepted step as observer(t, y) and may mutate y (used for
  // projective renormalization); return false from it to stop early.
  template <class Obs>
  double integrate(double t, double t_end, Vec<N>& y, Obs&& observer,
                   double h_init = 0.0) {
    if (t == t_end) return t;
    double dir = t_end > t ? 1.0 : -1.0;
    double h = h_init != 0.0 ? std::copysign(h_init, dir)
                             : dir * std::max(1e-6, 1e-3 * std::abs(t_end - t));
    while (dir * (t_end - t) > 0) {
      if (dir * (t + h - t_end) > 0) h = t_end - t;
      step(t, y, h);
      if (!observer(t, y)) break;
    }
    return t;
  }

  double integrate(double t, double t_end, Vec<N>& y, double h_init = 0.0) {
    return integrate(t, t_end, y, [](double, Vec<N>&) { return true; }, h_init);
  }

 private:
  void stages(double t, const Vec<N>& y, double h, Vec<N>& y5, Vec<N>& y4) {
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5,
                            c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                            a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                            a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                            a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                            b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static constexpr double e1 = 5179.0 / 57600, e3 = 7571.0 / 16695,
                            e4 = 393.0 / 640, e5 = -92097.0 / 339200,
                            e6 = 187.0 / 2100, e7 = 1.0 / 40;

    Vec<N> k1 = rhs_(t, y);
    Vec<N> u;
    for (std::size_t i = 0; i < N; ++i) u[i] = y[i] + h * a21 * k1[i];
    Vec<N> k2 = rhs_(t + c2 * h, u);
    for (std::size_t i = 0; i < N; ++i)
      u[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
    Vec<N> k3 = rhs_(t + c3 * h, u);
    for (std::size_t i = 0; i < N; ++i)
      u[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    Vec<N> k4 = rhs_(t + c4 * h, u);
    for (std::size_t i = 0; i < N; ++i)
      u[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    Vec<N> k5 = rhs_(t + c5 * h, u);
    for (std::size_t i = 0; i < N; ++i)
      u[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] +
                         a65 * k5[i]);
    Vec<N> k6 = rhs_(t + h, u);
    for (std::size_t i = 0; i < N; ++i)
      y5[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] +
                          b6 * k6[i]);
    Vec<N> k7 = rhs_(t + h, y5);
    for (std::size_t i = 0; i < N; ++i)
      y4[i] = y[i] + h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                          e6 * k6[i] + e7 * k7[i]);
  }

  Rhs rhs_;
  StepControl ctl_;
};

template <std::size_t N, class Rhs>
Dopri5<N, Rhs> make_dopri5(Rhs rhs, StepControl ctl = {}) {
  return Dopri5<N, Rhs>(rhs, ctl);
}

}  // namespace ablation
