#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "ablation/ode.hpp"

namespace ablation {

// Direction of a solution ray of a linear second-order ODE, renormalized to
// unit length after every accepted step with the magnitude carried in
// log_mag. Orientation is preserved (positive rescaling only), so directions
// vary continuously along the integration and in parameters.
struct RayState {
  double pos = 0;
  double v = 1, dv = 0;   // unit direction
  double log_mag = 0;

  double norm() const { return std::hypot(v, dv); }
  void renormalize() {
    double n = norm();
    v /= n;
    dv /= n;
    log_mag += std::log(n);
  }
};

struct RaySample {
  double pos, v, dv, log_mag;
};

// Integrate Y' = A(pos) Y projectively from state.pos to pos_end.
// coeffs(pos) returns the second-row entries (a10, a11) of
//   d/dpos (v, v') = (v', a10 v + a11 v').
template <class Coeffs>
inline void ray_integrate(RayState& state, double pos_end, Coeffs&& coeffs,
                          StepControl ctl = {1e-10, 1e-14},
                          std::vector<RaySample>* samples = nullptr) {
  auto rhs = [&coeffs](double t, const Vec<2>& y) -> Vec<2> {
    auto [a10, a11] = coeffs(t);
    return {y[1], a10 * y[0] + a11 * y[1]};
  };
  auto solver = make_dopri5<2>(rhs, ctl);
  Vec<2> y{state.v, state.dv};
  double t = state.pos;
  if (samples) samples->push_back({t, y[0], y[1], state.log_mag});
  solver.integrate(t, pos_end, y, [&](double tt, Vec<2>& yy) {
    double n = std::hypot(yy[0], yy[1]);
    state.log_mag += std::log(n);
    yy[0] /= n;
    yy[1] /= n;
    if (samples) samples->push_back({tt, yy[0], yy[1], state.log_mag});
    return true;
  });
  state.pos = pos_end;
  state.v = y[0];
  state.dv = y[1];
}

// Angular distance between two rays (directions up to positive scale).
inline double ray_angle(double v1, double dv1, double v2, double dv2) {
  double dot = v1 * v2 + dv1 * dv2;
  double det = v1 * dv2 - dv1 * v2;
  return std::abs(std::atan2(det, dot));
}

}  // namespace ablation
