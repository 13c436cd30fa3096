#include "dv2f/kinematics.hpp"

#include <algorithm>

namespace dv2f {

VehicleState step(const VehicleState& s, const ControlCommand& c, const ModelParams& p) {
  VehicleState out = s;
  out.x = s.x + s.v * std::cos(s.theta) * p.dt;
  out.y = s.y + s.v * std::sin(s.theta) * p.dt;
  out.theta = wrap_angle(s.theta + s.v * std::tan(c.steer) * p.gamma * p.dt);
  out.v = p.beta * s.v + c.pedal * p.dt;
  return out;
}

ReachableSet reachable_set(const VehicleState& s, const ModelParams& p) {
  ReachableSet rs;
  const double w = std::abs(s.v) * std::tan(p.steer_max) * p.gamma * p.dt;
  rs.theta_lo = s.theta - w;
  rs.theta_hi = s.theta + w;
  rs.v_lo = p.beta * s.v - p.pedal_max * p.dt;
  rs.v_hi = p.beta * s.v + p.pedal_max * p.dt;
  return rs;
}

ClampedRef clamp_to_reachable(double theta_hat, double v_hat, const ReachableSet& rs) {
  ClampedRef out;
  const double center = 0.5 * (rs.theta_lo + rs.theta_hi);
  const double half = 0.5 * (rs.theta_hi - rs.theta_lo);
  const double d = wrap_angle(theta_hat - center);
  double dc = std::clamp(d, -half, half);
  // wrap_angle maps the antipode to +pi, so the tie already lands on +half.
  out.theta_real = wrap_angle(center + dc);
  out.v_real = std::clamp(v_hat, rs.v_lo, rs.v_hi);
  return out;
}

ControlCommand invert_controls(const VehicleState& s, double theta_real, double v_real,
                               const ModelParams& p) {
  double steer = 0.0;
  if (std::abs(s.v) >= p.eps_v) {
    const double dtheta = wrap_angle(theta_real - s.theta);
    steer = std::atan(dtheta / (s.v * p.gamma * p.dt));
  }
  const double pedal = (v_real - p.beta * s.v) / p.dt;
  return ControlCommand::clamped(pedal, steer, p);
}

}  // namespace dv2f
