#ifndef DV2F_KINEMATICS_HPP_
#define DV2F_KINEMATICS_HPP_

#include "dv2f/core.hpp"

namespace dv2f {

// Wedge of next-step orientations and interval of next-step speeds attainable
// under the bicycle model with bounded steering and pedal.
struct ReachableSet {
  double theta_lo = 0.0;
  double theta_hi = 0.0;  // arc centered at current theta, half-width |v|*tan(Phi)*gamma*dt
  double v_lo = 0.0;
  double v_hi = 0.0;  // [beta*v - P*dt, beta*v + P*dt]
};

// One bicycle-model update. Right-hand sides use the pre-update v and theta;
// target fields are copied through and theta is re-wrapped.
VehicleState step(const VehicleState& s, const ControlCommand& c, const ModelParams& p);

ReachableSet reachable_set(const VehicleState& s, const ModelParams& p);

// Projects the ideal references onto the reachable set. The orientation is
// the wedge point minimizing the wrapped angular distance to theta_hat, with
// the tie at exactly pi offset broken toward the counterclockwise edge.
struct ClampedRef {
  double theta_real = 0.0;
  double v_real = 0.0;
};
ClampedRef clamp_to_reachable(double theta_hat, double v_hat, const ReachableSet& rs);

// Closed-form inversion of the bicycle model: recovers the command that
// realizes (theta_real, v_real) in one step. Below eps_v the heading is
// physically unchangeable, so steer is zero.
ControlCommand invert_controls(const VehicleState& s, double theta_real, double v_real,
                               const ModelParams& p);

}  // namespace dv2f

#endif  // DV2F_KINEMATICS_HPP_
