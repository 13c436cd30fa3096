#include "dv2f/field.hpp"

#include <algorithm>

namespace dv2f {

namespace {

// Z x v with v lifted to z=0, projected back to the plane.
Vec2 z_cross(const Vec2& v) { return {-v.y, v.x}; }

}  // namespace

Vec2 predicted_next_position(const VehicleState& s, const ModelParams& p) {
  return {s.x + s.v * std::cos(s.theta) * p.dt, s.y + s.v * std::sin(s.theta) * p.dt};
}

Vec2 target_component(const VehicleState& s, const Vec2& next, const ModelParams& p) {
  const Vec2 x_tar = s.target() - next;
  const double n = x_tar.norm();
  const UnitResult dir = f_uni(x_tar);
  if (n > p.r_p) {
    const double xi = (n >= 0.5 * p.v_d * p.v_d + p.r_p)
                          ? 1.0
                          : f_sgn(x_tar.dot(s.heading()));
    return dir.v * xi;
  }
  // Parking regime: blend the target heading with the approach direction.
  double lambda = (n / p.r_p + f_pos(n - p.eps_p)) * f_sgn(x_tar.dot(s.target_heading()));
  if (dir.degenerate) {
    lambda = 0.0;
  }
  const UnitResult u = f_uni(s.target_heading() + lambda * dir.v);
  return u.v;
}

Vec2 obstacle_component(const VehicleState& s, const Vec2& next, const ObstacleState& o,
                        const ModelParams& p) {
  const Vec2 x_obs = o.position() - next;
  const double dist = x_obs.norm();
  const double alpha = dist - o.r - p.r_veh - (p.r_c + std::abs(s.v));
  if (alpha > 0.0) {
    return {0.0, 0.0};
  }
  UnitResult dir = f_uni(x_obs);
  if (dir.degenerate) {
    dir.v = {1.0, 0.0};  // coincident positions: repel along a fixed axis
  }
  const Vec2 x_tar = s.target() - next;
  const double beta = f_pos(x_tar.dot(x_obs)) * (dist - o.r);
  UnitResult tang = f_uni(z_cross(dir.v));
  return dir.v * alpha + tang.v * beta;
}

Vec2 vehicle_component(const VehicleState& s_i, const Vec2& next_i, const VehicleState& s_j,
                       const Vec2& next_j, const ModelParams& p) {
  const Vec2 x_veh = next_j - next_i;
  const double dist = x_veh.norm();
  const double alpha = dist - 2.0 * p.r_veh - (p.r_c + std::abs(s_i.v) + std::abs(s_j.v));
  if (alpha > 0.0) {
    return {0.0, 0.0};
  }
  UnitResult dir = f_uni(x_veh);
  if (dir.degenerate) {
    dir.v = {1.0, 0.0};
  }
  const Vec2 x_tar = s_i.target() - next_i;
  const double beta = f_pos(x_tar.dot(x_veh)) * (dist - p.r_veh);
  UnitResult tang = f_uni(z_cross(dir.v));
  return dir.v * alpha + tang.v * beta;
}

OrientationResult ideal_orientation(const VehicleState& s, const Scene& scene,
                                    const std::vector<int>& neighbors, const ModelParams& p) {
  OrientationResult out;
  const Vec2 next = predicted_next_position(s, p);
  out.u_tar = target_component(s, next, p);
  for (int id : neighbors) {
    if (scene.id_is_obstacle(id)) {
      out.u_coll += obstacle_component(s, next, scene.obstacles[scene.obstacle_index(id)], p);
    } else {
      const VehicleState& other = scene.vehicles[id];
      out.u_coll += vehicle_component(s, next, other, predicted_next_position(other, p), p);
    }
  }
  const UnitResult u = f_uni(out.u_tar + out.u_coll);
  if (u.degenerate) {
    out.u_hat = s.heading();  // exact cancellation: keep current heading
    out.degenerate = true;
  } else {
    out.u_hat = u.v;
  }
  out.theta_hat = std::atan2(out.u_hat.y, out.u_hat.x);
  return out;
}

ForbiddenFlags forbidden_flags(double theta_real, const VehicleState& s, const Vec2& next,
                               const Scene& scene, const std::vector<int>& neighbors,
                               const ModelParams& p) {
  ForbiddenFlags flags;
  const Vec2 u_real = unit_from_angle(theta_real);
  for (int id : neighbors) {
    Vec2 x_agent;
    double alpha;
    if (scene.id_is_obstacle(id)) {
      const ObstacleState& o = scene.obstacles[scene.obstacle_index(id)];
      x_agent = o.position() - next;
      alpha = x_agent.norm() - o.r - p.r_veh - (p.r_c + std::abs(s.v));
    } else {
      const VehicleState& other = scene.vehicles[id];
      x_agent = predicted_next_position(other, p) - next;
      alpha = x_agent.norm() - 2.0 * p.r_veh - (p.r_c + std::abs(s.v) + std::abs(other.v));
    }
    if (alpha + p.eps_c > 0.0) {
      continue;
    }
    const double g = u_real.dot(x_agent);
    if (g > 0.0) {
      flags.forward = true;
    } else if (g < 0.0) {
      flags.backward = true;
    }
  }
  return flags;
}

ParkingSpeed parking_speed(const VehicleState& s, double theta_real, const Vec2& u_hat,
                           double prev_dir, const ModelParams& p) {
  ParkingSpeed out;
  const Vec2 next = predicted_next_position(s, p);
  const Vec2 x_tar = s.target() - next;
  const double n = x_tar.norm();
  const Vec2 u_real = unit_from_angle(theta_real);
  if (n > p.r_p) {
    // The marginal-band flip reverses the reference orientation to match the
    // current heading; the drive direction must flip with it so the vehicle
    // backs toward the target instead of accelerating away.
    const double xi_tar = (n >= 0.5 * p.v_d * p.v_d + p.r_p)
                              ? 1.0
                              : f_sgn(x_tar.dot(s.heading()));
    out.dir = xi_tar * f_sgn(u_real.dot(u_hat));
    out.v_tar = p.v_d * out.dir;
    return out;
  }
  const double dtheta = std::abs(wrap_angle(s.theta_tar - theta_real));
  const double lambda_bar = std::min(n / p.r_p + dtheta / p.v_d, 1.0);
  // Inside both tolerances the vehicle is considered stopped at the target;
  // commanding zero speed there makes the parked state absorbing instead of
  // letting the held drive direction push the vehicle back out of tolerance.
  const bool at_tolerance = (n < p.eps_p) && (dtheta < p.eps_o);
  const double lambda = at_tolerance ? 0.0 : std::sqrt(lambda_bar);
  const double g = u_real.dot(x_tar);
  double xi = prev_dir;  // hysteresis band keeps the previous direction
  if (g > 0.25) {
    xi = 1.0;
  } else if (g < -0.25) {
    xi = -1.0;
  }
  out.dir = xi;
  out.v_tar = xi * lambda * p.v_d;
  return out;
}

double ideal_speed(bool forbid_forward, bool forbid_backward, double v_tar,
                   const ModelParams& p) {
  if (forbid_backward && !forbid_forward) {
    return p.v_d;
  }
  if (forbid_forward && !forbid_backward) {
    return -p.v_d;
  }
  if (forbid_forward && forbid_backward) {
    return 0.0;
  }
  return v_tar;
}

}  // namespace dv2f
