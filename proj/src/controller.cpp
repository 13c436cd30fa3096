#include "dv2f/controller.hpp"

#include "dv2f/kinematics.hpp"

namespace dv2f {

std::vector<int> neighbor_filter(const Scene& scene, int i, const ModelParams& p) {
  std::vector<int> out;
  const VehicleState& ego = scene.vehicles[i];
  const Vec2 pos = ego.position();
  for (int j = 0; j < scene.n_vehicles(); ++j) {
    if (j == i) {
      continue;
    }
    const VehicleState& other = scene.vehicles[j];
    const double threshold =
        2.0 * p.r_veh + std::abs(ego.v) + std::abs(other.v) + 2.0 * p.r_c;
    if ((other.position() - pos).norm() <= threshold) {
      out.push_back(j);
    }
  }
  for (int k = 0; k < scene.n_obstacles(); ++k) {
    const ObstacleState& o = scene.obstacles[k];
    const double threshold = o.r + p.r_veh + std::abs(ego.v) + 2.0 * p.r_c;
    if ((o.position() - pos).norm() <= threshold) {
      out.push_back(scene.n_vehicles() + k);
    }
  }
  return out;
}

VehicleControl compute_vehicle_control(const Scene& scene, int i, double prev_dir,
                                       const ModelParams& p) {
  const VehicleState& ego = scene.vehicles[i];
  const Vec2 next = predicted_next_position(ego, p);
  const std::vector<int> neighbors = neighbor_filter(scene, i, p);

  const OrientationResult orient = ideal_orientation(ego, scene, neighbors, p);
  const ReachableSet rs = reachable_set(ego, p);
  ClampedRef ref = clamp_to_reachable(orient.theta_hat, 0.0, rs);

  const ForbiddenFlags flags = forbidden_flags(ref.theta_real, ego, next, scene, neighbors, p);
  const ParkingSpeed park = parking_speed(ego, ref.theta_real, orient.u_hat, prev_dir, p);
  const double v_hat = ideal_speed(flags.forward, flags.backward, park.v_tar, p);
  ref = clamp_to_reachable(orient.theta_hat, v_hat, rs);

  VehicleControl out;
  out.command = invert_controls(ego, ref.theta_real, ref.v_real, p);
  out.prev_dir = park.dir;
  out.diagnostics.u_tar = orient.u_tar;
  out.diagnostics.u_coll = orient.u_coll;
  out.diagnostics.u_hat = orient.u_hat;
  out.diagnostics.degenerate = orient.degenerate;
  out.diagnostics.theta_hat = orient.theta_hat;
  out.diagnostics.v_hat = v_hat;
  out.diagnostics.forbid_forward = flags.forward;
  out.diagnostics.forbid_backward = flags.backward;
  out.diagnostics.active_neighbors = neighbors;
  return out;
}

ControlOutput compute_scene_controls(const Scene& scene, const std::vector<double>& prev_dirs,
                                     const ModelParams& p) {
  ControlOutput out;
  const int n = scene.n_vehicles();
  out.commands.resize(n);
  out.diagnostics.resize(n);
  out.prev_dirs.resize(n);
  for (int i = 0; i < n; ++i) {
    const double dir = i < static_cast<int>(prev_dirs.size()) ? prev_dirs[i] : 1.0;
    VehicleControl vc = compute_vehicle_control(scene, i, dir, p);
    out.commands[i] = vc.command;
    out.diagnostics[i] = std::move(vc.diagnostics);
    out.prev_dirs[i] = vc.prev_dir;
  }
  return out;
}

}  // namespace dv2f
