#include "dv2f/labels.hpp"

#include <cmath>
#include <cstdio>

namespace dv2f {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

double hinge_penalty(double alpha) {
  const double m = std::max(-alpha, 0.0);
  return m * m + m;
}

}  // namespace

Lookahead two_step_lookahead(const VehicleState& s, const ControlCommand& c,
                             const ModelParams& p) {
  Lookahead la;
  const double x1 = s.x + s.v * std::cos(s.theta) * p.dt;
  const double y1 = s.y + s.v * std::sin(s.theta) * p.dt;
  la.theta1 = wrap_angle(s.theta + s.v * std::tan(c.steer) * p.gamma * p.dt);
  la.v1 = p.beta * s.v + c.pedal * p.dt;
  la.pos2 = {x1 + la.v1 * std::cos(la.theta1) * p.dt, y1 + la.v1 * std::sin(la.theta1) * p.dt};
  return la;
}

double state_cost(const Scene& scene, int ego_index, const Vec2& pos2, double margin_speed,
                  const ModelParams& p) {
  const VehicleState& ego = scene.vehicles[ego_index];
  double cost = (ego.target() - pos2).norm();
  const double margin = p.r_c + std::abs(margin_speed);
  for (const ObstacleState& o : scene.obstacles) {
    const double alpha = (o.position() - pos2).norm() - o.r - p.r_veh - margin;
    cost += hinge_penalty(alpha);
  }
  for (int j = 0; j < scene.n_vehicles(); ++j) {
    if (j == ego_index) continue;
    const double alpha =
        (scene.vehicles[j].position() - pos2).norm() - 2.0 * p.r_veh - margin;
    cost += hinge_penalty(alpha);
  }
  return cost;
}

double control_cost(const Scene& scene, int ego_index, const ControlCommand& c,
                    const ModelParams& p) {
  const VehicleState& ego = scene.vehicles[ego_index];
  const Lookahead la = two_step_lookahead(ego, c, p);
  return state_cost(scene, ego_index, la.pos2, ego.v, p);
}

LossTerms training_loss(const Scene& scene, int ego_index, const ControlCommand& pred,
                        const ControlCommand& ref, double ref_v_next, const ModelParams& p) {
  LossTerms loss;
  const double ds = ref.steer - pred.steer;
  loss.steer = ds * ds;

  const VehicleState& ego = scene.vehicles[ego_index];
  const double pred_v_next = p.beta * ego.v + pred.pedal * p.dt;
  const double dist_tar = (ego.target() - ego.position()).norm();
  const bool far = dist_tar - std::abs(pred_v_next) - p.r_p > 0.0;
  const bool saturated = std::abs(pred_v_next) > p.v_d &&
                         std::abs(std::abs(ref_v_next) - p.v_d) < 1e-9 &&
                         pred_v_next * ref_v_next > 0.0;
  if (far && saturated) {
    // Reference steering inside both cost evaluations.
    const double dc = control_cost(scene, ego_index, {pred.pedal, ref.steer}, p) -
                      control_cost(scene, ego_index, {ref.pedal, ref.steer}, p);
    loss.pedal = dc + f_pos(dc) * dc * dc;
  } else {
    const double dp = ref.pedal - pred.pedal;
    loss.pedal = dp * dp;
  }
  return loss;
}

VehicleState perturb(const VehicleState& s, int t, int T, const PerturbSigma& sigma0,
                     Rng& rng) {
  const double scale = T > 0 ? static_cast<double>(T - t) / T : 0.0;
  VehicleState out = s;
  out.x = rng.gaussian(s.x, scale * sigma0.x);
  out.y = rng.gaussian(s.y, scale * sigma0.y);
  out.theta = wrap_angle(rng.gaussian(s.theta, scale * sigma0.theta));
  out.v = rng.gaussian(s.v, scale * sigma0.v);
  return out;
}

std::string export_labels(const Rollout& r, const std::string& scenario_id) {
  std::string out;
  if (r.frames.size() < 2) {
    return out;
  }
  for (size_t t = 0; t + 1 < r.frames.size(); ++t) {
    const Frame& f = r.frames[t];
    const Frame& nf = r.frames[t + 1];
    for (int i = 0; i < f.scene.n_vehicles(); ++i) {
      const VehicleState& s = f.scene.vehicles[i];
      const ControlCommand& c = f.controls.commands[i];
      out += "{\"scenario_id\":\"" + scenario_id + "\",\"t\":" + std::to_string(f.scene.t) +
             ",\"vehicle_id\":" + std::to_string(i) + ",\"state\":{\"x\":" + fmt(s.x) +
             ",\"y\":" + fmt(s.y) + ",\"theta\":" + fmt(s.theta) + ",\"v\":" + fmt(s.v) +
             ",\"x_tar\":" + fmt(s.x_tar) + ",\"y_tar\":" + fmt(s.y_tar) +
             ",\"theta_tar\":" + fmt(s.theta_tar) + "},\"neighbor_ids\":[";
      const auto& ids = f.controls.diagnostics[i].active_neighbors;
      for (size_t k = 0; k < ids.size(); ++k) {
        if (k > 0) out += ",";
        out += std::to_string(ids[k]);
      }
      out += "],\"ref_pedal\":" + fmt(c.pedal) + ",\"ref_steer\":" + fmt(c.steer) +
             ",\"ref_v_next\":" + fmt(nf.scene.vehicles[i].v) +
             ",\"ref_theta_next\":" + fmt(nf.scene.vehicles[i].theta) + "}\n";
    }
  }
  return out;
}

}  // namespace dv2f
