#include "dv2f/simulator.hpp"

#include <cstdio>
#include <stdexcept>

#include "dv2f/kinematics.hpp"

namespace dv2f {

namespace {

void check_scene(const Scene& scene) {
  for (const VehicleState& v : scene.vehicles) {
    for (double f : {v.x, v.y, v.theta, v.v, v.x_tar, v.y_tar, v.theta_tar}) {
      if (!std::isfinite(f)) {
        throw std::invalid_argument("rollout: non-finite vehicle state");
      }
    }
  }
  for (const ObstacleState& o : scene.obstacles) {
    if (!std::isfinite(o.x) || !std::isfinite(o.y) || !(o.r > 0.0)) {
      throw std::invalid_argument("rollout: invalid obstacle");
    }
  }
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

}  // namespace

std::vector<CollisionEvent> detect_collisions(const Scene& scene, const ModelParams& p) {
  std::vector<CollisionEvent> events;
  const int n = scene.n_vehicles();
  for (int i = 0; i < n; ++i) {
    const Vec2 pi = scene.vehicles[i].position();
    for (int j = i + 1; j < n; ++j) {
      if ((scene.vehicles[j].position() - pi).norm() < 2.0 * p.r_veh) {
        events.push_back({scene.t, i, j});
      }
    }
    for (int k = 0; k < scene.n_obstacles(); ++k) {
      const ObstacleState& o = scene.obstacles[k];
      if ((o.position() - pi).norm() < p.r_veh + o.r) {
        events.push_back({scene.t, i, n + k});
      }
    }
  }
  return events;
}

bool is_parked(const VehicleState& s, const ModelParams& p) {
  return (s.target() - s.position()).norm() <= p.eps_p &&
         std::abs(wrap_angle(s.theta - s.theta_tar)) <= p.eps_o;
}

Rollout rollout(const Scene& scene0, const ModelParams& p) {
  check_scene(scene0);
  Rollout out;
  out.params = p;
  Scene scene = scene0;
  scene.t = 0;
  std::vector<double> prev_dirs(scene.vehicles.size(), 1.0);

  for (int t = 0;; ++t) {
    scene.t = t;
    auto events = detect_collisions(scene, p);
    out.collision_events.insert(out.collision_events.end(), events.begin(), events.end());

    Frame frame;
    frame.scene = scene;
    frame.controls = compute_scene_controls(scene, prev_dirs, p);
    out.frames.push_back(frame);
    out.terminated_at = t;

    bool all_parked = true;
    for (const VehicleState& v : scene.vehicles) {
      if (!is_parked(v, p) || std::abs(v.v) >= kParkedSpeed) {
        all_parked = false;
        break;
      }
    }
    if (all_parked || t >= p.horizon) {
      break;
    }

    Scene next = scene;
    next.t = t + 1;
    for (size_t i = 0; i < scene.vehicles.size(); ++i) {
      next.vehicles[i] = step(scene.vehicles[i], frame.controls.commands[i], p);
    }
    prev_dirs = frame.controls.prev_dirs;
    scene = next;
  }
  return out;
}

std::string rollout_to_jsonl(const Rollout& r) {
  std::string out;
  size_t ev = 0;
  for (const Frame& f : r.frames) {
    out += "{\"t\":" + std::to_string(f.scene.t) + ",\"vehicles\":[";
    for (int i = 0; i < f.scene.n_vehicles(); ++i) {
      const VehicleState& v = f.scene.vehicles[i];
      const ControlCommand& c = f.controls.commands[i];
      const FieldDiagnostics& d = f.controls.diagnostics[i];
      if (i > 0) out += ",";
      out += "{\"x\":" + fmt(v.x) + ",\"y\":" + fmt(v.y) + ",\"theta\":" + fmt(v.theta) +
             ",\"v\":" + fmt(v.v) + ",\"pedal\":" + fmt(c.pedal) + ",\"steer\":" + fmt(c.steer) +
             ",\"v_hat\":" + fmt(d.v_hat) + ",\"theta_hat\":" + fmt(d.theta_hat) +
             ",\"F\":" + (d.forbid_forward ? "true" : "false") +
             ",\"B\":" + (d.forbid_backward ? "true" : "false") + "}";
    }
    out += "],\"collisions\":[";
    bool first = true;
    while (ev < r.collision_events.size() && r.collision_events[ev].t == f.scene.t) {
      if (!first) out += ",";
      first = false;
      out += "[" + std::to_string(r.collision_events[ev].a) + "," +
             std::to_string(r.collision_events[ev].b) + "]";
      ++ev;
    }
    out += "]}\n";
  }
  return out;
}

}  // namespace dv2f
