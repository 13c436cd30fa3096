#include "dv2f/metrics.hpp"

#include <cstdio>
#include <stdexcept>

#include <json.hpp>

namespace dv2f {

MetricsReport evaluate(const Rollout& r, const ModelParams& p) {
  if (r.frames.empty()) {
    throw std::invalid_argument("evaluate: empty rollout");
  }
  const Scene& final_scene = r.frames.back().scene;
  const int n = final_scene.n_vehicles();

  // Both participants of a collision count as unsafe.
  std::vector<bool> collided(n, false);
  for (const CollisionEvent& e : r.collision_events) {
    collided[e.a] = true;
    if (e.b < n) {
      collided[e.b] = true;
    }
  }

  MetricsReport report;
  report.per_vehicle_outcomes.resize(n);
  int n_success = 0, n_reach = 0, n_safe = 0, n_pos = 0;
  for (int i = 0; i < n; ++i) {
    const VehicleState& v = final_scene.vehicles[i];
    VehicleOutcome& o = report.per_vehicle_outcomes[i];
    o.reached = is_parked(v, p);
    o.safe = !collided[i];
    n_reach += o.reached;
    n_safe += o.safe;
    n_success += o.reached && o.safe;
    n_pos += ((v.target() - v.position()).norm() <= p.eps_p) && o.safe;
  }
  const double denom = n > 0 ? static_cast<double>(n) : 1.0;
  report.success_rate = n_success / denom;
  report.reach_rate = n_reach / denom;
  report.safe_rate = n_safe / denom;
  report.position_only_success = n_pos / denom;
  report.success_time_series = success_time_series(r, p);
  return report;
}

std::vector<double> success_time_series(const Rollout& r, const ModelParams& p) {
  std::vector<double> series;
  if (r.frames.empty()) {
    return series;
  }
  const int n = r.frames.front().scene.n_vehicles();
  const double denom = n > 0 ? static_cast<double>(n) : 1.0;
  std::vector<bool> collided(n, false);
  size_t ev = 0;
  for (const Frame& f : r.frames) {
    while (ev < r.collision_events.size() && r.collision_events[ev].t <= f.scene.t) {
      const CollisionEvent& e = r.collision_events[ev];
      collided[e.a] = true;
      if (e.b < n) {
        collided[e.b] = true;
      }
      ++ev;
    }
    int count = 0;
    for (int i = 0; i < n; ++i) {
      count += !collided[i] && is_parked(f.scene.vehicles[i], p);
    }
    series.push_back(count / denom);
  }
  return series;
}

std::string MetricsReport::to_json() const {
  nlohmann::json j;
  j["success_rate"] = success_rate;
  j["reach_rate"] = reach_rate;
  j["safe_rate"] = safe_rate;
  j["position_only_success"] = position_only_success;
  auto& outcomes = j["per_vehicle_outcomes"] = nlohmann::json::array();
  for (const VehicleOutcome& o : per_vehicle_outcomes) {
    outcomes.push_back({{"reached", o.reached}, {"safe", o.safe}});
  }
  j["success_time_series"] = success_time_series;
  return j.dump();
}

std::string batch_summary_csv_header() {
  return "n_vehicles,n_obstacles,cases,success,reach,safe,position_only,wall_time_s";
}

std::string batch_summary_csv_row(const BatchSummary& s) {
  char buf[192];
  std::snprintf(buf, sizeof(buf), "%d,%d,%d,%.6f,%.6f,%.6f,%.6f,%.3f", s.n_vehicles,
                s.n_obstacles, s.cases, s.success, s.reach, s.safe, s.position_only,
                s.wall_time_s);
  return buf;
}

}  // namespace dv2f
