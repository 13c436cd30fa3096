#ifndef DV2F_METRICS_HPP_
#define DV2F_METRICS_HPP_

#include <string>
#include <vector>

#include "dv2f/simulator.hpp"

namespace dv2f {

struct VehicleOutcome {
  bool reached = false;  // parked at the final frame
  bool safe = false;     // no collision event at any step
};

struct MetricsReport {
  double success_rate = 0.0;
  double reach_rate = 0.0;
  double safe_rate = 0.0;
  double position_only_success = 0.0;
  std::vector<VehicleOutcome> per_vehicle_outcomes;
  std::vector<double> success_time_series;

  std::string to_json() const;
};

MetricsReport evaluate(const Rollout& r, const ModelParams& p);

// Fraction of vehicles parked at step t and collision-free on [0, t].
std::vector<double> success_time_series(const Rollout& r, const ModelParams& p);

struct BatchSummary {
  int n_vehicles = 0;
  int n_obstacles = 0;
  int cases = 0;
  double success = 0.0;
  double reach = 0.0;
  double safe = 0.0;
  double position_only = 0.0;
  double wall_time_s = 0.0;
};

std::string batch_summary_csv_header();
std::string batch_summary_csv_row(const BatchSummary& s);

}  // namespace dv2f

#endif  // DV2F_METRICS_HPP_
