#include <doctest.h>

#include <json.hpp>

#include "dv2f/metrics.hpp"

using namespace dv2f;

namespace {

VehicleState make_state(double x, double y, double theta, double v, double x_tar = 0.0,
                        double y_tar = 0.0, double theta_tar = 0.0) {
  VehicleState s;
  s.x = x;
  s.y = y;
  s.theta = theta;
  s.v = v;
  s.x_tar = x_tar;
  s.y_tar = y_tar;
  s.theta_tar = theta_tar;
  return s;
}

Frame make_frame(int t, const std::vector<VehicleState>& vehicles) {
  Frame f;
  f.scene.t = t;
  f.scene.vehicles = vehicles;
  f.controls.commands.resize(vehicles.size());
  f.controls.diagnostics.resize(vehicles.size());
  f.controls.prev_dirs.assign(vehicles.size(), 1.0);
  return f;
}

}  // namespace

TEST_CASE("evaluate splits reach and safety") {
  const ModelParams p;
  Rollout r;
  r.params = p;
  // vehicle 0: parked and clean; vehicle 1: at position but wrong heading,
  // and it collided with an obstacle along the way.
  r.frames.push_back(make_frame(0, {make_state(5, 5, 0, 1.0, 0, 0, 0),
                                    make_state(-5, 0, 0, 1.0, -9, 0, 0)}));
  r.frames.push_back(make_frame(1, {make_state(0, 0, 0, 0, 0, 0, 0),
                                    make_state(-9, 0, 1.0, 0, -9, 0, 0)}));
  r.terminated_at = 1;
  r.collision_events.push_back({1, 1, 2});  // vehicle 1 vs obstacle id 2

  const MetricsReport m = evaluate(r, p);
  REQUIRE(m.per_vehicle_outcomes.size() == 2);
  CHECK(m.per_vehicle_outcomes[0].reached);
  CHECK(m.per_vehicle_outcomes[0].safe);
  CHECK_FALSE(m.per_vehicle_outcomes[1].reached);
  CHECK_FALSE(m.per_vehicle_outcomes[1].safe);
  CHECK(m.success_rate == 0.5);
  CHECK(m.reach_rate == 0.5);
  CHECK(m.safe_rate == 0.5);
  // vehicle 1 is within the position tolerance but unsafe
  CHECK(m.position_only_success == 0.5);
}

TEST_CASE("vehicle-vehicle collision marks both unsafe") {
  const ModelParams p;
  Rollout r;
  r.params = p;
  r.frames.push_back(make_frame(0, {make_state(0, 0, 0, 0, 0, 0, 0),
                                    make_state(2, 0, 0, 0, 2, 0, 0)}));
  r.terminated_at = 0;
  r.collision_events.push_back({0, 0, 1});
  const MetricsReport m = evaluate(r, p);
  CHECK(m.reach_rate == 1.0);
  CHECK(m.safe_rate == 0.0);
  CHECK(m.success_rate == 0.0);
}

TEST_CASE("success time series is monotone under clean parking") {
  const ModelParams p;
  Rollout r;
  r.params = p;
  r.frames.push_back(make_frame(0, {make_state(3, 0, 0, 1.0, 0, 0, 0)}));
  r.frames.push_back(make_frame(1, {make_state(1, 0, 0, 1.0, 0, 0, 0)}));
  r.frames.push_back(make_frame(2, {make_state(0.1, 0, 0, 0, 0, 0, 0)}));
  r.terminated_at = 2;
  const auto series = success_time_series(r, p);
  REQUIRE(series.size() == 3);
  CHECK(series[0] == 0.0);
  CHECK(series[1] == 0.0);
  CHECK(series[2] == 1.0);
}

TEST_CASE("series drops a vehicle once it collides") {
  const ModelParams p;
  Rollout r;
  r.params = p;
  r.frames.push_back(make_frame(0, {make_state(0, 0, 0, 0, 0, 0, 0)}));
  r.frames.push_back(make_frame(1, {make_state(0, 0, 0, 0, 0, 0, 0)}));
  r.terminated_at = 1;
  r.collision_events.push_back({1, 0, 1});  // obstacle hit at t = 1
  const auto series = success_time_series(r, p);
  REQUIRE(series.size() == 2);
  CHECK(series[0] == 1.0);
  CHECK(series[1] == 0.0);
}

TEST_CASE("evaluate rejects an empty rollout") {
  const ModelParams p;
  Rollout r;
  CHECK_THROWS_AS(evaluate(r, p), std::invalid_argument);
}

TEST_CASE("metrics json") {
  const ModelParams p;
  Rollout r;
  r.params = p;
  r.frames.push_back(make_frame(0, {make_state(0, 0, 0, 0, 0, 0, 0)}));
  r.terminated_at = 0;
  const auto j = nlohmann::json::parse(evaluate(r, p).to_json());
  CHECK(j.at("success_rate").get<double>() == 1.0);
  CHECK(j.at("reach_rate").get<double>() == 1.0);
  CHECK(j.at("safe_rate").get<double>() == 1.0);
  CHECK(j.at("position_only_success").get<double>() == 1.0);
  CHECK(j.at("per_vehicle_outcomes")[0].at("reached").get<bool>());
  CHECK(j.at("success_time_series").size() == 1);
}

TEST_CASE("batch csv formatting") {
  CHECK(batch_summary_csv_header() ==
        "n_vehicles,n_obstacles,cases,success,reach,safe,position_only,wall_time_s");
  BatchSummary s;
  s.n_vehicles = 10;
  s.n_obstacles = 25;
  s.cases = 100;
  s.success = 0.97;
  s.reach = 0.98;
  s.safe = 0.99;
  s.position_only = 0.975;
  s.wall_time_s = 1.234;
  CHECK(batch_summary_csv_row(s) == "10,25,100,0.970000,0.980000,0.990000,0.975000,1.234");
}
