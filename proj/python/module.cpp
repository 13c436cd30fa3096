#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "dv2f/controller.hpp"
#include "dv2f/core.hpp"
#include "dv2f/field.hpp"
#include "dv2f/kinematics.hpp"
#include "dv2f/labels.hpp"
#include "dv2f/metrics.hpp"
#include "dv2f/scenario.hpp"
#include "dv2f/simulator.hpp"

namespace py = pybind11;
using namespace dv2f;

PYBIND11_MODULE(_dv2f, m) {
  m.doc() = "Multi-vehicle navigation with dynamic velocity vector fields";

  py::class_<Vec2>(m, "Vec2")
      .def(py::init<>())
      .def(py::init([](double x, double y) { return Vec2{x, y}; }))
      .def_readwrite("x", &Vec2::x)
      .def_readwrite("y", &Vec2::y)
      .def("norm", &Vec2::norm)
      .def("__repr__", [](const Vec2& v) {
        return "Vec2(" + std::to_string(v.x) + ", " + std::to_string(v.y) + ")";
      });

  py::class_<ModelParams>(m, "ModelParams")
      .def(py::init<>())
      .def_readwrite("dt", &ModelParams::dt)
      .def_readwrite("beta", &ModelParams::beta)
      .def_readwrite("gamma", &ModelParams::gamma)
      .def_readwrite("pedal_max", &ModelParams::pedal_max)
      .def_readwrite("steer_max", &ModelParams::steer_max)
      .def_readwrite("v_d", &ModelParams::v_d)
      .def_readwrite("r_p", &ModelParams::r_p)
      .def_readwrite("r_veh", &ModelParams::r_veh)
      .def_readwrite("r_c", &ModelParams::r_c)
      .def_readwrite("eps_p", &ModelParams::eps_p)
      .def_readwrite("eps_o", &ModelParams::eps_o)
      .def_readwrite("eps_c", &ModelParams::eps_c)
      .def_readwrite("eps_v", &ModelParams::eps_v)
      .def_readwrite("horizon", &ModelParams::horizon)
      .def("to_json", &ModelParams::to_json)
      .def_static("from_json", &ModelParams::from_json);

  py::class_<VehicleState>(m, "VehicleState")
      .def(py::init<>())
      .def_readwrite("x", &VehicleState::x)
      .def_readwrite("y", &VehicleState::y)
      .def_readwrite("theta", &VehicleState::theta)
      .def_readwrite("v", &VehicleState::v)
      .def_readwrite("x_tar", &VehicleState::x_tar)
      .def_readwrite("y_tar", &VehicleState::y_tar)
      .def_readwrite("theta_tar", &VehicleState::theta_tar);

  py::class_<ObstacleState>(m, "ObstacleState")
      .def(py::init<>())
      .def_readwrite("x", &ObstacleState::x)
      .def_readwrite("y", &ObstacleState::y)
      .def_readwrite("r", &ObstacleState::r);

  py::class_<ControlCommand>(m, "ControlCommand")
      .def(py::init<>())
      .def_readwrite("pedal", &ControlCommand::pedal)
      .def_readwrite("steer", &ControlCommand::steer);

  py::class_<Scene>(m, "Scene")
      .def(py::init<>())
      .def_readwrite("vehicles", &Scene::vehicles)
      .def_readwrite("obstacles", &Scene::obstacles)
      .def_readwrite("t", &Scene::t)
      .def("n_vehicles", &Scene::n_vehicles)
      .def("n_obstacles", &Scene::n_obstacles);

  m.def("wrap_angle", &wrap_angle);
  m.def("step", &step);
  m.def("invert_controls", &invert_controls);
  m.def("predicted_next_position", &predicted_next_position);

  py::class_<FieldDiagnostics>(m, "FieldDiagnostics")
      .def_readonly("u_tar", &FieldDiagnostics::u_tar)
      .def_readonly("u_coll", &FieldDiagnostics::u_coll)
      .def_readonly("u_hat", &FieldDiagnostics::u_hat)
      .def_readonly("theta_hat", &FieldDiagnostics::theta_hat)
      .def_readonly("v_hat", &FieldDiagnostics::v_hat)
      .def_readonly("forbid_forward", &FieldDiagnostics::forbid_forward)
      .def_readonly("forbid_backward", &FieldDiagnostics::forbid_backward)
      .def_readonly("active_neighbors", &FieldDiagnostics::active_neighbors);

  py::class_<ControlOutput>(m, "ControlOutput")
      .def_readonly("commands", &ControlOutput::commands)
      .def_readonly("diagnostics", &ControlOutput::diagnostics)
      .def_readonly("prev_dirs", &ControlOutput::prev_dirs);

  m.def("neighbor_filter", &neighbor_filter);
  m.def("compute_scene_controls", &compute_scene_controls, py::arg("scene"),
        py::arg("prev_dirs") = std::vector<double>{}, py::arg("params") = ModelParams{});

  py::class_<CollisionEvent>(m, "CollisionEvent")
      .def_readonly("t", &CollisionEvent::t)
      .def_readonly("a", &CollisionEvent::a)
      .def_readonly("b", &CollisionEvent::b);

  py::class_<Frame>(m, "Frame")
      .def_readonly("scene", &Frame::scene)
      .def_readonly("controls", &Frame::controls);

  py::class_<Rollout>(m, "Rollout")
      .def_readonly("frames", &Rollout::frames)
      .def_readonly("collision_events", &Rollout::collision_events)
      .def_readonly("terminated_at", &Rollout::terminated_at);

  m.def("rollout", &rollout);
  m.def("rollout_to_jsonl", &rollout_to_jsonl);
  m.def("is_parked", &is_parked);

  py::class_<VehicleOutcome>(m, "VehicleOutcome")
      .def_readonly("reached", &VehicleOutcome::reached)
      .def_readonly("safe", &VehicleOutcome::safe);

  py::class_<MetricsReport>(m, "MetricsReport")
      .def_readonly("success_rate", &MetricsReport::success_rate)
      .def_readonly("reach_rate", &MetricsReport::reach_rate)
      .def_readonly("safe_rate", &MetricsReport::safe_rate)
      .def_readonly("position_only_success", &MetricsReport::position_only_success)
      .def_readonly("per_vehicle_outcomes", &MetricsReport::per_vehicle_outcomes)
      .def_readonly("success_time_series", &MetricsReport::success_time_series)
      .def("to_json", &MetricsReport::to_json);

  m.def("evaluate", &evaluate);

  py::enum_<GenMode>(m, "GenMode")
      .value("collision", GenMode::kCollision)
      .value("parking", GenMode::kParking)
      .value("normal", GenMode::kNormal);

  py::class_<GenSpec>(m, "GenSpec")
      .def(py::init<>())
      .def_readwrite("n_vehicles", &GenSpec::n_vehicles)
      .def_readwrite("n_obstacles", &GenSpec::n_obstacles)
      .def_readwrite("mode", &GenSpec::mode)
      .def_readwrite("map_extent", &GenSpec::map_extent)
      .def_readwrite("obstacle_radius_min", &GenSpec::obstacle_radius_min)
      .def_readwrite("obstacle_radius_max", &GenSpec::obstacle_radius_max)
      .def_readwrite("seed", &GenSpec::seed);

  m.def("generate", &generate);
  m.def("validate",
        [](const Scene& s, const ModelParams& p) { return validate(s, p); },
        py::arg("scene"), py::arg("params") = ModelParams{});
  m.def("save_scene", &save_scene);
  m.def("load_scene", &load_scene);
  m.def("save_batch", &save_batch);
  m.def("load_batch", &load_batch);

  m.def("state_cost", &state_cost);
  m.def("control_cost", &control_cost);
  m.def("export_labels", &export_labels);
}
