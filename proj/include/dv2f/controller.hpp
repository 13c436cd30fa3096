#ifndef DV2F_CONTROLLER_HPP_
#define DV2F_CONTROLLER_HPP_

#include <vector>

#include "dv2f/core.hpp"
#include "dv2f/field.hpp"

namespace dv2f {

struct ControlOutput {
  std::vector<ControlCommand> commands;
  std::vector<FieldDiagnostics> diagnostics;
  std::vector<double> prev_dirs;  // longitudinal direction carried to next step
};

// Edge filter: agents beyond the speed-dependent threshold cannot contribute
// (their avoidance terms are zero) and are skipped. Distances use current
// positions. Returns agent ids in stable index order, vehicles first.
std::vector<int> neighbor_filter(const Scene& scene, int i, const ModelParams& p);

struct VehicleControl {
  ControlCommand command;
  FieldDiagnostics diagnostics;
  double prev_dir = 1.0;
};

// Full per-vehicle pipeline: field orientation, reachability clamp, forbidden
// flags, reference speed, speed clamp, control inversion.
VehicleControl compute_vehicle_control(const Scene& scene, int i, double prev_dir,
                                       const ModelParams& p);

// Evaluates every vehicle against the same immutable snapshot; results are
// identical to independent per-vehicle calls.
ControlOutput compute_scene_controls(const Scene& scene, const std::vector<double>& prev_dirs,
                                     const ModelParams& p);

}  // namespace dv2f

#endif  // DV2F_CONTROLLER_HPP_
