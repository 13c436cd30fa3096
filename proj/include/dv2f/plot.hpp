#ifndef DV2F_PLOT_HPP_
#define DV2F_PLOT_HPP_

#include <optional>
#include <string>
#include <vector>

#include "dv2f/core.hpp"

namespace dv2f {

struct TrajectoryPoint {
  Vec2 pos{};
  double theta = 0.0;
};

// Per-vehicle position sequences parsed from a trajectory JSON-lines file.
std::vector<std::vector<TrajectoryPoint>> parse_trajectory(const std::string& jsonl);

struct PlotOptions {
  bool field_arrows = false;
  int arrow_vehicle = 0;     // ego whose field is sampled
  double grid_step = 2.0;    // arrow grid spacing [m]
  double scale = 10.0;       // px per meter (1 px = 0.1 m)
  double margin = 5.0;       // canvas margin [m]
};

// SVG with vehicle paths, start/target markers, obstacle circles and an
// optional sampled reference-orientation arrow grid for one vehicle. The
// scene supplies obstacles and targets; pass nullopt to draw paths only.
std::string render_svg(const std::vector<std::vector<TrajectoryPoint>>& paths,
                       const std::optional<Scene>& scene, const PlotOptions& opt,
                       const ModelParams& p);

}  // namespace dv2f

#endif  // DV2F_PLOT_HPP_
