#include "dv2f/plot.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include <json.hpp>

#include "dv2f/controller.hpp"
#include "dv2f/field.hpp"

namespace dv2f {

namespace {

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
                          "#8c564b", "#e377c2", "#17becf", "#bcbd22", "#7f7f7f"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

}  // namespace

std::vector<std::vector<TrajectoryPoint>> parse_trajectory(const std::string& jsonl) {
  std::vector<std::vector<TrajectoryPoint>> paths;
  std::istringstream in(jsonl);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const nlohmann::json j = nlohmann::json::parse(line);
    const auto& vehicles = j.at("vehicles");
    if (paths.empty()) {
      paths.resize(vehicles.size());
    }
    if (vehicles.size() != paths.size()) {
      throw std::runtime_error("trajectory: inconsistent vehicle count across records");
    }
    for (size_t i = 0; i < vehicles.size(); ++i) {
      paths[i].push_back({{vehicles[i].at("x").get<double>(), vehicles[i].at("y").get<double>()},
                          vehicles[i].at("theta").get<double>()});
    }
  }
  return paths;
}

std::string render_svg(const std::vector<std::vector<TrajectoryPoint>>& paths,
                       const std::optional<Scene>& scene, const PlotOptions& opt,
                       const ModelParams& p) {
  double min_x = 0.0, max_x = 0.0, min_y = 0.0, max_y = 0.0;
  bool any = false;
  auto extend = [&](const Vec2& v, double r) {
    if (!any) {
      min_x = v.x - r;
      max_x = v.x + r;
      min_y = v.y - r;
      max_y = v.y + r;
      any = true;
    } else {
      min_x = std::min(min_x, v.x - r);
      max_x = std::max(max_x, v.x + r);
      min_y = std::min(min_y, v.y - r);
      max_y = std::max(max_y, v.y + r);
    }
  };
  for (const auto& path : paths) {
    for (const TrajectoryPoint& pt : path) extend(pt.pos, 0.0);
  }
  if (scene) {
    for (const VehicleState& v : scene->vehicles) {
      extend(v.position(), p.r_veh);
      extend(v.target(), p.r_veh);
    }
    for (const ObstacleState& o : scene->obstacles) extend(o.position(), o.r);
  }
  if (!any) {
    min_x = min_y = -1.0;
    max_x = max_y = 1.0;
  }
  min_x -= opt.margin;
  min_y -= opt.margin;
  max_x += opt.margin;
  max_y += opt.margin;

  const double width = (max_x - min_x) * opt.scale;
  const double height = (max_y - min_y) * opt.scale;
  // SVG y grows downward; world y is flipped.
  auto px = [&](const Vec2& v) -> Vec2 {
    return {(v.x - min_x) * opt.scale, (max_y - v.y) * opt.scale};
  };

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(width) + "\" height=\"" +
         num(height) + "\" viewBox=\"0 0 " + num(width) + " " + num(height) + "\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  if (scene) {
    for (const ObstacleState& o : scene->obstacles) {
      const Vec2 c = px(o.position());
      svg += "<circle cx=\"" + num(c.x) + "\" cy=\"" + num(c.y) + "\" r=\"" +
             num(o.r * opt.scale) + "\" fill=\"#cccccc\" stroke=\"#555555\"/>\n";
    }
  }

  if (scene && opt.field_arrows && opt.arrow_vehicle < scene->n_vehicles()) {
    Scene sampled = *scene;
    const int sel = opt.arrow_vehicle;
    for (double gy = min_y; gy <= max_y; gy += opt.grid_step) {
      for (double gx = min_x; gx <= max_x; gx += opt.grid_step) {
        VehicleState& ego = sampled.vehicles[sel];
        ego = scene->vehicles[sel];
        ego.x = gx;
        ego.y = gy;
        ego.v = 0.0;
        const auto neighbors = neighbor_filter(sampled, sel, p);
        const OrientationResult orient = ideal_orientation(ego, sampled, neighbors, p);
        const Vec2 a = px({gx, gy});
        const Vec2 b = px({gx + orient.u_hat.x, gy + orient.u_hat.y});  // unit length arrows
        const Vec2 tip_l = px({gx + 0.7 * orient.u_hat.x - 0.15 * orient.u_hat.y,
                               gy + 0.7 * orient.u_hat.y + 0.15 * orient.u_hat.x});
        const Vec2 tip_r = px({gx + 0.7 * orient.u_hat.x + 0.15 * orient.u_hat.y,
                               gy + 0.7 * orient.u_hat.y - 0.15 * orient.u_hat.x});
        svg += "<path d=\"M" + num(a.x) + " " + num(a.y) + " L" + num(b.x) + " " + num(b.y) +
               " M" + num(tip_l.x) + " " + num(tip_l.y) + " L" + num(b.x) + " " + num(b.y) +
               " L" + num(tip_r.x) + " " + num(tip_r.y) +
               "\" stroke=\"#999999\" fill=\"none\" stroke-width=\"1\"/>\n";
      }
    }
  }

  for (size_t i = 0; i < paths.size(); ++i) {
    if (paths[i].empty()) continue;
    const char* color = kPalette[i % (sizeof(kPalette) / sizeof(kPalette[0]))];
    std::string d = "M";
    for (const TrajectoryPoint& pt : paths[i]) {
      const Vec2 c = px(pt.pos);
      d += num(c.x) + " " + num(c.y) + " L";
    }
    d.pop_back();
    svg += "<path d=\"" + d + "\" stroke=\"" + std::string(color) +
           "\" fill=\"none\" stroke-width=\"1.5\"/>\n";
    const Vec2 start = px(paths[i].front().pos);
    svg += "<circle cx=\"" + num(start.x) + "\" cy=\"" + num(start.y) +
           "\" r=\"3\" fill=\"" + std::string(color) + "\"/>\n";
  }

  if (scene) {
    for (int i = 0; i < scene->n_vehicles(); ++i) {
      const char* color = kPalette[i % (sizeof(kPalette) / sizeof(kPalette[0]))];
      const Vec2 t = px(scene->vehicles[i].target());
      const Vec2 h = scene->vehicles[i].target_heading();
      const Vec2 tip = px(scene->vehicles[i].target() + 2.0 * h);
      svg += "<circle cx=\"" + num(t.x) + "\" cy=\"" + num(t.y) + "\" r=\"" +
             num(p.r_veh * opt.scale) + "\" fill=\"none\" stroke=\"" + std::string(color) +
             "\" stroke-dasharray=\"4 3\"/>\n";
      svg += "<path d=\"M" + num(t.x) + " " + num(t.y) + " L" + num(tip.x) + " " + num(tip.y) +
             "\" stroke=\"" + std::string(color) + "\" stroke-width=\"2\"/>\n";
    }
  }

  svg += "</svg>\n";
  return svg;
}

}  // namespace dv2f
