#include "dv2f/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <json.hpp>

namespace dv2f {

namespace {

constexpr int kRetryBudget = 1000;
constexpr double kPlacementRadiusLo = 8.0;
constexpr double kPlacementRadiusHi = 15.0;
constexpr double kAngularJitter = 5.0 * kPi / 180.0;
constexpr double kParkingTargetRange = 10.0;

struct Placement {
  std::vector<Vec2> starts;
  std::vector<Vec2> targets;
  std::vector<ObstacleState> obstacles;
  std::vector<Vec2> conflict_centers;
  std::vector<double> center_clearances;
};

// Generation keeps starts and targets one rest-state interaction diameter
// apart (2*(r_veh + r_c)), stricter than the validation floor of 2*r_veh, so
// that vehicles parked at adjacent targets sit outside each other's avoidance
// margins and the parked configuration is a stable equilibrium.
double placement_spacing(const ModelParams& p) { return 2.0 * (p.r_veh + p.r_c); }

bool start_ok(const Placement& pl, const Vec2& pos, const ModelParams& p) {
  for (const Vec2& s : pl.starts) {
    if ((s - pos).norm() < placement_spacing(p)) return false;
  }
  return true;
}

bool target_ok(const Placement& pl, const Vec2& pos, const ModelParams& p) {
  for (const Vec2& t : pl.targets) {
    if ((t - pos).norm() < placement_spacing(p)) return false;
  }
  return true;
}

bool obstacle_ok(const Placement& pl, const ObstacleState& o, const ModelParams& p) {
  for (size_t c = 0; c < pl.conflict_centers.size(); ++c) {
    // Keep obstacle bodies out of the zone around each collision center; an
    // obstacle in the middle of a conflict turns the evasion into a drawn-out
    // three-body standoff. Parking conflicts need a much wider clear zone
    // because the pair maneuvers at low speed all around the center.
    if ((pl.conflict_centers[c] - o.position()).norm() < o.r + pl.center_clearances[c]) {
      return false;
    }
  }
  for (const ObstacleState& other : pl.obstacles) {
    // Keep a corridor between obstacle bodies wide enough for two vehicles at
    // the default collision margin to pass each other inside it, so obstacle
    // clusters never wall off a route or trap an opposing pair head-on.
    const double gap = 12.0;
    if ((other.position() - o.position()).norm() < other.r + o.r + gap) return false;
  }
  for (const Vec2& s : pl.starts) {
    if ((s - o.position()).norm() < p.r_veh + o.r) return false;
  }
  for (const Vec2& t : pl.targets) {
    // Keep targets one extra meter outside the rest-state influence circle so
    // a vehicle settling at its target is not clipped by the repulsion field
    // while it still carries residual speed.
    if ((t - o.position()).norm() < o.r + p.r_veh + p.r_c + 2.0) return false;
  }
  return true;
}

}  // namespace

uint64_t Rng::next_u64() {
  // splitmix64 (Steele, Lea, Vigna).
  uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double Rng::uniform() {
  return static_cast<double>(next_u64() >> 11) * (1.0 / 9007199254740992.0);
}

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

double Rng::gaussian(double mean, double stddev) {
  if (has_cached_) {
    has_cached_ = false;
    return mean + stddev * cached_;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double mag = std::sqrt(-2.0 * std::log(u1));
  cached_ = mag * std::sin(2.0 * kPi * u2);
  has_cached_ = true;
  return mean + stddev * mag * std::cos(2.0 * kPi * u2);
}

GenMode parse_gen_mode(const std::string& name) {
  if (name == "collision") return GenMode::kCollision;
  if (name == "parking") return GenMode::kParking;
  if (name == "normal") return GenMode::kNormal;
  throw std::invalid_argument("unknown generation mode: " + name);
}

std::string gen_mode_name(GenMode mode) {
  switch (mode) {
    case GenMode::kCollision: return "collision";
    case GenMode::kParking: return "parking";
    case GenMode::kNormal: return "normal";
  }
  return "unknown";
}

double default_map_extent(int n_vehicles) {
  return std::max(50.0, 12.0 * std::sqrt(static_cast<double>(std::max(n_vehicles, 0))));
}

double default_map_extent(int n_vehicles, int n_obstacles) {
  const double for_obstacles = 12.0 * std::sqrt(static_cast<double>(std::max(n_obstacles, 0)));
  return std::max(default_map_extent(n_vehicles), for_obstacles);
}

Scene generate(const GenSpec& spec) {
  const ModelParams p;  // placement constraints use the default geometry
  const double extent = spec.map_extent > 0.0
                            ? spec.map_extent
                            : default_map_extent(spec.n_vehicles, spec.n_obstacles);
  Rng rng(spec.seed);
  int budget = kRetryBudget;

  while (budget-- > 0) {
    Placement pl;
    std::vector<double> thetas, target_thetas;
    bool failed = false;

    // Collision centers: each serves several vehicles. All vehicles of a
    // center start at a shared approach radius so they reach the center at
    // the same time, forcing a genuine multi-way conflict.
    std::vector<Vec2> centers;
    std::vector<double> center_radii;
    std::vector<double> center_phis;
    if (spec.mode == GenMode::kCollision && spec.n_vehicles > 0) {
      const int n_centers = std::max(1, spec.n_vehicles / 2);
      const double lim = std::max(extent - kPlacementRadiusHi, 1.0);
      for (int c = 0; c < n_centers; ++c) {
        // Keep centers apart so each conflict stays local instead of merging
        // into one large scrum of vehicles from several centers. Best-effort:
        // take the first candidate with full separation, else the candidate
        // farthest from every existing center.
        Vec2 best{0.0, 0.0};
        double best_clearance = -1.0;
        for (int attempt = 0; attempt < 100; ++attempt) {
          const Vec2 cand{rng.uniform(-lim, lim), rng.uniform(-lim, lim)};
          double clearance = std::numeric_limits<double>::infinity();
          for (const Vec2& c0 : centers) {
            clearance = std::min(clearance, (c0 - cand).norm());
          }
          if (clearance > best_clearance) {
            best_clearance = clearance;
            best = cand;
          }
          if (clearance >= 2.0 * kPlacementRadiusHi) break;
        }
        centers.push_back(best);
        center_radii.push_back(rng.uniform(kPlacementRadiusLo, kPlacementRadiusHi));
        center_phis.push_back(rng.uniform(0.0, 2.0 * kPi));
      }
    }

    pl.conflict_centers = centers;
    for (size_t c = 0; c < centers.size(); ++c) {
      pl.center_clearances.push_back(c % 2 == 0 ? 1.5 : 9.0);
    }

    for (int i = 0; i < spec.n_vehicles && !failed; ++i) {
      bool placed = false;
      for (int attempt = 0; attempt < 100; ++attempt) {
        Vec2 start, target;
        switch (spec.mode) {
          case GenMode::kCollision: {
            const size_t c = i % centers.size();
            const Vec2& center = centers[c];
            const double phi = rng.uniform(0.0, 2.0 * kPi);
            const double jitter = rng.uniform(-kAngularJitter, kAngularJitter);
            if (c % 2 == 0) {
              // Crossing conflict: both vehicles of the pair pass through the
              // center at full speed from opposite approach radii.
              const double r1 = center_radii[c] + rng.uniform(-0.5, 0.5);
              const double r2 = rng.uniform(kPlacementRadiusLo, kPlacementRadiusHi);
              start = center + r1 * unit_from_angle(phi);
              target = center + r2 * unit_from_angle(phi + kPi + jitter);
            } else {
              // Parking conflict: the pair swaps sides across the center, so
              // both vehicles pass each other head-on while already inside
              // their parking zones. At reduced speed the speed-dependent
              // influence terms shrink and the safety margin alone decides
              // how early the encounter is felt.
              const double side = (i / static_cast<int>(centers.size())) % 2 == 0 ? 0.0 : kPi;
              const double axis = center_phis[c] + side;
              const double r1 = rng.uniform(kPlacementRadiusLo, kPlacementRadiusHi);
              const double r2 = 4.5 + rng.uniform(0.0, 1.0);
              start = center + r1 * unit_from_angle(axis + kPi + jitter);
              // Push the target off the shared axis so it does not sit on the
              // partner's route; the pair still meets head-on mid-corridor but
              // neither vehicle parks in the other's final approach lane.
              const Vec2 perp{-std::sin(axis), std::cos(axis)};
              target = center + r2 * unit_from_angle(axis) + 2.0 * perp;
            }
            break;
          }
          case GenMode::kParking: {
            start = {rng.uniform(-extent, extent), rng.uniform(-extent, extent)};
            const double phi = rng.uniform(0.0, 2.0 * kPi);
            target = start + rng.uniform(0.0, kParkingTargetRange) * unit_from_angle(phi);
            break;
          }
          case GenMode::kNormal: {
            start = {rng.uniform(-extent, extent), rng.uniform(-extent, extent)};
            target = {rng.uniform(-extent, extent), rng.uniform(-extent, extent)};
            break;
          }
        }
        if (start_ok(pl, start, p) && target_ok(pl, target, p)) {
          pl.starts.push_back(start);
          pl.targets.push_back(target);
          if (spec.mode == GenMode::kCollision) {
            // Face the target so conflict partners meet at the center at
            // full speed rather than wandering in at staggered times.
            const Vec2 to_tar = target - start;
            thetas.push_back(wrap_angle(std::atan2(to_tar.y, to_tar.x) +
                                        rng.uniform(-kAngularJitter, kAngularJitter)));
          } else {
            thetas.push_back(wrap_angle(rng.uniform(-kPi, kPi)));
          }
          target_thetas.push_back(wrap_angle(rng.uniform(-kPi, kPi)));
          placed = true;
          break;
        }
      }
      if (!placed) failed = true;
    }

    // Crossing centers that get a flanking obstacle: the head-on evasion
    // swerves laterally through the annulus right next to the conflict, so
    // the scene probes how much clearance the controller keeps while dodging.
    std::vector<size_t> flanked;
    for (size_t c = 0; spec.mode == GenMode::kCollision && c < centers.size(); c += 2) {
      flanked.push_back(c);
    }

    for (int k = 0; k < spec.n_obstacles && !failed; ++k) {
      bool placed = false;
      for (int attempt = 0; attempt < 100; ++attempt) {
        ObstacleState o;
        if (static_cast<size_t>(k) < flanked.size()) {
          const Vec2& center = centers[flanked[k]];
          const double ang = rng.uniform(0.0, 2.0 * kPi);
          const double rad = rng.uniform(7.0, 9.5);
          o.x = center.x + rad * std::cos(ang);
          o.y = center.y + rad * std::sin(ang);
          // Small flanker: enough to punish a zero-margin dodge that drifts
          // wide, without walling off the conflict for conservative margins.
          o.r = spec.obstacle_radius_min;
        } else {
          o.x = rng.uniform(-extent, extent);
          o.y = rng.uniform(-extent, extent);
          o.r = rng.uniform(spec.obstacle_radius_min, spec.obstacle_radius_max);
        }
        if (obstacle_ok(pl, o, p)) {
          pl.obstacles.push_back(o);
          placed = true;
          break;
        }
      }
      if (!placed) failed = true;
    }

    if (failed) continue;

    Scene scene;
    for (int i = 0; i < spec.n_vehicles; ++i) {
      VehicleState v;
      v.x = pl.starts[i].x;
      v.y = pl.starts[i].y;
      v.theta = thetas[i];
      v.v = 0.0;
      v.x_tar = pl.targets[i].x;
      v.y_tar = pl.targets[i].y;
      v.theta_tar = target_thetas[i];
      scene.vehicles.push_back(v);
    }
    scene.obstacles = pl.obstacles;
    if (validate(scene, p).empty()) {
      return scene;
    }
  }
  throw GenerationError("scene generation failed: retry budget exhausted (mode " +
                        gen_mode_name(spec.mode) + ", " + std::to_string(spec.n_vehicles) +
                        " vehicles, " + std::to_string(spec.n_obstacles) + " obstacles)");
}

std::vector<std::string> validate(const Scene& scene, const ModelParams& p) {
  std::vector<std::string> violations;
  const int n = scene.n_vehicles();
  for (int i = 0; i < n; ++i) {
    const Vec2 si = scene.vehicles[i].position();
    const Vec2 ti = scene.vehicles[i].target();
    for (int j = i + 1; j < n; ++j) {
      if ((scene.vehicles[j].position() - si).norm() < 2.0 * p.r_veh) {
        violations.push_back("start positions of vehicles " + std::to_string(i) + " and " +
                             std::to_string(j) + " overlap");
      }
      if ((scene.vehicles[j].target() - ti).norm() < 2.0 * p.r_veh) {
        violations.push_back("target positions of vehicles " + std::to_string(i) + " and " +
                             std::to_string(j) + " overlap");
      }
    }
    for (int k = 0; k < scene.n_obstacles(); ++k) {
      const ObstacleState& o = scene.obstacles[k];
      const double d_start = (o.position() - si).norm();
      const double d_target = (o.position() - ti).norm();
      if (d_start < p.r_veh + o.r) {
        violations.push_back("start of vehicle " + std::to_string(i) +
                             " overlaps obstacle " + std::to_string(k));
      }
      if (d_target < p.r_veh + o.r) {
        violations.push_back("target of vehicle " + std::to_string(i) +
                             " overlaps obstacle " + std::to_string(k));
      } else if (d_target < o.r + p.r_veh + p.r_c) {
        violations.push_back("target of vehicle " + std::to_string(i) +
                             " inside influence circle of obstacle " + std::to_string(k));
      }
    }
  }
  return violations;
}

namespace {

nlohmann::json scene_to_json(const Scene& scene) {
  nlohmann::json j;
  auto& vehicles = j["vehicles"] = nlohmann::json::array();
  for (const VehicleState& v : scene.vehicles) {
    vehicles.push_back({{"x", v.x},
                        {"y", v.y},
                        {"theta", v.theta},
                        {"v", v.v},
                        {"x_tar", v.x_tar},
                        {"y_tar", v.y_tar},
                        {"theta_tar", v.theta_tar}});
  }
  auto& obstacles = j["obstacles"] = nlohmann::json::array();
  for (const ObstacleState& o : scene.obstacles) {
    obstacles.push_back({{"x", o.x}, {"y", o.y}, {"r", o.r}});
  }
  return j;
}

double require_field(const nlohmann::json& j, const char* name, const std::string& path) {
  if (!j.contains(name)) {
    throw std::runtime_error("missing field '" + std::string(name) + "' at " + path);
  }
  return j.at(name).get<double>();
}

Scene scene_from_json(const nlohmann::json& j, const std::string& path) {
  Scene scene;
  int idx = 0;
  for (const auto& vj : j.value("vehicles", nlohmann::json::array())) {
    const std::string vp = path + ".vehicles[" + std::to_string(idx++) + "]";
    VehicleState v;
    v.x = require_field(vj, "x", vp);
    v.y = require_field(vj, "y", vp);
    v.theta = wrap_angle(require_field(vj, "theta", vp));
    v.v = vj.value("v", 0.0);
    v.x_tar = require_field(vj, "x_tar", vp);
    v.y_tar = require_field(vj, "y_tar", vp);
    v.theta_tar = wrap_angle(require_field(vj, "theta_tar", vp));
    scene.vehicles.push_back(v);
  }
  idx = 0;
  for (const auto& oj : j.value("obstacles", nlohmann::json::array())) {
    const std::string op = path + ".obstacles[" + std::to_string(idx++) + "]";
    ObstacleState o;
    o.x = require_field(oj, "x", op);
    o.y = require_field(oj, "y", op);
    o.r = require_field(oj, "r", op);
    if (!(o.r > 0.0)) {
      throw std::runtime_error("non-positive obstacle radius at " + op);
    }
    scene.obstacles.push_back(o);
  }
  return scene;
}

}  // namespace

std::string save_scene(const Scene& scene) { return scene_to_json(scene).dump(); }

Scene load_scene(const std::string& text) {
  return scene_from_json(nlohmann::json::parse(text), "$");
}

std::string save_batch(const std::vector<Scene>& scenes) {
  nlohmann::json j = nlohmann::json::array();
  for (const Scene& s : scenes) {
    j.push_back(scene_to_json(s));
  }
  return j.dump();
}

std::vector<Scene> load_batch(const std::string& text) {
  const nlohmann::json j = nlohmann::json::parse(text);
  if (!j.is_array()) {
    throw std::runtime_error("batch file must be a JSON array of scenes");
  }
  std::vector<Scene> scenes;
  for (size_t i = 0; i < j.size(); ++i) {
    scenes.push_back(scene_from_json(j[i], "$[" + std::to_string(i) + "]"));
  }
  return scenes;
}

}  // namespace dv2f
