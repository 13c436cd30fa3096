#ifndef DV2F_FIELD_HPP_
#define DV2F_FIELD_HPP_

#include <vector>

#include "dv2f/core.hpp"

namespace dv2f {

// Per-vehicle field evaluation record, serialized into trajectory files.
struct FieldDiagnostics {
  Vec2 u_tar{};            // target-reaching component
  Vec2 u_coll{};           // summed avoidance component
  Vec2 u_hat{};            // ideal reference orientation (unit unless degenerate)
  bool degenerate = false; // exact cancellation, heading kept
  double theta_hat = 0.0;
  double v_hat = 0.0;
  bool forbid_forward = false;
  bool forbid_backward = false;
  std::vector<int> active_neighbors;  // agent ids passing the edge filter
};

// Coasting prediction of the next position (current speed and heading, zero
// steering); the field is evaluated from this point.
Vec2 predicted_next_position(const VehicleState& s, const ModelParams& p);

// Target-reaching component of the reference orientation: far field aims at
// the target, the marginal band may flip to prevent circling, the parking
// regime blends target heading with approach direction.
Vec2 target_component(const VehicleState& s, const Vec2& next, const ModelParams& p);

// Repulsive component for one static obstacle, plus the tangential term that
// circulates the vehicle clockwise around it. Zero outside the speed-grown
// avoidance margin.
Vec2 obstacle_component(const VehicleState& s, const Vec2& next, const ObstacleState& o,
                        const ModelParams& p);

// Same form for another vehicle: other radius is r_veh and the dynamic margin
// grows with both speeds.
Vec2 vehicle_component(const VehicleState& s_i, const Vec2& next_i, const VehicleState& s_j,
                       const Vec2& next_j, const ModelParams& p);

struct OrientationResult {
  Vec2 u_tar{};
  Vec2 u_coll{};
  Vec2 u_hat{};
  double theta_hat = 0.0;
  bool degenerate = false;
};

// u_hat = f_uni(u_tar + sum of avoidance terms over neighbors in stable index
// order); exact cancellation keeps the current heading.
OrientationResult ideal_orientation(const VehicleState& s, const Scene& scene,
                                    const std::vector<int>& neighbors, const ModelParams& p);

struct ForbiddenFlags {
  bool forward = false;
  bool backward = false;
};

// Forward/backward guards near active neighbors, evaluated against the real
// (reachable) orientation. A perpendicular approach sets neither flag.
ForbiddenFlags forbidden_flags(double theta_real, const VehicleState& s, const Vec2& next,
                               const Scene& scene, const std::vector<int>& neighbors,
                               const ModelParams& p);

struct ParkingSpeed {
  double v_tar = 0.0;
  double dir = 1.0;  // longitudinal direction carried to the next step
};

// Reference speed toward the target: full v_d outside the parking radius
// (signed by alignment with the ideal orientation), tapered inside, with
// hysteresis on the drive direction to avoid rapid sign flips.
ParkingSpeed parking_speed(const VehicleState& s, double theta_real, const Vec2& u_hat,
                           double prev_dir, const ModelParams& p);

// Collision-override of the reference speed from the forbidden flags.
double ideal_speed(bool forbid_forward, bool forbid_backward, double v_tar,
                   const ModelParams& p);

}  // namespace dv2f

#endif  // DV2F_FIELD_HPP_
