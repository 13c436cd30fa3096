#ifndef DV2F_SIMULATOR_HPP_
#define DV2F_SIMULATOR_HPP_

#include <string>
#include <vector>

#include "dv2f/controller.hpp"
#include "dv2f/core.hpp"

namespace dv2f {

struct CollisionEvent {
  int t = 0;
  int a = 0;  // vehicle index
  int b = 0;  // agent id (vehicle index or n_vehicles + obstacle index)
};

struct Frame {
  Scene scene;
  ControlOutput controls;  // commands computed at this scene; applied unless terminal
};

struct Rollout {
  std::vector<Frame> frames;  // frames[t+1].scene = step(frames[t])
  std::vector<CollisionEvent> collision_events;
  int terminated_at = 0;  // number of transitions taken
  ModelParams params;
};

// Geometric overlap test with strict inequality; the touching boundary is not
// a collision.
std::vector<CollisionEvent> detect_collisions(const Scene& scene, const ModelParams& p);

bool is_parked(const VehicleState& s, const ModelParams& p);

// Threshold below which a parked vehicle counts as stopped for early
// termination.
constexpr double kParkedSpeed = 0.05;

// Lockstep closed-loop rollout for up to p.horizon steps. Terminates early
// once every vehicle is parked and slower than kParkedSpeed. Collisions are
// recorded, never simulated; vehicles pass through.
Rollout rollout(const Scene& scene0, const ModelParams& p);

// JSON-lines trajectory: one record per frame with per-vehicle state,
// command, references, flags and that frame's collision events. Decimal
// formatting uses 9 significant digits.
std::string rollout_to_jsonl(const Rollout& r);

}  // namespace dv2f

#endif  // DV2F_SIMULATOR_HPP_
