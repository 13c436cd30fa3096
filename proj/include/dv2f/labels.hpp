#ifndef DV2F_LABELS_HPP_
#define DV2F_LABELS_HPP_

#include <string>
#include <vector>

#include "dv2f/scenario.hpp"
#include "dv2f/simulator.hpp"

namespace dv2f {

// Two-step position lookahead used by the state cost: the command is applied
// once, then the vehicle coasts one more position update with the new speed
// and heading.
struct Lookahead {
  Vec2 pos2{};       // position at t+2
  double theta1 = 0.0;  // orientation at t+1
  double v1 = 0.0;      // speed at t+1
};

Lookahead two_step_lookahead(const VehicleState& s, const ControlCommand& c,
                             const ModelParams& p);

// Vehicle state cost: distance to target plus quadratic-plus-linear penalties
// for every agent whose margin is violated at the looked-ahead position.
// Margins use margin_speed (the ego speed at time t).
double state_cost(const Scene& scene, int ego_index, const Vec2& pos2, double margin_speed,
                  const ModelParams& p);

// state_cost evaluated through the lookahead of a command.
double control_cost(const Scene& scene, int ego_index, const ControlCommand& c,
                    const ModelParams& p);

struct LossTerms {
  double steer = 0.0;
  double pedal = 0.0;
};

// Self-supervised loss terms. Steering is squared error against the reference.
// The pedal term switches to a relative state-cost comparison when the vehicle
// is far from parking and the reference speed saturates at v_d; the reference
// steering angle is used inside both cost evaluations.
LossTerms training_loss(const Scene& scene, int ego_index, const ControlCommand& pred,
                        const ControlCommand& ref, double ref_v_next, const ModelParams& p);

// Gaussian data-augmentation noise on (x, y, theta, v) with the linearly
// decaying schedule sigma_t = ((T - t) / T) * sigma0; targets untouched.
struct PerturbSigma {
  double x = 0.25;
  double y = 0.25;
  double theta = 0.1;
  double v = 0.1;
};

VehicleState perturb(const VehicleState& s, int t, int T, const PerturbSigma& sigma0, Rng& rng);

// One JSON-lines record per (step, vehicle) for every frame with a successor.
// Neighbor ids follow the Scene convention (vehicle j -> j, obstacle k ->
// n_vehicles + k).
std::string export_labels(const Rollout& r, const std::string& scenario_id);

}  // namespace dv2f

#endif  // DV2F_LABELS_HPP_
