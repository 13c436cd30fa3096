#include "dv2f/core.hpp"

#include <algorithm>
#include <stdexcept>

#include <json.hpp>

namespace dv2f {

double wrap_angle(double a) {
  if (!std::isfinite(a)) {
    throw std::invalid_argument("wrap_angle: non-finite input");
  }
  double r = std::fmod(a, 2.0 * kPi);
  if (r <= -kPi) {
    r += 2.0 * kPi;
  } else if (r > kPi) {
    r -= 2.0 * kPi;
  }
  return r;
}

UnitResult f_uni(const Vec2& v) {
  const double n = v.norm();
  if (n < kDegenerateNorm) {
    return {{0.0, 0.0}, true};
  }
  return {{v.x / n, v.y / n}, false};
}

ControlCommand ControlCommand::clamped(double pedal, double steer, const ModelParams& p) {
  ControlCommand c;
  c.pedal = std::clamp(pedal, -p.pedal_max, p.pedal_max);
  c.steer = std::clamp(steer, -p.steer_max, p.steer_max);
  return c;
}

std::string ModelParams::to_json() const {
  nlohmann::json j;
  j["dt"] = dt;
  j["beta"] = beta;
  j["gamma"] = gamma;
  j["pedal_max"] = pedal_max;
  j["steer_max"] = steer_max;
  j["v_d"] = v_d;
  j["r_p"] = r_p;
  j["r_veh"] = r_veh;
  j["r_c"] = r_c;
  j["eps_p"] = eps_p;
  j["eps_o"] = eps_o;
  j["eps_c"] = eps_c;
  j["eps_v"] = eps_v;
  j["horizon"] = horizon;
  return j.dump();
}

ModelParams ModelParams::from_json(const std::string& text) {
  const nlohmann::json j = nlohmann::json::parse(text);
  ModelParams p;
  p.dt = j.value("dt", p.dt);
  p.beta = j.value("beta", p.beta);
  p.gamma = j.value("gamma", p.gamma);
  p.pedal_max = j.value("pedal_max", p.pedal_max);
  p.steer_max = j.value("steer_max", p.steer_max);
  p.v_d = j.value("v_d", p.v_d);
  p.r_p = j.value("r_p", p.r_p);
  p.r_veh = j.value("r_veh", p.r_veh);
  p.r_c = j.value("r_c", p.r_c);
  p.eps_p = j.value("eps_p", p.eps_p);
  p.eps_o = j.value("eps_o", p.eps_o);
  p.eps_c = j.value("eps_c", p.eps_c);
  p.eps_v = j.value("eps_v", p.eps_v);
  p.horizon = j.value("horizon", p.horizon);
  return p;
}

}  // namespace dv2f
