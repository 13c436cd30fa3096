#ifndef DV2F_CORE_HPP_
#define DV2F_CORE_HPP_

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

namespace dv2f {

constexpr double kPi = 3.14159265358979323846;
constexpr double kDegenerateNorm = 1e-12;

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double c) const { return {x * c, y * c}; }
  Vec2 operator-() const { return {-x, -y}; }
  Vec2& operator+=(const Vec2& o) {
    x += o.x;
    y += o.y;
    return *this;
  }
  double dot(const Vec2& o) const { return x * o.x + y * o.y; }
  // z-component of the 3D cross product with both vectors lifted to z=0.
  double cross(const Vec2& o) const { return x * o.y - y * o.x; }
  double norm() const { return std::hypot(x, y); }
};

inline Vec2 operator*(double c, const Vec2& v) { return v * c; }

// Counterclockwise rotation of v by angle rho.
inline Vec2 rotate(const Vec2& v, double rho) {
  const double c = std::cos(rho), s = std::sin(rho);
  return {c * v.x - s * v.y, s * v.x + c * v.y};
}

inline Vec2 unit_from_angle(double a) { return {std::cos(a), std::sin(a)}; }

// Wraps an angle into (-pi, pi].
double wrap_angle(double a);

struct UnitResult {
  Vec2 v;
  bool degenerate = false;
};

// Normalizes a vector; near-zero magnitude yields the zero vector with the
// degenerate flag set, callers treat that as "no preferred direction".
UnitResult f_uni(const Vec2& v);

inline double f_sgn(double a) { return a >= 0.0 ? 1.0 : -1.0; }
inline double f_pos(double a) { return a > 0.0 ? 1.0 : 0.0; }

struct ModelParams {
  double dt = 0.2;         // timestep [s]
  double beta = 0.99;      // friction coefficient
  double gamma = 0.5;      // inverse wheelbase [1/m]
  double pedal_max = 1.0;  // P [m/s^2]
  double steer_max = 0.8;  // Phi [rad]
  double v_d = 2.5;        // default reference speed [m/s]
  double r_p = 5.0;        // parking radius [m]
  double r_veh = 1.5;      // vehicle radius [m]
  double r_c = 1.5;        // static safety margin [m]
  double eps_p = 0.25;     // position tolerance [m]
  double eps_o = 0.2;      // orientation tolerance [rad]
  double eps_c = 0.5;      // forbidden-direction tolerance [m]
  double eps_v = 1e-3;     // speed singularity threshold [m/s]
  int horizon = 500;       // rollout steps

  // Flat JSON object; omitted fields keep their defaults.
  std::string to_json() const;
  static ModelParams from_json(const std::string& text);
};

struct VehicleState {
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;  // wrapped to (-pi, pi]
  double v = 0.0;
  double x_tar = 0.0;
  double y_tar = 0.0;
  double theta_tar = 0.0;  // wrapped to (-pi, pi]

  Vec2 position() const { return {x, y}; }
  Vec2 target() const { return {x_tar, y_tar}; }
  Vec2 heading() const { return unit_from_angle(theta); }        // U_t
  Vec2 target_heading() const { return unit_from_angle(theta_tar); }  // U_tar
};

struct ObstacleState {
  double x = 0.0;
  double y = 0.0;
  double r = 1.0;  // radius of the circumscribing circle, > 0

  Vec2 position() const { return {x, y}; }
};

struct ControlCommand {
  double pedal = 0.0;  // [-P, P]
  double steer = 0.0;  // [-Phi, Phi]

  static ControlCommand clamped(double pedal, double steer, const ModelParams& p);
};

// Agent id convention used for neighbor sets and diagnostics: vehicle j has
// id j, obstacle k has id n_vehicles + k.
struct Scene {
  std::vector<VehicleState> vehicles;
  std::vector<ObstacleState> obstacles;
  int t = 0;

  int n_vehicles() const { return static_cast<int>(vehicles.size()); }
  int n_obstacles() const { return static_cast<int>(obstacles.size()); }
  bool id_is_obstacle(int id) const { return id >= n_vehicles(); }
  int obstacle_index(int id) const { return id - n_vehicles(); }
};

}  // namespace dv2f

#endif  // DV2F_CORE_HPP_
