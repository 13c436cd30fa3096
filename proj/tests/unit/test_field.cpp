#include <doctest.h>

#include <cmath>

#include "dv2f/controller.hpp"
#include "dv2f/field.hpp"
#include "dv2f/scenario.hpp"

using namespace dv2f;

namespace {

VehicleState make_state(double x, double y, double theta, double v, double x_tar = 0.0,
                        double y_tar = 0.0, double theta_tar = 0.0) {
  VehicleState s;
  s.x = x;
  s.y = y;
  s.theta = theta;
  s.v = v;
  s.x_tar = x_tar;
  s.y_tar = y_tar;
  s.theta_tar = theta_tar;
  return s;
}

}  // namespace

TEST_CASE("predicted_next_position") {
  const ModelParams p;
  Vec2 n = predicted_next_position(make_state(1, 2, 0.5, 0.0), p);
  CHECK(n.x == 1.0);
  CHECK(n.y == 2.0);

  n = predicted_next_position(make_state(0, 0, 0, 1.0), p);
  CHECK(n.x == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(n.y == doctest::Approx(0.0));

  n = predicted_next_position(make_state(0, 0, kPi / 2, 2.0), p);
  CHECK(n.x == doctest::Approx(0.0));
  CHECK(n.y == doctest::Approx(0.4).epsilon(1e-12));
}

TEST_CASE("target_component far field") {
  const ModelParams p;
  const VehicleState s = make_state(0, 0, 0, 0, 10, 0, 0);
  const Vec2 u = target_component(s, {0, 0}, p);  // 10 > 5 + 3.125
  CHECK(u.x == doctest::Approx(1.0));
  CHECK(u.y == doctest::Approx(0.0));
}

TEST_CASE("target_component marginal band flip") {
  const ModelParams p;
  // 5 < 6.5 < 8.125, heading opposite the target: flip to drive in reverse.
  const VehicleState s = make_state(0, 0, kPi, 0, 6.5, 0, 0);
  const Vec2 u = target_component(s, {0, 0}, p);
  CHECK(u.x == doctest::Approx(-1.0));
  CHECK(u.y == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("target_component parking blend") {
  const ModelParams p;
  // lambda_tar = (1/5 + 1) * 1 = 1.2; f_uni((1,0) + 1.2*(1,0)) = (1,0)
  const VehicleState s = make_state(0, 0, 0.3, 0, 1, 0, 0);
  const Vec2 u = target_component(s, {0, 0}, p);
  CHECK(u.x == doctest::Approx(1.0));
  CHECK(u.y == doctest::Approx(0.0));
}

TEST_CASE("target_component exactly at target keeps target heading") {
  const ModelParams p;
  const VehicleState s = make_state(0, 0, 0.3, 0, 0, 0, 1.1);
  const Vec2 u = target_component(s, {0, 0}, p);
  CHECK(u.x == doctest::Approx(std::cos(1.1)));
  CHECK(u.y == doctest::Approx(std::sin(1.1)));
}

TEST_CASE("obstacle_component examples") {
  const ModelParams p;
  SUBCASE("inactive outside the margin") {
    const VehicleState s = make_state(0, 0, 0, 0, -5, 0, 0);
    ObstacleState o{10, 0, 1};
    const Vec2 u = obstacle_component(s, {0, 0}, o, p);  // alpha = 6 > 0
    CHECK(u.x == 0.0);
    CHECK(u.y == 0.0);
  }
  SUBCASE("pure repulsion when ego is between obstacle and target") {
    const VehicleState s = make_state(0, 0, 0, 0, -5, 0, 0);
    ObstacleState o{3, 0, 1};
    const Vec2 u = obstacle_component(s, {0, 0}, o, p);  // alpha = -1, beta = 0
    CHECK(u.x == doctest::Approx(-1.0));
    CHECK(u.y == doctest::Approx(0.0));
  }
  SUBCASE("tangential term when obstacle is toward the target") {
    const VehicleState s = make_state(0, 0, 0, 0, 5, 0, 0);
    ObstacleState o{3, 0, 1};
    const Vec2 u = obstacle_component(s, {0, 0}, o, p);  // beta = 2, R = (0,1)
    CHECK(u.x == doctest::Approx(-1.0));
    CHECK(u.y == doctest::Approx(2.0));
  }
}

TEST_CASE("obstacle repulsion grows monotonically inside the margin") {
  const ModelParams p;
  ObstacleState o{0, 0, 1};
  double prev = 0.0;
  bool first = true;
  // target behind the ego keeps beta = 0 so only the radial term is active
  for (double d = 3.9; d > 0.5; d -= 0.2) {
    const VehicleState s = make_state(d, 0, 0, 0, d + 10.0, 0, 0);
    const Vec2 u = obstacle_component(s, {d, 0}, o, p);
    const double mag = u.norm();
    if (!first) CHECK(mag > prev);
    prev = mag;
    first = false;
  }
}

TEST_CASE("obstacle activation boundary is exact") {
  const ModelParams p;
  ObstacleState o{0, 0, 1};
  // alpha = d - 1 - 1.5 - 1.5 = d - 4
  const VehicleState far = make_state(4.01, 0, 0, 0, 20, 0, 0);
  CHECK(obstacle_component(far, {4.01, 0}, o, p).norm() == 0.0);
  // target behind the obstacle keeps the tangential term alive at alpha = 0
  const VehicleState at = make_state(4.0, 0, 0, 0, -20, 0, 0);
  CHECK(obstacle_component(at, {4.0, 0}, o, p).norm() > 0.0);  // alpha = 0 is active
}

TEST_CASE("vehicle_component examples") {
  const ModelParams p;
  SUBCASE("inactive far apart") {
    const VehicleState si = make_state(0, 0, 0, 0, -5, 0, 0);
    const VehicleState sj = make_state(10, 0, 0, 0, 0, 0, 0);
    const Vec2 u = vehicle_component(si, {0, 0}, sj, {10, 0}, p);
    CHECK(u.norm() == 0.0);
  }
  SUBCASE("static margin") {
    const VehicleState si = make_state(0, 0, 0, 0, -5, 0, 0);
    const VehicleState sj = make_state(3.5, 0, 0, 0, 0, 0, 0);
    const Vec2 u = vehicle_component(si, {0, 0}, sj, {3.5, 0}, p);
    CHECK(u.x == doctest::Approx(-1.0));
    CHECK(u.y == doctest::Approx(0.0));
  }
  SUBCASE("dynamic margin grows with both speeds") {
    const VehicleState si = make_state(0, 0, 0, 1.0, -5, 0, 0);
    const VehicleState sj = make_state(3.5, 0, 0, 1.0, 0, 0, 0);
    const Vec2 u = vehicle_component(si, {0, 0}, sj, {3.5, 0}, p);
    CHECK(u.x == doctest::Approx(-3.0));
    CHECK(u.y == doctest::Approx(0.0));
  }
}

TEST_CASE("ideal_orientation") {
  const ModelParams p;
  SUBCASE("no neighbors, far target") {
    Scene scene;
    scene.vehicles.push_back(make_state(0, 0, 0.4, 0, 30, 0, 0));
    const auto r = ideal_orientation(scene.vehicles[0], scene, {}, p);
    CHECK(r.u_hat.x == doctest::Approx(1.0));
    CHECK(r.u_hat.y == doctest::Approx(0.0));
    CHECK(r.theta_hat == doctest::Approx(0.0));
  }
  SUBCASE("exact cancellation keeps heading") {
    // Ego parked on its target: u_tar = U_tar = (1,0); a vehicle ahead at
    // distance 3.5 contributes exactly (-1,0) with beta = 0.
    Scene scene;
    scene.vehicles.push_back(make_state(0, 0, 0.3, 0, 0, 0, 0));
    scene.vehicles.push_back(make_state(3.5, 0, 0, 0, 20, 20, 0));
    const auto r = ideal_orientation(scene.vehicles[0], scene, {1}, p);
    CHECK(r.degenerate);
    CHECK(r.u_hat.x == doctest::Approx(std::cos(0.3)));
    CHECK(r.u_hat.y == doctest::Approx(std::sin(0.3)));
  }
  SUBCASE("vector sum") {
    // u_tar = (1,0) far field; obstacle at (3,0) with target (5,0) shifted so
    // u_coll = (-1, 2); expected u_hat = f_uni((0,2)) = (0,1).
    Scene scene;
    scene.vehicles.push_back(make_state(0, 0, 0, 0, 5, 0, 0));
    scene.obstacles.push_back({3, 0, 1});
    // compose manually from the components to freeze the expected sum
    const Vec2 u_tar{1, 0};
    const Vec2 u_coll{-1, 2};
    const auto sum = f_uni(u_tar + u_coll);
    CHECK(sum.v.x == doctest::Approx(0.0));
    CHECK(sum.v.y == doctest::Approx(1.0));
    // and the pipeline agrees on this fixture apart from the parking-band
    // target component (|X_tar| = 5 <= r_p), so check u_coll directly
    const auto r = ideal_orientation(scene.vehicles[0], scene, {1}, p);
    CHECK(r.u_coll.x == doctest::Approx(-1.0));
    CHECK(r.u_coll.y == doctest::Approx(2.0));
  }
}

TEST_CASE("unit norm invariant") {
  const ModelParams p;
  Rng rng(3);
  for (int i = 0; i < 300; ++i) {
    Scene scene;
    scene.vehicles.push_back(make_state(rng.uniform(-20, 20), rng.uniform(-20, 20),
                                        wrap_angle(rng.uniform(-kPi, kPi)),
                                        rng.uniform(-2.5, 2.5), rng.uniform(-20, 20),
                                        rng.uniform(-20, 20),
                                        wrap_angle(rng.uniform(-kPi, kPi))));
    scene.obstacles.push_back(
        {rng.uniform(-20, 20), rng.uniform(-20, 20), rng.uniform(1.0, 3.0)});
    const auto r = ideal_orientation(scene.vehicles[0], scene, {1}, p);
    CHECK(r.u_hat.norm() == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("forbidden_flags") {
  const ModelParams p;
  Scene scene;
  scene.vehicles.push_back(make_state(0, 0, 0, 0, 20, 0, 0));
  scene.obstacles.push_back({2, 0, 1});  // alpha = -2, active with eps_c
  const Vec2 next{0, 0};

  SUBCASE("facing the obstacle forbids forward") {
    const auto f = forbidden_flags(0.0, scene.vehicles[0], next, scene, {1}, p);
    CHECK(f.forward);
    CHECK_FALSE(f.backward);
  }
  SUBCASE("facing away forbids backward") {
    const auto f = forbidden_flags(kPi, scene.vehicles[0], next, scene, {1}, p);
    CHECK_FALSE(f.forward);
    CHECK(f.backward);
  }
  SUBCASE("no active neighbors") {
    const auto f = forbidden_flags(0.0, scene.vehicles[0], next, scene, {}, p);
    CHECK_FALSE(f.forward);
    CHECK_FALSE(f.backward);
  }
  SUBCASE("perpendicular approach sets neither") {
    // obstacle exactly beside the motion axis so the dot product is zero
    Scene side;
    side.vehicles.push_back(make_state(0, 0, 0, 0, 20, 0, 0));
    side.obstacles.push_back({0, 2, 1});
    const auto f = forbidden_flags(0.0, side.vehicles[0], {0, 0}, side, {1}, p);
    CHECK_FALSE(f.forward);
    CHECK_FALSE(f.backward);
  }
}

TEST_CASE("parking_speed") {
  const ModelParams p;
  SUBCASE("at target exactly") {
    const VehicleState s = make_state(0, 0, 0, 0, 0, 0, 0);
    const auto r = parking_speed(s, 0.0, {1, 0}, 1.0, p);
    CHECK(r.v_tar == doctest::Approx(0.0));
  }
  SUBCASE("mid-parking taper") {
    // |X_tar| = 2.5, dtheta = 0: lambda_bar = 0.5, sqrt branch, xi = +1
    const VehicleState s = make_state(0, 0, 0, 0, 2.5, 0, 0);
    const auto r = parking_speed(s, 0.0, {1, 0}, 1.0, p);
    CHECK(r.v_tar == doctest::Approx(std::sqrt(0.5) * 2.5).epsilon(1e-12));  // ~1.7678
  }
  SUBCASE("outside r_p against the field drives in reverse") {
    const VehicleState s = make_state(0, 0, 0, 0, 20, 0, 0);
    const auto r = parking_speed(s, kPi, {1, 0}, 1.0, p);  // u_real = (-1,0)
    CHECK(r.v_tar == doctest::Approx(-2.5));
    CHECK(r.dir == -1.0);
  }
  SUBCASE("hysteresis keeps previous direction in the dead band") {
    // u_real.X_tar = 0.2 (inside +-0.25), dtheta = 1.0 keeps it off-tolerance
    const VehicleState s = make_state(0, 0, 0, 0, 0.2, 0, 1.0);
    auto r = parking_speed(s, 0.0, {1, 0}, -1.0, p);
    CHECK(r.dir == -1.0);
    CHECK(r.v_tar < 0.0);
    r = parking_speed(s, 0.0, {1, 0}, 1.0, p);
    CHECK(r.dir == 1.0);
  }
  SUBCASE("zero reference speed once inside both tolerances") {
    const VehicleState s = make_state(0, 0, 0, 0, 0.2, 0, 0.1);
    const auto r = parking_speed(s, 0.0, {1, 0}, 1.0, p);
    CHECK(r.v_tar == 0.0);
  }
}

TEST_CASE("ideal_speed cases") {
  const ModelParams p;
  CHECK(ideal_speed(true, true, 2.5, p) == 0.0);
  CHECK(ideal_speed(true, false, 2.5, p) == -2.5);
  CHECK(ideal_speed(false, true, -1.0, p) == 2.5);
  CHECK(ideal_speed(false, false, 1.7678, p) == doctest::Approx(1.7678));
}

TEST_CASE("speed bound |v_tar| <= v_d") {
  const ModelParams p;
  Rng rng(17);
  for (int i = 0; i < 500; ++i) {
    const VehicleState s =
        make_state(rng.uniform(-10, 10), rng.uniform(-10, 10), wrap_angle(rng.uniform(-kPi, kPi)),
                   rng.uniform(-2.5, 2.5), rng.uniform(-10, 10), rng.uniform(-10, 10),
                   wrap_angle(rng.uniform(-kPi, kPi)));
    const double theta_real = wrap_angle(rng.uniform(-kPi, kPi));
    const auto r = parking_speed(s, theta_real, unit_from_angle(rng.uniform(-kPi, kPi)),
                                 rng.uniform(0, 1) < 0.5 ? 1.0 : -1.0, p);
    CHECK(std::abs(r.v_tar) <= p.v_d + 1e-12);
    const double v_hat = ideal_speed(rng.uniform(0, 1) < 0.5, rng.uniform(0, 1) < 0.5, r.v_tar, p);
    CHECK(std::abs(v_hat) <= p.v_d + 1e-12);
  }
}

TEST_CASE("field rigid-transform equivariance") {
  const ModelParams p;
  Rng rng(23);
  for (int i = 0; i < 200; ++i) {
    Scene scene;
    scene.vehicles.push_back(make_state(rng.uniform(-20, 20), rng.uniform(-20, 20),
                                        wrap_angle(rng.uniform(-kPi, kPi)),
                                        rng.uniform(-2.5, 2.5), rng.uniform(-20, 20),
                                        rng.uniform(-20, 20),
                                        wrap_angle(rng.uniform(-kPi, kPi))));
    scene.vehicles.push_back(make_state(rng.uniform(-20, 20), rng.uniform(-20, 20),
                                        wrap_angle(rng.uniform(-kPi, kPi)),
                                        rng.uniform(-2.5, 2.5), rng.uniform(-20, 20),
                                        rng.uniform(-20, 20),
                                        wrap_angle(rng.uniform(-kPi, kPi))));
    scene.obstacles.push_back(
        {rng.uniform(-20, 20), rng.uniform(-20, 20), rng.uniform(1.0, 3.0)});

    const double rho = rng.uniform(-kPi, kPi);
    const Vec2 shift{rng.uniform(-10, 10), rng.uniform(-10, 10)};
    Scene moved = scene;
    for (VehicleState& v : moved.vehicles) {
      const Vec2 np = rotate(v.position(), rho) + shift;
      const Vec2 nt = rotate(v.target(), rho) + shift;
      v.x = np.x;
      v.y = np.y;
      v.theta = wrap_angle(v.theta + rho);
      v.x_tar = nt.x;
      v.y_tar = nt.y;
      v.theta_tar = wrap_angle(v.theta_tar + rho);
    }
    for (ObstacleState& o : moved.obstacles) {
      const Vec2 np = rotate(o.position(), rho) + shift;
      o.x = np.x;
      o.y = np.y;
    }

    const auto a = ideal_orientation(scene.vehicles[0], scene, {1, 2}, p);
    const auto b = ideal_orientation(moved.vehicles[0], moved, {1, 2}, p);
    const Vec2 expected = rotate(a.u_hat, rho);
    CHECK(b.u_hat.x == doctest::Approx(expected.x).epsilon(1e-9));
    CHECK(b.u_hat.y == doctest::Approx(expected.y).epsilon(1e-9));
  }
}
