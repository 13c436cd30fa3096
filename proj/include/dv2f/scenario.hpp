#ifndef DV2F_SCENARIO_HPP_
#define DV2F_SCENARIO_HPP_

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "dv2f/core.hpp"

namespace dv2f {

// Fixed-algorithm 64-bit generator (splitmix64) so fixtures reproduce across
// platforms and language ports.
class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(seed) {}

  uint64_t next_u64();
  double uniform();  // [0, 1)
  double uniform(double lo, double hi);
  double gaussian(double mean, double stddev);

 private:
  uint64_t state_;
  bool has_cached_ = false;
  double cached_ = 0.0;
};

enum class GenMode { kCollision, kParking, kNormal };

GenMode parse_gen_mode(const std::string& name);
std::string gen_mode_name(GenMode mode);

struct GenSpec {
  int n_vehicles = 0;
  int n_obstacles = 0;
  GenMode mode = GenMode::kNormal;
  double map_extent = 0.0;  // square half-width; 0 picks the default scaling
  double obstacle_radius_min = 1.0;
  double obstacle_radius_max = 2.0;
  uint64_t seed = 0;
};

double default_map_extent(int n_vehicles);
// Extent used by generate(): also spreads out scenes with many obstacles so
// obstacle fields do not blanket the map.
double default_map_extent(int n_vehicles, int n_obstacles);

struct GenerationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Seed-deterministic scene generation in the three placement modes. Re-samples
// until validation passes; throws GenerationError when the retry budget (1000)
// is exhausted.
Scene generate(const GenSpec& spec);

// Placement constraints: distinct starts, distinct targets, no overlap with
// obstacle bodies, and no target inside an obstacle's influence circle.
// Starts inside influence circles are permitted.
std::vector<std::string> validate(const Scene& scene, const ModelParams& p);

std::string save_scene(const Scene& scene);
Scene load_scene(const std::string& text);

std::string save_batch(const std::vector<Scene>& scenes);
std::vector<Scene> load_batch(const std::string& text);

}  // namespace dv2f

#endif  // DV2F_SCENARIO_HPP_
