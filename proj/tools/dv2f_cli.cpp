#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>
#include <zlib.h>

#include "dv2f/labels.hpp"
#include "dv2f/metrics.hpp"
#include "dv2f/plot.hpp"
#include "dv2f/scenario.hpp"
#include "dv2f/simulator.hpp"

namespace fs = std::filesystem;
using namespace dv2f;

namespace {

int thread_budget(int requested) {
  int n = requested > 0 ? requested : static_cast<int>(std::thread::hardware_concurrency());
  if (n < 1) n = 1;
  if (const char* env = std::getenv("DV2F_THREADS")) {
    const int cap = std::atoi(env);
    if (cap >= 1) n = std::min(n, cap);
  }
  return n;
}

void write_file_atomic(const fs::path& path, const std::string& content) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + tmp.string());
    out << content;
    if (!out) throw std::runtime_error("write failed: " + tmp.string());
  }
  fs::rename(tmp, path);
}

void write_file_gzip(const fs::path& path, const std::string& content) {
  const fs::path tmp = path.string() + ".tmp";
  gzFile gz = gzopen(tmp.c_str(), "wb");
  if (!gz) throw std::runtime_error("cannot open " + tmp.string());
  const int written = gzwrite(gz, content.data(), static_cast<unsigned>(content.size()));
  gzclose(gz);
  if (written != static_cast<int>(content.size())) {
    throw std::runtime_error("gzip write failed: " + tmp.string());
  }
  fs::rename(tmp, path);
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ModelParams params_from_flags(const std::vector<std::string>& overrides, double r_c,
                              int horizon) {
  nlohmann::json j = nlohmann::json::object();
  for (const std::string& kv : overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      throw std::runtime_error("--param expects name=value, got '" + kv + "'");
    }
    j[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
  }
  ModelParams p = ModelParams::from_json(j.dump());
  if (r_c >= 0.0) p.r_c = r_c;
  if (horizon > 0) p.horizon = horizon;
  return p;
}

// Deterministic per-case seeds from one base seed; independent of the
// vehicle/obstacle counts so regimes can be matched case-by-case.
std::vector<uint64_t> case_seeds(uint64_t base, int cases) {
  Rng rng(base);
  std::vector<uint64_t> seeds(cases);
  for (auto& s : seeds) s = rng.next_u64();
  return seeds;
}

struct CaseResult {
  bool ok = false;
  std::string error;
  MetricsReport report;
  std::string trajectory;
  std::string labels;
};

// Rolls out every scene with a bounded worker pool; results land in
// index-order slots so outputs are independent of scheduling.
std::vector<CaseResult> run_batch(const std::vector<Scene>& scenes, const ModelParams& p,
                                  int parallel, bool want_trajectory, bool want_labels) {
  std::vector<CaseResult> results(scenes.size());
  std::atomic<size_t> cursor{0};
  auto worker = [&]() {
    for (;;) {
      const size_t i = cursor.fetch_add(1);
      if (i >= scenes.size()) return;
      try {
        const Rollout r = rollout(scenes[i], p);
        results[i].report = evaluate(r, p);
        if (want_trajectory) results[i].trajectory = rollout_to_jsonl(r);
        if (want_labels) results[i].labels = export_labels(r, std::to_string(i));
        results[i].ok = true;
      } catch (const std::exception& e) {
        results[i].error = e.what();
      }
    }
  };
  const int n_threads = thread_budget(parallel);
  std::vector<std::thread> pool;
  for (int t = 1; t < n_threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return results;
}

BatchSummary summarize(const std::vector<Scene>& scenes, const std::vector<CaseResult>& results,
                       double wall_time_s) {
  BatchSummary s;
  s.cases = static_cast<int>(scenes.size());
  if (!scenes.empty()) {
    s.n_vehicles = scenes.front().n_vehicles();
    s.n_obstacles = scenes.front().n_obstacles();
  }
  int ok = 0;
  for (const CaseResult& r : results) {
    if (!r.ok) continue;
    ++ok;
    s.success += r.report.success_rate;
    s.reach += r.report.reach_rate;
    s.safe += r.report.safe_rate;
    s.position_only += r.report.position_only_success;
  }
  if (ok > 0) {
    s.success /= ok;
    s.reach /= ok;
    s.safe /= ok;
    s.position_only /= ok;
  }
  s.wall_time_s = wall_time_s;
  return s;
}

int cmd_gen(int vehicles, int obstacles, const std::string& mode, int cases, uint64_t seed,
            std::string out) {
  const GenMode m = parse_gen_mode(mode);
  if (out.empty()) {
    out = "scenes_" + std::to_string(vehicles) + "v_" + std::to_string(obstacles) + "o_" +
          mode + "_" + std::to_string(seed) + ".json";
  }
  const auto seeds = case_seeds(seed, cases);
  std::vector<Scene> scenes;
  scenes.reserve(cases);
  for (int c = 0; c < cases; ++c) {
    GenSpec spec;
    spec.n_vehicles = vehicles;
    spec.n_obstacles = obstacles;
    spec.mode = m;
    spec.seed = seeds[c];
    scenes.push_back(generate(spec));
  }
  write_file_atomic(out, save_batch(scenes));
  std::cout << "wrote " << scenes.size() << " scenes to " << out << "\n";
  return 0;
}

int cmd_run(const std::string& batch_file, const std::string& out_dir, int parallel,
            const ModelParams& p, bool no_trajectories) {
  const auto scenes = load_batch(read_file(batch_file));
  fs::create_directories(out_dir);

  const auto t0 = std::chrono::steady_clock::now();
  const auto results = run_batch(scenes, p, parallel, !no_trajectories, false);
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  char name[64];
  for (size_t i = 0; i < results.size(); ++i) {
    if (!results[i].ok) {
      std::cerr << "{\"case\":" << i << ",\"error\":\"" << results[i].error << "\"}\n";
      continue;
    }
    if (!no_trajectories) {
      std::snprintf(name, sizeof(name), "traj_%04zu.jsonl", i);
      write_file_atomic(fs::path(out_dir) / name, results[i].trajectory);
    }
  }

  const BatchSummary summary = summarize(scenes, results, wall);
  write_file_atomic(fs::path(out_dir) / "metrics.csv",
                    batch_summary_csv_header() + "\n" + batch_summary_csv_row(summary) + "\n");
  std::cout << batch_summary_csv_header() << "\n" << batch_summary_csv_row(summary) << "\n";

  for (const CaseResult& r : results) {
    if (!r.ok) return 1;
  }
  return 0;
}

int cmd_labels(const std::string& batch_file, const std::string& out_dir, int parallel,
               const ModelParams& p, bool gzip) {
  const auto scenes = load_batch(read_file(batch_file));
  fs::create_directories(out_dir);
  const auto results = run_batch(scenes, p, parallel, false, true);
  char name[64];
  int rc = 0;
  for (size_t i = 0; i < results.size(); ++i) {
    if (!results[i].ok) {
      std::cerr << "{\"case\":" << i << ",\"error\":\"" << results[i].error << "\"}\n";
      rc = 1;
      continue;
    }
    std::snprintf(name, sizeof(name), gzip ? "labels_%04zu.jsonl.gz" : "labels_%04zu.jsonl", i);
    if (gzip) {
      write_file_gzip(fs::path(out_dir) / name, results[i].labels);
    } else {
      write_file_atomic(fs::path(out_dir) / name, results[i].labels);
    }
  }
  std::cout << "wrote labels for " << results.size() << " scenes to " << out_dir << "\n";
  return rc;
}

int cmd_plot(const std::string& traj_file, const std::string& scenario_file, int scene_index,
             bool field_arrows, int arrow_vehicle, const std::string& out,
             const ModelParams& p) {
  const auto paths = parse_trajectory(read_file(traj_file));
  std::optional<Scene> scene;
  if (!scenario_file.empty()) {
    const std::string text = read_file(scenario_file);
    const nlohmann::json j = nlohmann::json::parse(text);
    scene = j.is_array() ? load_batch(text).at(scene_index) : load_scene(text);
  }
  PlotOptions opt;
  opt.field_arrows = field_arrows;
  opt.arrow_vehicle = arrow_vehicle;
  write_file_atomic(out, render_svg(paths, scene, opt, p));
  std::cout << "wrote " << out << "\n";
  return 0;
}

int cmd_bench(int cases, uint64_t seed, int parallel, const ModelParams& p) {
  const std::vector<std::pair<int, int>> regimes = {
      {10, 0}, {20, 0}, {30, 0}, {40, 0}, {50, 0}, {10, 25}, {20, 25}, {30, 25}, {40, 25},
      {50, 25}};
  std::printf("%10s %10s %10s %12s %12s\n", "vehicles", "obstacles", "cases", "success",
              "runtime_s");
  for (const auto& [nv, no] : regimes) {
    const auto seeds = case_seeds(seed, cases);
    std::vector<Scene> scenes;
    for (int c = 0; c < cases; ++c) {
      GenSpec spec;
      spec.n_vehicles = nv;
      spec.n_obstacles = no;
      spec.mode = GenMode::kCollision;
      spec.seed = seeds[c];
      scenes.push_back(generate(spec));
    }
    const auto t0 = std::chrono::steady_clock::now();
    const auto results = run_batch(scenes, p, parallel, false, false);
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const BatchSummary s = summarize(scenes, results, wall);
    std::printf("%10d %10d %10d %12.4f %12.3f\n", nv, no, cases, s.success, wall);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"MA-DV2F multi-vehicle navigation: scenario generation, batch simulation, "
               "metrics, label export and plotting"};
  app.require_subcommand(1);

  int vehicles = 10, obstacles = 0, cases = 100, parallel = 0, horizon = 0;
  uint64_t seed = 1;
  double r_c = -1.0;
  std::string mode = "collision", out, batch_file, scenario_file, traj_file;
  std::vector<std::string> param_overrides;
  bool gzip = false, field_arrows = false, no_trajectories = false;
  int scene_index = 0, arrow_vehicle = 0;

  auto add_param_flags = [&](CLI::App* cmd) {
    cmd->add_option("--param", param_overrides, "override a ModelParams field, name=value");
    cmd->add_option("--r-c", r_c, "static collision avoidance margin r_c");
    cmd->add_option("--horizon", horizon, "rollout horizon in steps");
  };

  auto* gen = app.add_subcommand("gen", "generate a scenario batch file");
  gen->add_option("--vehicles", vehicles, "vehicles per scene");
  gen->add_option("--obstacles", obstacles, "obstacles per scene");
  gen->add_option("--mode", mode, "collision | parking | normal");
  gen->add_option("--cases", cases, "number of scenes");
  gen->add_option("--seed", seed, "base seed");
  gen->add_option("--out", out, "output path");

  auto* run = app.add_subcommand("run", "roll out a batch and write trajectories + metrics");
  run->add_option("batch", batch_file, "scenario batch JSON")->required();
  run->add_option("--out", out, "output directory")->default_val("out");
  run->add_option("--parallel", parallel, "worker threads (0 = hardware)");
  run->add_flag("--no-trajectories", no_trajectories, "skip trajectory files");
  add_param_flags(run);

  auto* labels = app.add_subcommand("labels", "export self-supervised label datasets");
  labels->add_option("batch", batch_file, "scenario batch JSON")->required();
  labels->add_option("--out", out, "output directory")->default_val("labels");
  labels->add_option("--parallel", parallel, "worker threads (0 = hardware)");
  labels->add_flag("--gzip", gzip, "gzip-compress label files");
  add_param_flags(labels);

  auto* plot = app.add_subcommand("plot", "render a trajectory file to SVG");
  plot->add_option("trajectory", traj_file, "trajectory JSONL")->required();
  plot->add_option("--scenario", scenario_file, "scenario file for obstacles and targets");
  plot->add_option("--index", scene_index, "scene index within a batch scenario file");
  plot->add_flag("--field-arrows", field_arrows, "sample the reference-orientation field");
  plot->add_option("--vehicle", arrow_vehicle, "ego vehicle for the arrow grid");
  plot->add_option("--out", out, "output SVG path")->default_val("trajectory.svg");
  add_param_flags(plot);

  auto* bench = app.add_subcommand("bench", "runtime table over the paper's regimes");
  bench->add_option("--cases", cases, "cases per regime")->default_val(100);
  bench->add_option("--seed", seed, "base seed");
  bench->add_option("--parallel", parallel, "worker threads (0 = hardware)");
  add_param_flags(bench);

  CLI11_PARSE(app, argc, argv);

  try {
    const ModelParams p = params_from_flags(param_overrides, r_c, horizon);
    if (gen->parsed()) return cmd_gen(vehicles, obstacles, mode, cases, seed, out);
    if (run->parsed()) return cmd_run(batch_file, out, parallel, p, no_trajectories);
    if (labels->parsed()) return cmd_labels(batch_file, out, parallel, p, gzip);
    if (plot->parsed()) {
      return cmd_plot(traj_file, scenario_file, scene_index, field_arrows, arrow_vehicle, out, p);
    }
    if (bench->parsed()) return cmd_bench(cases, seed, parallel, p);
  } catch (const std::exception& e) {
    nlohmann::json err;
    err["error"] = e.what();
    std::cerr << err.dump() << "\n";
    return 1;
  }
  return 0;
}
