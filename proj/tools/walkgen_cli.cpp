// Command-line front end: evaluate a layout, evolve one, run the exploration
// agent, generate islands, or render existing artifacts. Every subcommand is
// deterministic given its inputs and --seed, so reruns produce byte-identical
// files.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "walkgen/errors.hpp"
#include "walkgen/evolve.hpp"
#include "walkgen/explorer.hpp"
#include "walkgen/islandgen.hpp"
#include "walkgen/json_util.hpp"
#include "walkgen/level_template.hpp"
#include "walkgen/svg.hpp"
#include "walkgen/visibility.hpp"

namespace fs = std::filesystem;
using walkgen::jsonu::json;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw walkgen::ParseError("cannot open file: " + path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void write_file(const fs::path& path, const std::string& content) {
  fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw walkgen::ParseError("cannot write file: " + path.string());
  out << content;
}

// ---------------------------------------------------------------------------
// Config overrides: one JSON file with optional sections; unknown keys are
// rejected everywhere.

struct ToolConfig {
  walkgen::EvalParams eval;
  walkgen::EvolutionConfig evolve;
  walkgen::ExplorationParams explore;
  walkgen::IslandParams island;
  walkgen::DogParams dog;
  long dog_ticks = 200;
  double dog_spawn_behind = 20.0;
  double player_speed = 1.0;
  int snapshot_every = 10;
};

double num_or(const json& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  return walkgen::jsonu::as_number(j[key], key);
}

int int_or(const json& j, const char* key, int fallback) {
  if (!j.contains(key)) return fallback;
  return static_cast<int>(walkgen::jsonu::as_number(j[key], key));
}

void apply_camera(const json& j, walkgen::CameraModel& cam) {
  walkgen::jsonu::check_keys(j, {"vfov_deg", "aspect", "near", "far"}, "camera");
  cam.vertical_fov =
      num_or(j, "vfov_deg", cam.vertical_fov * 180.0 / std::numbers::pi) *
      std::numbers::pi / 180.0;
  cam.aspect = num_or(j, "aspect", cam.aspect);
  cam.near = num_or(j, "near", cam.near);
  cam.far = num_or(j, "far", cam.far);
  if (!cam.valid())
    throw walkgen::ValidationError("bad-camera", "camera parameters out of range");
}

ToolConfig load_config(const std::string& path) {
  ToolConfig cfg;
  cfg.evolve.eval = cfg.eval;
  if (path.empty()) return cfg;
  const json j = walkgen::jsonu::parse_text(read_file(path));
  walkgen::jsonu::check_keys(j, {"camera", "eval", "evolve", "explore", "island"},
                             "config");
  if (j.contains("camera")) {
    apply_camera(j["camera"], cfg.eval.camera);
    cfg.explore.camera = cfg.eval.camera;
  }
  if (j.contains("eval")) {
    const json& e = j["eval"];
    walkgen::jsonu::check_keys(
        e, {"cell_size", "agent_radius", "sample_spacing", "tau_see", "tau_hide"},
        "eval");
    cfg.eval.cell_size = num_or(e, "cell_size", cfg.eval.cell_size);
    cfg.eval.agent_radius = num_or(e, "agent_radius", cfg.eval.agent_radius);
    cfg.eval.sample_spacing = num_or(e, "sample_spacing", cfg.eval.sample_spacing);
    cfg.eval.tau_see = num_or(e, "tau_see", cfg.eval.tau_see);
    cfg.eval.tau_hide = num_or(e, "tau_hide", cfg.eval.tau_hide);
  }
  if (j.contains("evolve")) {
    const json& e = j["evolve"];
    walkgen::jsonu::check_keys(
        e,
        {"population", "generations", "min_blocks", "max_blocks", "min_dim",
         "max_dim", "rate_add", "rate_remove", "rate_move", "rate_reshape",
         "sigma_move", "sigma_size", "tournament", "elites", "plateau_patience",
         "stop_on_perfect", "aesthetic_scale", "aesthetics"},
        "evolve");
    walkgen::EvolutionConfig& ev = cfg.evolve;
    ev.population_size = int_or(e, "population", ev.population_size);
    ev.generations = int_or(e, "generations", ev.generations);
    ev.min_blocks = int_or(e, "min_blocks", ev.min_blocks);
    ev.max_blocks = int_or(e, "max_blocks", ev.max_blocks);
    ev.min_dim = num_or(e, "min_dim", ev.min_dim);
    ev.max_dim = num_or(e, "max_dim", ev.max_dim);
    ev.rate_add = num_or(e, "rate_add", ev.rate_add);
    ev.rate_remove = num_or(e, "rate_remove", ev.rate_remove);
    ev.rate_move = num_or(e, "rate_move", ev.rate_move);
    ev.rate_reshape = num_or(e, "rate_reshape", ev.rate_reshape);
    ev.sigma_move = num_or(e, "sigma_move", ev.sigma_move);
    ev.sigma_size = num_or(e, "sigma_size", ev.sigma_size);
    ev.tournament_size = int_or(e, "tournament", ev.tournament_size);
    ev.elite_count = int_or(e, "elites", ev.elite_count);
    ev.plateau_patience = int_or(e, "plateau_patience", ev.plateau_patience);
    if (e.contains("stop_on_perfect")) ev.stop_on_perfect = e["stop_on_perfect"].get<bool>();
    ev.aesthetic_scale = num_or(e, "aesthetic_scale", ev.aesthetic_scale);
    if (e.contains("aesthetics")) {
      for (const auto& item : e["aesthetics"].items()) {
        const json& t = item.value();
        walkgen::jsonu::check_keys(
            t, {"target_count", "w_qty", "target_spacing", "w_pair"}, "aesthetics");
        walkgen::AestheticTarget target;
        target.target_count = int_or(t, "target_count", 0);
        target.w_qty = num_or(t, "w_qty", 0.0);
        target.target_spacing = num_or(t, "target_spacing", 0.0);
        target.w_pair = num_or(t, "w_pair", 0.0);
        ev.aesthetics[item.key()] = target;
      }
    }
  }
  if (j.contains("explore")) {
    const json& e = j["explore"];
    walkgen::jsonu::check_keys(
        e, {"point_spacing", "cell_size", "agent_radius", "tick_budget", "snapshot_every"},
        "explore");
    cfg.explore.point_spacing = num_or(e, "point_spacing", cfg.explore.point_spacing);
    cfg.explore.cell_size = num_or(e, "cell_size", cfg.explore.cell_size);
    cfg.explore.agent_radius = num_or(e, "agent_radius", cfg.explore.agent_radius);
    cfg.explore.tick_budget = int_or(e, "tick_budget", static_cast<int>(cfg.explore.tick_budget));
    cfg.snapshot_every = int_or(e, "snapshot_every", cfg.snapshot_every);
  }
  if (j.contains("island")) {
    const json& e = j["island"];
    walkgen::jsonu::check_keys(e,
                               {"extent", "n_sites", "walk_steps", "p_fence",
                                "tree_density", "lily_density", "rock_density",
                                "with_path", "dog"},
                               "island");
    cfg.island.extent = num_or(e, "extent", cfg.island.extent);
    cfg.island.n_sites = int_or(e, "n_sites", cfg.island.n_sites);
    cfg.island.walk_steps = int_or(e, "walk_steps", cfg.island.walk_steps);
    cfg.island.decoration.p_fence = num_or(e, "p_fence", cfg.island.decoration.p_fence);
    cfg.island.decoration.tree_density =
        num_or(e, "tree_density", cfg.island.decoration.tree_density);
    cfg.island.decoration.lily_density =
        num_or(e, "lily_density", cfg.island.decoration.lily_density);
    cfg.island.decoration.rock_density =
        num_or(e, "rock_density", cfg.island.decoration.rock_density);
    if (e.contains("with_path")) cfg.island.with_path = e["with_path"].get<bool>();
    if (e.contains("dog")) {
      const json& d = e["dog"];
      walkgen::jsonu::check_keys(
          d, {"speed", "follow_radius", "height", "wander_step", "ticks", "spawn_behind", "player_speed"},
          "dog");
      cfg.dog.speed = num_or(d, "speed", cfg.dog.speed);
      cfg.dog.follow_radius = num_or(d, "follow_radius", cfg.dog.follow_radius);
      cfg.dog.height = num_or(d, "height", cfg.dog.height);
      cfg.dog.wander_step = num_or(d, "wander_step", cfg.dog.wander_step);
      cfg.dog_ticks = int_or(d, "ticks", static_cast<int>(cfg.dog_ticks));
      cfg.dog_spawn_behind = num_or(d, "spawn_behind", cfg.dog_spawn_behind);
      cfg.player_speed = num_or(d, "player_speed", cfg.player_speed);
    }
  }
  cfg.evolve.eval = cfg.eval;
  return cfg;
}

json report_json(const walkgen::FitnessReport& report,
                 const walkgen::LevelTemplate& tmpl) {
  json markers = json::array();
  for (std::size_t m = 0; m < tmpl.markers.size(); ++m) {
    markers.push_back({{"id", tmpl.markers[m].id},
                       {"constraint", walkgen::constraint_name(tmpl.markers[m].constraint)},
                       {"visible_fraction", report.per_marker_visible_fraction[m]},
                       {"met", static_cast<bool>(report.per_marker_met[m])}});
  }
  return json{{"path_found", report.path_found},
              {"constraints_met", report.constraints_met},
              {"shaping", report.shaping},
              {"fitness", report.fitness},
              {"markers", std::move(markers)}};
}

walkgen::Genome load_genome_file(const std::string& path) {
  if (path.empty()) return {};
  return walkgen::load_genome(read_file(path));
}

walkgen::ModelLibrary load_library_file(const std::string& path) {
  if (path.empty()) return walkgen::default_model_library();
  return walkgen::load_model_library(read_file(path));
}

// ---------------------------------------------------------------------------
// Subcommands

int cmd_evaluate(const std::string& template_path, const std::string& genome_path,
                 const std::string& models_path, const std::string& config_path,
                 const std::string& out_dir, bool quiet) {
  const ToolConfig cfg = load_config(config_path);
  const auto tmpl = walkgen::load_template(read_file(template_path));
  const auto genome = load_genome_file(genome_path);
  const auto library = load_library_file(models_path);
  const auto occluders = walkgen::genome_to_occluders(genome, library);
  const auto [report, trace] = walkgen::evaluate_level(tmpl, occluders, cfg.eval);

  const fs::path out(out_dir);
  write_file(out / "report.json", report_json(report, tmpl).dump(2) + "\n");
  write_file(out / "trace.csv", walkgen::trace_csv(trace, tmpl));
  write_file(out / "level.svg",
             walkgen::render_level_svg(tmpl, occluders, &report, &trace));
  if (!quiet)
    std::printf("evaluate: path_found=%d constraints_met=%d fitness=%.4f\n",
                report.path_found ? 1 : 0, report.constraints_met, report.fitness);
  return 0;
}

int cmd_evolve(const std::string& template_path, const std::string& models_path,
               const std::string& config_path, const std::string& out_dir,
               std::uint64_t seed, const std::string& mode, int workers,
               bool quiet) {
  ToolConfig cfg = load_config(config_path);
  cfg.evolve.master_seed = seed;
  cfg.evolve.workers = workers;
  cfg.evolve.mode =
      mode == "models" ? walkgen::GenomeMode::Models : walkgen::GenomeMode::Blocks;
  const auto tmpl = walkgen::load_template(read_file(template_path));
  const auto library = load_library_file(models_path);

  const auto result = walkgen::evolve(tmpl, cfg.evolve, library);
  const auto occluders = walkgen::genome_to_occluders(result.best, library);
  const auto [report, trace] = walkgen::evaluate_level(tmpl, occluders, cfg.eval);

  const fs::path out(out_dir);
  write_file(out / "best.genome.json", walkgen::save_genome(result.best));
  write_file(out / "history.csv", walkgen::history_csv(result.history));
  write_file(out / "best.report.json", report_json(report, tmpl).dump(2) + "\n");
  write_file(out / "best.svg",
             walkgen::render_level_svg(tmpl, occluders, &report, &trace));
  if (!quiet)
    std::printf("evolve: generations=%zu best_fitness=%.4f constraints_met=%d\n",
                result.history.size(),
                result.history.empty() ? 0.0 : result.history.back().best_fitness,
                report.constraints_met);
  return 0;
}

int cmd_explore(const std::string& template_path, const std::string& genome_path,
                const std::string& models_path, const std::string& config_path,
                const std::string& out_dir, int frames_every, bool quiet) {
  const ToolConfig cfg = load_config(config_path);
  const auto tmpl = walkgen::load_template(read_file(template_path));
  const auto genome = load_genome_file(genome_path);
  const auto library = load_library_file(models_path);
  const auto occluders = walkgen::genome_to_occluders(genome, library);

  std::string beliefs = "tick,point_index,state\n";
  const fs::path out(out_dir);
  int frame_count = 0;
  const auto on_tick = [&](long tick, const walkgen::BeliefState& belief,
                           const walkgen::PointLattice& lattice, int) {
    if (cfg.snapshot_every <= 0 || tick % cfg.snapshot_every != 0) return;
    char buf[64];
    for (std::size_t i = 0; i < belief.state.size(); ++i) {
      std::snprintf(buf, sizeof(buf), "%ld,%zu,%c\n", tick, i,
                    walkgen::point_state_letter(belief.state[i]));
      beliefs += buf;
    }
    if (frames_every > 0 && tick % frames_every == 0 && frame_count < 200) {
      char name[48];
      std::snprintf(name, sizeof(name), "frame_%04d.svg", frame_count++);
      write_file(out / name,
                 walkgen::render_explorer_svg(tmpl, occluders, belief, lattice, {}));
    }
  };

  const auto result = walkgen::run_exploration(tmpl, occluders, cfg.explore, on_tick);

  json rj{{"ticks_used", result.report.ticks_used},
          {"points_observed_fraction", result.report.points_observed_fraction},
          {"stuck_events", result.report.stuck_events},
          {"termination",
           result.report.termination == walkgen::Termination::FrontierExhausted
               ? "frontier_exhausted"
               : "budget_exhausted"}};
  write_file(out / "exploration.json", rj.dump(2) + "\n");
  write_file(out / "trajectory.csv", walkgen::trajectory_csv(result.trajectory));
  write_file(out / "beliefs.csv", beliefs);
  write_file(out / "belief.svg",
             walkgen::render_explorer_svg(tmpl, occluders, result.final_belief,
                                          result.lattice, result.trajectory));
  if (!quiet)
    std::printf("explore: ticks=%ld coverage=%.4f stuck=%d\n",
                result.report.ticks_used, result.report.points_observed_fraction,
                result.report.stuck_events);
  return 0;
}

int cmd_island(const std::string& config_path, const std::string& out_dir,
               std::uint64_t seed, bool with_dog, bool quiet) {
  const ToolConfig cfg = load_config(config_path);
  const auto map = walkgen::generate_island(cfg.island, seed);

  const fs::path out(out_dir);
  write_file(out / "island.json", walkgen::save_island(map));

  std::optional<walkgen::DogTrace> dog;
  if (with_dog) {
    if (map.spawn_cell < 0)
      throw walkgen::ValidationError("no-endpoints",
                                     "dog simulation needs spawn and campsite cells");
    const walkgen::Vec2 from = map.cells[map.spawn_cell].centroid;
    const walkgen::Vec2 to = map.cells[map.campsite_cell].centroid;
    const walkgen::Vec2 dir = to - from;
    const double len = walkgen::norm(dir);
    const walkgen::Vec2 unit = len > 0.0 ? dir * (1.0 / len) : walkgen::Vec2{0.0, 1.0};
    const double yaw = walkgen::normalize_yaw(std::atan2(unit.x, unit.z));
    std::vector<walkgen::Pose> trajectory;
    trajectory.reserve(cfg.dog_ticks);
    for (long t = 0; t < cfg.dog_ticks; ++t) {
      const double travelled = std::min(cfg.player_speed * static_cast<double>(t), len);
      const walkgen::Vec2 p = from + unit * travelled;
      trajectory.push_back({{p.x, 1.6, p.z}, yaw});
    }
    walkgen::DogParams dp = cfg.dog;
    dp.seed = seed;
    const walkgen::Vec2 dog_start = from - unit * cfg.dog_spawn_behind;
    dog = walkgen::simulate_dog(map, trajectory, cfg.eval.camera, dp, dog_start);
    write_file(out / "dog.csv", walkgen::dog_csv(*dog));
  }
  write_file(out / "island.svg",
             walkgen::render_island_svg(map, dog ? &*dog : nullptr));
  if (!quiet) {
    int land = 0;
    for (const auto f : map.land) land += f;
    std::printf("island: cells=%zu land=%d decorations=%zu%s\n", map.cells.size(),
                land, map.decorations.size(),
                dog ? " (dog trace written)" : "");
  }
  return 0;
}

int cmd_render(const std::string& template_path, const std::string& genome_path,
               const std::string& models_path, const std::string& island_path,
               const std::string& config_path, const std::string& out_dir,
               const std::string& obj_path, bool quiet) {
  const ToolConfig cfg = load_config(config_path);
  const fs::path out(out_dir);
  if (!island_path.empty()) {
    const auto map = walkgen::load_island(read_file(island_path));
    write_file(out / "island.svg", walkgen::render_island_svg(map));
    if (!quiet) std::printf("render: island.svg written\n");
    return 0;
  }
  if (template_path.empty())
    throw walkgen::ValidationError("missing-input",
                                   "render needs --template or --island");
  const auto tmpl = walkgen::load_template(read_file(template_path));
  const auto genome = load_genome_file(genome_path);
  const auto library = load_library_file(models_path);
  const auto occluders = walkgen::genome_to_occluders(genome, library);
  const auto [report, trace] = walkgen::evaluate_level(tmpl, occluders, cfg.eval);
  write_file(out / "level.svg",
             walkgen::render_level_svg(tmpl, occluders, &report, &trace));
  if (!obj_path.empty()) write_file(obj_path, walkgen::export_obj(occluders));
  if (!quiet) std::printf("render: level.svg written\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Search-based design and evaluation of explorable 3D spaces"};
  app.require_subcommand(1);

  std::string template_path, genome_path, models_path, config_path, island_path;
  std::string out_dir = "out";
  std::string mode = "blocks";
  std::string obj_path;
  std::uint64_t seed = 0;
  int workers = 1;
  int frames_every = 10;
  bool quiet = false;
  bool with_dog = false;

  app.add_flag("--quiet,-q", quiet, "suppress progress output");

  auto* evaluate = app.add_subcommand("evaluate", "score one layout against a template");
  evaluate->add_option("--template", template_path, "level template JSON")->required();
  evaluate->add_option("--genome", genome_path, "layout genome JSON (default: empty)");
  evaluate->add_option("--models", models_path, "model library JSON");
  evaluate->add_option("--config", config_path, "config overrides JSON");
  evaluate->add_option("--out", out_dir, "output directory");

  auto* evolve = app.add_subcommand("evolve", "evolve a layout for a template");
  evolve->add_option("--template", template_path, "level template JSON")->required();
  evolve->add_option("--seed", seed, "master random seed")->required();
  evolve->add_option("--models", models_path, "model library JSON");
  evolve->add_option("--config", config_path, "config overrides JSON");
  evolve->add_option("--out", out_dir, "output directory");
  evolve->add_option("--mode", mode, "blocks or models")
      ->check(CLI::IsMember({"blocks", "models"}));
  evolve->add_option("--workers", workers, "parallel evaluation threads")
      ->check(CLI::PositiveNumber);

  auto* explore = app.add_subcommand("explore", "run the curious exploration agent");
  explore->add_option("--template", template_path, "level template JSON")->required();
  explore->add_option("--genome", genome_path, "layout genome JSON (default: empty)");
  explore->add_option("--models", models_path, "model library JSON");
  explore->add_option("--config", config_path, "config overrides JSON");
  explore->add_option("--out", out_dir, "output directory");
  explore->add_option("--frames-every", frames_every,
                      "write an SVG frame every N snapshot ticks (0 = off)");

  auto* island = app.add_subcommand("island", "generate a Voronoi island map");
  island->add_option("--seed", seed, "master random seed")->required();
  island->add_option("--config", config_path, "config overrides JSON");
  island->add_option("--out", out_dir, "output directory");
  island->add_flag("--dog", with_dog, "also simulate the companion dog");

  auto* render = app.add_subcommand("render", "render an existing artifact to SVG");
  render->add_option("--template", template_path, "level template JSON");
  render->add_option("--genome", genome_path, "layout genome JSON");
  render->add_option("--models", models_path, "model library JSON");
  render->add_option("--island", island_path, "island JSON");
  render->add_option("--config", config_path, "config overrides JSON");
  render->add_option("--out", out_dir, "output directory");
  render->add_option("--obj", obj_path, "also export occluder boxes as OBJ");

  // lets --quiet appear after the subcommand name as well
  for (CLI::App* sub : {evaluate, evolve, explore, island, render}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*evaluate)
      return cmd_evaluate(template_path, genome_path, models_path, config_path,
                          out_dir, quiet);
    if (*evolve)
      return cmd_evolve(template_path, models_path, config_path, out_dir, seed,
                        mode, workers, quiet);
    if (*explore)
      return cmd_explore(template_path, genome_path, models_path, config_path,
                         out_dir, frames_every, quiet);
    if (*island) return cmd_island(config_path, out_dir, seed, with_dog, quiet);
    if (*render)
      return cmd_render(template_path, genome_path, models_path, island_path,
                        config_path, out_dir, obj_path, quiet);
  } catch (const walkgen::ParseError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const walkgen::ValidationError& e) {
    std::fprintf(stderr, "validation error: %s\n", e.what());
    return 2;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "validation error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "internal error: %s\n", e.what());
    return 3;
  }
  return 0;
}
