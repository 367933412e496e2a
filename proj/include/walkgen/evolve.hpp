#pragma once

// Evolutionary search over level layouts: grounded axis-aligned blocks with
// free position and size, or placements of fixed-geometry models (position
// and quarter-turn yaw only), maximizing visibility fitness.

#include <algorithm>
#include <cstdio>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "walkgen/errors.hpp"
#include "walkgen/geometry.hpp"
#include "walkgen/json_util.hpp"
#include "walkgen/level_template.hpp"
#include "walkgen/rng.hpp"
#include "walkgen/visibility.hpp"

namespace walkgen {

struct Block {
  Vec2 center;
  double width = 1.0;   // x extent
  double depth = 1.0;   // z extent
  double height = 2.0;  // grounded at y = 0

  Rect2 footprint() const {
    return {{center.x - 0.5 * width, center.z - 0.5 * depth},
            {center.x + 0.5 * width, center.z + 0.5 * depth}};
  }
  Aabb to_aabb() const {
    const Rect2 fp = footprint();
    return {{fp.min.x, 0.0, fp.min.z}, {fp.max.x, height, fp.max.z}};
  }
  bool operator==(const Block& o) const = default;
};

struct ModelDef {
  std::string id;
  std::vector<Aabb> occluders;  // local frame
  Rect2 footprint;              // local frame, contains all occluder projections
};

using ModelLibrary = std::vector<ModelDef>;

inline const ModelDef& find_model(const ModelLibrary& library, const std::string& id) {
  for (const ModelDef& def : library)
    if (def.id == id) return def;
  throw std::invalid_argument("unknown model id '" + id + "'");
}

// Quarter-turn rotation about the up axis keeps boxes axis-aligned.
inline Vec2 rotate_quarters(const Vec2& p, int quarters) {
  switch (quarters & 3) {
    case 1: return {p.z, -p.x};
    case 2: return {-p.x, -p.z};
    case 3: return {-p.z, p.x};
    default: return p;
  }
}

inline Rect2 rotate_rect(const Rect2& r, int quarters) {
  const Vec2 a = rotate_quarters(r.min, quarters);
  const Vec2 b = rotate_quarters(r.max, quarters);
  return {{std::min(a.x, b.x), std::min(a.z, b.z)},
          {std::max(a.x, b.x), std::max(a.z, b.z)}};
}

inline Aabb rotate_box(const Aabb& box, int quarters) {
  const Vec2 a = rotate_quarters({box.min.x, box.min.z}, quarters);
  const Vec2 b = rotate_quarters({box.max.x, box.max.z}, quarters);
  return {{std::min(a.x, b.x), box.min.y, std::min(a.z, b.z)},
          {std::max(a.x, b.x), box.max.y, std::max(a.z, b.z)}};
}

struct Placement {
  std::string model_id;
  Vec2 position;
  int yaw_quarters = 0;  // yaw = 90 degrees * yaw_quarters

  bool operator==(const Placement& o) const = default;
};

inline Rect2 placement_footprint(const Placement& p, const ModelLibrary& library) {
  const Rect2 local = rotate_rect(find_model(library, p.model_id).footprint,
                                  p.yaw_quarters);
  return {local.min + p.position, local.max + p.position};
}

enum class GenomeMode { Blocks, Models };

struct Genome {
  GenomeMode mode = GenomeMode::Blocks;
  std::vector<Block> blocks;
  std::vector<Placement> placements;

  std::size_t size() const {
    return mode == GenomeMode::Blocks ? blocks.size() : placements.size();
  }
  bool operator==(const Genome& o) const = default;
};

struct AestheticTarget {
  int target_count = 0;
  double w_qty = 0.0;
  double target_spacing = 0.0;
  double w_pair = 0.0;
};

struct EvolutionConfig {
  int population_size = 50;
  int generations = 200;
  int min_blocks = 1;
  int max_blocks = 8;
  double min_dim = 0.25;
  double max_dim = 6.0;
  double rate_add = 0.3;
  double rate_remove = 0.3;
  double rate_move = 0.8;
  double rate_reshape = 0.8;  // resizes blocks; re-rolls yaw in models mode
  double sigma_move = 1.5;
  double sigma_size = 1.0;
  int tournament_size = 3;
  int elite_count = 2;
  std::uint64_t master_seed = 0;
  GenomeMode mode = GenomeMode::Blocks;
  std::map<std::string, AestheticTarget> aesthetics;  // empty = disabled
  double aesthetic_scale = 0.01;
  bool stop_on_perfect = true;
  int plateau_patience = 0;  // 0 disables the no-improvement stop
  int workers = 1;
  EvalParams eval;
};

inline void validate_config(const EvolutionConfig& cfg) {
  std::vector<Violation> v;
  if (cfg.population_size < 2)
    v.push_back({"bad-population", "population_size must be >= 2"});
  if (cfg.elite_count < 0 || cfg.elite_count >= cfg.population_size)
    v.push_back({"bad-elites", "elite_count must be < population_size"});
  if (cfg.min_blocks < 0 || cfg.min_blocks > cfg.max_blocks)
    v.push_back({"bad-block-count", "need 0 <= min_blocks <= max_blocks"});
  if (cfg.min_dim <= 0.0 || cfg.min_dim > cfg.max_dim)
    v.push_back({"bad-dims", "need 0 < min_dim <= max_dim"});
  if (cfg.tournament_size < 1)
    v.push_back({"bad-tournament", "tournament_size must be >= 1"});
  if (cfg.generations < 1)
    v.push_back({"bad-generations", "generations must be >= 1"});
  if (cfg.workers < 1) v.push_back({"bad-workers", "workers must be >= 1"});
  if (!v.empty()) throw ValidationError(std::move(v));
}

// ---------------------------------------------------------------------------
// Genome construction and variation

namespace detail {

inline Rect2 cell_rect_around(const Vec2& p, double cell_size) {
  const double x0 = std::floor(p.x / cell_size) * cell_size;
  const double z0 = std::floor(p.z / cell_size) * cell_size;
  return {{x0, z0}, {x0 + cell_size, z0 + cell_size}};
}

// A block may not cover the start or end cell of the walkability grid.
inline bool covers_endpoint(const Rect2& footprint, const LevelTemplate& tmpl,
                            const EvolutionConfig& cfg) {
  return footprint.overlaps(cell_rect_around(tmpl.start, cfg.eval.cell_size)) ||
         footprint.overlaps(cell_rect_around(tmpl.end, cfg.eval.cell_size));
}

inline std::optional<Block> random_block(const EvolutionConfig& cfg,
                                         const LevelTemplate& tmpl, Rng& rng) {
  for (int attempt = 0; attempt < 16; ++attempt) {
    Block b;
    b.width = rng.uniform(cfg.min_dim, std::min(cfg.max_dim, tmpl.surface_x));
    b.depth = rng.uniform(cfg.min_dim, std::min(cfg.max_dim, tmpl.surface_z));
    b.height = rng.uniform(cfg.min_dim, cfg.max_dim);
    b.center.x = rng.uniform(0.5 * b.width, tmpl.surface_x - 0.5 * b.width);
    b.center.z = rng.uniform(0.5 * b.depth, tmpl.surface_z - 0.5 * b.depth);
    if (!covers_endpoint(b.footprint(), tmpl, cfg)) return b;
  }
  return std::nullopt;
}

inline std::optional<Placement> random_placement(const EvolutionConfig& cfg,
                                                 const LevelTemplate& tmpl,
                                                 const ModelLibrary& library,
                                                 Rng& rng) {
  for (int attempt = 0; attempt < 16; ++attempt) {
    Placement p;
    p.model_id = library[rng.uniform_index(library.size())].id;
    p.yaw_quarters = static_cast<int>(rng.uniform_index(4));
    const Rect2 local = rotate_rect(find_model(library, p.model_id).footprint,
                                    p.yaw_quarters);
    const double lo_x = -local.min.x, hi_x = tmpl.surface_x - local.max.x;
    const double lo_z = -local.min.z, hi_z = tmpl.surface_z - local.max.z;
    if (lo_x > hi_x || lo_z > hi_z) continue;  // model larger than surface
    p.position = {rng.uniform(lo_x, hi_x), rng.uniform(lo_z, hi_z)};
    if (!covers_endpoint(placement_footprint(p, library), tmpl, cfg)) return p;
  }
  return std::nullopt;
}

inline void clamp_block(Block& b, const EvolutionConfig& cfg,
                        const LevelTemplate& tmpl) {
  b.width = std::clamp(b.width, cfg.min_dim, std::min(cfg.max_dim, tmpl.surface_x));
  b.depth = std::clamp(b.depth, cfg.min_dim, std::min(cfg.max_dim, tmpl.surface_z));
  b.height = std::clamp(b.height, cfg.min_dim, cfg.max_dim);
  b.center.x = std::clamp(b.center.x, 0.5 * b.width, tmpl.surface_x - 0.5 * b.width);
  b.center.z = std::clamp(b.center.z, 0.5 * b.depth, tmpl.surface_z - 0.5 * b.depth);
}

// After a perturbation: clamp into the surface, then re-roll the center while
// the block covers an endpoint cell; give up after 16 tries and revert.
inline Block repair_block(Block mutated, const Block& original,
                          const EvolutionConfig& cfg, const LevelTemplate& tmpl,
                          Rng& rng) {
  clamp_block(mutated, cfg, tmpl);
  for (int attempt = 0; attempt < 16; ++attempt) {
    if (!covers_endpoint(mutated.footprint(), tmpl, cfg)) return mutated;
    mutated.center.x =
        rng.uniform(0.5 * mutated.width, tmpl.surface_x - 0.5 * mutated.width);
    mutated.center.z =
        rng.uniform(0.5 * mutated.depth, tmpl.surface_z - 0.5 * mutated.depth);
  }
  return original;
}

inline Placement repair_placement(Placement mutated, const Placement& original,
                                  const EvolutionConfig& cfg,
                                  const LevelTemplate& tmpl,
                                  const ModelLibrary& library, Rng& rng) {
  const Rect2 local = rotate_rect(find_model(library, mutated.model_id).footprint,
                                  mutated.yaw_quarters);
  const double lo_x = -local.min.x, hi_x = tmpl.surface_x - local.max.x;
  const double lo_z = -local.min.z, hi_z = tmpl.surface_z - local.max.z;
  if (lo_x > hi_x || lo_z > hi_z) return original;
  mutated.position.x = std::clamp(mutated.position.x, lo_x, hi_x);
  mutated.position.z = std::clamp(mutated.position.z, lo_z, hi_z);
  for (int attempt = 0; attempt < 16; ++attempt) {
    if (!covers_endpoint(placement_footprint(mutated, library), tmpl, cfg))
      return mutated;
    mutated.position = {rng.uniform(lo_x, hi_x), rng.uniform(lo_z, hi_z)};
  }
  return original;
}

}  // namespace detail

inline Genome random_genome(const EvolutionConfig& cfg, const LevelTemplate& tmpl,
                            Rng& rng, const ModelLibrary& library = {}) {
  Genome g;
  g.mode = cfg.mode;
  const int count =
      static_cast<int>(rng.uniform_int(cfg.min_blocks, cfg.max_blocks));
  for (int i = 0; i < count; ++i) {
    if (cfg.mode == GenomeMode::Blocks) {
      if (auto b = detail::random_block(cfg, tmpl, rng)) g.blocks.push_back(*b);
    } else {
      if (auto p = detail::random_placement(cfg, tmpl, library, rng))
        g.placements.push_back(*p);
    }
  }
  return g;
}

inline Genome mutate(const Genome& genome, const EvolutionConfig& cfg,
                     const LevelTemplate& tmpl, Rng& rng,
                     const ModelLibrary& library = {}) {
  Genome g = genome;
  const bool blocks = g.mode == GenomeMode::Blocks;

  if (rng.bernoulli(cfg.rate_add) &&
      g.size() < static_cast<std::size_t>(cfg.max_blocks)) {
    if (blocks) {
      if (auto b = detail::random_block(cfg, tmpl, rng)) g.blocks.push_back(*b);
    } else {
      if (auto p = detail::random_placement(cfg, tmpl, library, rng))
        g.placements.push_back(*p);
    }
  }
  if (rng.bernoulli(cfg.rate_remove) &&
      g.size() > static_cast<std::size_t>(cfg.min_blocks) && g.size() > 0) {
    const std::size_t idx = rng.uniform_index(g.size());
    if (blocks)
      g.blocks.erase(g.blocks.begin() + idx);
    else
      g.placements.erase(g.placements.begin() + idx);
  }
  if (rng.bernoulli(cfg.rate_move) && g.size() > 0) {
    const std::size_t idx = rng.uniform_index(g.size());
    if (blocks) {
      Block b = g.blocks[idx];
      b.center.x += rng.normal(0.0, cfg.sigma_move);
      b.center.z += rng.normal(0.0, cfg.sigma_move);
      g.blocks[idx] = detail::repair_block(b, g.blocks[idx], cfg, tmpl, rng);
    } else {
      Placement p = g.placements[idx];
      p.position.x += rng.normal(0.0, cfg.sigma_move);
      p.position.z += rng.normal(0.0, cfg.sigma_move);
      g.placements[idx] =
          detail::repair_placement(p, g.placements[idx], cfg, tmpl, library, rng);
    }
  }
  if (rng.bernoulli(cfg.rate_reshape) && g.size() > 0) {
    const std::size_t idx = rng.uniform_index(g.size());
    if (blocks) {
      Block b = g.blocks[idx];
      b.width += rng.normal(0.0, cfg.sigma_size);
      b.depth += rng.normal(0.0, cfg.sigma_size);
      b.height += rng.normal(0.0, cfg.sigma_size);
      g.blocks[idx] = detail::repair_block(b, g.blocks[idx], cfg, tmpl, rng);
    } else {
      // Models cannot be reshaped; the reshape slot re-rolls orientation.
      Placement p = g.placements[idx];
      p.yaw_quarters = static_cast<int>(rng.uniform_index(4));
      g.placements[idx] =
          detail::repair_placement(p, g.placements[idx], cfg, tmpl, library, rng);
    }
  }
  return g;
}

// Uniform crossover over shared indices; the tail of the longer parent is
// inherited with probability 1/2 per gene.
inline Genome crossover(const Genome& a, const Genome& b, Rng& rng,
                        int max_count = std::numeric_limits<int>::max()) {
  if (a.mode != b.mode)
    throw std::invalid_argument("crossover: genome modes differ");
  Genome child;
  child.mode = a.mode;
  const auto cross = [&](const auto& ga, const auto& gb, auto& out) {
    const std::size_t shared = std::min(ga.size(), gb.size());
    for (std::size_t i = 0; i < shared; ++i)
      out.push_back(rng.bernoulli(0.5) ? ga[i] : gb[i]);
    const auto& longer = ga.size() >= gb.size() ? ga : gb;
    for (std::size_t i = shared; i < longer.size(); ++i)
      if (rng.bernoulli(0.5)) out.push_back(longer[i]);
    if (out.size() > static_cast<std::size_t>(max_count)) out.resize(max_count);
  };
  if (a.mode == GenomeMode::Blocks)
    cross(a.blocks, b.blocks, child.blocks);
  else
    cross(a.placements, b.placements, child.placements);
  return child;
}

inline std::vector<Aabb> genome_to_occluders(const Genome& genome,
                                             const ModelLibrary& library = {}) {
  std::vector<Aabb> out;
  if (genome.mode == GenomeMode::Blocks) {
    out.reserve(genome.blocks.size());
    for (const Block& b : genome.blocks) out.push_back(b.to_aabb());
    return out;
  }
  for (const Placement& p : genome.placements) {
    const ModelDef& def = find_model(library, p.model_id);
    for (const Aabb& local : def.occluders) {
      Aabb box = rotate_box(local, p.yaw_quarters);
      box.min = box.min + Vec3{p.position.x, 0.0, p.position.z};
      box.max = box.max + Vec3{p.position.x, 0.0, p.position.z};
      out.push_back(box);
    }
  }
  return out;
}

// Penalty for deviating from per-model count and nearest-neighbor spacing
// targets. Zero when disabled or when every target is hit exactly.
inline double aesthetic_score(const std::vector<Placement>& placements,
                              const EvolutionConfig& cfg) {
  double penalty = 0.0;
  for (const auto& [model_id, target] : cfg.aesthetics) {
    std::vector<Vec2> points;
    for (const Placement& p : placements)
      if (p.model_id == model_id) points.push_back(p.position);
    penalty += target.w_qty *
               std::abs(static_cast<double>(points.size()) - target.target_count);
    if (target.w_pair > 0.0 && points.size() >= 2) {
      for (std::size_t i = 0; i < points.size(); ++i) {
        double nn = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < points.size(); ++j)
          if (j != i) nn = std::min(nn, dist(points[i], points[j]));
        penalty += target.w_pair * std::abs(nn - target.target_spacing);
      }
    }
  }
  return penalty;
}

// ---------------------------------------------------------------------------
// The generational loop

struct GenerationRecord {
  int generation = 0;
  double best_fitness = 0.0;
  double mean_fitness = 0.0;
  int best_constraints_met = 0;
};

struct EvolveResult {
  Genome best;
  FitnessReport best_report;
  std::vector<GenerationRecord> history;
};

namespace detail {

// Aesthetic penalties only ever shrink the sub-unit shaping term, so a genome
// meeting more constraints always outranks one meeting fewer.
inline double scored_fitness(const FitnessReport& report, const Genome& genome,
                             const EvolutionConfig& cfg) {
  if (!report.path_found) return 0.0;
  if (genome.mode != GenomeMode::Models || cfg.aesthetics.empty())
    return report.fitness;
  const double penalty = aesthetic_score(genome.placements, cfg);
  return report.constraints_met +
         std::max(0.0, report.shaping - cfg.aesthetic_scale * penalty);
}

inline void parallel_for(std::size_t n, int workers,
                         const std::function<void(std::size_t)>& fn) {
  if (workers <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  const std::size_t stride =
      (n + static_cast<std::size_t>(workers) - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    const std::size_t lo = w * stride;
    const std::size_t hi = std::min(n, lo + stride);
    if (lo >= hi) break;
    pool.emplace_back([&, lo, hi] {
      for (std::size_t i = lo; i < hi; ++i) fn(i);
    });
  }
  for (std::thread& t : pool) t.join();
}

}  // namespace detail

inline EvolveResult evolve(const LevelTemplate& tmpl, const EvolutionConfig& cfg,
                           const ModelLibrary& library = {}) {
  validate_or_throw(tmpl);
  validate_config(cfg);
  if (cfg.mode == GenomeMode::Models && library.empty())
    throw std::invalid_argument("evolve: models mode requires a model library");

  const std::size_t n = static_cast<std::size_t>(cfg.population_size);
  std::vector<Genome> population(n);
  for (std::size_t slot = 0; slot < n; ++slot) {
    Rng rng(derive_seed(cfg.master_seed, 0, slot));
    population[slot] = random_genome(cfg, tmpl, rng, library);
  }

  const double perfect = static_cast<double>(tmpl.markers.size()) + 1.0;
  EvolveResult result;
  double best_ever = -1.0;
  int stale_generations = 0;

  std::vector<double> fitness(n, 0.0);
  std::vector<int> constraints(n, 0);

  for (int gen = 0; gen < cfg.generations; ++gen) {
    // Evaluation is pure and consumes no randomness, so the worker count
    // cannot change any result.
    detail::parallel_for(n, cfg.workers, [&](std::size_t i) {
      const auto [report, trace] =
          evaluate_level(tmpl, genome_to_occluders(population[i], library), cfg.eval);
      fitness[i] = detail::scored_fitness(report, population[i], cfg);
      constraints[i] = report.constraints_met;
    });

    std::size_t best_idx = 0;
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      mean += fitness[i];
      if (fitness[i] > fitness[best_idx]) best_idx = i;
    }
    mean /= static_cast<double>(n);
    result.history.push_back(
        {gen, fitness[best_idx], mean, constraints[best_idx]});

    if (fitness[best_idx] > best_ever + 1e-12) {
      best_ever = fitness[best_idx];
      result.best = population[best_idx];
      stale_generations = 0;
    } else {
      ++stale_generations;
    }

    if (cfg.stop_on_perfect && best_ever >= perfect - 1e-12) break;
    if (cfg.plateau_patience > 0 && stale_generations >= cfg.plateau_patience) break;
    if (gen + 1 == cfg.generations) break;

    // Elites first (fitness desc, slot asc), the rest by tournament +
    // crossover + mutation with per-slot derived streams.
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      if (fitness[a] != fitness[b]) return fitness[a] > fitness[b];
      return a < b;
    });

    std::vector<Genome> next(n);
    for (int e = 0; e < cfg.elite_count; ++e) next[e] = population[order[e]];
    for (std::size_t slot = static_cast<std::size_t>(cfg.elite_count); slot < n;
         ++slot) {
      Rng rng(derive_seed(cfg.master_seed, static_cast<std::uint64_t>(gen) + 1,
                          slot));
      const auto pick = [&] {
        std::size_t winner = rng.uniform_index(n);
        for (int t = 1; t < cfg.tournament_size; ++t) {
          const std::size_t challenger = rng.uniform_index(n);
          if (fitness[challenger] > fitness[winner] ||
              (fitness[challenger] == fitness[winner] && challenger < winner))
            winner = challenger;
        }
        return winner;
      };
      const Genome& pa = population[pick()];
      const Genome& pb = population[pick()];
      Genome child = crossover(pa, pb, rng, cfg.max_blocks);
      next[slot] = mutate(child, cfg, tmpl, rng, library);
    }
    population = std::move(next);
  }

  const auto [report, trace] =
      evaluate_level(tmpl, genome_to_occluders(result.best, library), cfg.eval);
  result.best_report = report;
  return result;
}

// ---------------------------------------------------------------------------
// File formats

inline Genome load_genome(const std::string& text) {
  using jsonu::json;
  const json j = jsonu::parse_text(text);
  jsonu::check_keys(j, {"mode", "blocks", "placements"}, "genome");
  const json& mode = jsonu::require(j, "mode", "genome");
  Genome g;
  if (mode == "blocks") {
    g.mode = GenomeMode::Blocks;
    const json& blocks = jsonu::require(j, "blocks", "genome");
    for (const json& bj : blocks) {
      jsonu::check_keys(bj, {"center", "size"}, "block");
      Block b;
      b.center = jsonu::as_vec2(jsonu::require(bj, "center", "block"), "block center");
      const Vec3 size = jsonu::as_vec3(jsonu::require(bj, "size", "block"), "block size");
      b.width = size.x;
      b.depth = size.y;
      b.height = size.z;
      g.blocks.push_back(b);
    }
  } else if (mode == "models") {
    g.mode = GenomeMode::Models;
    const json& placements = jsonu::require(j, "placements", "genome");
    for (const json& pj : placements) {
      jsonu::check_keys(pj, {"model", "pos", "yaw_deg"}, "placement");
      Placement p;
      const json& id = jsonu::require(pj, "model", "placement");
      if (!id.is_string())
        throw ValidationError("expected-string", "placement model must be a string");
      p.model_id = id.get<std::string>();
      p.position = jsonu::as_vec2(jsonu::require(pj, "pos", "placement"), "placement pos");
      const double deg =
          jsonu::as_number(jsonu::require(pj, "yaw_deg", "placement"), "yaw_deg");
      if (deg != 0.0 && deg != 90.0 && deg != 180.0 && deg != 270.0)
        throw ValidationError("bad-yaw", "yaw_deg must be one of 0, 90, 180, 270");
      p.yaw_quarters = static_cast<int>(deg / 90.0);
      g.placements.push_back(std::move(p));
    }
  } else {
    throw ValidationError("bad-mode", "genome mode must be 'blocks' or 'models'");
  }
  return g;
}

inline std::string save_genome(const Genome& g) {
  using jsonu::json;
  json j;
  if (g.mode == GenomeMode::Blocks) {
    j["mode"] = "blocks";
    json blocks = json::array();
    for (const Block& b : g.blocks)
      blocks.push_back({{"center", jsonu::vec2_json(b.center)},
                        {"size", jsonu::vec3_json({b.width, b.depth, b.height})}});
    j["blocks"] = std::move(blocks);
  } else {
    j["mode"] = "models";
    json placements = json::array();
    for (const Placement& p : g.placements)
      placements.push_back({{"model", p.model_id},
                            {"pos", jsonu::vec2_json(p.position)},
                            {"yaw_deg", p.yaw_quarters * 90}});
    j["placements"] = std::move(placements);
  }
  return j.dump(2) + "\n";
}

inline ModelLibrary load_model_library(const std::string& text) {
  using jsonu::json;
  const json j = jsonu::parse_text(text);
  if (!j.is_array())
    throw ValidationError("expected-array", "model library must be a JSON array");
  ModelLibrary library;
  for (const json& mj : j) {
    jsonu::check_keys(mj, {"id", "occluders", "footprint"}, "model");
    ModelDef def;
    const json& id = jsonu::require(mj, "id", "model");
    if (!id.is_string())
      throw ValidationError("expected-string", "model id must be a string");
    def.id = id.get<std::string>();
    for (const json& oj : jsonu::require(mj, "occluders", "model")) {
      jsonu::check_keys(oj, {"min", "max"}, "occluder");
      Aabb box;
      box.min = jsonu::as_vec3(jsonu::require(oj, "min", "occluder"), "occluder min");
      box.max = jsonu::as_vec3(jsonu::require(oj, "max", "occluder"), "occluder max");
      def.occluders.push_back(box);
    }
    const json& fj = jsonu::require(mj, "footprint", "model");
    jsonu::check_keys(fj, {"min", "max"}, "footprint");
    def.footprint.min = jsonu::as_vec2(jsonu::require(fj, "min", "footprint"), "footprint min");
    def.footprint.max = jsonu::as_vec2(jsonu::require(fj, "max", "footprint"), "footprint max");
    if (def.occluders.empty())
      throw ValidationError("empty-model", "model '" + def.id + "' has no occluders");
    for (const Aabb& box : def.occluders) {
      const Rect2 fp = box.footprint();
      if (fp.min.x < def.footprint.min.x - 1e-9 || fp.max.x > def.footprint.max.x + 1e-9 ||
          fp.min.z < def.footprint.min.z - 1e-9 || fp.max.z > def.footprint.max.z + 1e-9)
        throw ValidationError("footprint-too-small",
                              "model '" + def.id +
                                  "' footprint does not contain all occluders");
    }
    library.push_back(std::move(def));
  }
  return library;
}

inline std::string save_model_library(const ModelLibrary& library) {
  using jsonu::json;
  json j = json::array();
  for (const ModelDef& def : library) {
    json occluders = json::array();
    for (const Aabb& box : def.occluders)
      occluders.push_back({{"min", jsonu::vec3_json(box.min)},
                           {"max", jsonu::vec3_json(box.max)}});
    j.push_back({{"id", def.id},
                 {"occluders", std::move(occluders)},
                 {"footprint",
                  {{"min", jsonu::vec2_json(def.footprint.min)},
                   {"max", jsonu::vec2_json(def.footprint.max)}}}});
  }
  return j.dump(2) + "\n";
}

// A small built-in library so the complex-model mode runs out of the box.
inline ModelLibrary default_model_library() {
  ModelLibrary library;
  ModelDef rock;
  rock.id = "rock";
  rock.occluders = {{{-1.2, 0.0, -0.9}, {1.2, 1.6, 0.9}},
                    {{-0.7, 0.0, -0.5}, {0.7, 2.4, 0.5}}};
  rock.footprint = {{-1.2, -0.9}, {1.2, 0.9}};
  library.push_back(rock);
  ModelDef tree;
  tree.id = "tree";
  tree.occluders = {{{-0.25, 0.0, -0.25}, {0.25, 2.2, 0.25}},
                    {{-1.1, 1.6, -1.1}, {1.1, 3.6, 1.1}}};
  tree.footprint = {{-1.1, -1.1}, {1.1, 1.1}};
  library.push_back(tree);
  return library;
}

inline std::string history_csv(const std::vector<GenerationRecord>& history) {
  std::string out = "generation,best_fitness,mean_fitness,best_constraints_met\n";
  char buf[128];
  for (const GenerationRecord& rec : history) {
    std::snprintf(buf, sizeof(buf), "%d,%.9g,%.9g,%d\n", rec.generation,
                  rec.best_fitness, rec.mean_fitness, rec.best_constraints_met);
    out += buf;
  }
  return out;
}

}  // namespace walkgen
