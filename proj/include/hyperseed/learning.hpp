#pragma once
/**
 * Seed-vector learning.
 *
 * The learned state is a list of N bundle vectors s_i. A datum d is projected
 * onto the map by unbinding it from every seed and taking the best matching
 * node over all seeds. One learning iteration binds the current datum to a
 * target node and adds the binding to one seed (round robin):
 *
 *     s_c += d o p_target
 *
 * The next datum is the weakest match: the datum whose projection is least
 * similar to its best matching node (farthest-first traversal).
 */

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "hyperseed/error.hpp"
#include "hyperseed/hdmap.hpp"
#include "hyperseed/rng.hpp"
#include "hyperseed/vsa.hpp"

namespace hyperseed {

class SeedState {
 public:
  SeedState() = default;

  SeedState(std::vector<BundleVector> seeds, bool renormalize = false)
      : seeds_(std::move(seeds)), updates_per_seed_(seeds_.size(), 0), renormalize_(renormalize) {
    if (seeds_.empty()) throw InvalidArgument("SeedState: at least one seed vector is required");
    for (const auto& s : seeds_) detail::require_same_dim(s.dim(), seeds_.front().dim(), "SeedState");
  }

  /// Full state, as read back from a model file.
  SeedState(std::vector<BundleVector> seeds, std::size_t cursor, std::size_t updates_done,
            std::vector<std::size_t> updates_per_seed, bool renormalize)
      : SeedState(std::move(seeds), renormalize) {
    if (cursor >= seeds_.size()) throw InvalidArgument("SeedState: cursor out of range");
    if (updates_per_seed.size() != seeds_.size()) throw InvalidArgument("SeedState: update counts mismatch");
    cursor_ = cursor;
    updates_done_ = updates_done;
    updates_per_seed_ = std::move(updates_per_seed);
  }

  std::size_t size() const noexcept { return seeds_.size(); }
  std::size_t dim() const noexcept { return seeds_.empty() ? 0 : seeds_.front().dim(); }
  const BundleVector& seed(std::size_t i) const { return seeds_.at(i); }
  std::span<const BundleVector> seeds() const noexcept { return seeds_; }
  std::size_t cursor() const noexcept { return cursor_; }
  std::size_t updates_done() const noexcept { return updates_done_; }
  std::span<const std::size_t> updates_per_seed() const noexcept { return updates_per_seed_; }
  bool renormalize() const noexcept { return renormalize_; }

  /// seeds[cursor] += bind(data, target); returns the index of the updated seed.
  std::size_t update(const PhasorVector& data, const PhasorVector& target) {
    detail::require_same_dim(data.dim(), dim(), "update_seed");
    detail::require_same_dim(target.dim(), dim(), "update_seed");
    const std::size_t updated = cursor_;
    BundleVector& s = seeds_[updated];
    s += bind(data, target);
    if (renormalize_) s = BundleVector::from_phasor(normalize(s));
    ++updates_per_seed_[updated];
    ++updates_done_;
    cursor_ = (cursor_ + 1) % seeds_.size();
    return updated;
  }

  friend bool operator==(const SeedState&, const SeedState&) = default;

 private:
  std::vector<BundleVector> seeds_;
  std::size_t cursor_ = 0;
  std::size_t updates_done_ = 0;
  std::vector<std::size_t> updates_per_seed_;
  bool renormalize_ = false;
};

/// N random phasors stored as unit-magnitude bundles, cursor at 0.
inline SeedState init_seeds(std::size_t n, std::size_t d, Rng& rng, bool renormalize = false) {
  if (n == 0) throw InvalidArgument("init_seeds: N must be at least 1");
  detail::require_dim(d, "init_seeds");
  std::vector<BundleVector> seeds;
  seeds.reserve(n);
  for (std::size_t i = 0; i < n; ++i) seeds.push_back(BundleVector::from_phasor(random_phasor(d, rng)));
  return SeedState(std::move(seeds), renormalize);
}

inline std::size_t update_seed(SeedState& state, const PhasorVector& data, const PhasorVector& target) {
  return state.update(data, target);
}

struct Projection {
  BmvResult bmv;
  std::size_t seed_index = 0;

  friend bool operator==(const Projection&, const Projection&) = default;
};

/// BMV of unbind(data[q], seed) for every datum, for a single seed.
inline std::vector<BmvResult> project_with_seed(const BundleVector& seed, std::span<const PhasorVector> data,
                                                const HdMap& map) {
  detail::require_same_dim(seed.dim(), map.dim(), "project");
  return find_bmv_batch(map, data.size(), [&](std::size_t q) { return unbind(data[q], seed); });
}

namespace detail {

/// Keeps `best` unless `candidate` is strictly more similar (lower seed index wins ties).
inline void keep_best(Projection& best, const BmvResult& candidate, std::size_t seed_index) {
  if (candidate.similarity > best.bmv.similarity) best = Projection{candidate, seed_index};
}

}  // namespace detail

/// Projections of every datum: best node across all seeds.
inline std::vector<Projection> project_all(const SeedState& state, std::span<const PhasorVector> data,
                                           const HdMap& map) {
  std::vector<Projection> out(data.size(),
                              Projection{BmvResult{{}, -std::numeric_limits<double>::infinity()}, 0});
  for (std::size_t s = 0; s < state.size(); ++s) {
    const auto per_seed = project_with_seed(state.seed(s), data, map);
    for (std::size_t q = 0; q < data.size(); ++q) detail::keep_best(out[q], per_seed[q], s);
  }
  return out;
}

inline Projection project(const SeedState& state, const PhasorVector& data, const HdMap& map) {
  return project_all(state, std::span<const PhasorVector>(&data, 1), map).front();
}

struct WeakestMatch {
  std::size_t index = 0;
  double similarity = 0.0;
};

/// Index of the datum with the lowest BMV similarity, ties to the lowest index.
inline WeakestMatch weakest_of(std::span<const Projection> projections) {
  if (projections.empty()) throw InvalidArgument("wms_pass: empty dataset");
  WeakestMatch weakest{0, projections.front().bmv.similarity};
  for (std::size_t q = 1; q < projections.size(); ++q) {
    if (projections[q].bmv.similarity < weakest.similarity) weakest = {q, projections[q].bmv.similarity};
  }
  return weakest;
}

inline WeakestMatch wms_pass(const SeedState& state, std::span<const PhasorVector> dataset, const HdMap& map) {
  if (dataset.empty()) throw InvalidArgument("wms_pass: empty dataset");
  return weakest_of(project_all(state, dataset, map));
}

/// How the target node of each update is chosen.
class TargetStrategy {
 public:
  struct RandomNode {
    Rng rng;
  };
  struct CornerCycle {};
  struct FixedList {
    std::vector<GridCoord> targets;
  };

  /// Uniform over all nodes, with replacement.
  static TargetStrategy random_node(Rng rng) { return TargetStrategy(RandomNode{std::move(rng)}); }
  /// (0,0), (n-1,0), (n-1,m-1), (0,m-1), repeating.
  static TargetStrategy corner_cycle() { return TargetStrategy(CornerCycle{}); }
  /// Targets in the given order; the list repeats when exhausted.
  static TargetStrategy fixed_list(std::vector<GridCoord> targets) {
    if (targets.empty()) throw InvalidArgument("TargetStrategy: fixed target list is empty");
    return TargetStrategy(FixedList{std::move(targets)});
  }

  std::string name() const {
    if (std::holds_alternative<RandomNode>(variant_)) return "random";
    if (std::holds_alternative<CornerCycle>(variant_)) return "corners";
    return "fixed";
  }

  const std::vector<GridCoord>* fixed_targets() const {
    const auto* list = std::get_if<FixedList>(&variant_);
    return list ? &list->targets : nullptr;
  }

  void validate(const HdMap& map) const {
    if (const auto* list = std::get_if<FixedList>(&variant_)) {
      for (const auto& c : list->targets) {
        if (!map.contains(c)) throw InvalidArgument("TargetStrategy: target " + to_string(c) + " outside the map");
      }
    }
  }

  GridCoord next(const HdMap& map) {
    const std::size_t call = calls_++;
    if (auto* random = std::get_if<RandomNode>(&variant_)) {
      return map.coord_of(static_cast<std::size_t>(random->rng.below(map.size())));
    }
    if (std::holds_alternative<CornerCycle>(variant_)) {
      const std::size_t n = map.rows() - 1;
      const std::size_t m = map.cols() - 1;
      const GridCoord corners[4] = {{0, 0}, {n, 0}, {n, m}, {0, m}};
      return corners[call % 4];
    }
    const auto& list = std::get<FixedList>(variant_).targets;
    const GridCoord c = list[call % list.size()];
    if (!map.contains(c)) throw InvalidArgument("TargetStrategy: target " + to_string(c) + " outside the map");
    return c;
  }

 private:
  using Variant = std::variant<RandomNode, CornerCycle, FixedList>;
  explicit TargetStrategy(Variant v) : variant_(std::move(v)) {}

  Variant variant_;
  std::size_t calls_ = 0;
};

struct TrainConfig {
  std::size_t iterations = 1;
  std::size_t num_seeds = 1;
  TargetStrategy strategy = TargetStrategy::corner_cycle();
  bool renormalize = false;
};

/// One executed update.
struct TrainStep {
  std::size_t datum = 0;
  GridCoord target;
  std::size_t seed_index = 0;
  /// BMV similarity of the datum when WMS selected it; nullopt for the first update.
  std::optional<double> weakest_similarity;
};

struct TrainResult {
  SeedState state;
  std::vector<TrainStep> trace;
  std::size_t wms_passes = 0;
};

/**
 * Runs `cfg.iterations` updates. The first datum is dataset[0]; every later one
 * comes from a full weakest-match pass. Seeds are drawn from `rng`.
 *
 * Only the seed touched by the previous update changes between passes, so the
 * per-seed projections of the other seeds are reused; the selection is the same
 * as calling wms_pass on the current state.
 */
inline TrainResult train(std::span<const PhasorVector> dataset, const HdMap& map, TrainConfig cfg, Rng& rng) {
  if (dataset.empty()) throw InvalidArgument("train: empty dataset");
  if (cfg.iterations == 0) throw InvalidArgument("train: iterations must be at least 1");
  for (const auto& v : dataset) detail::require_same_dim(v.dim(), map.dim(), "train");
  cfg.strategy.validate(map);

  TrainResult result{init_seeds(cfg.num_seeds, map.dim(), rng, cfg.renormalize), {}, 0};
  SeedState& state = result.state;
  std::vector<std::vector<BmvResult>> per_seed(state.size());
  std::vector<bool> stale(state.size(), true);

  std::size_t datum = 0;
  std::optional<double> weakest;
  for (std::size_t it = 0; it < cfg.iterations; ++it) {
    if (it > 0) {
      std::vector<Projection> best(dataset.size(),
                                   Projection{BmvResult{{}, -std::numeric_limits<double>::infinity()}, 0});
      for (std::size_t s = 0; s < state.size(); ++s) {
        if (stale[s]) {
          per_seed[s] = project_with_seed(state.seed(s), dataset, map);
          stale[s] = false;
        }
        for (std::size_t q = 0; q < dataset.size(); ++q) detail::keep_best(best[q], per_seed[s][q], s);
      }
      const WeakestMatch w = weakest_of(best);
      datum = w.index;
      weakest = w.similarity;
      ++result.wms_passes;
    }
    const GridCoord target = cfg.strategy.next(map);
    const std::size_t updated = state.update(dataset[datum], map.node(target));
    stale[updated] = true;
    result.trace.push_back(TrainStep{datum, target, updated, weakest});
  }
  return result;
}

}  // namespace hyperseed
