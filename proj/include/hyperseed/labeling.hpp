#pragma once
/**
 * Node labeling and classification on top of a trained seed state.
 *
 * Labeling presents every training sample once (seeds untouched), counts the
 * labels landing on each BMV node and gives each node its majority label, ties
 * to the lowest label ordinal. Classification projects a query through every
 * seed and returns the label of the most similar labeled node.
 */

#include <cstddef>
#include <iomanip>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "hyperseed/error.hpp"
#include "hyperseed/hdmap.hpp"
#include "hyperseed/learning.hpp"
#include "hyperseed/search.hpp"
#include "hyperseed/vsa.hpp"

namespace hyperseed {

/// Encoded samples with label ordinals into `names` (first-appearance order).
struct LabeledSamples {
  std::vector<PhasorVector> vectors;
  std::vector<std::size_t> labels;
  std::vector<std::string> names;
};

class LabeledMap {
 public:
  struct Node {
    GridCoord coords;
    PhasorVector vector;
    std::size_t label = 0;
  };

  using VoteTable = std::map<GridCoord, std::vector<std::size_t>>;

  /// Builds the labels from per-node vote counts (one count per label name).
  LabeledMap(const HdMap& map, std::vector<std::string> names, VoteTable votes)
      : names_(std::move(names)), votes_(std::move(votes)), bank_(map.dim()) {
    std::vector<double> re(map.dim());
    for (const auto& [coords, counts] : votes_) {
      if (!map.contains(coords)) throw InvalidArgument("LabeledMap: node " + to_string(coords) + " outside the map");
      if (counts.size() != names_.size()) throw InvalidArgument("LabeledMap: vote vector size differs from labels");
      std::size_t winner = 0;
      std::size_t total = 0;
      for (std::size_t l = 0; l < counts.size(); ++l) {
        total += counts[l];
        if (counts[l] > counts[winner]) winner = l;
      }
      if (total == 0) continue;
      nodes_.push_back(Node{coords, map.node(coords), winner});
      labels_.emplace(coords, winner);
      map.node_real_parts(map.index_of(coords), re);
      bank_.add_row(re);
    }
  }

  std::span<const std::string> label_names() const noexcept { return names_; }
  const VoteTable& votes() const noexcept { return votes_; }
  std::span<const Node> labeled_nodes() const noexcept { return nodes_; }
  bool empty() const noexcept { return nodes_.empty(); }

  std::optional<std::size_t> label_at(const GridCoord& c) const {
    const auto it = labels_.find(c);
    if (it == labels_.end()) return std::nullopt;
    return it->second;
  }

  const detail::RealPartBank& bank() const noexcept { return bank_; }

 private:
  std::vector<std::string> names_;
  VoteTable votes_;
  std::vector<Node> nodes_;  // row-major coordinate order
  std::map<GridCoord, std::size_t> labels_;
  detail::RealPartBank bank_;
};

/// One epoch over `training` without updating the seeds.
inline LabeledMap label_map(const SeedState& state, const HdMap& map, const LabeledSamples& training) {
  if (training.vectors.empty()) throw InvalidArgument("label_map: empty training set");
  if (training.vectors.size() != training.labels.size()) {
    throw InvalidArgument("label_map: vectors and labels differ in length");
  }
  const auto projections = project_all(state, training.vectors, map);
  LabeledMap::VoteTable votes;
  for (std::size_t q = 0; q < projections.size(); ++q) {
    const std::size_t label = training.labels[q];
    if (label >= training.names.size()) throw InvalidArgument("label_map: label ordinal out of range");
    auto& counts = votes[projections[q].bmv.coords];
    counts.resize(training.names.size(), 0);
    ++counts[label];
  }
  return LabeledMap(map, training.names, std::move(votes));
}

struct Classification {
  std::size_t label = 0;
  GridCoord coords;
  double similarity = 0.0;
  std::size_t seed_index = 0;
};

/**
 * For every query: max over (seed, labeled node) of
 * cosine_real(unbind(query, seed), node); ties go to the lower seed, then the
 * lower row-major node.
 */
inline std::vector<Classification> classify_all(const SeedState& state, const HdMap& map, const LabeledMap& lm,
                                                std::span<const PhasorVector> queries) {
  if (lm.empty()) throw InvalidArgument("classify: labeled map has no labeled nodes");
  const auto nodes = lm.labeled_nodes();
  std::vector<Classification> out(queries.size(),
                                  Classification{0, {}, -std::numeric_limits<double>::infinity(), 0});
  std::vector<double> node_re(map.dim());
  auto exact = [&](std::size_t row, std::span<const double> query_re) {
    map.node_real_parts(map.index_of(nodes[row].coords), node_re);
    return cosine_of_real_parts(query_re, node_re);
  };
  for (std::size_t s = 0; s < state.size(); ++s) {
    const BundleVector& seed = state.seed(s);
    const auto matches =
        detail::best_rows(lm.bank(), queries.size(), [&](std::size_t q) { return unbind(queries[q], seed); }, exact);
    for (std::size_t q = 0; q < queries.size(); ++q) {
      if (matches[q].similarity > out[q].similarity) {
        const auto& node = nodes[matches[q].row];
        out[q] = Classification{node.label, node.coords, matches[q].similarity, s};
      }
    }
  }
  return out;
}

inline Classification classify(const SeedState& state, const HdMap& map, const LabeledMap& lm,
                               const PhasorVector& query) {
  return classify_all(state, map, lm, std::span<const PhasorVector>(&query, 1)).front();
}

struct ProjectionRow {
  std::size_t sample = 0;
  GridCoord coords;
  std::size_t true_label = 0;
  std::size_t predicted_label = 0;
  double similarity = 0.0;

  friend bool operator==(const ProjectionRow&, const ProjectionRow&) = default;
};

/// Per sample: BMV coordinates and similarity over the full map, plus the predicted label.
inline std::vector<ProjectionRow> export_projection(const SeedState& state, const HdMap& map, const LabeledMap& lm,
                                                    const LabeledSamples& samples) {
  std::vector<ProjectionRow> rows;
  if (samples.vectors.empty()) return rows;
  const auto projections = project_all(state, samples.vectors, map);
  const auto predictions = classify_all(state, map, lm, samples.vectors);
  rows.reserve(samples.vectors.size());
  for (std::size_t q = 0; q < samples.vectors.size(); ++q) {
    rows.push_back(ProjectionRow{q, projections[q].bmv.coords, samples.labels.at(q), predictions[q].label,
                                 projections[q].bmv.similarity});
  }
  return rows;
}

inline constexpr std::string_view kProjectionHeader = "sample,i,j,true_label,predicted_label,similarity";

/// CSV with header `sample,i,j,true_label,predicted_label,similarity`; labels written by name.
inline void write_projection_csv(std::ostream& out, std::span<const ProjectionRow> rows,
                                 std::span<const std::string> names) {
  out << kProjectionHeader << '\n';
  for (const auto& r : rows) {
    std::ostringstream sim;
    sim << std::setprecision(17) << r.similarity;
    out << r.sample << ',' << r.coords.i << ',' << r.coords.j << ',' << names[r.true_label] << ','
        << names[r.predicted_label] << ',' << sim.str() << '\n';
  }
}

}  // namespace hyperseed
