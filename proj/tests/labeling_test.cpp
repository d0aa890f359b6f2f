#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <sstream>
#include <vector>

#include "hyperseed/hdmap.hpp"
#include "hyperseed/labeling.hpp"
#include "hyperseed/learning.hpp"
#include "hyperseed/rng.hpp"

namespace hs = hyperseed;

namespace {

struct Fixture {
  hs::HdMap map;
  hs::SeedState state;
  hs::LabeledSamples train;
};

/// One random datum per class, each bound into the seed at its own node.
Fixture perfectly_bound(std::size_t classes, std::size_t d, std::uint64_t seed) {
  hs::Rng rng(seed);
  auto map = hs::build_map(10, 10, 0.2, d, rng);
  hs::LabeledSamples train;
  hs::BundleVector s(d);
  for (std::size_t c = 0; c < classes; ++c) {
    train.vectors.push_back(hs::random_phasor(d, rng));
    train.labels.push_back(c);
    train.names.push_back("class" + std::to_string(c));
    s += hs::bind(train.vectors.back(), map.node(c, 9 - c));
  }
  return {std::move(map), hs::SeedState({std::move(s)}), std::move(train)};
}

}  // namespace

TEST(LabelMap, SingleSampleLabelsOneNode) {
  auto f = perfectly_bound(1, 500, 1);
  const auto lm = hs::label_map(f.state, f.map, f.train);
  ASSERT_EQ(lm.labeled_nodes().size(), 1u);
  EXPECT_EQ(lm.labeled_nodes()[0].coords, (hs::GridCoord{0, 9}));
  EXPECT_EQ(lm.label_at({0, 9}), std::optional<std::size_t>(0));
}

TEST(LabelMap, MajorityVoteAndLowOrdinalTieBreak) {
  hs::Rng rng(2);
  const auto map = hs::build_map(3, 3, 0.2, 32, rng);
  hs::LabeledMap::VoteTable votes;
  votes[{0, 0}] = {3, 1};
  votes[{1, 1}] = {2, 2};
  votes[{2, 2}] = {1, 4};
  votes[{0, 2}] = {0, 0};
  const hs::LabeledMap lm(map, {"A", "B"}, votes);
  EXPECT_EQ(lm.label_at({0, 0}), std::optional<std::size_t>(0));
  EXPECT_EQ(lm.label_at({1, 1}), std::optional<std::size_t>(0));
  EXPECT_EQ(lm.label_at({2, 2}), std::optional<std::size_t>(1));
  EXPECT_FALSE(lm.label_at({0, 2}).has_value());
  EXPECT_EQ(lm.labeled_nodes().size(), 3u);
}

TEST(LabelMap, DoesNotMutateSeeds) {
  auto f = perfectly_bound(4, 800, 3);
  const std::vector<double> before(f.state.seed(0).re().begin(), f.state.seed(0).re().end());
  const auto updates = f.state.updates_done();
  (void)hs::label_map(f.state, f.map, f.train);
  EXPECT_TRUE(std::ranges::equal(before, f.state.seed(0).re()));
  EXPECT_EQ(f.state.updates_done(), updates);
}

TEST(LabelMap, RejectsBadInput) {
  auto f = perfectly_bound(2, 200, 4);
  hs::LabeledSamples empty;
  EXPECT_THROW(hs::label_map(f.state, f.map, empty), hs::InvalidArgument);
  auto bad = f.train;
  bad.labels.back() = 7;
  EXPECT_THROW(hs::label_map(f.state, f.map, bad), hs::InvalidArgument);
}

TEST(Classify, PerfectlyBoundSamplesAllCorrect) {
  auto f = perfectly_bound(5, 2000, 5);
  const auto lm = hs::label_map(f.state, f.map, f.train);
  const auto predictions = hs::classify_all(f.state, f.map, lm, f.train.vectors);
  for (std::size_t q = 0; q < predictions.size(); ++q) EXPECT_EQ(predictions[q].label, f.train.labels[q]);
}

TEST(Classify, OnlyLabeledNodeWinsEveryQuery) {
  auto f = perfectly_bound(1, 500, 6);
  const auto lm = hs::label_map(f.state, f.map, f.train);
  hs::Rng rng(60);
  for (int q = 0; q < 10; ++q) {
    const auto c = hs::classify(f.state, f.map, lm, hs::random_phasor(500, rng));
    EXPECT_EQ(c.label, 0u);
    EXPECT_EQ(c.coords, (hs::GridCoord{0, 9}));
  }
}

TEST(Classify, PredictionsComeFromTrainingLabelsAndAreDeterministic) {
  auto f = perfectly_bound(3, 600, 7);
  f.train.names.push_back("never-seen");
  const auto lm = hs::label_map(f.state, f.map, f.train);
  hs::Rng rng(70);
  std::vector<hs::PhasorVector> queries;
  for (int q = 0; q < 50; ++q) queries.push_back(hs::random_phasor(600, rng));
  const auto a = hs::classify_all(f.state, f.map, lm, queries);
  const auto b = hs::classify_all(f.state, f.map, lm, queries);
  for (std::size_t q = 0; q < queries.size(); ++q) {
    EXPECT_LT(a[q].label, 3u);
    EXPECT_EQ(a[q].label, b[q].label);
    EXPECT_EQ(a[q].similarity, b[q].similarity);
  }
}

TEST(Classify, EmptyLabeledMapRejected) {
  auto f = perfectly_bound(1, 100, 8);
  const hs::LabeledMap lm(f.map, {"A"}, {});
  EXPECT_THROW(hs::classify(f.state, f.map, lm, f.train.vectors[0]), hs::InvalidArgument);
}

TEST(ExportProjection, RowsMatchProjectionAndClassification) {
  auto f = perfectly_bound(3, 1000, 9);
  const auto lm = hs::label_map(f.state, f.map, f.train);
  const auto rows = hs::export_projection(f.state, f.map, lm, f.train);
  ASSERT_EQ(rows.size(), 3u);
  for (std::size_t q = 0; q < 3; ++q) {
    EXPECT_EQ(rows[q].sample, q);
    EXPECT_EQ(rows[q].coords, (hs::GridCoord{q, 9 - q}));
    EXPECT_EQ(rows[q].true_label, q);
    EXPECT_EQ(rows[q].predicted_label, q);
  }
}

TEST(ExportProjection, EmptySamplesGiveHeaderOnly) {
  auto f = perfectly_bound(1, 100, 10);
  const auto lm = hs::label_map(f.state, f.map, f.train);
  const auto rows = hs::export_projection(f.state, f.map, lm, hs::LabeledSamples{});
  EXPECT_TRUE(rows.empty());
  std::ostringstream out;
  hs::write_projection_csv(out, rows, f.train.names);
  EXPECT_EQ(out.str(), "sample,i,j,true_label,predicted_label,similarity\n");
}

TEST(ExportProjection, CollapsedRegimeSharesOneCell) {
  hs::Rng rng(11);
  const auto src = hs::build_map(3, 3, 0.2, 10000, rng);
  const auto map = hs::build_map(5, 5, 0.8, 10000, rng);
  const hs::SeedState state({hs::BundleVector::from_phasor(hs::bind(src.node(0, 1), map.node(2, 2)))});
  hs::LabeledSamples samples;
  samples.names = {"grid"};
  for (std::size_t r = 0; r < src.size(); ++r) {
    if (src.coord_of(r) == hs::GridCoord{2, 2}) continue;  // outside the positive kernel lobe
    samples.vectors.push_back(src.node(src.coord_of(r)));
    samples.labels.push_back(0);
  }
  const auto lm = hs::label_map(state, map, samples);
  for (const auto& row : hs::export_projection(state, map, lm, samples)) EXPECT_EQ(row.coords, (hs::GridCoord{2, 2}));
}

TEST(ProjectionCsv, WritesNamesAndRoundTripSimilarity) {
  const std::vector<hs::ProjectionRow> rows = {{0, {1, 2}, 0, 1, 0.1}};
  std::ostringstream out;
  hs::write_projection_csv(out, rows, std::vector<std::string>{"a", "b"});
  EXPECT_EQ(out.str(), "sample,i,j,true_label,predicted_label,similarity\n0,1,2,a,b,0.10000000000000001\n");
}
