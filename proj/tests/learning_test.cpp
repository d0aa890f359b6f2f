#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

#include "hyperseed/hdmap.hpp"
#include "hyperseed/learning.hpp"
#include "hyperseed/rng.hpp"
#include "hyperseed/vsa.hpp"

namespace hs = hyperseed;

namespace {

std::vector<hs::PhasorVector> random_dataset(std::size_t count, std::size_t d, hs::Rng& rng) {
  std::vector<hs::PhasorVector> out;
  for (std::size_t q = 0; q < count; ++q) out.push_back(hs::random_phasor(d, rng));
  return out;
}

/// Every node of a 3x3 FPE grid with bandwidth 0.2, row-major.
std::vector<hs::PhasorVector> source_grid(const hs::HdMap& src) {
  std::vector<hs::PhasorVector> out;
  for (std::size_t r = 0; r < src.size(); ++r) out.push_back(src.node(src.coord_of(r)));
  return out;
}

}  // namespace

TEST(InitSeeds, UnitMagnitudeAndDeterministic) {
  hs::Rng a(1), b(1);
  const auto s = hs::init_seeds(1, 100, a);
  ASSERT_EQ(s.size(), 1u);
  for (std::size_t k = 0; k < 100; ++k) {
    EXPECT_NEAR(std::hypot(s.seed(0).real(k), s.seed(0).imag(k)), 1.0, 1e-12);
  }
  const auto t = hs::init_seeds(1, 100, b);
  EXPECT_TRUE(std::ranges::equal(s.seed(0).re(), t.seed(0).re()));
  EXPECT_THROW(hs::init_seeds(0, 100, a), hs::InvalidArgument);
}

TEST(InitSeeds, ManySeedsQuasiOrthogonal) {
  hs::Rng rng(2);
  const auto s = hs::init_seeds(10, 5000, rng);
  for (std::size_t a = 0; a < 10; ++a) {
    for (std::size_t b = a + 1; b < 10; ++b) EXPECT_LT(std::abs(hs::cosine_real(s.seed(a), s.seed(b))), 0.05);
  }
}

TEST(Project, BoundDatumLandsOnTarget) {
  hs::Rng rng(3);
  const auto map = hs::build_map(5, 5, 0.3, 2000, rng);
  const auto datum = hs::random_phasor(2000, rng);
  const hs::SeedState state({hs::BundleVector::from_phasor(hs::bind(datum, map.node(2, 2)))});
  const auto p = hs::project(state, datum, map);
  EXPECT_EQ(p.bmv.coords, (hs::GridCoord{2, 2}));
  EXPECT_NEAR(p.bmv.similarity, 1.0, 1e-9);
}

TEST(Project, CollapseOnSourceGridExceptFarthestVector) {
  hs::Rng rng(4);
  const auto src = hs::build_map(3, 3, 0.2, 10000, rng);
  const auto map = hs::build_map(5, 5, 0.8, 10000, rng);
  const hs::SeedState state({hs::BundleVector::from_phasor(hs::bind(src.node(0, 1), map.node(2, 2)))});
  // (2,2) sits at bandwidth offset (0.4, 0.2) from the bound vector; its real-part kernel there is negative,
  // so it is the one vector that does not collapse and it is the weakest match.
  const auto grid = source_grid(src);
  for (std::size_t r = 0; r < grid.size(); ++r) {
    const auto coords = hs::project(state, grid[r], map).bmv.coords;
    if (src.coord_of(r) == hs::GridCoord{2, 2}) {
      EXPECT_NE(coords, (hs::GridCoord{2, 2}));
    } else {
      EXPECT_EQ(coords, (hs::GridCoord{2, 2})) << "source " << r;
    }
  }
  EXPECT_EQ(src.coord_of(hs::wms_pass(state, grid, map).index), (hs::GridCoord{2, 2}));
}

TEST(Project, TrainedSeedDominatesUntrainedOne) {
  hs::Rng rng(5);
  const auto map = hs::build_map(10, 10, 0.1, 3000, rng);
  const auto datum = hs::random_phasor(3000, rng);
  const hs::SeedState state({hs::BundleVector::from_phasor(hs::random_phasor(3000, rng)),
                             hs::BundleVector::from_phasor(hs::bind(datum, map.node(4, 6)))});
  const auto p = hs::project(state, datum, map);
  EXPECT_EQ(p.seed_index, 1u);
  EXPECT_EQ(p.bmv.coords, (hs::GridCoord{4, 6}));
}

TEST(WmsPass, PicksAnUnboundDatum) {
  hs::Rng rng(6);
  const auto map = hs::build_map(6, 6, 0.2, 2000, rng);
  auto data = random_dataset(5, 2000, rng);
  const hs::SeedState state({hs::BundleVector::from_phasor(hs::bind(data[2], map.node(1, 1)))});
  EXPECT_NE(hs::wms_pass(state, data, map).index, 2u);
}

TEST(WmsPass, SingleElementIsIndexZero) {
  hs::Rng rng(7);
  const auto map = hs::build_map(3, 3, 0.2, 500, rng);
  const auto data = random_dataset(1, 500, rng);
  EXPECT_EQ(hs::wms_pass(hs::init_seeds(1, 500, rng), data, map).index, 0u);
  EXPECT_THROW(hs::wms_pass(hs::init_seeds(1, 500, rng), std::vector<hs::PhasorVector>{}, map), hs::InvalidArgument);
}

TEST(WmsPass, CollapseMinimumAtFarthestSourcePoints) {
  hs::Rng rng(8);
  const auto src = hs::build_map(3, 3, 0.2, 10000, rng);
  const auto map = hs::build_map(5, 5, 0.8, 10000, rng);
  const hs::SeedState state({hs::BundleVector::from_phasor(hs::bind(src.node(0, 1), map.node(2, 2)))});
  const auto weakest = src.coord_of(hs::wms_pass(state, source_grid(src), map).index);
  EXPECT_TRUE(weakest == (hs::GridCoord{2, 0}) || weakest == (hs::GridCoord{2, 2})) << hs::to_string(weakest);
}

TEST(UpdateSeed, FreshSeedRetrievesTargetAfterOneUpdate) {
  hs::Rng rng(9);
  const auto map = hs::build_map(10, 10, 0.1, 3000, rng);
  auto state = hs::init_seeds(1, 3000, rng);
  const auto datum = hs::random_phasor(3000, rng);
  EXPECT_EQ(hs::update_seed(state, datum, map.node(7, 1)), 0u);
  EXPECT_EQ(hs::find_bmv(map, hs::unbind(datum, state.seed(0))).coords, (hs::GridCoord{7, 1}));
}

TEST(UpdateSeed, RoundRobinAcrossSeeds) {
  hs::Rng rng(10);
  const auto map = hs::build_map(4, 4, 0.1, 200, rng);
  auto state = hs::init_seeds(2, 200, rng);
  const auto d = hs::random_phasor(200, rng);
  EXPECT_EQ(hs::update_seed(state, d, map.node(0, 0)), 0u);
  EXPECT_EQ(hs::update_seed(state, d, map.node(1, 1)), 1u);
  EXPECT_EQ(hs::update_seed(state, d, map.node(2, 2)), 0u);
  EXPECT_EQ(state.updates_done(), 3u);
}

TEST(UpdateSeed, CrosstalkGrowsWithUpdates) {
  const std::size_t d = 1000;
  std::vector<double> mean_similarity(10, 0.0);
  for (std::uint64_t trial = 0; trial < 100; ++trial) {
    hs::Rng rng(1000 + trial);
    const auto map = hs::build_map(10, 10, 0.1, d, rng);
    auto state = hs::init_seeds(1, d, rng);
    const auto first = hs::random_phasor(d, rng);
    hs::update_seed(state, first, map.node(3, 3));
    for (std::size_t k = 0; k < 10; ++k) {
      mean_similarity[k] += hs::cosine_real(hs::unbind(first, state.seed(0)), map.node(3, 3)) / 100.0;
      hs::update_seed(state, hs::random_phasor(d, rng), map.node(0, 0));
    }
  }
  for (std::size_t k = 1; k < 10; ++k) EXPECT_LT(mean_similarity[k], mean_similarity[k - 1]) << "K=" << k + 1;
}

TEST(UpdateSeed, RenormalizeKeepsUnitMagnitude) {
  hs::Rng rng(11);
  const auto map = hs::build_map(4, 4, 0.1, 100, rng);
  auto state = hs::init_seeds(1, 100, rng, true);
  for (int u = 0; u < 5; ++u) hs::update_seed(state, hs::random_phasor(100, rng), map.node(1, 2));
  for (std::size_t k = 0; k < 100; ++k) EXPECT_NEAR(std::hypot(state.seed(0).real(k), state.seed(0).imag(k)), 1.0, 1e-12);
}

TEST(TargetStrategy, CornersAndFixedListCycle) {
  hs::Rng rng(12);
  const auto map = hs::build_map(4, 5, 0.1, 10, rng);
  auto corners = hs::TargetStrategy::corner_cycle();
  const std::vector<hs::GridCoord> expected = {{0, 0}, {3, 0}, {3, 4}, {0, 4}, {0, 0}};
  for (const auto& c : expected) EXPECT_EQ(corners.next(map), c);
  auto fixed = hs::TargetStrategy::fixed_list({{1, 1}, {2, 2}});
  EXPECT_EQ(fixed.next(map), (hs::GridCoord{1, 1}));
  EXPECT_EQ(fixed.next(map), (hs::GridCoord{2, 2}));
  EXPECT_EQ(fixed.next(map), (hs::GridCoord{1, 1}));
  EXPECT_THROW(hs::TargetStrategy::fixed_list({}), hs::InvalidArgument);
  EXPECT_THROW(hs::TargetStrategy::fixed_list({{4, 0}}).validate(map), hs::InvalidArgument);
}

TEST(TargetStrategy, RandomNodeCoversMap) {
  hs::Rng rng(13);
  const auto map = hs::build_map(3, 3, 0.1, 10, rng);
  auto random = hs::TargetStrategy::random_node(hs::Rng(5));
  std::map<hs::GridCoord, int> seen;
  for (int t = 0; t < 900; ++t) ++seen[random.next(map)];
  EXPECT_EQ(seen.size(), 9u);
}

TEST(Train, ExactUpdateAndPassCounts) {
  hs::Rng rng(14);
  const auto map = hs::build_map(8, 8, 0.1, 500, rng);
  const auto data = random_dataset(20, 500, rng);
  const auto result = hs::train(data, map, {7, 3, hs::TargetStrategy::corner_cycle(), false}, rng);
  EXPECT_EQ(result.trace.size(), 7u);
  EXPECT_EQ(result.wms_passes, 6u);
  EXPECT_EQ(result.state.updates_done(), 7u);
  EXPECT_EQ(result.trace.front().datum, 0u);
  EXPECT_FALSE(result.trace.front().weakest_similarity.has_value());
  for (std::size_t t = 1; t < 7; ++t) EXPECT_TRUE(result.trace[t].weakest_similarity.has_value());
}

TEST(Train, TraceMatchesFreshWmsPasses) {
  hs::Rng rng(15);
  const auto map = hs::build_map(6, 6, 0.15, 400, rng);
  const auto data = random_dataset(12, 400, rng);
  hs::Rng seed_rng(77);
  const auto result = hs::train(data, map, {6, 2, hs::TargetStrategy::corner_cycle(), false}, seed_rng);

  hs::Rng replay_rng(77);
  auto state = hs::init_seeds(2, 400, replay_rng);
  auto targets = hs::TargetStrategy::corner_cycle();
  std::size_t datum = 0;
  for (std::size_t t = 0; t < 6; ++t) {
    if (t > 0) datum = hs::wms_pass(state, data, map).index;
    EXPECT_EQ(result.trace[t].datum, datum) << "update " << t;
    hs::update_seed(state, data[datum], map.node(targets.next(map)));
  }
  for (std::size_t s = 0; s < 2; ++s) EXPECT_TRUE(std::ranges::equal(state.seed(s).re(), result.state.seed(s).re()));
}

TEST(Train, DeterministicAndMapUntouched) {
  hs::Rng rng(16);
  const auto map = hs::build_map(6, 6, 0.15, 300, rng);
  const auto before = map.node(3, 4);
  const auto data = random_dataset(10, 300, rng);
  hs::Rng a(5), b(5);
  const auto r1 = hs::train(data, map, {4, 2, hs::TargetStrategy::random_node(hs::Rng(1)), false}, a);
  const auto r2 = hs::train(data, map, {4, 2, hs::TargetStrategy::random_node(hs::Rng(1)), false}, b);
  for (std::size_t t = 0; t < 4; ++t) {
    EXPECT_EQ(r1.trace[t].datum, r2.trace[t].datum);
    EXPECT_EQ(r1.trace[t].target, r2.trace[t].target);
  }
  EXPECT_TRUE(std::ranges::equal(r1.state.seed(1).im(), r2.state.seed(1).im()));
  EXPECT_EQ(map.node(3, 4), before);
}

TEST(Train, RejectsBadArguments) {
  hs::Rng rng(17);
  const auto map = hs::build_map(3, 3, 0.1, 50, rng);
  const auto data = random_dataset(3, 50, rng);
  EXPECT_THROW(hs::train(data, map, {0, 1, hs::TargetStrategy::corner_cycle(), false}, rng), hs::InvalidArgument);
  EXPECT_THROW(hs::train(std::vector<hs::PhasorVector>{}, map, {1, 1, hs::TargetStrategy::corner_cycle(), false}, rng),
               hs::InvalidArgument);
  EXPECT_THROW(hs::train(random_dataset(2, 40, rng), map, {1, 1, hs::TargetStrategy::corner_cycle(), false}, rng),
               hs::DimensionError);
}

TEST(Train, RoundRobinBalanceProperty) {
  hs::Rng rng(18);
  const auto map = hs::build_map(4, 4, 0.2, 64, rng);
  const auto data = random_dataset(6, 64, rng);
  for (std::size_t n = 1; n <= 5; ++n) {
    for (std::size_t iterations = 1; iterations <= 12; ++iterations) {
      const auto r = hs::train(data, map, {iterations, n, hs::TargetStrategy::corner_cycle(), false}, rng);
      for (std::size_t s = 0; s < n; ++s) {
        const auto got = r.state.updates_per_seed()[s];
        EXPECT_TRUE(got == iterations / n || got == (iterations + n - 1) / n) << "I=" << iterations << " N=" << n;
      }
    }
  }
}
