#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "hyperseed/hdmap.hpp"
#include "hyperseed/rng.hpp"
#include "hyperseed/vsa.hpp"

namespace hs = hyperseed;

namespace {

/// Independent brute force: node phases rebuilt from the bases, cosine written out.
hs::BmvResult exhaustive_bmv(const hs::HdMap& map, const hs::PhasorVector& query) {
  hs::BmvResult best{{0, 0}, -std::numeric_limits<double>::infinity()};
  for (std::size_t i = 0; i < map.rows(); ++i) {
    for (std::size_t j = 0; j < map.cols(); ++j) {
      double dot = 0, nq = 0, nn = 0;
      for (std::size_t k = 0; k < map.dim(); ++k) {
        const double phase = map.epsilon_p() * (static_cast<double>(i) * map.x0()[k] +
                                                static_cast<double>(j) * map.y0()[k]);
        const double a = std::cos(query[k]);
        const double b = std::cos(phase);
        dot += a * b;
        nq += a * a;
        nn += b * b;
      }
      const double sim = dot / (std::sqrt(nq) * std::sqrt(nn));
      if (sim > best.similarity + 1e-12) best = {{i, j}, sim};
    }
  }
  return best;
}

}  // namespace

TEST(HdMap, SingleNodeIsZeroPhase) {
  hs::Rng rng(1);
  const auto map = hs::build_map(1, 1, 0.1, 64, rng);
  EXPECT_EQ(map.node(0, 0), hs::PhasorVector::zero(64));
}

TEST(HdMap, NodeIsBindOfAxisPowers) {
  hs::Rng rng(2);
  const auto map = hs::build_map(4, 6, 0.3, 128, rng);
  const auto expected = hs::bind(hs::fpe_power(map.x0(), 0.3 * 2), hs::fpe_power(map.y0(), 0.3 * 5));
  const auto node = map.node(2, 5);
  for (std::size_t k = 0; k < 128; ++k) EXPECT_NEAR(hs::circular_distance(node[k], expected[k]), 0.0, 1e-9);
  EXPECT_EQ(map.node(2, 5), map.node(2, 5));
}

TEST(HdMap, InvalidArgumentsRejected) {
  hs::Rng rng(3);
  EXPECT_THROW(hs::build_map(0, 3, 0.1, 10, rng), hs::InvalidArgument);
  EXPECT_THROW(hs::build_map(3, 3, 0.0, 10, rng), hs::InvalidArgument);
  EXPECT_THROW(hs::build_map(3, 3, 0.1, 0, rng), hs::DimensionError);
  const auto map = hs::build_map(3, 3, 0.1, 10, rng);
  EXPECT_THROW(map.node(3, 0), hs::InvalidArgument);
}

TEST(FindBmv, ExactNodeQueryFindsItself) {
  hs::Rng rng(4);
  const auto map = hs::build_map(10, 10, 0.1, 1000, rng);
  const auto r = hs::find_bmv(map, map.node(7, 3));
  EXPECT_EQ(r.coords, (hs::GridCoord{7, 3}));
  EXPECT_NEAR(r.similarity, 1.0, 1e-12);
}

TEST(FindBmv, NoisyUnbindRecoversTarget) {
  hs::Rng rng(5);
  const auto map = hs::build_map(5, 5, 0.8, 10000, rng);
  const auto datum = hs::random_phasor(10000, rng);
  const auto seed = hs::superpose({hs::bind(datum, map.node(2, 2))});
  EXPECT_EQ(hs::find_bmv(map, hs::unbind(datum, seed)).coords, (hs::GridCoord{2, 2}));
}

TEST(FindBmv, RandomQueryHasLowSimilarity) {
  hs::Rng rng(6);
  const auto map = hs::build_map(50, 50, 0.05, 10000, rng);
  EXPECT_LT(hs::find_bmv(map, hs::random_phasor(10000, rng)).similarity, 0.1);
}

TEST(FindBmv, MatchesExhaustiveOracleProperty) {
  for (std::uint64_t s = 0; s < 5; ++s) {
    hs::Rng rng(100 + s);
    const auto map = hs::build_map(5, 5, 0.3 + 0.1 * static_cast<double>(s), 500, rng);
    for (int q = 0; q < 30; ++q) {
      const auto query = hs::random_phasor(500, rng);
      const auto got = hs::find_bmv(map, query);
      const auto want = exhaustive_bmv(map, query);
      EXPECT_EQ(got.coords, want.coords);
      EXPECT_NEAR(got.similarity, want.similarity, 1e-9);
    }
  }
}

TEST(FindBmv, BatchEqualsSingleQueries) {
  hs::Rng rng(7);
  const auto map = hs::build_map(20, 20, 0.05, 300, rng);
  std::vector<hs::PhasorVector> queries;
  for (int q = 0; q < 300; ++q) queries.push_back(hs::random_phasor(300, rng));
  const auto batch = hs::find_bmv_batch(map, queries.size(), [&](std::size_t q) -> const hs::PhasorVector& {
    return queries[q];
  });
  for (std::size_t q = 0; q < queries.size(); ++q) {
    const auto single = hs::find_bmv(map, queries[q]);
    EXPECT_EQ(batch[q].coords, single.coords);
    EXPECT_EQ(batch[q].similarity, single.similarity);
  }
}

TEST(FindBmv, TieGoesToLowestRowMajorIndex) {
  // All nodes identical: every axis phase is zero.
  const hs::HdMap map(3, 3, 0.5, hs::PhasorVector::zero(16), hs::PhasorVector::zero(16));
  hs::Rng rng(8);
  EXPECT_EQ(hs::find_bmv(map, hs::random_phasor(16, rng)).coords, (hs::GridCoord{0, 0}));
}

TEST(Landscape, PeakAtTargetAndDecays) {
  hs::Rng rng(9);
  const auto map = hs::build_map(50, 50, 0.05, 10000, rng);
  const auto land = hs::similarity_landscape(map, {15, 15});
  EXPECT_NEAR(land[map.index_of({15, 15})], 1.0, 1e-12);
  // Ring averages fall with Chebyshev distance inside the main lobe.
  double previous = 1.0;
  for (int r = 2; r <= 14; r += 4) {
    double sum = 0;
    int count = 0;
    for (int i = 15 - r; i <= 15 + r; ++i) {
      for (int j = 15 - r; j <= 15 + r; ++j) {
        if (std::max(std::abs(i - 15), std::abs(j - 15)) != r) continue;
        sum += land[map.index_of({static_cast<std::size_t>(i), static_cast<std::size_t>(j)})];
        ++count;
      }
    }
    EXPECT_LT(sum / count, previous) << "ring " << r;
    previous = sum / count;
  }
}

TEST(Landscape, SymmetricInTargetAndNode) {
  hs::Rng rng(10);
  const auto map = hs::build_map(8, 8, 0.1, 2000, rng);
  for (const hs::GridCoord a : {hs::GridCoord{1, 2}, hs::GridCoord{5, 7}}) {
    for (const hs::GridCoord b : {hs::GridCoord{0, 0}, hs::GridCoord{6, 3}}) {
      EXPECT_NEAR(hs::similarity_landscape(map, a)[map.index_of(b)], hs::similarity_landscape(map, b)[map.index_of(a)],
                  1e-9);
    }
  }
}

TEST(Landscape, LargerBandwidthDecaysFaster) {
  hs::Rng rng(11);
  const auto wide = hs::build_map(200, 200, 0.008, 2000, rng);
  const auto narrow = hs::build_map(200, 200, 0.03, 2000, rng);
  const auto lw = hs::similarity_landscape(wide, {0, 0});
  const auto ln = hs::similarity_landscape(narrow, {0, 0});
  for (std::size_t step : {5u, 10u, 20u}) {
    EXPECT_GT(lw[wide.index_of({step, step})], ln[narrow.index_of({step, step})]);
  }
}

TEST(Landscape, OutOfBoundsRejected) {
  hs::Rng rng(12);
  const auto map = hs::build_map(3, 3, 0.1, 10, rng);
  EXPECT_THROW(hs::similarity_landscape(map, {3, 3}), hs::InvalidArgument);
}
