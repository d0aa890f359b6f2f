#include <gtest/gtest.h>

#include <sstream>
#include <string>
#include <vector>

#include "hyperseed.hpp"
#include "test_support.hpp"

#ifndef HYPERSEED_DATA_DIR
#define HYPERSEED_DATA_DIR "data"
#endif

namespace hs = hyperseed;
namespace hh = hyperseed::harness;
using hh::json;

namespace {

/// Small and fast: hepta on a 20x20 map.
hh::ExperimentConfig small_fcps(std::size_t repeats = 3) {
  return hh::parse_config(hh::layer(hh::fcps_preset("hepta"), {{"map", {{"n", 20}, {"m", 20}, {"epsilon_p", 0.1}}},
                                                               {"train", {{"d", 300}}},
                                                               {"run", {{"repeats", repeats}}}}));
}

hh::ExperimentConfig iris() { return hh::parse_config(hh::iris_preset(HYPERSEED_DATA_DIR)); }

std::string projection_csv(const hh::ExperimentOutcome& out) {
  const auto& m = *out.model;
  std::ostringstream csv;
  hs::write_projection_csv(csv, hs::export_projection(m.state, m.map, m.labels, *out.test), out.test->names);
  return csv.str();
}

}  // namespace

TEST(Accuracy, OracleOnThreeSampleCases) {
  struct Case {
    std::vector<std::size_t> truth, predicted;
    double accuracy;
  };
  const std::vector<Case> cases = {{{0, 1, 2}, {0, 1, 2}, 1.0},
                                   {{0, 1, 2}, {0, 1, 1}, 2.0 / 3.0},
                                   {{0, 0, 1}, {1, 1, 0}, 0.0},
                                   {{2, 2, 2}, {2, 0, 2}, 2.0 / 3.0}};
  for (const auto& c : cases) {
    const auto confusion = hh::confusion_matrix(c.truth, c.predicted, 3);
    std::size_t correct = 0;
    for (std::size_t q = 0; q < 3; ++q) correct += c.truth[q] == c.predicted[q];
    EXPECT_DOUBLE_EQ(hh::accuracy_of(confusion), c.accuracy);
    EXPECT_DOUBLE_EQ(static_cast<double>(correct) / 3.0, c.accuracy);
    std::size_t total = 0;
    for (const auto& row : confusion) {
      for (std::size_t v : row) total += v;
    }
    EXPECT_EQ(total, 3u);
  }
  EXPECT_EQ(hh::confusion_matrix(std::vector<std::size_t>{0, 1, 1}, std::vector<std::size_t>{1, 1, 0}, 2),
            (std::vector<std::vector<std::size_t>>{{0, 1}, {1, 1}}));
}

TEST(RunExperiment, ByteIdenticalReportsAndProjections) {
  const auto cfg = small_fcps();
  const auto a = hh::run_experiment(cfg, true);
  const auto b = hh::run_experiment(cfg, true);
  EXPECT_EQ(hh::to_json(a.report).dump(2), hh::to_json(b.report).dump(2));
  EXPECT_EQ(projection_csv(a), projection_csv(b));
  auto other = cfg;
  other.run.seed = 2;
  EXPECT_NE(hh::to_json(hh::run_experiment(other).report).dump(), hh::to_json(a.report).dump());
}

TEST(RunExperiment, RepeatsAreIndependentOfRepeatCount) {
  auto one = small_fcps(1);
  auto three = small_fcps(3);
  const auto r1 = hh::run_experiment(one).report;
  const auto r3 = hh::run_experiment(three).report;
  EXPECT_EQ(r1.runs[0].correct, r3.runs[0].correct);
  EXPECT_EQ(r1.runs[0].seed, r3.runs[0].seed);
}

TEST(RunExperiment, BestSelectsFirstMaximum) {
  const auto rep = hh::run_experiment(small_fcps(4)).report;
  ASSERT_EQ(rep.runs.size(), 4u);
  for (std::size_t r = 0; r < rep.runs.size(); ++r) {
    EXPECT_LE(rep.runs[r].accuracy(), rep.runs[rep.selected].accuracy());
    if (r < rep.selected) {
      EXPECT_LT(rep.runs[r].accuracy(), rep.runs[rep.selected].accuracy());
    }
  }
  EXPECT_DOUBLE_EQ(rep.accuracy(), rep.max_accuracy());
  EXPECT_GE(rep.max_accuracy(), rep.mean_accuracy());
  EXPECT_GE(rep.mean_accuracy(), rep.min_accuracy());
}

TEST(RunExperiment, MeanPoolsConfusionOverRuns) {
  auto cfg = small_fcps(3);
  cfg.run.select = hh::SelectMode::Mean;
  const auto rep = hh::run_experiment(cfg).report;
  std::size_t correct = 0, total = 0;
  for (const auto& r : rep.runs) {
    correct += r.correct;
    total += r.total;
  }
  EXPECT_EQ(rep.correct(), correct);
  EXPECT_EQ(rep.total(), total);
}

TEST(RunExperiment, ReportShape) {
  const auto j = hh::to_json(hh::run_experiment(small_fcps(2)).report);
  EXPECT_EQ(j["format"], "hyperseed-report");
  EXPECT_EQ(j["runs"].size(), 2u);
  EXPECT_EQ(j["dataset"]["classes"].size(), 7u);
  EXPECT_FALSE(j.contains("wall_clock_seconds"));
  EXPECT_EQ(j["confusion"].size(), 7u);
}

TEST(RunExperiment, IrisTracesHitThePresetTargets) {
  auto cfg = iris();
  cfg.run.repeats = 1;
  const auto rep = hh::run_experiment(cfg).report;
  const std::vector<hs::GridCoord> expected = {{15, 15}, {20, 20}, {10, 10}, {5, 5}, {25, 25}, {5, 25}};
  ASSERT_EQ(rep.runs[0].trace.size(), 6u);
  for (std::size_t t = 0; t < 6; ++t) EXPECT_EQ(rep.runs[0].trace[t].target, expected[t]);
  EXPECT_EQ(rep.runs[0].train_size, 30u);
  EXPECT_EQ(rep.runs[0].total, 120u);
}

TEST(RunExperiment, IrisClassesEmergeOnTrainingData) {
  auto cfg = iris();
  cfg.run.repeats = 1;
  const auto out = hh::run_experiment(cfg, true);
  const auto& m = *out.model;
  // Training split of the same repeat, rebuilt through the public split path.
  const auto src = hh::load_source(cfg);
  const auto data = hh::encode_split(cfg, src, hs::Rng(out.report.runs[0].seed));
  const auto projections = hs::project_all(m.state, data.train.vectors, m.map);
  // Purity of a class's modal node: share of that node's training samples belonging to the class.
  std::map<hs::GridCoord, std::vector<std::size_t>> per_node;
  for (std::size_t q = 0; q < projections.size(); ++q) {
    auto& counts = per_node[projections[q].bmv.coords];
    counts.resize(3, 0);
    ++counts[data.train.labels[q]];
  }
  for (std::size_t l = 0; l < 3; ++l) {
    const std::vector<std::size_t>* modal = nullptr;
    for (const auto& [c, counts] : per_node) {
      if (modal == nullptr || counts[l] > (*modal)[l]) modal = &counts;
    }
    ASSERT_GT((*modal)[l], 0u) << "class " << l;
    const double at_node = static_cast<double>((*modal)[0] + (*modal)[1] + (*modal)[2]);
    EXPECT_GT(static_cast<double>((*modal)[l]) / at_node, 0.5) << "class " << l;
  }
}

TEST(RunExperiment, CsvErrorsSurface) {
  auto cfg = iris();
  cfg.data.path = "/nonexistent/iris.csv";
  EXPECT_THROW(hh::run_experiment(cfg), hs::DataError);
}

TEST(RunExperiment, CorpusExperiment) {
  test_support::TempDir dir;
  hh::CorpusGenerationOptions gen;
  gen.train_chunks = 6;
  gen.test_sentences = 10;
  hh::generate_language_corpus(std::string(HYPERSEED_DATA_DIR) + "/langstats", {"en", "fi", "it"}, dir.path().string(),
                               gen, hs::Rng(3));
  auto cfg = hh::parse_config(hh::layer(hh::languages_preset((dir.path() / "train").string(), (dir.path() / "test").string()),
                                        {{"train", {{"d", 2000}}}, {"data", {{"max_test_per_class", 8}}}}));
  const auto rep = hh::run_experiment(cfg).report;
  EXPECT_EQ(rep.label_names, (std::vector<std::string>{"en", "fi", "it"}));
  EXPECT_EQ(rep.runs[0].iterations, 9u);
  EXPECT_EQ(rep.runs[0].train_size, 18u);
  EXPECT_EQ(rep.runs[0].total, 24u);
  EXPECT_GT(rep.accuracy(), 1.0 / 3.0);
}

TEST(ModelIo, SaveLoadSaveIsStable) {
  const auto out = hh::run_experiment(small_fcps(1), true);
  std::ostringstream first;
  hh::save_model(first, *out.model);
  std::istringstream in(first.str());
  const auto loaded = hh::load_model(in);
  std::ostringstream second;
  hh::save_model(second, loaded);
  EXPECT_EQ(first.str(), second.str());

  const auto ev = hh::evaluate(loaded, *out.test);
  EXPECT_EQ(ev.correct, out.report.runs[0].correct);
  EXPECT_EQ(ev.total, out.report.runs[0].total);
}

TEST(ModelIo, CorruptFilesRejected) {
  const auto out = hh::run_experiment(small_fcps(1), true);
  auto j = hh::model_to_json(*out.model);
  std::istringstream garbage("{ nope");
  EXPECT_THROW(hh::load_model(garbage), hs::DataError);
  auto wrong_version = j;
  wrong_version["version"] = 99;
  EXPECT_THROW(hh::model_from_json(wrong_version), hs::DataError);
  auto missing = j;
  missing.erase("seeds");
  EXPECT_THROW(hh::model_from_json(missing), hs::DataError);
  auto short_map = j;
  short_map["map"]["x0"].erase(0);
  EXPECT_THROW(hh::model_from_json(short_map), hs::DataError);
}

TEST(Evaluate, UnseenLabelsAppendedAndNeverCorrect) {
  test_support::TempDir dir;
  const auto out = hh::run_experiment(small_fcps(1), true);
  const auto path = dir.write("extra.csv", "x0,x1,x2,label\n0,0,0,blob0\n0,0,0,alien\n");
  const auto samples = hh::encode_for_model(*out.model, hh::load_csv_dataset(path, "label"));
  ASSERT_EQ(samples.names.size(), 8u);
  EXPECT_EQ(samples.names.back(), "alien");
  const auto ev = hh::evaluate(*out.model, samples);
  EXPECT_EQ(ev.total, 2u);
  EXPECT_EQ(ev.confusion[7][7], 0u);
}

TEST(Sweep, RowsFollowPointsAndHeader) {
  const auto rows = hh::sweep(small_fcps(1), hh::SweepAxis::Iterations, hh::axis_points({1, 2}));
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[1].point.value, 2.0);
  std::ostringstream csv;
  hh::write_sweep_csv(csv, hh::SweepAxis::Iterations, rows);
  EXPECT_EQ(csv.str().substr(0, csv.str().find('\n')), std::string(hh::kSweepHeader));
  EXPECT_THROW(hh::sweep(small_fcps(1), hh::SweepAxis::Iterations, {}), hs::ConfigError);
  EXPECT_THROW(hh::parse_sweep_axis("colour"), hs::ConfigError);
  const auto grid = hh::epsilon_q_grid({5, 10}, {0.1, 0.2});
  ASSERT_EQ(grid.size(), 4u);
  EXPECT_DOUBLE_EQ(grid[3].value, 2.0);
}

TEST(Landscape, CsvShape) {
  std::ostringstream csv;
  hh::write_landscape_csv(csv, {1, 2, 3, 4, 5, 6}, 2, 3);
  EXPECT_EQ(csv.str(), "i,j0,j1,j2\n0,1,2,3\n1,4,5,6\n");
  EXPECT_THROW(hh::write_landscape_csv(csv, {1, 2}, 2, 3), hs::InvalidArgument);
}

TEST(Svg, EmptyTableGivesEmptyAxes) {
  std::ostringstream svg;
  hh::render_projection(svg, {}, std::vector<std::string>{}, 10, 10);
  const auto text = svg.str();
  EXPECT_NE(text.find("<svg"), std::string::npos);
  EXPECT_NE(text.find("<g id=\"samples\">\n</g>"), std::string::npos);
  EXPECT_EQ(text.find("<path"), std::string::npos);
}

TEST(Svg, CrossesAtTargetsAndDeterministic) {
  const std::vector<hs::ProjectionRow> rows = {{0, {1, 1}, 0, 0, 0.5}, {1, {1, 1}, 1, 0, 0.4}};
  const std::vector<hh::TargetMark> marks = {{{15, 15}, std::nullopt}, {{20, 20}, std::nullopt}};
  std::ostringstream a, b;
  hh::render_projection(a, rows, std::vector<std::string>{"x", "y"}, 30, 30, marks);
  hh::render_projection(b, rows, std::vector<std::string>{"x", "y"}, 30, 30, marks);
  EXPECT_EQ(a.str(), b.str());
  std::size_t crosses = 0;
  for (auto pos = a.str().find("<path"); pos != std::string::npos; pos = a.str().find("<path", pos + 1)) ++crosses;
  EXPECT_EQ(crosses, 2u);
  const std::vector<hs::ProjectionRow> outside = {{0, {40, 1}, 0, 0, 0.5}};
  std::ostringstream c;
  EXPECT_THROW(hh::render_projection(c, outside, std::vector<std::string>{"x"}, 30, 30), hs::InvalidArgument);
}
