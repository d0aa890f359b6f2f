#pragma once
/**
 * Experiment driver: data -> encoder -> map -> train -> label -> classify.
 *
 * Randomness. Repeat r draws everything from Rng(derive_seed(seed, 1000 + r)),
 * split into streams 1 (train/test split and chunk order), 2 (encoder bases),
 * 3 (map bases), 4 (seed vectors) and 5 (random targets). Generated datasets
 * come from Rng(derive_seed(seed, 100)) and are shared by all repeats.
 *
 * Reports contain no wall-clock time unless run.record_timing is set, so two
 * executions with the same configuration produce identical bytes.
 */

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "hyperseed/encoders.hpp"
#include "hyperseed/error.hpp"
#include "hyperseed/harness/config.hpp"
#include "hyperseed/harness/corpus.hpp"
#include "hyperseed/harness/dataset.hpp"
#include "hyperseed/harness/fcps.hpp"
#include "hyperseed/hdmap.hpp"
#include "hyperseed/labeling.hpp"
#include "hyperseed/learning.hpp"
#include "hyperseed/rng.hpp"

namespace hyperseed::harness {

inline constexpr std::uint64_t kDatasetStream = 100;
inline constexpr std::uint64_t kRepeatStreamBase = 1000;

enum RunStream : std::uint64_t { kSplitStream = 1, kEncoderStream = 2, kMapStream = 3, kSeedStream = 4, kTargetStream = 5 };

inline std::uint64_t repeat_seed(std::uint64_t master, std::size_t repeat) {
  return derive_seed(master, kRepeatStreamBase + repeat);
}

using Encoder = std::variant<FeatureEncoder, NgramEncoder>;

/// Raw inputs of an experiment, loaded once and shared by every repeat.
struct SourceData {
  std::string name;
  std::vector<std::string> label_names;
  std::optional<TabularDataset> table;
  std::optional<CorpusDataset> corpus;
  std::vector<std::string> warnings;
  std::size_t skipped_sentences = 0;
};

inline SourceData load_source(const ExperimentConfig& cfg) {
  SourceData src;
  switch (cfg.data.kind) {
    case DataKind::Csv:
      src.table = load_csv_dataset(cfg.data.path, cfg.data.label_column);
      src.name = cfg.data.path;
      break;
    case DataKind::Fcps: {
      Rng rng(derive_seed(cfg.run.seed, kDatasetStream));
      src.table = generate_fcps_like(cfg.data.name, cfg.data.n_points, rng);
      src.name = cfg.data.name;
      break;
    }
    case DataKind::Corpus: {
      CorpusOptions opts;
      opts.chunk_length = cfg.data.chunk_length;
      opts.min_sentence = cfg.encoder.ngram_n;
      opts.languages = cfg.data.languages;
      src.corpus = load_language_corpus(cfg.data.train_dir, cfg.data.test_dir, opts);
      src.name = cfg.data.train_dir;
      src.warnings = src.corpus->warnings;
      src.skipped_sentences = src.corpus->skipped_sentences;
      break;
    }
  }
  src.label_names = src.table ? src.table->label_names : src.corpus->languages;
  return src;
}

/// Encoded training and test sets of one repeat, plus the encoder that produced them.
struct EncodedSplit {
  Encoder encoder;
  LabeledSamples train;
  LabeledSamples test;
};

inline EncodedSplit encode_split(const ExperimentConfig& cfg, const SourceData& src, const Rng& run_rng) {
  Rng split_rng = run_rng.split(kSplitStream);
  Rng encoder_rng = run_rng.split(kEncoderStream);
  LabeledSamples train, test;
  train.names = test.names = src.label_names;

  if (src.table) {
    const Split split = stratified_split(*src.table, cfg.data.train_fraction, split_rng);
    FeatureEncoder enc =
        fit_feature_encoder(split.train.samples, cfg.encoder.q, cfg.encoder.epsilon_d, cfg.train.d, encoder_rng);
    for (std::size_t s = 0; s < split.train.size(); ++s) train.vectors.push_back(enc.encode(split.train.samples[s]));
    for (std::size_t s = 0; s < split.test.size(); ++s) test.vectors.push_back(enc.encode(split.test.samples[s]));
    train.labels = split.train.labels;
    test.labels = split.test.labels;
    return EncodedSplit{std::move(enc), std::move(train), std::move(test)};
  }

  const CorpusDataset& corpus = *src.corpus;
  NgramEncoder enc = make_ngram_encoder(std::string(kLatinAlphabet), cfg.encoder.ngram_n, cfg.train.d, encoder_rng);
  // Per class: shuffled chunk order, optionally truncated; then one shuffled training sequence.
  std::vector<std::pair<std::size_t, std::size_t>> order;
  for (std::size_t l = 0; l < corpus.train.size(); ++l) {
    std::vector<std::size_t> idx(corpus.train[l].size());
    for (std::size_t k = 0; k < idx.size(); ++k) idx[k] = k;
    for (std::size_t k = idx.size(); k > 1; --k) std::swap(idx[k - 1], idx[split_rng.below(k)]);
    if (cfg.data.max_train_per_class > 0 && idx.size() > cfg.data.max_train_per_class) {
      idx.resize(cfg.data.max_train_per_class);
    }
    for (std::size_t k : idx) order.emplace_back(l, k);
  }
  for (std::size_t k = order.size(); k > 1; --k) std::swap(order[k - 1], order[split_rng.below(k)]);
  for (const auto& [l, k] : order) {
    train.vectors.push_back(enc.encode(corpus.train[l][k]));
    train.labels.push_back(l);
  }
  for (std::size_t l = 0; l < corpus.test.size(); ++l) {
    std::size_t count = corpus.test[l].size();
    if (cfg.data.max_test_per_class > 0) count = std::min(count, cfg.data.max_test_per_class);
    for (std::size_t k = 0; k < count; ++k) {
      test.vectors.push_back(enc.encode(corpus.test[l][k]));
      test.labels.push_back(l);
    }
  }
  return EncodedSplit{std::move(enc), std::move(train), std::move(test)};
}

inline TargetStrategy make_strategy(const ExperimentConfig& cfg, const Rng& run_rng) {
  if (cfg.train.strategy == "random") return TargetStrategy::random_node(run_rng.split(kTargetStream));
  if (cfg.train.strategy == "corners") return TargetStrategy::corner_cycle();
  return TargetStrategy::fixed_list(cfg.train.targets);
}

/// Updates to perform: the configured count, or three per class when it is 0.
inline std::size_t effective_iterations(const ExperimentConfig& cfg, std::size_t classes) {
  return cfg.train.iterations == 0 ? 3 * classes : cfg.train.iterations;
}

/// Everything needed to classify new data with a trained run.
struct TrainedModel {
  ExperimentConfig config;
  std::uint64_t run_seed = 0;
  Encoder encoder;
  HdMap map;
  SeedState state;
  LabeledMap labels;
  std::vector<TrainStep> trace;
};

struct RunResult {
  std::size_t index = 0;
  std::uint64_t seed = 0;
  std::size_t iterations = 0;
  std::size_t train_size = 0;
  std::size_t correct = 0;
  std::size_t total = 0;
  std::size_t labeled_nodes = 0;
  std::size_t wms_passes = 0;
  std::vector<std::vector<std::size_t>> confusion;  // [true][predicted]
  std::vector<TrainStep> trace;

  double accuracy() const { return total == 0 ? 0.0 : static_cast<double>(correct) / static_cast<double>(total); }
};

inline std::vector<std::vector<std::size_t>> confusion_matrix(std::span<const std::size_t> truth,
                                                             std::span<const std::size_t> predicted,
                                                             std::size_t classes) {
  if (truth.size() != predicted.size()) throw InvalidArgument("confusion_matrix: length mismatch");
  std::vector<std::vector<std::size_t>> m(classes, std::vector<std::size_t>(classes, 0));
  for (std::size_t s = 0; s < truth.size(); ++s) ++m.at(truth[s]).at(predicted[s]);
  return m;
}

/// correct / total over a confusion matrix; 0 for an empty matrix.
inline double accuracy_of(const std::vector<std::vector<std::size_t>>& confusion) {
  std::size_t correct = 0, total = 0;
  for (std::size_t t = 0; t < confusion.size(); ++t) {
    for (std::size_t p = 0; p < confusion[t].size(); ++p) {
      total += confusion[t][p];
      if (t == p) correct += confusion[t][p];
    }
  }
  return total == 0 ? 0.0 : static_cast<double>(correct) / static_cast<double>(total);
}

struct RunOutput {
  RunResult result;
  TrainedModel model;
  LabeledSamples test;
};

/// One complete repeat.
inline RunOutput run_once(const ExperimentConfig& cfg, const SourceData& src, std::size_t repeat) {
  const std::uint64_t seed = repeat_seed(cfg.run.seed, repeat);
  const Rng run_rng(seed);
  EncodedSplit data = encode_split(cfg, src, run_rng);
  if (data.train.vectors.empty()) throw DataError("experiment: empty training set");
  if (data.test.vectors.empty()) throw DataError("experiment: empty test set");

  Rng map_rng = run_rng.split(kMapStream);
  HdMap map = build_map(cfg.map.n, cfg.map.m, cfg.map.epsilon_p, cfg.train.d, map_rng);
  const std::size_t iterations = effective_iterations(cfg, src.label_names.size());
  TrainConfig tc{iterations, cfg.train.num_seeds, make_strategy(cfg, run_rng), cfg.train.renormalize};
  Rng seed_rng = run_rng.split(kSeedStream);
  TrainResult trained = train(data.train.vectors, map, std::move(tc), seed_rng);

  LabeledMap labels = label_map(trained.state, map, data.train);
  const auto predictions = classify_all(trained.state, map, labels, data.test.vectors);
  std::vector<std::size_t> predicted(predictions.size());
  for (std::size_t q = 0; q < predictions.size(); ++q) predicted[q] = predictions[q].label;

  RunResult r;
  r.index = repeat;
  r.seed = seed;
  r.iterations = iterations;
  r.train_size = data.train.vectors.size();
  r.confusion = confusion_matrix(data.test.labels, predicted, src.label_names.size());
  r.total = predicted.size();
  for (std::size_t q = 0; q < predicted.size(); ++q) r.correct += predicted[q] == data.test.labels[q];
  r.labeled_nodes = labels.labeled_nodes().size();
  r.wms_passes = trained.wms_passes;
  r.trace = trained.trace;

  TrainedModel model{cfg,          seed,          std::move(data.encoder), std::move(map), std::move(trained.state),
                     std::move(labels), std::move(trained.trace)};
  return RunOutput{std::move(r), std::move(model), std::move(data.test)};
}

struct ExperimentReport {
  ExperimentConfig config;
  std::string dataset;
  std::vector<std::string> label_names;
  std::vector<std::string> warnings;
  std::size_t skipped_sentences = 0;
  std::vector<RunResult> runs;
  /// Repeat whose model is kept: the most accurate one, first on ties.
  std::size_t selected = 0;
  /// best: the selected run's matrix. mean: the sum over all runs.
  std::vector<std::vector<std::size_t>> confusion;
  std::optional<double> wall_clock_seconds;

  std::size_t correct() const {
    std::size_t c = 0;
    for (std::size_t t = 0; t < confusion.size(); ++t) c += confusion[t][t];
    return c;
  }
  std::size_t total() const {
    std::size_t n = 0;
    for (const auto& row : confusion) {
      for (std::size_t v : row) n += v;
    }
    return n;
  }
  /// correct() / total(); for select=mean this is the pooled accuracy over all repeats.
  double accuracy() const { return accuracy_of(confusion); }

  /// Per class: diagonal / row sum, or nullopt for a class without test samples.
  std::vector<std::optional<double>> per_class_accuracy() const {
    std::vector<std::optional<double>> out;
    for (std::size_t t = 0; t < confusion.size(); ++t) {
      std::size_t row = 0;
      for (std::size_t v : confusion[t]) row += v;
      if (row == 0) {
        out.emplace_back(std::nullopt);
      } else {
        out.emplace_back(static_cast<double>(confusion[t][t]) / static_cast<double>(row));
      }
    }
    return out;
  }

  double mean_accuracy() const {
    double sum = 0.0;
    for (const auto& r : runs) sum += r.accuracy();
    return runs.empty() ? 0.0 : sum / static_cast<double>(runs.size());
  }
  double max_accuracy() const {
    double best = 0.0;
    for (const auto& r : runs) best = std::max(best, r.accuracy());
    return best;
  }
  double min_accuracy() const {
    double worst = 1.0;
    for (const auto& r : runs) worst = std::min(worst, r.accuracy());
    return runs.empty() ? 0.0 : worst;
  }
};

inline json trace_to_json(std::span<const TrainStep> trace) {
  json out = json::array();
  for (const auto& step : trace) {
    out.push_back({{"datum", step.datum},
                   {"target", {step.target.i, step.target.j}},
                   {"seed", step.seed_index},
                   {"weakest_similarity", step.weakest_similarity ? json(*step.weakest_similarity) : json(nullptr)}});
  }
  return out;
}

inline json to_json(const ExperimentReport& rep) {
  json runs = json::array();
  for (const auto& r : rep.runs) {
    runs.push_back({{"index", r.index},
                    {"seed", r.seed},
                    {"accuracy", r.accuracy()},
                    {"correct", r.correct},
                    {"total", r.total},
                    {"iterations", r.iterations},
                    {"train_size", r.train_size},
                    {"labeled_nodes", r.labeled_nodes},
                    {"wms_passes", r.wms_passes},
                    {"trace", trace_to_json(r.trace)}});
  }
  json per_class = json::object();
  const auto pc = rep.per_class_accuracy();
  for (std::size_t l = 0; l < rep.label_names.size(); ++l) {
    per_class[rep.label_names[l]] = pc[l] ? json(*pc[l]) : json(nullptr);
  }
  json out = {
      {"format", "hyperseed-report"},
      {"version", 1},
      {"seed", rep.config.run.seed},
      {"config", to_json(rep.config)},
      {"dataset", {{"name", rep.dataset},
                   {"classes", rep.label_names},
                   {"warnings", rep.warnings},
                   {"skipped_sentences", rep.skipped_sentences}}},
      {"select", to_string(rep.config.run.select)},
      {"selected_run", rep.selected},
      {"accuracy", rep.accuracy()},
      {"correct", rep.correct()},
      {"total", rep.total()},
      {"per_class_accuracy", per_class},
      {"confusion", rep.confusion},
      {"distribution",
       {{"mean", rep.mean_accuracy()}, {"min", rep.min_accuracy()}, {"max", rep.max_accuracy()}}},
      {"runs", runs},
  };
  if (rep.wall_clock_seconds) out["wall_clock_seconds"] = *rep.wall_clock_seconds;
  return out;
}

struct ExperimentOutcome {
  ExperimentReport report;
  /// Model and test samples of the selected run, kept when requested.
  std::optional<TrainedModel> model;
  std::optional<LabeledSamples> test;
};

/// Runs cfg.run.repeats repeats sequentially.
inline ExperimentOutcome run_experiment(const ExperimentConfig& cfg, bool keep_model = false) {
  validate(cfg);
  const auto start = std::chrono::steady_clock::now();
  const SourceData src = load_source(cfg);

  ExperimentOutcome out;
  ExperimentReport& rep = out.report;
  rep.config = cfg;
  rep.dataset = src.name;
  rep.label_names = src.label_names;
  rep.warnings = src.warnings;
  rep.skipped_sentences = src.skipped_sentences;

  for (std::size_t r = 0; r < cfg.run.repeats; ++r) {
    RunOutput run = run_once(cfg, src, r);
    const bool better = rep.runs.empty() || run.result.accuracy() > rep.runs[rep.selected].accuracy();
    if (better) {
      rep.selected = r;
      if (keep_model) {
        out.model.emplace(std::move(run.model));
        out.test.emplace(std::move(run.test));
      }
    }
    rep.runs.push_back(std::move(run.result));
  }

  if (cfg.run.select == SelectMode::Best) {
    rep.confusion = rep.runs[rep.selected].confusion;
  } else {
    rep.confusion = rep.runs.front().confusion;
    for (std::size_t r = 1; r < rep.runs.size(); ++r) {
      for (std::size_t t = 0; t < rep.confusion.size(); ++t) {
        for (std::size_t p = 0; p < rep.confusion.size(); ++p) rep.confusion[t][p] += rep.runs[r].confusion[t][p];
      }
    }
  }
  if (cfg.run.record_timing) {
    rep.wall_clock_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
  return out;
}

/// Encodes one raw input with a trained model's encoder.
inline PhasorVector encode_input(const Encoder& encoder, std::span<const double> features) {
  const auto* enc = std::get_if<FeatureEncoder>(&encoder);
  if (!enc) throw InvalidArgument("encode_input: model expects text input");
  return enc->encode(features);
}

inline PhasorVector encode_input(const Encoder& encoder, std::string_view text) {
  const auto* enc = std::get_if<NgramEncoder>(&encoder);
  if (!enc) throw InvalidArgument("encode_input: model expects feature vectors");
  return enc->encode(text);
}

enum class SweepAxis { Iterations, Dimensionality, NumSeeds, EpsilonQ };

inline SweepAxis parse_sweep_axis(const std::string& name) {
  if (name == "iterations") return SweepAxis::Iterations;
  if (name == "dimensionality") return SweepAxis::Dimensionality;
  if (name == "num_seeds") return SweepAxis::NumSeeds;
  if (name == "epsilon_q") return SweepAxis::EpsilonQ;
  throw ConfigError("axis", "expected iterations, dimensionality, num_seeds or epsilon_q");
}

inline std::string to_string(SweepAxis a) {
  switch (a) {
    case SweepAxis::Iterations: return "iterations";
    case SweepAxis::Dimensionality: return "dimensionality";
    case SweepAxis::NumSeeds: return "num_seeds";
    case SweepAxis::EpsilonQ: return "epsilon_q";
  }
  return "iterations";
}

/// One sweep cell. `value` is the axis value; epsilon_q cells set q and epsilon_d and use value = q * epsilon_d.
struct SweepPoint {
  double value = 0.0;
  std::size_t q = 0;
  double epsilon_d = 0.0;
};

struct SweepRow {
  SweepPoint point;
  double accuracy = 0.0;
  double mean_accuracy = 0.0;
  double min_accuracy = 0.0;
  double max_accuracy = 0.0;
};

/// Integer-valued axis points.
inline std::vector<SweepPoint> axis_points(const std::vector<std::size_t>& values) {
  std::vector<SweepPoint> points;
  for (std::size_t v : values) points.push_back(SweepPoint{static_cast<double>(v), 0, 0.0});
  return points;
}

/// Cartesian grid over q (outer) and epsilon_d (inner).
inline std::vector<SweepPoint> epsilon_q_grid(const std::vector<std::size_t>& qs, const std::vector<double>& eps) {
  std::vector<SweepPoint> points;
  for (std::size_t q : qs) {
    for (double e : eps) points.push_back(SweepPoint{static_cast<double>(q) * e, q, e});
  }
  return points;
}

inline ExperimentConfig apply_sweep_point(ExperimentConfig cfg, SweepAxis axis, const SweepPoint& p) {
  const auto as_count = [&](const char* field) {
    if (!(p.value >= 0.0) || p.value != std::floor(p.value)) throw ConfigError(field, "sweep value must be an integer");
    return static_cast<std::size_t>(p.value);
  };
  switch (axis) {
    case SweepAxis::Iterations: cfg.train.iterations = as_count("train.iterations"); break;
    case SweepAxis::Dimensionality: cfg.train.d = as_count("train.d"); break;
    case SweepAxis::NumSeeds: cfg.train.num_seeds = as_count("train.num_seeds"); break;
    case SweepAxis::EpsilonQ:
      cfg.encoder.q = p.q;
      cfg.encoder.epsilon_d = p.epsilon_d;
      break;
  }
  validate(cfg);
  return cfg;
}

/// One experiment (all repeats) per point; `accuracy` follows run.select.
inline std::vector<SweepRow> sweep(const ExperimentConfig& base, SweepAxis axis, const std::vector<SweepPoint>& points) {
  if (points.empty()) throw ConfigError("values", "sweep needs at least one value");
  std::vector<SweepRow> rows;
  for (const auto& p : points) {
    const ExperimentConfig cfg = apply_sweep_point(base, axis, p);
    const ExperimentReport rep = run_experiment(cfg).report;
    SweepPoint recorded = p;
    recorded.q = cfg.encoder.q;
    recorded.epsilon_d = cfg.encoder.epsilon_d;
    rows.push_back(SweepRow{recorded, rep.accuracy(), rep.mean_accuracy(), rep.min_accuracy(), rep.max_accuracy()});
  }
  return rows;
}

inline constexpr std::string_view kSweepHeader = "axis,value,q,epsilon_d,accuracy,mean_accuracy,min_accuracy,max_accuracy";

inline void write_sweep_csv(std::ostream& out, SweepAxis axis, std::span<const SweepRow> rows) {
  out << kSweepHeader << '\n';
  out << std::setprecision(17);
  for (const auto& r : rows) {
    out << to_string(axis) << ',' << r.point.value << ',' << r.point.q << ',' << r.point.epsilon_d << ','
        << r.accuracy << ',' << r.mean_accuracy << ',' << r.min_accuracy << ',' << r.max_accuracy << '\n';
  }
}

/// Landscape CSV: header `i,j0,j1,...`, then one row per grid row i.
inline void write_landscape_csv(std::ostream& out, const std::vector<double>& landscape, std::size_t n, std::size_t m) {
  if (landscape.size() != n * m) throw InvalidArgument("write_landscape_csv: size mismatch");
  out << 'i';
  for (std::size_t j = 0; j < m; ++j) out << ",j" << j;
  out << '\n' << std::setprecision(17);
  for (std::size_t i = 0; i < n; ++i) {
    out << i;
    for (std::size_t j = 0; j < m; ++j) out << ',' << landscape[i * m + j];
    out << '\n';
  }
}

}  // namespace hyperseed::harness
