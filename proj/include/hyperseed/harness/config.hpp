#pragma once
/**
 * Experiment configuration.
 *
 * A configuration is a JSON object with the sections data, encoder, map,
 * train and run. Sources are layered with JSON merge-patch: a preset, then a
 * config file, then command-line overrides. Unknown keys and out-of-range
 * values are rejected with the dotted path of the offending field.
 */

#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "hyperseed/error.hpp"
#include "hyperseed/hdmap.hpp"
#include "hyperseed/harness/fcps.hpp"

namespace hyperseed::harness {

using json = nlohmann::json;

enum class DataKind { Csv, Fcps, Corpus };
enum class SelectMode { Best, Mean };

struct DataConfig {
  DataKind kind = DataKind::Csv;
  std::string path;          // csv
  std::string label_column;  // csv; empty = last column
  std::string name;          // fcps
  std::size_t n_points = 0;  // fcps; 0 = size of the original benchmark
  double train_fraction = 0.5;
  std::string train_dir;  // corpus
  std::string test_dir;   // corpus
  std::vector<std::string> languages;
  std::size_t chunk_length = 1000;
  std::size_t max_train_per_class = 0;  // corpus; 0 = all
  std::size_t max_test_per_class = 0;   // corpus; 0 = all
};

struct EncoderConfig {
  std::size_t q = 10;
  double epsilon_d = 0.1;
  std::size_t ngram_n = 3;
};

struct MapConfig {
  std::size_t n = 100;
  std::size_t m = 100;
  double epsilon_p = 0.03;
};

struct TrainSection {
  std::size_t d = 500;
  std::size_t iterations = 1;  // 0 = three updates per class
  std::size_t num_seeds = 1;
  std::string strategy = "random";  // random | corners | fixed
  std::vector<GridCoord> targets;   // fixed only
  bool renormalize = false;
};

struct RunConfig {
  std::uint64_t seed = 1;
  std::size_t repeats = 1;
  SelectMode select = SelectMode::Best;
  bool record_timing = false;
};

struct ExperimentConfig {
  DataConfig data;
  EncoderConfig encoder;
  MapConfig map;
  TrainSection train;
  RunConfig run;
};

inline std::string to_string(DataKind k) {
  switch (k) {
    case DataKind::Csv: return "csv";
    case DataKind::Fcps: return "fcps";
    case DataKind::Corpus: return "corpus";
  }
  return "csv";
}

inline std::string to_string(SelectMode s) { return s == SelectMode::Best ? "best" : "mean"; }

inline json to_json(const ExperimentConfig& c) {
  json targets = json::array();
  for (const auto& t : c.train.targets) targets.push_back({t.i, t.j});
  return {
      {"data",
       {{"kind", to_string(c.data.kind)},
        {"path", c.data.path},
        {"label_column", c.data.label_column},
        {"name", c.data.name},
        {"n_points", c.data.n_points},
        {"train_fraction", c.data.train_fraction},
        {"train_dir", c.data.train_dir},
        {"test_dir", c.data.test_dir},
        {"languages", c.data.languages},
        {"chunk_length", c.data.chunk_length},
        {"max_train_per_class", c.data.max_train_per_class},
        {"max_test_per_class", c.data.max_test_per_class}}},
      {"encoder", {{"q", c.encoder.q}, {"epsilon_d", c.encoder.epsilon_d}, {"ngram_n", c.encoder.ngram_n}}},
      {"map", {{"n", c.map.n}, {"m", c.map.m}, {"epsilon_p", c.map.epsilon_p}}},
      {"train",
       {{"d", c.train.d},
        {"iterations", c.train.iterations},
        {"num_seeds", c.train.num_seeds},
        {"strategy", c.train.strategy},
        {"targets", targets},
        {"renormalize", c.train.renormalize}}},
      {"run",
       {{"seed", c.run.seed},
        {"repeats", c.run.repeats},
        {"select", to_string(c.run.select)},
        {"record_timing", c.run.record_timing}}},
  };
}

namespace detail {

class FieldReader {
 public:
  FieldReader(const json& section, std::string path) : section_(section), path_(std::move(path)) {
    if (!section_.is_object()) throw ConfigError(path_, "expected an object");
  }

  /// Throws on keys not in `allowed`.
  void only(std::initializer_list<const char*> allowed) const {
    for (const auto& [key, value] : section_.items()) {
      bool known = false;
      for (const char* a : allowed) known = known || key == a;
      if (!known) throw ConfigError(field(key), "unknown field");
    }
  }

  std::string field(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }
  bool has(const char* key) const { return section_.contains(key); }

  void read(const char* key, std::string& out) const {
    if (!has(key)) return;
    const auto& v = section_.at(key);
    if (!v.is_string()) throw ConfigError(field(key), "expected a string");
    out = v.get<std::string>();
  }

  void read(const char* key, bool& out) const {
    if (!has(key)) return;
    const auto& v = section_.at(key);
    if (!v.is_boolean()) throw ConfigError(field(key), "expected true or false");
    out = v.get<bool>();
  }

  void read(const char* key, double& out) const {
    if (!has(key)) return;
    const auto& v = section_.at(key);
    if (!v.is_number()) throw ConfigError(field(key), "expected a number");
    out = v.get<double>();
  }

  template <class Unsigned>
    requires std::is_unsigned_v<Unsigned>
  void read(const char* key, Unsigned& out) const {
    if (!has(key)) return;
    const auto& v = section_.at(key);
    if (v.is_number_unsigned()) {
      out = v.get<Unsigned>();
    } else if (v.is_number_integer()) {
      if (v.get<std::int64_t>() < 0) throw ConfigError(field(key), "must not be negative");
      out = static_cast<Unsigned>(v.get<std::int64_t>());
    } else {
      throw ConfigError(field(key), "expected a non-negative integer");
    }
  }

  void read(const char* key, std::vector<std::string>& out) const {
    if (!has(key)) return;
    const auto& v = section_.at(key);
    if (!v.is_array()) throw ConfigError(field(key), "expected an array of strings");
    out.clear();
    for (const auto& e : v) {
      if (!e.is_string()) throw ConfigError(field(key), "expected an array of strings");
      out.push_back(e.get<std::string>());
    }
  }

  void read(const char* key, std::vector<GridCoord>& out) const {
    if (!has(key)) return;
    const auto& v = section_.at(key);
    if (!v.is_array()) throw ConfigError(field(key), "expected an array of [i, j] pairs");
    out.clear();
    for (std::size_t k = 0; k < v.size(); ++k) {
      const auto& e = v[k];
      auto non_negative = [](const json& x) { return x.is_number_integer() && x.get<std::int64_t>() >= 0; };
      if (!e.is_array() || e.size() != 2 || !non_negative(e[0]) || !non_negative(e[1])) {
        throw ConfigError(field(key) + "[" + std::to_string(k) + "]", "expected a pair of non-negative integers");
      }
      out.push_back(GridCoord{e[0].get<std::size_t>(), e[1].get<std::size_t>()});
    }
  }

  FieldReader section(const char* key) const {
    static const json empty = json::object();
    return FieldReader(has(key) ? section_.at(key) : empty, field(key));
  }

 private:
  const json& section_;
  std::string path_;
};

}  // namespace detail

/// Checks ranges and cross-field constraints; throws ConfigError with the field path.
inline void validate(const ExperimentConfig& c) {
  const auto& d = c.data;
  switch (d.kind) {
    case DataKind::Csv:
      if (d.path.empty()) throw ConfigError("data.path", "required for csv data");
      break;
    case DataKind::Fcps: {
      bool known = false;
      for (auto name : kFcpsNames) known = known || d.name == name;
      if (!known) throw ConfigError("data.name", "unknown FCPS dataset '" + d.name + "'");
      break;
    }
    case DataKind::Corpus:
      if (d.train_dir.empty()) throw ConfigError("data.train_dir", "required for corpus data");
      if (d.test_dir.empty()) throw ConfigError("data.test_dir", "required for corpus data");
      if (d.chunk_length == 0) throw ConfigError("data.chunk_length", "must be positive");
      break;
  }
  if (d.kind != DataKind::Corpus && !(d.train_fraction > 0.0 && d.train_fraction < 1.0)) {
    throw ConfigError("data.train_fraction", "must be in (0, 1)");
  }
  if (c.encoder.q < 2) throw ConfigError("encoder.q", "must be at least 2");
  if (!(c.encoder.epsilon_d > 0.0)) throw ConfigError("encoder.epsilon_d", "must be positive");
  if (c.encoder.ngram_n == 0) throw ConfigError("encoder.ngram_n", "must be at least 1");
  if (c.map.n == 0) throw ConfigError("map.n", "must be positive");
  if (c.map.m == 0) throw ConfigError("map.m", "must be positive");
  if (!(c.map.epsilon_p > 0.0)) throw ConfigError("map.epsilon_p", "must be positive");
  if (c.train.d == 0) throw ConfigError("train.d", "must be positive");
  if (c.train.num_seeds == 0) throw ConfigError("train.num_seeds", "must be at least 1");
  const auto& s = c.train.strategy;
  if (s != "random" && s != "corners" && s != "fixed") {
    throw ConfigError("train.strategy", "expected random, corners or fixed");
  }
  if (s == "fixed") {
    if (c.train.targets.empty()) throw ConfigError("train.targets", "required for the fixed strategy");
    for (std::size_t k = 0; k < c.train.targets.size(); ++k) {
      const auto& t = c.train.targets[k];
      if (t.i >= c.map.n || t.j >= c.map.m) {
        throw ConfigError("train.targets[" + std::to_string(k) + "]", to_string(t) + " outside the map");
      }
    }
  }
  if (c.run.repeats == 0) throw ConfigError("run.repeats", "must be at least 1");
}

/// Parses a complete or partial configuration on top of the defaults.
inline ExperimentConfig parse_config(const json& j) {
  ExperimentConfig c;
  detail::FieldReader root(j, "");
  root.only({"data", "encoder", "map", "train", "run"});

  const auto data = root.section("data");
  data.only({"kind", "path", "label_column", "name", "n_points", "train_fraction", "train_dir", "test_dir",
             "languages", "chunk_length", "max_train_per_class", "max_test_per_class"});
  std::string kind = to_string(c.data.kind);
  data.read("kind", kind);
  if (kind == "csv") {
    c.data.kind = DataKind::Csv;
  } else if (kind == "fcps") {
    c.data.kind = DataKind::Fcps;
  } else if (kind == "corpus") {
    c.data.kind = DataKind::Corpus;
  } else {
    throw ConfigError("data.kind", "expected csv, fcps or corpus");
  }
  data.read("path", c.data.path);
  data.read("label_column", c.data.label_column);
  data.read("name", c.data.name);
  data.read("n_points", c.data.n_points);
  data.read("train_fraction", c.data.train_fraction);
  data.read("train_dir", c.data.train_dir);
  data.read("test_dir", c.data.test_dir);
  data.read("languages", c.data.languages);
  data.read("chunk_length", c.data.chunk_length);
  data.read("max_train_per_class", c.data.max_train_per_class);
  data.read("max_test_per_class", c.data.max_test_per_class);

  const auto enc = root.section("encoder");
  enc.only({"q", "epsilon_d", "ngram_n"});
  enc.read("q", c.encoder.q);
  enc.read("epsilon_d", c.encoder.epsilon_d);
  enc.read("ngram_n", c.encoder.ngram_n);

  const auto map = root.section("map");
  map.only({"n", "m", "epsilon_p"});
  map.read("n", c.map.n);
  map.read("m", c.map.m);
  map.read("epsilon_p", c.map.epsilon_p);

  const auto train = root.section("train");
  train.only({"d", "iterations", "num_seeds", "strategy", "targets", "renormalize"});
  train.read("d", c.train.d);
  train.read("iterations", c.train.iterations);
  train.read("num_seeds", c.train.num_seeds);
  train.read("strategy", c.train.strategy);
  train.read("targets", c.train.targets);
  train.read("renormalize", c.train.renormalize);

  const auto run = root.section("run");
  run.only({"seed", "repeats", "select", "record_timing"});
  run.read("seed", c.run.seed);
  run.read("repeats", c.run.repeats);
  std::string select = to_string(c.run.select);
  run.read("select", select);
  if (select == "best") {
    c.run.select = SelectMode::Best;
  } else if (select == "mean") {
    c.run.select = SelectMode::Mean;
  } else {
    throw ConfigError("run.select", "expected best or mean");
  }
  run.read("record_timing", c.run.record_timing);

  validate(c);
  return c;
}

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path, "cannot open file");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path, std::string("invalid JSON: ") + e.what());
  }
}

/// Iris: 30x30 map, 20/80 split, d=500, six preset targets, best of 10.
inline json iris_preset(const std::string& data_dir) {
  return {
      {"data", {{"kind", "csv"}, {"path", data_dir + "/iris.csv"}, {"label_column", "species"},
                {"train_fraction", 0.2}}},
      {"encoder", {{"q", 10}, {"epsilon_d", 0.1}}},
      {"map", {{"n", 30}, {"m", 30}, {"epsilon_p", 0.15}}},
      {"train",
       {{"d", 500},
        {"iterations", 6},
        {"num_seeds", 1},
        {"strategy", "fixed"},
        {"targets", {{15, 15}, {20, 20}, {10, 10}, {5, 5}, {25, 25}, {5, 25}}}}},
      {"run", {{"repeats", 10}, {"select", "best"}}},
  };
}

/// One-shot FCPS: 100x100 map, one update, 50/50 split, best of 8.
inline json fcps_preset(const std::string& name) {
  return {
      {"data", {{"kind", "fcps"}, {"name", name}, {"train_fraction", 0.5}}},
      {"encoder", {{"q", 5}, {"epsilon_d", 0.4}}},
      {"map", {{"n", 100}, {"m", 100}, {"epsilon_p", 0.03}}},
      {"train", {{"d", 500}, {"iterations", 1}, {"num_seeds", 1}, {"strategy", "random"}}},
      {"run", {{"repeats", 8}, {"select", "best"}}},
  };
}

/// Language identification: tri-grams, 100x100 map, random targets, three updates per class.
inline json languages_preset(const std::string& train_dir, const std::string& test_dir) {
  return {
      {"data", {{"kind", "corpus"}, {"train_dir", train_dir}, {"test_dir", test_dir}}},
      {"encoder", {{"ngram_n", 3}}},
      {"map", {{"n", 100}, {"m", 100}, {"epsilon_p", 0.1}}},
      {"train", {{"d", 5000}, {"iterations", 0}, {"num_seeds", 1}, {"strategy", "random"}}},
      {"run", {{"repeats", 1}, {"select", "best"}}},
  };
}

/// Applies `patch` on top of `base` (RFC 7386 merge-patch).
inline json layer(json base, const json& patch) {
  base.merge_patch(patch);
  return base;
}

}  // namespace hyperseed::harness
