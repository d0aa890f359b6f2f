#pragma once
/**
 * Model files: versioned JSON holding everything a trained run needs to
 * classify new inputs (encoder, map bases, seed state, node votes) plus the
 * training trace and the configuration that produced it.
 *
 * Doubles are written in shortest round-trip form, so load(save(m)) restores
 * every phase and seed component exactly and save(load(save(m))) == save(m).
 */

#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "hyperseed/encoders.hpp"
#include "hyperseed/error.hpp"
#include "hyperseed/harness/config.hpp"
#include "hyperseed/harness/experiment.hpp"
#include "hyperseed/hdmap.hpp"
#include "hyperseed/labeling.hpp"
#include "hyperseed/learning.hpp"

namespace hyperseed::harness {

inline constexpr const char* kModelFormat = "hyperseed-model";
inline constexpr int kModelVersion = 1;

namespace detail {

inline json phases_json(const PhasorVector& v) { return json(std::vector<double>(v.phases().begin(), v.phases().end())); }

template <class T>
T require(const json& j, const char* key, const std::string& path) {
  if (!j.is_object() || !j.contains(key)) throw DataError("model: missing field " + path + "." + key);
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw DataError("model: field " + path + "." + key + " has the wrong type");
  }
}

inline PhasorVector phasor_from(const json& j, const std::string& path) {
  if (!j.is_array()) throw DataError("model: field " + path + " must be an array of phases");
  try {
    return PhasorVector(j.get<std::vector<double>>());
  } catch (const json::exception&) {
    throw DataError("model: field " + path + " must be an array of phases");
  } catch (const Error& e) {
    throw DataError("model: field " + path + ": " + e.what());
  }
}

}  // namespace detail

inline json model_to_json(const TrainedModel& model) {
  json encoder;
  if (const auto* f = std::get_if<FeatureEncoder>(&model.encoder)) {
    json ranges = json::array();
    for (const auto& r : f->ranges()) ranges.push_back({r.min, r.max});
    json bases = json::array();
    for (const auto& b : f->bases()) bases.push_back(detail::phases_json(b));
    encoder = {{"type", "features"}, {"q", f->levels()}, {"epsilon_d", f->epsilon_d()},
               {"ranges", ranges},   {"bases", bases}};
  } else {
    const auto& g = std::get<NgramEncoder>(model.encoder);
    json atomics = json::array();
    for (const auto& a : g.atomics()) atomics.push_back(detail::phases_json(a));
    encoder = {{"type", "ngram"}, {"alphabet", g.alphabet()}, {"n", g.order()}, {"atomics", atomics}};
  }

  json seeds = json::array();
  for (const auto& s : model.state.seeds()) {
    seeds.push_back({{"re", std::vector<double>(s.re().begin(), s.re().end())},
                     {"im", std::vector<double>(s.im().begin(), s.im().end())}});
  }
  json votes = json::array();
  for (const auto& [coords, counts] : model.labels.votes()) {
    votes.push_back({{"i", coords.i}, {"j", coords.j}, {"counts", counts}});
  }
  const auto names = model.labels.label_names();

  return {
      {"format", kModelFormat},
      {"version", kModelVersion},
      {"d", model.map.dim()},
      {"run_seed", model.run_seed},
      {"config", to_json(model.config)},
      {"encoder", encoder},
      {"map",
       {{"n", model.map.rows()},
        {"m", model.map.cols()},
        {"epsilon_p", model.map.epsilon_p()},
        {"x0", detail::phases_json(model.map.x0())},
        {"y0", detail::phases_json(model.map.y0())}}},
      {"seeds",
       {{"cursor", model.state.cursor()},
        {"updates_done", model.state.updates_done()},
        {"updates_per_seed",
         std::vector<std::size_t>(model.state.updates_per_seed().begin(), model.state.updates_per_seed().end())},
        {"renormalize", model.state.renormalize()},
        {"vectors", seeds}}},
      {"labels", {{"names", std::vector<std::string>(names.begin(), names.end())}, {"votes", votes}}},
      {"trace", trace_to_json(model.trace)},
  };
}

inline TrainedModel model_from_json(const json& j) {
  if (!j.is_object()) throw DataError("model: top level must be an object");
  if (detail::require<std::string>(j, "format", "") != kModelFormat) throw DataError("model: not a hyperseed model");
  const int version = detail::require<int>(j, "version", "");
  if (version != kModelVersion) throw DataError("model: unsupported version " + std::to_string(version));
  const auto d = detail::require<std::size_t>(j, "d", "");

  ExperimentConfig config;
  try {
    config = parse_config(detail::require<json>(j, "config", ""));
  } catch (const ConfigError& e) {
    throw DataError(std::string("model: invalid config: ") + e.what());
  }

  try {
    const json& enc = j.at("encoder");
    const auto type = detail::require<std::string>(enc, "type", "encoder");
    std::optional<Encoder> encoder;
    if (type == "features") {
      std::vector<FeatureRange> ranges;
      for (const auto& r : detail::require<json>(enc, "ranges", "encoder")) {
        const auto pair = r.get<std::vector<double>>();
        if (pair.size() != 2) throw DataError("model: encoder.ranges entries must be [min, max]");
        ranges.push_back({pair[0], pair[1]});
      }
      std::vector<PhasorVector> bases;
      for (const auto& b : detail::require<json>(enc, "bases", "encoder")) bases.push_back(detail::phasor_from(b, "encoder.bases"));
      encoder.emplace(FeatureEncoder(detail::require<std::size_t>(enc, "q", "encoder"),
                                     detail::require<double>(enc, "epsilon_d", "encoder"), std::move(bases),
                                     std::move(ranges)));
    } else if (type == "ngram") {
      std::vector<PhasorVector> atomics;
      for (const auto& a : detail::require<json>(enc, "atomics", "encoder")) {
        atomics.push_back(detail::phasor_from(a, "encoder.atomics"));
      }
      encoder.emplace(NgramEncoder(detail::require<std::string>(enc, "alphabet", "encoder"),
                                   detail::require<std::size_t>(enc, "n", "encoder"), std::move(atomics)));
    } else {
      throw DataError("model: unknown encoder type '" + type + "'");
    }

    const json& mj = j.at("map");
    HdMap map(detail::require<std::size_t>(mj, "n", "map"), detail::require<std::size_t>(mj, "m", "map"),
              detail::require<double>(mj, "epsilon_p", "map"), detail::phasor_from(mj.at("x0"), "map.x0"),
              detail::phasor_from(mj.at("y0"), "map.y0"));
    if (map.dim() != d) throw DataError("model: map dimensionality differs from d");

    const json& sj = j.at("seeds");
    std::vector<BundleVector> vectors;
    for (const auto& v : detail::require<json>(sj, "vectors", "seeds")) {
      vectors.emplace_back(detail::require<std::vector<double>>(v, "re", "seeds.vectors"),
                           detail::require<std::vector<double>>(v, "im", "seeds.vectors"));
    }
    SeedState state(std::move(vectors), detail::require<std::size_t>(sj, "cursor", "seeds"),
                    detail::require<std::size_t>(sj, "updates_done", "seeds"),
                    detail::require<std::vector<std::size_t>>(sj, "updates_per_seed", "seeds"),
                    detail::require<bool>(sj, "renormalize", "seeds"));
    if (state.dim() != d) throw DataError("model: seed dimensionality differs from d");

    const json& lj = j.at("labels");
    LabeledMap::VoteTable votes;
    for (const auto& v : detail::require<json>(lj, "votes", "labels")) {
      votes[GridCoord{detail::require<std::size_t>(v, "i", "labels.votes"),
                      detail::require<std::size_t>(v, "j", "labels.votes")}] =
          detail::require<std::vector<std::size_t>>(v, "counts", "labels.votes");
    }
    LabeledMap labels(map, detail::require<std::vector<std::string>>(lj, "names", "labels"), std::move(votes));

    std::vector<TrainStep> trace;
    for (const auto& s : detail::require<json>(j, "trace", "")) {
      const auto target = detail::require<std::vector<std::size_t>>(s, "target", "trace");
      if (target.size() != 2) throw DataError("model: trace target must be [i, j]");
      const json& w = s.at("weakest_similarity");
      trace.push_back(TrainStep{detail::require<std::size_t>(s, "datum", "trace"), GridCoord{target[0], target[1]},
                                detail::require<std::size_t>(s, "seed", "trace"),
                                w.is_null() ? std::nullopt : std::optional<double>(w.get<double>())});
    }

    return TrainedModel{std::move(config), detail::require<std::uint64_t>(j, "run_seed", ""), std::move(*encoder),
                        std::move(map),    std::move(state),
                        std::move(labels), std::move(trace)};
  } catch (const json::exception& e) {
    throw DataError(std::string("model: malformed file: ") + e.what());
  } catch (const InvalidArgument& e) {
    throw DataError(std::string("model: inconsistent contents: ") + e.what());
  } catch (const DimensionError& e) {
    throw DataError(std::string("model: inconsistent contents: ") + e.what());
  }
}

inline void save_model(std::ostream& out, const TrainedModel& model) { out << model_to_json(model).dump() << '\n'; }

inline void save_model(const std::string& path, const TrainedModel& model) {
  std::ofstream out(path);
  if (!out) throw DataError(path + ": cannot open for writing");
  save_model(out, model);
  out.flush();
  if (!out) throw DataError(path + ": write failure");
}

inline TrainedModel load_model(std::istream& in) {
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw DataError(std::string("model: invalid JSON: ") + e.what());
  }
  return model_from_json(j);
}

inline TrainedModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError(path + ": cannot open file");
  return load_model(in);
}

}  // namespace hyperseed::harness
