#pragma once
/**
 * Applying a saved model to new data.
 *
 * Test labels are matched to the model's label names by string. Labels the
 * model never saw are appended after the model's names, so their samples can
 * never be classified correctly but still appear in projections.
 */

#include <algorithm>
#include <cstddef>
#include <string>
#include <vector>

#include <json.hpp>

#include "hyperseed/harness/corpus.hpp"
#include "hyperseed/harness/dataset.hpp"
#include "hyperseed/harness/experiment.hpp"
#include "hyperseed/labeling.hpp"

namespace hyperseed::harness {

namespace detail {

inline std::size_t label_ordinal(std::vector<std::string>& names, const std::string& label) {
  const auto it = std::find(names.begin(), names.end(), label);
  if (it != names.end()) return static_cast<std::size_t>(it - names.begin());
  names.push_back(label);
  return names.size() - 1;
}

inline std::vector<std::string> model_names(const TrainedModel& model) {
  const auto names = model.labels.label_names();
  return {names.begin(), names.end()};
}

}  // namespace detail

inline LabeledSamples encode_for_model(const TrainedModel& model, const TabularDataset& data) {
  LabeledSamples out;
  out.names = detail::model_names(model);
  for (std::size_t s = 0; s < data.size(); ++s) {
    out.vectors.push_back(encode_input(model.encoder, std::span<const double>(data.samples[s])));
    out.labels.push_back(detail::label_ordinal(out.names, data.label_names[data.labels[s]]));
  }
  return out;
}

/// Every test sentence of every language in `corpus`.
inline LabeledSamples encode_for_model(const TrainedModel& model, const CorpusDataset& corpus) {
  LabeledSamples out;
  out.names = detail::model_names(model);
  for (std::size_t l = 0; l < corpus.languages.size(); ++l) {
    const std::size_t ordinal = detail::label_ordinal(out.names, corpus.languages[l]);
    for (const auto& sentence : corpus.test[l]) {
      out.vectors.push_back(encode_input(model.encoder, std::string_view(sentence)));
      out.labels.push_back(ordinal);
    }
  }
  return out;
}

struct Evaluation {
  std::vector<std::string> names;  // model labels, then unseen labels
  std::vector<std::vector<std::size_t>> confusion;  // [true][predicted], square over `names`
  std::size_t correct = 0;
  std::size_t total = 0;

  double accuracy() const { return total == 0 ? 0.0 : static_cast<double>(correct) / static_cast<double>(total); }
};

inline Evaluation evaluate(const TrainedModel& model, const LabeledSamples& samples) {
  Evaluation ev;
  ev.names = samples.names;
  const auto predictions = classify_all(model.state, model.map, model.labels, samples.vectors);
  std::vector<std::size_t> predicted(predictions.size());
  for (std::size_t q = 0; q < predictions.size(); ++q) predicted[q] = predictions[q].label;
  ev.confusion = confusion_matrix(samples.labels, predicted, ev.names.size());
  ev.total = predicted.size();
  for (std::size_t q = 0; q < predicted.size(); ++q) ev.correct += predicted[q] == samples.labels[q];
  return ev;
}

inline json to_json(const Evaluation& ev, const TrainedModel& model) {
  return {{"format", "hyperseed-eval"},
          {"version", 1},
          {"model_run_seed", model.run_seed},
          {"classes", ev.names},
          {"accuracy", ev.accuracy()},
          {"correct", ev.correct},
          {"total", ev.total},
          {"confusion", ev.confusion}};
}

}  // namespace hyperseed::harness
