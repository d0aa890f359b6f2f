// Core API end to end: generate the Hepta clusters, learn one seed, label the
// map and classify the held-out half.

#include <cstdio>
#include <vector>

#include "hyperseed.hpp"

int main() {
  namespace hs = hyperseed;
  namespace hh = hyperseed::harness;

  hs::Rng rng(7);
  hs::Rng data_rng = rng.split(1);
  const hh::TabularDataset data = hh::generate_fcps_like("hepta", 0, data_rng);
  hs::Rng split_rng = rng.split(2);
  const hh::Split split = hh::stratified_split(data, 0.5, split_rng);


  const std::size_t d = 500;
  hs::Rng enc_rng = rng.split(3);
  const hs::FeatureEncoder encoder = hs::fit_feature_encoder(split.train.samples, 5, 0.4, d, enc_rng);
  hs::Rng map_rng = rng.split(4);
  const hs::HdMap map = hs::build_map(100, 100, 0.03, d, map_rng);

  auto encode = [&](const hh::TabularDataset& part) {
    hs::LabeledSamples out;
    out.names = part.label_names;
    for (std::size_t s = 0; s < part.size(); ++s) {
      out.vectors.push_back(encoder.encode(part.samples[s]));
      out.labels.push_back(part.labels[s]);
    }
    return out;
  };
  const hs::LabeledSamples train = encode(split.train);
  const hs::LabeledSamples test = encode(split.test);

  hs::Rng seed_rng = rng.split(5);
  hs::TrainConfig cfg{1, 1, hs::TargetStrategy::random_node(rng.split(6)), false};
  const hs::TrainResult trained = hs::train(train.vectors, map, std::move(cfg), seed_rng);
  const hs::LabeledMap labels = hs::label_map(trained.state, map, train);

  std::size_t correct = 0;
  const auto predictions = hs::classify_all(trained.state, map, labels, test.vectors);
  for (std::size_t q = 0; q < predictions.size(); ++q) correct += predictions[q].label == test.labels[q];

  std::printf("target node (%zu,%zu), %zu labeled nodes\n", trained.trace.front().target.i,
              trained.trace.front().target.j, labels.labeled_nodes().size());
  std::printf("hepta test accuracy: %zu/%zu = %.3f\n", correct, test.vectors.size(),
              static_cast<double>(correct) / static_cast<double>(test.vectors.size()));
}
