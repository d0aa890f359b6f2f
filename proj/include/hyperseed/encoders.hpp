#pragma once
/**
 * Encoders from raw inputs to phasor hypervectors.
 *
 * FeatureEncoder: every feature is min-max normalized with ranges fitted on
 * training data, clipped to [0, 1] and quantized into q levels; level i of
 * feature k is fpe_power(b_k, eps_d * i). A sample is the normalized
 * superposition of its K level vectors.
 *
 * NgramEncoder: symbol a at position p (1-based) of an n-gram is
 * permute(b_a, p); an n-gram is the binding of its positioned symbols; a text
 * is the normalized superposition of all its sliding-window n-grams.
 */

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hyperseed/error.hpp"
#include "hyperseed/rng.hpp"
#include "hyperseed/vsa.hpp"

namespace hyperseed {

struct FeatureRange {
  double min = 0.0;
  double max = 0.0;

  friend bool operator==(const FeatureRange&, const FeatureRange&) = default;
};

class FeatureEncoder {
 public:
  FeatureEncoder(std::size_t q, double epsilon_d, std::vector<PhasorVector> bases, std::vector<FeatureRange> ranges)
      : q_(q), epsilon_d_(epsilon_d), bases_(std::move(bases)), ranges_(std::move(ranges)) {
    if (q_ < 2) throw InvalidArgument("FeatureEncoder: q must be at least 2");
    if (!(epsilon_d_ > 0.0) || !std::isfinite(epsilon_d_)) {
      throw InvalidArgument("FeatureEncoder: epsilon_d must be positive and finite");
    }
    if (bases_.empty() || bases_.size() != ranges_.size()) {
      throw InvalidArgument("FeatureEncoder: need one base and one range per feature");
    }
    for (const auto& b : bases_) detail::require_same_dim(b.dim(), bases_.front().dim(), "FeatureEncoder");
    for (const auto& r : ranges_) {
      if (!(r.min <= r.max)) throw InvalidArgument("FeatureEncoder: range with min > max");
    }
  }

  std::size_t features() const noexcept { return bases_.size(); }
  std::size_t levels() const noexcept { return q_; }
  double epsilon_d() const noexcept { return epsilon_d_; }
  std::size_t dim() const noexcept { return bases_.front().dim(); }
  std::span<const PhasorVector> bases() const noexcept { return bases_; }
  std::span<const FeatureRange> ranges() const noexcept { return ranges_; }

  /// floor(normalized * q) clamped to [0, q-1]; constant features map to level 0.
  std::size_t level(std::size_t feature, double value) const {
    if (!std::isfinite(value)) throw InvalidArgument("encode_features: non-finite feature value");
    const FeatureRange& r = ranges_.at(feature);
    if (r.max == r.min) return 0;
    const double normalized = std::clamp((value - r.min) / (r.max - r.min), 0.0, 1.0);
    const auto raw = static_cast<std::size_t>(std::floor(normalized * static_cast<double>(q_)));
    return std::min(raw, q_ - 1);
  }

  PhasorVector level_vector(std::size_t feature, std::size_t level) const {
    return fpe_power(bases_.at(feature), epsilon_d_ * static_cast<double>(level));
  }

  PhasorVector encode(std::span<const double> sample) const {
    if (sample.size() != features()) {
      throw InvalidArgument("encode_features: expected " + std::to_string(features()) + " features, got " +
                            std::to_string(sample.size()));
    }
    BundleVector sum(dim());
    for (std::size_t k = 0; k < sample.size(); ++k) sum += level_vector(k, level(k, sample[k]));
    return normalize(sum);
  }

  friend bool operator==(const FeatureEncoder&, const FeatureEncoder&) = default;

 private:
  std::size_t q_;
  double epsilon_d_;
  std::vector<PhasorVector> bases_;
  std::vector<FeatureRange> ranges_;
};

/// Records per-feature ranges and draws K random bases (in feature order).
inline FeatureEncoder fit_feature_encoder(std::span<const std::vector<double>> training, std::size_t q,
                                          double epsilon_d, std::size_t d, Rng& rng) {
  if (training.empty()) throw InvalidArgument("fit_feature_encoder: empty training set");
  const std::size_t k = training.front().size();
  if (k == 0) throw InvalidArgument("fit_feature_encoder: samples have no features");
  std::vector<FeatureRange> ranges(k);
  for (std::size_t f = 0; f < k; ++f) ranges[f] = {training.front()[f], training.front()[f]};
  for (const auto& sample : training) {
    if (sample.size() != k) throw InvalidArgument("fit_feature_encoder: ragged training samples");
    for (std::size_t f = 0; f < k; ++f) {
      if (!std::isfinite(sample[f])) throw InvalidArgument("fit_feature_encoder: non-finite feature value");
      ranges[f].min = std::min(ranges[f].min, sample[f]);
      ranges[f].max = std::max(ranges[f].max, sample[f]);
    }
  }
  std::vector<PhasorVector> bases;
  bases.reserve(k);
  for (std::size_t f = 0; f < k; ++f) bases.push_back(random_phasor(d, rng));
  return FeatureEncoder(q, epsilon_d, std::move(bases), std::move(ranges));
}

inline PhasorVector encode_features(const FeatureEncoder& enc, std::span<const double> sample) {
  return enc.encode(sample);
}

/// Lowercase a-z plus space.
inline constexpr std::string_view kLatinAlphabet = "abcdefghijklmnopqrstuvwxyz ";

/**
 * Lowercases ASCII letters, turns whitespace into single spaces, drops every
 * other byte (digits, punctuation, and all bytes of non-ASCII characters), and
 * trims leading and trailing spaces.
 */
inline std::string preprocess_text(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  bool pending_space = false;
  for (const char ch : raw) {
    const auto c = static_cast<unsigned char>(ch);
    if (c < 0x80 && std::isspace(c)) {
      pending_space = true;
      continue;
    }
    if (c >= 0x80 || !std::isalpha(c)) continue;
    if (pending_space && !out.empty()) out.push_back(' ');
    pending_space = false;
    out.push_back(static_cast<char>(std::tolower(c)));
  }
  return out;
}

class NgramEncoder {
 public:
  NgramEncoder(std::string alphabet, std::size_t n, std::vector<PhasorVector> atomics)
      : alphabet_(std::move(alphabet)), n_(n), atomics_(std::move(atomics)) {
    if (n_ == 0) throw InvalidArgument("NgramEncoder: n must be at least 1");
    if (alphabet_.empty() || atomics_.size() != alphabet_.size()) {
      throw InvalidArgument("NgramEncoder: need one atomic vector per alphabet symbol");
    }
    symbol_index_.fill(-1);
    for (std::size_t a = 0; a < alphabet_.size(); ++a) {
      auto& slot = symbol_index_[static_cast<unsigned char>(alphabet_[a])];
      if (slot != -1) throw InvalidArgument("NgramEncoder: duplicate alphabet symbol");
      slot = static_cast<int>(a);
    }
    for (const auto& v : atomics_) detail::require_same_dim(v.dim(), atomics_.front().dim(), "NgramEncoder");
    build_tables();
  }

  const std::string& alphabet() const noexcept { return alphabet_; }
  std::size_t order() const noexcept { return n_; }
  std::size_t dim() const noexcept { return atomics_.front().dim(); }
  std::span<const PhasorVector> atomics() const noexcept { return atomics_; }

  /// bind over positions p = 1..n of permute(atomic(gram[p-1]), p).
  PhasorVector gram_vector(std::string_view gram) const {
    if (gram.size() != n_) throw InvalidArgument("NgramEncoder: gram length differs from n");
    PhasorVector v = PhasorVector::zero(dim());
    for (std::size_t p = 0; p < n_; ++p) {
      v = bind(v, permute(atomics_[symbol(gram[p])], static_cast<long long>(p + 1)));
    }
    return v;
  }

  PhasorVector encode(std::string_view text) const {
    if (text.size() < n_) throw InvalidArgument("encode_ngram_stats: text shorter than n");
    std::map<std::vector<std::size_t>, std::size_t> counts;
    std::vector<std::size_t> gram(n_);
    std::vector<std::size_t> symbols(text.size());
    for (std::size_t t = 0; t < text.size(); ++t) symbols[t] = symbol(text[t]);
    for (std::size_t start = 0; start + n_ <= text.size(); ++start) {
      std::copy_n(symbols.begin() + static_cast<std::ptrdiff_t>(start), n_, gram.begin());
      ++counts[gram];
    }
    const std::size_t d = dim();
    std::vector<double> re(d, 0.0), im(d, 0.0), gre(d), gim(d);
    for (const auto& [g, count] : counts) {
      const auto& first = positioned_[0][g[0]];
      std::copy(first.first.begin(), first.first.end(), gre.begin());
      std::copy(first.second.begin(), first.second.end(), gim.begin());
      for (std::size_t p = 1; p < n_; ++p) {
        const auto& [pre, pim] = positioned_[p][g[p]];
        for (std::size_t k = 0; k < d; ++k) {
          const double r = gre[k] * pre[k] - gim[k] * pim[k];
          gim[k] = gre[k] * pim[k] + gim[k] * pre[k];
          gre[k] = r;
        }
      }
      const auto c = static_cast<double>(count);
      for (std::size_t k = 0; k < d; ++k) {
        re[k] += c * gre[k];
        im[k] += c * gim[k];
      }
    }
    return normalize(BundleVector(std::move(re), std::move(im)));
  }

  friend bool operator==(const NgramEncoder& a, const NgramEncoder& b) {
    return a.alphabet_ == b.alphabet_ && a.n_ == b.n_ && a.atomics_ == b.atomics_;
  }

 private:
  std::size_t symbol(char c) const {
    const int idx = symbol_index_[static_cast<unsigned char>(c)];
    if (idx < 0) throw InvalidArgument(std::string("encode_ngram_stats: symbol '") + c + "' not in alphabet");
    return static_cast<std::size_t>(idx);
  }

  /// Complex components of permute(atomic_a, p + 1) for every position p and symbol a.
  void build_tables() {
    positioned_.assign(n_, {});
    for (std::size_t p = 0; p < n_; ++p) {
      positioned_[p].reserve(atomics_.size());
      for (const auto& atomic : atomics_) {
        const PhasorVector v = permute(atomic, static_cast<long long>(p + 1));
        std::vector<double> re(v.dim()), im(v.dim());
        for (std::size_t k = 0; k < v.dim(); ++k) {
          re[k] = std::cos(v[k]);
          im[k] = std::sin(v[k]);
        }
        positioned_[p].emplace_back(std::move(re), std::move(im));
      }
    }
  }

  std::string alphabet_;
  std::size_t n_;
  std::vector<PhasorVector> atomics_;
  std::array<int, 256> symbol_index_{};
  std::vector<std::vector<std::pair<std::vector<double>, std::vector<double>>>> positioned_;
};

/// One random atomic vector per symbol, drawn in alphabet order.
inline NgramEncoder make_ngram_encoder(std::string alphabet, std::size_t n, std::size_t d, Rng& rng) {
  detail::require_dim(d, "make_ngram_encoder");
  std::vector<PhasorVector> atomics;
  atomics.reserve(alphabet.size());
  for (std::size_t a = 0; a < alphabet.size(); ++a) atomics.push_back(random_phasor(d, rng));
  return NgramEncoder(std::move(alphabet), n, std::move(atomics));
}

inline PhasorVector encode_ngram_stats(const NgramEncoder& enc, std::string_view text) { return enc.encode(text); }

}  // namespace hyperseed
