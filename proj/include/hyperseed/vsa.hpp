#pragma once
/**
 * FHRR hypervector algebra.
 *
 * A PhasorVector stores d phase angles in [0, 2pi); component k is the unit
 * complex number e^{j*phase_k}. A BundleVector stores d unconstrained complex
 * components and is what superposition produces.
 *
 *   bind       phase addition mod 2pi        (componentwise complex product)
 *   unbind     phase subtraction mod 2pi     (product with the conjugate key)
 *   superpose  componentwise complex sum
 *   permute    cyclic rotation of components
 *   fpe_power  base^exponent as phase scaling mod 2pi
 *   similarity cosine of the real-part vectors
 */

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <numbers>
#include <ranges>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hyperseed/error.hpp"
#include "hyperseed/rng.hpp"

namespace hyperseed {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Floored modulo into [0, 2pi).
inline double wrap_phase(double phase) noexcept {
  double r = std::fmod(phase, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  if (r >= kTwoPi) r = 0.0;  // -tiny + 2pi can round up to 2pi
  return r;
}

/// Distance between two angles on the circle, in [0, pi].
inline double circular_distance(double a, double b) noexcept {
  const double diff = wrap_phase(a - b);
  return std::min(diff, kTwoPi - diff);
}

namespace detail {

inline void require_dim(std::size_t d, const char* op) {
  if (d == 0) throw DimensionError(std::string(op) + ": dimensionality must be positive");
}

inline void require_same_dim(std::size_t a, std::size_t b, const char* op) {
  if (a != b) {
    throw DimensionError(std::string(op) + ": dimension mismatch (" + std::to_string(a) +
                         " vs " + std::to_string(b) + ")");
  }
}

}  // namespace detail

class PhasorVector {
 public:
  PhasorVector() = default;

  /// Takes ownership of the phases; each is wrapped into [0, 2pi).
  explicit PhasorVector(std::vector<double> phases) : phases_(std::move(phases)) {
    for (double& p : phases_) {
      if (!std::isfinite(p)) throw InvalidArgument("PhasorVector: non-finite phase");
      p = wrap_phase(p);
    }
  }

  /// The identity of binding: every phase 0.
  static PhasorVector zero(std::size_t d) {
    detail::require_dim(d, "PhasorVector::zero");
    return PhasorVector(std::vector<double>(d, 0.0));
  }

  std::size_t dim() const noexcept { return phases_.size(); }
  std::span<const double> phases() const noexcept { return phases_; }
  double operator[](std::size_t k) const noexcept { return phases_[k]; }
  double real(std::size_t k) const noexcept { return std::cos(phases_[k]); }
  double imag(std::size_t k) const noexcept { return std::sin(phases_[k]); }

  friend bool operator==(const PhasorVector&, const PhasorVector&) = default;

 private:
  std::vector<double> phases_;
};

class BundleVector {
 public:
  BundleVector() = default;

  /// All-zero bundle of dimensionality d.
  explicit BundleVector(std::size_t d) : re_(d, 0.0), im_(d, 0.0) {
    detail::require_dim(d, "BundleVector");
  }

  BundleVector(std::vector<double> re, std::vector<double> im) : re_(std::move(re)), im_(std::move(im)) {
    detail::require_same_dim(re_.size(), im_.size(), "BundleVector");
    for (std::size_t k = 0; k < re_.size(); ++k) {
      if (!std::isfinite(re_[k]) || !std::isfinite(im_[k])) {
        throw InvalidArgument("BundleVector: non-finite component");
      }
    }
  }

  /// The phasor viewed as a complex vector of unit magnitudes.
  static BundleVector from_phasor(const PhasorVector& v) {
    BundleVector b;
    b.re_.resize(v.dim());
    b.im_.resize(v.dim());
    for (std::size_t k = 0; k < v.dim(); ++k) {
      b.re_[k] = std::cos(v[k]);
      b.im_[k] = std::sin(v[k]);
    }
    return b;
  }

  std::size_t dim() const noexcept { return re_.size(); }
  std::span<const double> re() const noexcept { return re_; }
  std::span<const double> im() const noexcept { return im_; }
  std::span<double> re() noexcept { return re_; }
  std::span<double> im() noexcept { return im_; }
  double real(std::size_t k) const noexcept { return re_[k]; }
  double imag(std::size_t k) const noexcept { return im_[k]; }

  BundleVector& operator+=(const PhasorVector& v) {
    detail::require_same_dim(dim(), v.dim(), "superpose");
    for (std::size_t k = 0; k < re_.size(); ++k) {
      re_[k] += std::cos(v[k]);
      im_[k] += std::sin(v[k]);
    }
    return *this;
  }

  BundleVector& operator+=(const BundleVector& v) {
    detail::require_same_dim(dim(), v.dim(), "superpose");
    for (std::size_t k = 0; k < re_.size(); ++k) {
      re_[k] += v.re_[k];
      im_[k] += v.im_[k];
    }
    return *this;
  }

  friend bool operator==(const BundleVector&, const BundleVector&) = default;

 private:
  std::vector<double> re_;
  std::vector<double> im_;
};

template <class V>
concept Hypervector = std::same_as<V, PhasorVector> || std::same_as<V, BundleVector>;

/// Each phase i.i.d. uniform on [0, 2pi): 2pi * rng.uniform().
inline PhasorVector random_phasor(std::size_t d, Rng& rng) {
  detail::require_dim(d, "random_phasor");
  std::vector<double> phases(d);
  for (double& p : phases) p = kTwoPi * rng.uniform();
  return PhasorVector(std::move(phases));
}

inline PhasorVector bind(const PhasorVector& a, const PhasorVector& b) {
  detail::require_same_dim(a.dim(), b.dim(), "bind");
  std::vector<double> out(a.dim());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = wrap_phase(a[k] + b[k]);
  return PhasorVector(std::move(out));
}

/// Retrieves the partner of `key` from `composite`: composite_k - key_k.
inline PhasorVector unbind(const PhasorVector& key, const PhasorVector& composite) {
  detail::require_same_dim(key.dim(), composite.dim(), "unbind");
  std::vector<double> out(key.dim());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = wrap_phase(composite[k] - key[k]);
  return PhasorVector(std::move(out));
}

/// Rotates every complex component of `composite` by -key_k.
inline BundleVector unbind(const PhasorVector& key, const BundleVector& composite) {
  detail::require_same_dim(key.dim(), composite.dim(), "unbind");
  const std::size_t d = key.dim();
  std::vector<double> re(d), im(d);
  const auto cre = composite.re();
  const auto cim = composite.im();
  for (std::size_t k = 0; k < d; ++k) {
    const double c = std::cos(key[k]);
    const double s = std::sin(key[k]);
    re[k] = cre[k] * c + cim[k] * s;
    im[k] = cim[k] * c - cre[k] * s;
  }
  return BundleVector(std::move(re), std::move(im));
}

/// Componentwise complex sum of a non-empty range of hypervectors.
template <std::ranges::input_range R>
  requires Hypervector<std::ranges::range_value_t<R>>
BundleVector superpose(const R& vectors) {
  auto it = std::ranges::begin(vectors);
  const auto end = std::ranges::end(vectors);
  if (it == end) throw InvalidArgument("superpose: empty list");
  BundleVector sum(it->dim());
  for (; it != end; ++it) sum += *it;
  return sum;
}

inline BundleVector superpose(std::initializer_list<PhasorVector> vectors) {
  return superpose(std::span<const PhasorVector>(vectors.begin(), vectors.size()));
}

/// Phase of every component; a zero-magnitude component gets phase 0.
inline PhasorVector normalize(const BundleVector& a) {
  std::vector<double> phases(a.dim());
  const auto re = a.re();
  const auto im = a.im();
  for (std::size_t k = 0; k < phases.size(); ++k) {
    phases[k] = (re[k] == 0.0 && im[k] == 0.0) ? 0.0 : wrap_phase(std::atan2(im[k], re[k]));
  }
  return PhasorVector(std::move(phases));
}

/// Cyclic rotation: result[(k + shift) mod d] = v[k]. Negative shifts rotate left.
inline PhasorVector permute(const PhasorVector& v, long long shift) {
  const auto d = static_cast<long long>(v.dim());
  if (d == 0) return v;
  const long long s = ((shift % d) + d) % d;
  std::vector<double> out(v.dim());
  for (long long k = 0; k < d; ++k) out[static_cast<std::size_t>((k + s) % d)] = v[static_cast<std::size_t>(k)];
  return PhasorVector(std::move(out));
}

/**
 * Fractional power base^exponent: each [0, 2pi) phase is multiplied by the
 * exponent and wrapped. For phi ~ U(0, 2pi) the complex kernel between powers
 * s and t is E[e^{j(s - t)phi}], whose real part is sinc(2(s - t)).
 */
inline PhasorVector fpe_power(const PhasorVector& base, double exponent) {
  if (!std::isfinite(exponent)) throw InvalidArgument("fpe_power: non-finite exponent");
  std::vector<double> out(base.dim());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = wrap_phase(base[k] * exponent);
  return PhasorVector(std::move(out));
}

/// Real parts of v written into `out` (length v.dim()).
inline void real_parts(const PhasorVector& v, std::span<double> out) {
  for (std::size_t k = 0; k < v.dim(); ++k) out[k] = std::cos(v[k]);
}

inline void real_parts(const BundleVector& v, std::span<double> out) {
  std::ranges::copy(v.re(), out.begin());
}

/// Cosine of two real vectors. Accumulates in index order, clamps into [-1, 1].
inline double cosine_of_real_parts(std::span<const double> a, std::span<const double> b) {
  detail::require_same_dim(a.size(), b.size(), "cosine_real");
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    dot += a[k] * b[k];
    na += a[k] * a[k];
    nb += b[k] * b[k];
  }
  if (na == 0.0 || nb == 0.0) throw UndefinedSimilarity("cosine_real: real part has zero norm");
  return std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), -1.0, 1.0);
}

/// Cosine similarity of the real parts Re(a), Re(b).
template <Hypervector A, Hypervector B>
double cosine_real(const A& a, const B& b) {
  detail::require_same_dim(a.dim(), b.dim(), "cosine_real");
  std::vector<double> ra(a.dim()), rb(b.dim());
  real_parts(a, ra);
  real_parts(b, rb);
  return cosine_of_real_parts(ra, rb);
}

}  // namespace hyperseed
