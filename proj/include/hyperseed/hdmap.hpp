#pragma once
/**
 * HD-map: a fixed n x m grid of FPE-encoded node hypervectors.
 *
 *   node(i, j) = bind(fpe_power(x0, eps * i), fpe_power(y0, eps * j))
 *
 * The grid coordinates are bookkeeping only; as an associative memory the map
 * is an unordered bank of vectors searched exhaustively for the best match.
 * Node real parts are precomputed once (d x n*m single-precision values) and
 * node phasors are regenerated on demand, bit-for-bit identical every time.
 */

#include <compare>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "hyperseed/error.hpp"
#include "hyperseed/rng.hpp"
#include "hyperseed/search.hpp"
#include "hyperseed/vsa.hpp"

namespace hyperseed {

struct GridCoord {
  std::size_t i = 0;
  std::size_t j = 0;

  friend auto operator<=>(const GridCoord&, const GridCoord&) = default;
};

inline std::string to_string(const GridCoord& c) {
  return "(" + std::to_string(c.i) + "," + std::to_string(c.j) + ")";
}

struct BmvResult {
  GridCoord coords;
  double similarity = 0.0;

  friend bool operator==(const BmvResult&, const BmvResult&) = default;
};

class HdMap {
 public:
  /// Map over explicit bases. Throws on zero sizes, non-positive epsilon or mismatched bases.
  HdMap(std::size_t n, std::size_t m, double epsilon_p, PhasorVector x0, PhasorVector y0)
      : n_(n), m_(m), epsilon_p_(epsilon_p), x0_(std::move(x0)), y0_(std::move(y0)) {
    if (n_ == 0 || m_ == 0) throw InvalidArgument("build_map: grid sizes must be positive");
    if (!(epsilon_p_ > 0.0) || !std::isfinite(epsilon_p_)) {
      throw InvalidArgument("build_map: epsilon_p must be positive and finite");
    }
    detail::require_dim(x0_.dim(), "build_map");
    detail::require_same_dim(x0_.dim(), y0_.dim(), "build_map");
    precompute();
  }

  std::size_t rows() const noexcept { return n_; }
  std::size_t cols() const noexcept { return m_; }
  std::size_t size() const noexcept { return n_ * m_; }
  std::size_t dim() const noexcept { return x0_.dim(); }
  double epsilon_p() const noexcept { return epsilon_p_; }
  const PhasorVector& x0() const noexcept { return x0_; }
  const PhasorVector& y0() const noexcept { return y0_; }

  bool contains(const GridCoord& c) const noexcept { return c.i < n_ && c.j < m_; }
  std::size_t index_of(const GridCoord& c) const noexcept { return c.i * m_ + c.j; }
  GridCoord coord_of(std::size_t index) const noexcept { return {index / m_, index % m_}; }

  PhasorVector node(const GridCoord& c) const {
    check(c);
    return bind(axis_power(x0_, c.i), axis_power(y0_, c.j));
  }
  PhasorVector node(std::size_t i, std::size_t j) const { return node(GridCoord{i, j}); }

  /// Exact real parts of node `index`, matching real_parts(node(coord_of(index))).
  void node_real_parts(std::size_t index, std::span<double> out) const {
    const GridCoord c = coord_of(index);
    const PhasorVector xi = axis_power(x0_, c.i);
    const PhasorVector yj = axis_power(y0_, c.j);
    for (std::size_t k = 0; k < dim(); ++k) out[k] = std::cos(wrap_phase(xi[k] + yj[k]));
  }

  const detail::RealPartBank& bank() const noexcept { return bank_; }

 private:
  PhasorVector axis_power(const PhasorVector& base, std::size_t step) const {
    return fpe_power(base, epsilon_p_ * static_cast<double>(step));
  }

  void check(const GridCoord& c) const {
    if (!contains(c)) {
      throw InvalidArgument("HdMap: coordinate " + to_string(c) + " outside " + std::to_string(n_) + "x" +
                            std::to_string(m_) + " grid");
    }
  }

  void precompute() {
    bank_ = detail::RealPartBank(dim());
    bank_.reserve(size());
    std::vector<PhasorVector> ys;
    ys.reserve(m_);
    for (std::size_t j = 0; j < m_; ++j) ys.push_back(axis_power(y0_, j));
    std::vector<double> re(dim());
    for (std::size_t i = 0; i < n_; ++i) {
      const PhasorVector xi = axis_power(x0_, i);
      for (std::size_t j = 0; j < m_; ++j) {
        for (std::size_t k = 0; k < dim(); ++k) re[k] = std::cos(wrap_phase(xi[k] + ys[j][k]));
        bank_.add_row(re);
      }
    }
  }

  std::size_t n_;
  std::size_t m_;
  double epsilon_p_;
  PhasorVector x0_;
  PhasorVector y0_;
  detail::RealPartBank bank_;
};

/// Draws the two bases from `rng` (x0 first) and precomputes all n*m nodes.
inline HdMap build_map(std::size_t n, std::size_t m, double epsilon_p, std::size_t d, Rng& rng) {
  detail::require_dim(d, "build_map");
  if (n == 0 || m == 0) throw InvalidArgument("build_map: grid sizes must be positive");
  PhasorVector x0 = random_phasor(d, rng);
  PhasorVector y0 = random_phasor(d, rng);
  return HdMap(n, m, epsilon_p, std::move(x0), std::move(y0));
}

/**
 * Best matching vector for each query: argmax of cosine_real over all nodes,
 * ties to the lowest row-major index. make_query(q) yields query q.
 */
template <class MakeQuery>
std::vector<BmvResult> find_bmv_batch(const HdMap& map, std::size_t count, MakeQuery&& make_query) {
  std::vector<double> node_re(map.dim());
  auto exact = [&](std::size_t row, std::span<const double> query_re) {
    map.node_real_parts(row, node_re);
    return cosine_of_real_parts(query_re, node_re);
  };
  const auto matches = detail::best_rows(map.bank(), count, make_query, exact);
  std::vector<BmvResult> out;
  out.reserve(matches.size());
  for (const auto& match : matches) out.push_back({map.coord_of(match.row), match.similarity});
  return out;
}

template <Hypervector Q>
BmvResult find_bmv(const HdMap& map, const Q& query) {
  detail::require_same_dim(query.dim(), map.dim(), "find_bmv");
  return find_bmv_batch(map, 1, [&](std::size_t) -> const Q& { return query; }).front();
}

/// n x m grid (row-major) of cosine_real(node(target), node(a, b)).
inline std::vector<double> similarity_landscape(const HdMap& map, const GridCoord& target) {
  if (!map.contains(target)) {
    throw InvalidArgument("similarity_landscape: target " + to_string(target) + " out of bounds");
  }
  std::vector<double> target_re(map.dim()), node_re(map.dim());
  map.node_real_parts(map.index_of(target), target_re);
  std::vector<double> out(map.size());
  for (std::size_t r = 0; r < map.size(); ++r) {
    map.node_real_parts(r, node_re);
    out[r] = cosine_of_real_parts(target_re, node_re);
  }
  return out;
}

}  // namespace hyperseed
