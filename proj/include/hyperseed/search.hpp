#pragma once
/**
 * Exhaustive best-match search over a bank of real-part rows.
 *
 * Rows are stored in single precision so that a block of queries can be scored
 * with one matrix product. Single-precision scores only shortlist candidates:
 * every row whose approximate cosine is within the rounding bound of the best
 * approximate cosine is rescored in double by the caller-supplied exact scorer,
 * and the winner is chosen on the exact scores with ties going to the lowest
 * row. The result is the same as a sequential double-precision scan.
 */

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "hyperseed/error.hpp"
#include "hyperseed/vsa.hpp"

namespace hyperseed::detail {

struct RowMatch {
  std::size_t row = 0;
  double similarity = 0.0;
};

class RealPartBank {
 public:
  RealPartBank() = default;
  explicit RealPartBank(std::size_t dim) : dim_(dim) {}

  std::size_t dim() const noexcept { return dim_; }
  std::size_t rows() const noexcept { return norms_.size(); }
  bool empty() const noexcept { return norms_.empty(); }

  void reserve(std::size_t rows) {
    data_.reserve(rows * dim_);
    norms_.reserve(rows);
  }

  /// Appends a row given its exact (double) real parts.
  void add_row(std::span<const double> re) {
    require_same_dim(re.size(), dim_, "RealPartBank::add_row");
    double norm2 = 0.0;
    for (double x : re) {
      data_.push_back(static_cast<float>(x));
      norm2 += x * x;
    }
    norms_.push_back(std::sqrt(norm2));
  }

  double norm(std::size_t row) const noexcept { return norms_[row]; }
  const float* data() const noexcept { return data_.data(); }

  /// Upper bound on |approximate cosine - exact cosine| for one row.
  double rounding_bound() const noexcept {
    const double u = std::numeric_limits<float>::epsilon() / 2.0;
    const double n = static_cast<double>(dim_) + 4.0;
    return n * u / (1.0 - n * u);
  }

 private:
  std::size_t dim_ = 0;
  std::vector<float> data_;
  std::vector<double> norms_;
};

inline constexpr std::size_t kQueryBlock = 128;

/**
 * Best row for each of `count` queries.
 *
 * make_query(q) returns the q-th query (PhasorVector or BundleVector);
 * exact(row, query_real_parts) returns the double-precision cosine of that row.
 * Throws UndefinedSimilarity for a query whose real part has zero norm.
 */
template <class MakeQuery, class ExactScore>
std::vector<RowMatch> best_rows(const RealPartBank& bank, std::size_t count, MakeQuery&& make_query,
                                ExactScore&& exact) {
  using RowMajor = Eigen::Matrix<float, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  if (bank.empty()) throw InvalidArgument("best-match search over an empty bank");
  const std::size_t d = bank.dim();
  const std::size_t rows = bank.rows();
  const double tolerance = 2.5 * bank.rounding_bound();

  Eigen::Map<const RowMajor> bank_matrix(bank.data(), static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(d));
  std::vector<RowMatch> result(count);
  std::vector<std::vector<double>> exact_queries;
  std::vector<double> query_norms;
  RowMajor block_queries;
  RowMajor scores;
  std::vector<std::size_t> shortlist;

  for (std::size_t start = 0; start < count; start += kQueryBlock) {
    const std::size_t len = std::min(kQueryBlock, count - start);
    block_queries.resize(static_cast<Eigen::Index>(len), static_cast<Eigen::Index>(d));
    exact_queries.assign(len, std::vector<double>(d));
    query_norms.assign(len, 0.0);
    for (std::size_t b = 0; b < len; ++b) {
      const auto& query = make_query(start + b);
      require_same_dim(query.dim(), d, "best-match search");
      real_parts(query, exact_queries[b]);
      double norm2 = 0.0;
      for (std::size_t k = 0; k < d; ++k) {
        const double x = exact_queries[b][k];
        block_queries(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(k)) = static_cast<float>(x);
        norm2 += x * x;
      }
      if (norm2 == 0.0) throw UndefinedSimilarity("cosine_real: query real part has zero norm");
      query_norms[b] = std::sqrt(norm2);
    }
    scores.noalias() = block_queries * bank_matrix.transpose();

    for (std::size_t b = 0; b < len; ++b) {
      double best_approx = -std::numeric_limits<double>::infinity();
      for (std::size_t r = 0; r < rows; ++r) {
        if (bank.norm(r) == 0.0) continue;
        const double approx = static_cast<double>(scores(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(r))) /
                              (query_norms[b] * bank.norm(r));
        best_approx = std::max(best_approx, approx);
      }
      if (best_approx == -std::numeric_limits<double>::infinity()) {
        throw UndefinedSimilarity("cosine_real: every bank row has a zero real part");
      }
      shortlist.clear();
      for (std::size_t r = 0; r < rows; ++r) {
        if (bank.norm(r) == 0.0) continue;
        const double approx = static_cast<double>(scores(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(r))) /
                              (query_norms[b] * bank.norm(r));
        if (approx >= best_approx - tolerance) shortlist.push_back(r);
      }
      RowMatch best{shortlist.front(), -std::numeric_limits<double>::infinity()};
      for (std::size_t r : shortlist) {
        const double s = exact(r, std::span<const double>(exact_queries[b]));
        if (s > best.similarity) best = RowMatch{r, s};  // strict: lowest row wins ties
      }
      result[start + b] = best;
    }
  }
  return result;
}

}  // namespace hyperseed::detail
