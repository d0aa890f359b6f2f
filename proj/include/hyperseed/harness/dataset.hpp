#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <map>
#include <ostream>
#include <iomanip>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hyperseed/error.hpp"
#include "hyperseed/rng.hpp"

namespace hyperseed::harness {

/// Feature vectors with class labels. Label ordinals follow first appearance.
struct TabularDataset {
  std::string name;
  std::vector<std::vector<double>> samples;
  std::vector<std::size_t> labels;
  std::vector<std::string> label_names;

  std::size_t size() const noexcept { return samples.size(); }
  std::size_t features() const noexcept { return samples.empty() ? 0 : samples.front().size(); }

  /// Ordinal of `label`, appending it if new.
  std::size_t intern_label(const std::string& label) {
    const auto it = std::find(label_names.begin(), label_names.end(), label);
    if (it != label_names.end()) return static_cast<std::size_t>(it - label_names.begin());
    label_names.push_back(label);
    return label_names.size() - 1;
  }

  void add(std::vector<double> sample, const std::string& label) {
    samples.push_back(std::move(sample));
    labels.push_back(intern_label(label));
  }
};

namespace detail {

inline std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

inline std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    cells.push_back(trim(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return cells;
}

inline bool parse_double(const std::string& cell, double& out) {
  if (cell.empty()) return false;
  const char* begin = cell.data();
  const char* end = begin + cell.size();
  if (*begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, out);
  return ec == std::errc() && ptr == end && std::isfinite(out);
}

}  // namespace detail

/**
 * Reads a comma-separated file of numeric features plus one label column.
 *
 * `label_column` is a header name, a 0-based column index, or empty for the
 * last column. The first line is a header when any of its feature cells is not
 * numeric. Blank lines are skipped. Errors name the file and 1-based line.
 */
inline TabularDataset load_csv_dataset(const std::string& path, const std::string& label_column = "") {
  std::ifstream in(path);
  if (!in) throw DataError(path + ": cannot open file");
  std::vector<std::pair<std::size_t, std::vector<std::string>>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::trim(line).empty()) continue;
    rows.emplace_back(line_no, detail::split_csv_line(line));
  }
  if (rows.empty()) throw DataError(path + ": empty file");

  const std::size_t columns = rows.front().second.size();
  if (columns < 2) throw DataError(path + ": need at least one feature column and a label column");

  std::vector<std::string> header;
  std::size_t label_index = columns - 1;
  bool named_label = false;
  if (!label_column.empty()) {
    std::size_t idx = 0;
    const auto [ptr, ec] = std::from_chars(label_column.data(), label_column.data() + label_column.size(), idx);
    if (ec == std::errc() && ptr == label_column.data() + label_column.size()) {
      if (idx >= columns) throw DataError(path + ": label column " + label_column + " out of range");
      label_index = idx;
    } else {
      named_label = true;
    }
  }

  const auto& first = rows.front().second;
  bool has_header = named_label;
  for (std::size_t c = 0; c < first.size() && !has_header; ++c) {
    double v = 0.0;
    if (c != label_index && !detail::parse_double(first[c], v)) has_header = true;
  }
  if (has_header) {
    header = first;
    if (named_label) {
      const auto it = std::find(header.begin(), header.end(), label_column);
      if (it == header.end()) throw DataError(path + ": no column named '" + label_column + "'");
      label_index = static_cast<std::size_t>(it - header.begin());
    }
  }

  TabularDataset ds;
  ds.name = path;
  for (std::size_t r = has_header ? 1 : 0; r < rows.size(); ++r) {
    const auto& [row_line, cells] = rows[r];
    if (cells.size() != columns) {
      throw DataError(path + ":" + std::to_string(row_line) + ": expected " + std::to_string(columns) +
                      " cells, found " + std::to_string(cells.size()));
    }
    std::vector<double> sample;
    sample.reserve(columns - 1);
    for (std::size_t c = 0; c < columns; ++c) {
      if (c == label_index) continue;
      double v = 0.0;
      if (!detail::parse_double(cells[c], v)) {
        throw DataError(path + ":" + std::to_string(row_line) + ": non-numeric cell '" + cells[c] + "' in column " +
                        std::to_string(c));
      }
      sample.push_back(v);
    }
    ds.add(std::move(sample), cells[label_index]);
  }
  if (ds.samples.empty()) throw DataError(path + ": no data rows");
  return ds;
}

/// Writes features then a `label` column, with a header `x0,x1,...,label`.
inline void write_csv_dataset(std::ostream& out, const TabularDataset& ds) {
  for (std::size_t f = 0; f < ds.features(); ++f) out << 'x' << f << ',';
  out << "label\n";
  out << std::setprecision(17);
  for (std::size_t s = 0; s < ds.size(); ++s) {
    for (double v : ds.samples[s]) out << v << ',';
    out << ds.label_names[ds.labels[s]] << '\n';
  }
}

struct Split {
  TabularDataset train;
  TabularDataset test;
};

/**
 * Stratified split. Per class (in ordinal order) the member indices are
 * shuffled and round(fraction * count) of them, clamped to [1, count], go to
 * training. The training set is then shuffled as a whole; the test set keeps
 * the original order. Both keep the full label name table.
 */
inline Split stratified_split(const TabularDataset& ds, double train_fraction, Rng& rng) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw InvalidArgument("stratified_split: train fraction must be in (0, 1)");
  }
  std::vector<std::vector<std::size_t>> by_class(ds.label_names.size());
  for (std::size_t s = 0; s < ds.size(); ++s) by_class[ds.labels[s]].push_back(s);

  auto shuffle = [&rng](std::vector<std::size_t>& v) {
    for (std::size_t k = v.size(); k > 1; --k) std::swap(v[k - 1], v[rng.below(k)]);
  };

  std::vector<std::size_t> train_idx, test_idx;
  for (auto& members : by_class) {
    if (members.empty()) continue;
    shuffle(members);
    auto take = static_cast<std::size_t>(std::llround(train_fraction * static_cast<double>(members.size())));
    take = std::clamp<std::size_t>(take, 1, members.size());
    train_idx.insert(train_idx.end(), members.begin(), members.begin() + static_cast<std::ptrdiff_t>(take));
    test_idx.insert(test_idx.end(), members.begin() + static_cast<std::ptrdiff_t>(take), members.end());
  }
  shuffle(train_idx);
  std::sort(test_idx.begin(), test_idx.end());

  Split split;
  for (TabularDataset* part : {&split.train, &split.test}) {
    part->name = ds.name;
    part->label_names = ds.label_names;
  }
  for (std::size_t s : train_idx) {
    split.train.samples.push_back(ds.samples[s]);
    split.train.labels.push_back(ds.labels[s]);
  }
  for (std::size_t s : test_idx) {
    split.test.samples.push_back(ds.samples[s]);
    split.test.labels.push_back(ds.labels[s]);
  }
  return split;
}

}  // namespace hyperseed::harness
