#pragma once
/**
 * Scatter plot of a projection table over the map grid, as standalone SVG.
 *
 * Column j runs left to right and row i top to bottom. Each sample is a dot
 * colored by its true label, offset inside its cell by a jitter derived from
 * the sample index so that repeated renders are identical. Target nodes are
 * marked with crosses.
 */

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "hyperseed/error.hpp"
#include "hyperseed/hdmap.hpp"
#include "hyperseed/labeling.hpp"
#include "hyperseed/rng.hpp"

namespace hyperseed::harness {

struct TargetMark {
  GridCoord coords;
  /// Label ordinal that picks the cross color; nullopt draws it red.
  std::optional<std::size_t> label;
};

namespace detail {

inline constexpr const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b",
                                           "#e377c2", "#7f7f7f", "#bcbd22", "#17becf", "#393b79", "#637939",
                                           "#8c6d31", "#843c39", "#7b4173", "#3182bd", "#e6550d", "#31a354",
                                           "#756bb1", "#636363", "#9c9ede"};

inline const char* label_color(std::size_t label) { return kPalette[label % std::size(kPalette)]; }

inline std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

inline std::string escape_xml(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

/// Deterministic offset in [-0.3, 0.3] for `sample` along `axis`.
inline double jitter(std::size_t sample, std::uint64_t axis) {
  const std::uint64_t h = splitmix64(derive_seed(sample, axis));
  return (static_cast<double>(h >> 11) * 0x1.0p-53 - 0.5) * 0.6;
}

}  // namespace detail

inline void render_projection(std::ostream& out, std::span<const ProjectionRow> rows,
                              std::span<const std::string> label_names, std::size_t n, std::size_t m,
                              std::span<const TargetMark> targets = {}) {
  if (n == 0 || m == 0) throw InvalidArgument("render_projection: grid sizes must be positive");
  const double plot = 600.0;
  const double cell = plot / static_cast<double>(std::max(n, m));
  const double margin = 40.0;
  const double legend_width = 160.0;
  const double width = margin * 2 + cell * static_cast<double>(m) + legend_width;
  const double height = margin * 2 + cell * static_cast<double>(n);
  const double radius = std::max(1.0, std::min(4.0, cell * 0.3));
  auto cx = [&](double j) { return margin + (j + 0.5) * cell; };
  auto cy = [&](double i) { return margin + (i + 0.5) * cell; };

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << detail::fmt(width) << "\" height=\""
      << detail::fmt(height) << "\" viewBox=\"0 0 " << detail::fmt(width) << ' ' << detail::fmt(height) << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<rect x=\"" << detail::fmt(margin) << "\" y=\"" << detail::fmt(margin) << "\" width=\""
      << detail::fmt(cell * static_cast<double>(m)) << "\" height=\"" << detail::fmt(cell * static_cast<double>(n))
      << "\" fill=\"none\" stroke=\"black\"/>\n";
  out << "<text x=\"" << detail::fmt(margin) << "\" y=\"" << detail::fmt(margin - 10)
      << "\" font-family=\"sans-serif\" font-size=\"12\">j = 0.." << m - 1 << " (columns), i = 0.." << n - 1
      << " (rows)</text>\n";

  out << "<g id=\"samples\">\n";
  for (const auto& r : rows) {
    if (r.coords.i >= n || r.coords.j >= m) throw InvalidArgument("render_projection: row outside the grid");
    out << "<circle cx=\"" << detail::fmt(cx(static_cast<double>(r.coords.j) + detail::jitter(r.sample, 1)))
        << "\" cy=\"" << detail::fmt(cy(static_cast<double>(r.coords.i) + detail::jitter(r.sample, 2))) << "\" r=\""
        << detail::fmt(radius) << "\" fill=\"" << detail::label_color(r.true_label) << "\" fill-opacity=\"0.7\"/>\n";
  }
  out << "</g>\n<g id=\"targets\">\n";
  const double arm = std::max(3.0, cell * 0.6);
  for (const auto& t : targets) {
    const char* color = t.label ? detail::label_color(*t.label) : "red";
    const double x = cx(static_cast<double>(t.coords.j));
    const double y = cy(static_cast<double>(t.coords.i));
    out << "<path d=\"M" << detail::fmt(x - arm) << ' ' << detail::fmt(y - arm) << " L" << detail::fmt(x + arm) << ' '
        << detail::fmt(y + arm) << " M" << detail::fmt(x - arm) << ' ' << detail::fmt(y + arm) << " L"
        << detail::fmt(x + arm) << ' ' << detail::fmt(y - arm) << "\" stroke=\"" << color
        << "\" stroke-width=\"2\"/>\n";
  }
  out << "</g>\n<g id=\"legend\" font-family=\"sans-serif\" font-size=\"12\">\n";
  const double lx = margin * 1.5 + cell * static_cast<double>(m);
  for (std::size_t l = 0; l < label_names.size(); ++l) {
    const double ly = margin + 16.0 * static_cast<double>(l);
    out << "<circle cx=\"" << detail::fmt(lx) << "\" cy=\"" << detail::fmt(ly) << "\" r=\"5\" fill=\""
        << detail::label_color(l) << "\"/>\n";
    out << "<text x=\"" << detail::fmt(lx + 10) << "\" y=\"" << detail::fmt(ly + 4) << "\">"
        << detail::escape_xml(label_names[l]) << "</text>\n";
  }
  out << "</g>\n</svg>\n";
}

inline void render_projection(const std::string& path, std::span<const ProjectionRow> rows,
                              std::span<const std::string> label_names, std::size_t n, std::size_t m,
                              std::span<const TargetMark> targets = {}) {
  std::ofstream out(path);
  if (!out) throw DataError(path + ": cannot open for writing");
  render_projection(out, rows, label_names, n, m, targets);
  out.flush();
  if (!out) throw DataError(path + ": write failure");
}

}  // namespace hyperseed::harness
