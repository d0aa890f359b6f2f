#pragma once
/**
 * Synthetic stand-ins for six FCPS clustering benchmarks.
 *
 * Class sizes split n_points evenly; the remainder goes to the first class, so
 * hepta with 212 points has 32 central points and 30 in each outer blob.
 *
 *   atom         3D. core: uniform ball of radius 20. shell: uniform direction,
 *                radius uniform in [70, 100].
 *   chainlink    3D. ring A: radius 1 in the xy-plane around the origin.
 *                ring B: radius 1 in the xz-plane around (1, 0, 0). The rings
 *                interlock; every coordinate gets N(0, 0.1) noise.
 *   engytime     2D. A ~ N((0, 0), diag(1, 0.8^2)); B ~ N((3.2, 1.2),
 *                diag(0.9^2, 1.3^2)). The classes overlap slightly.
 *   hepta        3D. blob centres at the origin and at +-3 on each axis,
 *                isotropic sd 0.4.
 *   twodiamonds  2D. uniform in |x + 1| + |y| <= 1 and |x - 1| + |y| <= 1;
 *                the diamonds touch at the origin.
 *   lsun3d       3D. A: box [0,4] x [0,1] x [0,1]. B: box [0,1] x [2,6] x [0,1].
 *                C: N((3.5, 4.5, 0.5), 0.4^2 I). D: N((2, 2.5, 4), 0.5^2 I).
 */

#include <array>
#include <cmath>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "hyperseed/error.hpp"
#include "hyperseed/harness/dataset.hpp"
#include "hyperseed/rng.hpp"
#include "hyperseed/vsa.hpp"

namespace hyperseed::harness {

inline constexpr std::array<std::string_view, 6> kFcpsNames = {"atom",      "chainlink",   "engytime",
                                                               "hepta",     "twodiamonds", "lsun3d"};

/// Point count of the original benchmark, used when n_points is 0.
inline std::size_t fcps_default_size(std::string_view name) {
  if (name == "atom") return 800;
  if (name == "chainlink") return 1000;
  if (name == "engytime") return 4096;
  if (name == "hepta") return 212;
  if (name == "twodiamonds") return 800;
  if (name == "lsun3d") return 404;
  throw InvalidArgument("generate_fcps_like: unknown dataset '" + std::string(name) + "'");
}

namespace detail {

inline std::vector<std::size_t> class_sizes(std::size_t total, std::size_t classes) {
  std::vector<std::size_t> sizes(classes, total / classes);
  sizes.front() += total % classes;
  return sizes;
}

inline std::array<double, 3> unit_direction(Rng& rng) {
  while (true) {
    const std::array<double, 3> v = {rng.normal(), rng.normal(), rng.normal()};
    const double r = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
    if (r > 1e-12) return {v[0] / r, v[1] / r, v[2] / r};
  }
}

inline std::vector<double> spherical(Rng& rng, double radius) {
  const auto u = unit_direction(rng);
  return {radius * u[0], radius * u[1], radius * u[2]};
}

}  // namespace detail

inline TabularDataset generate_fcps_like(std::string_view name, std::size_t n_points, Rng& rng) {
  const std::size_t total = n_points == 0 ? fcps_default_size(name) : n_points;
  TabularDataset ds;
  ds.name = std::string(name);

  if (name == "atom") {
    const auto sizes = detail::class_sizes(total, 2);
    if (sizes[1] == 0) throw InvalidArgument("generate_fcps_like: atom needs at least 2 points");
    for (std::size_t k = 0; k < sizes[0]; ++k) ds.add(detail::spherical(rng, 20.0 * std::cbrt(rng.uniform())), "core");
    for (std::size_t k = 0; k < sizes[1]; ++k) ds.add(detail::spherical(rng, rng.uniform(70.0, 100.0)), "shell");
  } else if (name == "chainlink") {
    const auto sizes = detail::class_sizes(total, 2);
    for (std::size_t k = 0; k < sizes[0]; ++k) {
      const double t = rng.uniform(0.0, kTwoPi);
      ds.add({std::cos(t) + rng.normal(0.0, 0.1), std::sin(t) + rng.normal(0.0, 0.1), rng.normal(0.0, 0.1)},
             "ring_a");
    }
    for (std::size_t k = 0; k < sizes[1]; ++k) {
      const double t = rng.uniform(0.0, kTwoPi);
      ds.add({1.0 + std::cos(t) + rng.normal(0.0, 0.1), rng.normal(0.0, 0.1), std::sin(t) + rng.normal(0.0, 0.1)},
             "ring_b");
    }
  } else if (name == "engytime") {
    const auto sizes = detail::class_sizes(total, 2);
    for (std::size_t k = 0; k < sizes[0]; ++k) ds.add({rng.normal(0.0, 1.0), rng.normal(0.0, 0.8)}, "engy");
    for (std::size_t k = 0; k < sizes[1]; ++k) ds.add({rng.normal(3.2, 0.9), rng.normal(1.2, 1.3)}, "time");
  } else if (name == "hepta") {
    const std::array<std::array<double, 3>, 7> centres = {{
        {0, 0, 0}, {3, 0, 0}, {-3, 0, 0}, {0, 3, 0}, {0, -3, 0}, {0, 0, 3}, {0, 0, -3}}};
    const auto sizes = detail::class_sizes(total, centres.size());
    for (std::size_t c = 0; c < centres.size(); ++c) {
      const std::string label = "blob" + std::to_string(c);
      for (std::size_t k = 0; k < sizes[c]; ++k) {
        ds.add({rng.normal(centres[c][0], 0.4), rng.normal(centres[c][1], 0.4), rng.normal(centres[c][2], 0.4)},
               label);
      }
    }
  } else if (name == "twodiamonds") {
    const auto sizes = detail::class_sizes(total, 2);
    // (u, v) uniform in [-1,1]^2 maps onto |x| + |y| <= 1.
    auto diamond = [&rng](double cx) {
      const double u = rng.uniform(-1.0, 1.0);
      const double v = rng.uniform(-1.0, 1.0);
      return std::vector<double>{cx + (u + v) / 2.0, (u - v) / 2.0};
    };
    for (std::size_t k = 0; k < sizes[0]; ++k) ds.add(diamond(-1.0), "left");
    for (std::size_t k = 0; k < sizes[1]; ++k) ds.add(diamond(1.0), "right");
  } else if (name == "lsun3d") {
    const auto sizes = detail::class_sizes(total, 4);
    for (std::size_t k = 0; k < sizes[0]; ++k) {
      ds.add({rng.uniform(0.0, 4.0), rng.uniform(0.0, 1.0), rng.uniform(0.0, 1.0)}, "bar_x");
    }
    for (std::size_t k = 0; k < sizes[1]; ++k) {
      ds.add({rng.uniform(0.0, 1.0), rng.uniform(2.0, 6.0), rng.uniform(0.0, 1.0)}, "bar_y");
    }
    for (std::size_t k = 0; k < sizes[2]; ++k) {
      ds.add({rng.normal(3.5, 0.4), rng.normal(4.5, 0.4), rng.normal(0.5, 0.4)}, "ball");
    }
    for (std::size_t k = 0; k < sizes[3]; ++k) {
      ds.add({rng.normal(2.0, 0.5), rng.normal(2.5, 0.5), rng.normal(4.0, 0.5)}, "lifted");
    }
  } else {
    throw InvalidArgument("generate_fcps_like: unknown dataset '" + std::string(name) + "'");
  }
  return ds;
}

}  // namespace hyperseed::harness
