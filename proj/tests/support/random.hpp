#pragma once

#include <cmath>
#include <random>

#include "n360/geometry.hpp"

namespace n360::testing {

inline Direction random_direction(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  for (;;) {
    const double x = n(rng), y = n(rng), z = n(rng);
    if (x * x + y * y + z * z > 1e-6) return Direction::from_vector(x, y, z);
  }
}

/// Row-major 3x3 rotation from a random unit quaternion.
struct Rotation {
  double m[3][3];

  static Rotation random(std::mt19937_64& rng) {
    std::normal_distribution<double> n(0.0, 1.0);
    double w = n(rng), x = n(rng), y = n(rng), z = n(rng);
    const double s = std::sqrt(w * w + x * x + y * y + z * z);
    w /= s, x /= s, y /= s, z /= s;
    return {{{1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y)},
             {2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x)},
             {2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y)}}};
  }

  Direction apply(const Direction& d) const {
    return Direction::from_vector(m[0][0] * d.x() + m[0][1] * d.y() + m[0][2] * d.z(),
                                  m[1][0] * d.x() + m[1][1] * d.y() + m[1][2] * d.z(),
                                  m[2][0] * d.x() + m[2][1] * d.y() + m[2][2] * d.z());
  }
};

}  // namespace n360::testing
