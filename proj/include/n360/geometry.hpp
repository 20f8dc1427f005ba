#pragma once

// Spherical direction math for equirectangular 360 video.
//
// Convention: z up, x forward, yaw measured about z from +x towards +y,
// pitch measured from the xy-plane towards +z. Angles are in degrees.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <utility>
#include <vector>

#include "n360/error.hpp"

namespace n360 {

inline constexpr double kDegPerRad = 180.0 / std::numbers::pi;
inline constexpr double kRadPerDeg = std::numbers::pi / 180.0;

inline double deg2rad(double deg) { return deg * kRadPerDeg; }
inline double rad2deg(double rad) { return rad * kDegPerRad; }

// Wraps an angle into [-180, 180).
inline double wrap_yaw(double yaw) {
  double w = std::fmod(yaw + 180.0, 360.0);
  if (w < 0.0) w += 360.0;
  w -= 180.0;
  return w >= 180.0 ? -180.0 : w;
}

/// A unit direction on the sphere.
class Direction {
 public:
  /// Defaults to the forward axis (yaw 0, pitch 0).
  constexpr Direction() = default;

  /// Builds a direction from any non-zero vector; the vector is normalized.
  static Direction from_vector(double x, double y, double z) {
    const double n = std::sqrt(x * x + y * y + z * z);
    if (!(n > 0.0) || !std::isfinite(n)) throw DomainError("direction from zero or non-finite vector");
    return Direction(x / n, y / n, z / n);
  }

  static Direction from_vector(const std::array<double, 3>& v) { return from_vector(v[0], v[1], v[2]); }

  double x() const { return x_; }
  double y() const { return y_; }
  double z() const { return z_; }
  std::array<double, 3> vec() const { return {x_, y_, z_}; }

  /// Yaw in [-180, 180). Poles report 0.
  double yaw() const {
    if (std::abs(x_) < 1e-15 && std::abs(y_) < 1e-15) return 0.0;
    return wrap_yaw(rad2deg(std::atan2(y_, x_)));
  }

  /// Pitch in [-90, 90].
  double pitch() const { return rad2deg(std::asin(std::clamp(z_, -1.0, 1.0))); }

  double dot(const Direction& o) const { return x_ * o.x_ + y_ * o.y_ + z_ * o.z_; }

  Direction operator-() const { return Direction(-x_, -y_, -z_); }

  friend bool operator==(const Direction&, const Direction&) = default;

 private:
  constexpr Direction(double x, double y, double z) : x_(x), y_(y), z_(z) {}

  double x_ = 1.0;
  double y_ = 0.0;
  double z_ = 0.0;
};

/// Direction for (yaw, pitch) in degrees. Pitch outside [-90, 90] is a domain error.
inline Direction dir_from_angles(double yaw, double pitch) {
  if (!(pitch >= -90.0 && pitch <= 90.0)) throw DomainError("pitch out of range [-90, 90]");
  if (!std::isfinite(yaw)) throw DomainError("yaw is not finite");
  const double y = deg2rad(wrap_yaw(yaw));
  const double p = deg2rad(pitch);
  return Direction::from_vector(std::cos(p) * std::cos(y), std::cos(p) * std::sin(y), std::sin(p));
}

/// Great-circle angle between two directions, in [0, 180].
/// atan2 of |a x b| and a . b stays accurate near 0 and 180, where acos does not.
inline double angular_distance(const Direction& a, const Direction& b) {
  const double cx = a.y() * b.z() - a.z() * b.y();
  const double cy = a.z() * b.x() - a.x() * b.z();
  const double cz = a.x() * b.y() - a.y() * b.x();
  return rad2deg(std::atan2(std::sqrt(cx * cx + cy * cy + cz * cz), a.dot(b)));
}

/// Maps continuous equirectangular image coordinates (pixel units, pixel
/// centers at +0.5) to a direction.
inline Direction equirect_to_direction(double x, double y, std::size_t width, std::size_t height) {
  if (width == 0 || height == 0) throw DomainError("equirectangular map has zero size");
  const double yaw = (x / static_cast<double>(width) - 0.5) * 360.0;
  const double pitch = std::clamp((0.5 - y / static_cast<double>(height)) * 180.0, -90.0, 90.0);
  return dir_from_angles(yaw, pitch);
}

inline Direction pixel_to_direction(std::size_t x, std::size_t y, std::size_t width, std::size_t height) {
  if (width == 0 || height == 0) throw DomainError("equirectangular map has zero size");
  if (x >= width || y >= height) throw DomainError("pixel outside map");
  return equirect_to_direction(static_cast<double>(x) + 0.5, static_cast<double>(y) + 0.5, width, height);
}

struct Pixel {
  std::size_t x = 0;
  std::size_t y = 0;
  friend bool operator==(const Pixel&, const Pixel&) = default;
};

/// Inverse of pixel_to_direction: the pixel containing the direction.
inline Pixel direction_to_pixel(const Direction& d, std::size_t width, std::size_t height) {
  if (width == 0 || height == 0) throw DomainError("equirectangular map has zero size");
  const double fx = (d.yaw() / 360.0 + 0.5) * static_cast<double>(width);
  const double fy = (0.5 - d.pitch() / 180.0) * static_cast<double>(height);
  auto clampi = [](double v, std::size_t n) {
    const auto i = static_cast<long long>(std::floor(v));
    return static_cast<std::size_t>(std::clamp<long long>(i, 0, static_cast<long long>(n) - 1));
  };
  return {clampi(fx, width), clampi(fy, height)};
}

struct Viewport {
  Direction center;
  double h_fov = 120.0;
  double v_fov = 90.0;

  static constexpr double kDefaultHFov = 120.0;
  static constexpr double kDefaultVFov = 90.0;

  void check() const {
    if (!(h_fov > 0.0 && h_fov <= 360.0)) throw ConfigError("viewport h_fov must be in (0, 360]");
    if (!(v_fov > 0.0 && v_fov <= 180.0)) throw ConfigError("viewport v_fov must be in (0, 180]");
  }
};

/// (yaw, pitch) of `d` expressed in the frame where `center` is the forward axis.
inline std::pair<double, double> local_angles(const Direction& d, const Direction& center) {
  const double cy = deg2rad(center.yaw());
  const double cp = deg2rad(center.pitch());
  // undo yaw: rotate about z by -cy
  const double x1 = d.x() * std::cos(cy) + d.y() * std::sin(cy);
  const double y1 = -d.x() * std::sin(cy) + d.y() * std::cos(cy);
  const double z1 = d.z();
  // undo pitch: rotate about y so the center lands on +x
  const double x2 = x1 * std::cos(cp) + z1 * std::sin(cp);
  const double z2 = -x1 * std::sin(cp) + z1 * std::cos(cp);
  const double yaw = rad2deg(std::atan2(y1, x2));
  const double pitch = rad2deg(std::asin(std::clamp(z2, -1.0, 1.0)));
  return {yaw, pitch};
}

inline bool in_viewport(const Direction& d, const Viewport& vp) {
  const auto [yaw, pitch] = local_angles(d, vp.center);
  return std::abs(yaw) <= vp.h_fov / 2.0 && std::abs(pitch) <= vp.v_fov / 2.0;
}

/// Frame-indexed track of directions on the 1 fps grid.
struct ViewingPath {
  int start_frame = 0;
  std::vector<Direction> directions;

  std::size_t size() const { return directions.size(); }
  int end_frame() const { return start_frame + static_cast<int>(directions.size()) - 1; }
  const Direction& at_frame(int frame) const { return directions.at(static_cast<std::size_t>(frame - start_frame)); }
};

/// Renormalized mean of unit vectors; `fallback` when the mean vanishes.
inline Direction mean_direction(const std::vector<Direction>& dirs, const Direction& fallback) {
  double x = 0.0, y = 0.0, z = 0.0;
  for (const auto& d : dirs) {
    x += d.x();
    y += d.y();
    z += d.z();
  }
  if (std::sqrt(x * x + y * y + z * z) < 1e-12) return fallback;
  return Direction::from_vector(x, y, z);
}

/// Centered moving average of unit vectors; the window is truncated at the ends.
inline ViewingPath smooth_path(const ViewingPath& path, int window = 5) {
  if (window < 1 || window % 2 == 0) throw ConfigError("smoothing window must be odd and >= 1");
  const auto n = static_cast<long long>(path.directions.size());
  const long long half = window / 2;
  ViewingPath out{path.start_frame, {}};
  out.directions.reserve(path.directions.size());
  for (long long i = 0; i < n; ++i) {
    double x = 0.0, y = 0.0, z = 0.0;
    for (long long j = std::max(0LL, i - half); j <= std::min(n - 1, i + half); ++j) {
      const auto& d = path.directions[static_cast<std::size_t>(j)];
      x += d.x();
      y += d.y();
      z += d.z();
    }
    const auto& self = path.directions[static_cast<std::size_t>(i)];
    out.directions.push_back(std::sqrt(x * x + y * y + z * z) < 1e-12 ? self : Direction::from_vector(x, y, z));
  }
  return out;
}

}  // namespace n360
