#pragma once

// Candidate branches for one scene: salient-region directions per frame,
// merged by centroid-linkage clustering, linked across frames into viewing
// paths, smoothed, and decorated with viewports and caption embeddings.

#include <algorithm>
#include <array>
#include <cmath>
#include <iterator>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "n360/branch_points.hpp"
#include "n360/error.hpp"
#include "n360/geometry.hpp"
#include "n360/ingest.hpp"

namespace n360 {

/// Frames between two branching points. `start_point`/`end_point` are branch
/// point ids; empty means playback start / video end.
struct SceneSegment {
  int index = 0;
  std::optional<int> start_point;
  std::optional<int> end_point;
  int first_frame = 0;
  int last_frame = 0;
  double start_time = 0.0;
  double end_time = 0.0;

  int frame_count() const { return last_frame - first_frame + 1; }
};

/// First grid frame at or after time `t`.
inline int frame_at_or_after(double t, int fps = 1) {
  return static_cast<int>(std::ceil(t * fps - 1e-9));
}

/// Splits the grid at each branching point; segments tile [0, frame_count).
inline std::vector<SceneSegment> make_segments(const std::vector<BranchPoint>& points, const GridInfo& grid) {
  std::vector<SceneSegment> out;
  int first = 0;
  double start = 0.0;
  std::optional<int> start_point;
  for (std::size_t i = 0; i <= points.size(); ++i) {
    const bool last = i == points.size();
    const int next_first = last ? grid.frame_count : frame_at_or_after(points[i].time, grid.fps);
    SceneSegment s;
    s.index = static_cast<int>(i);
    s.start_point = start_point;
    s.end_point = last ? std::nullopt : std::optional<int>(points[i].id);
    s.first_frame = first;
    s.last_frame = next_first - 1;
    s.start_time = start;
    s.end_time = last ? grid.duration : points[i].time;
    if (s.last_frame < s.first_frame) throw ContractError("scene " + std::to_string(i) + " has no frames");
    out.push_back(s);
    if (!last) {
      first = next_first;
      start = points[i].time;
      start_point = points[i].id;
    }
  }
  return out;
}

struct ExtractionOptions {
  double region_threshold = 0.5;    // fraction of the frame maximum
  double min_area_fraction = 0.001;  // of all pixels
};

/// Saliency-weighted centroids of salient regions. Regions are 4-connected
/// components of pixels at or above `region_threshold * max`, with the left
/// and right image edges adjacent.
inline std::vector<Direction> extract_viewing_directions(const SaliencyFrame& f, const ExtractionOptions& opt = {}) {
  std::vector<Direction> out;
  const double mx = f.max_value();
  if (!(mx > 0.0)) return out;
  const double cut = opt.region_threshold * mx;
  const std::size_t w = f.width, h = f.height;
  const double min_area = opt.min_area_fraction * static_cast<double>(w * h);
  std::vector<char> seen(w * h, 0);
  std::vector<std::size_t> stack;
  std::vector<std::size_t> comp;
  for (std::size_t start = 0; start < w * h; ++start) {
    if (seen[start] || !(f.values[start] >= cut && f.values[start] > 0.0)) continue;
    comp.clear();
    stack.assign(1, start);
    seen[start] = 1;
    while (!stack.empty()) {
      const std::size_t p = stack.back();
      stack.pop_back();
      comp.push_back(p);
      const std::size_t x = p % w, y = p / w;
      const std::size_t nbrs[4] = {y * w + (x + 1) % w, y * w + (x + w - 1) % w, y > 0 ? p - w : p, y + 1 < h ? p + w : p};
      for (std::size_t q : nbrs) {
        if (q != p && !seen[q] && f.values[q] >= cut && f.values[q] > 0.0) {
          seen[q] = 1;
          stack.push_back(q);
        }
      }
    }
    if (static_cast<double>(comp.size()) < min_area) continue;
    bool touches_left = false, touches_right = false;
    for (std::size_t p : comp) {
      touches_left |= p % w == 0;
      touches_right |= p % w == w - 1;
    }
    const bool wraps = touches_left && touches_right;
    double sw = 0.0, sx = 0.0, sy = 0.0;
    for (std::size_t p : comp) {
      double x = static_cast<double>(p % w) + 0.5;
      if (wraps && x < static_cast<double>(w) / 2.0) x += static_cast<double>(w);
      const double y = static_cast<double>(p / w) + 0.5;
      const double v = f.values[p];
      sw += v;
      sx += v * x;
      sy += v * y;
    }
    const double cx = std::fmod(sx / sw, static_cast<double>(w));
    out.push_back(equirect_to_direction(cx, sy / sw, w, h));
  }
  return out;
}

inline constexpr double kDefaultMergeAngle = 30.0;

/// Agglomerative clustering with centroid linkage: the closest pair of
/// clusters is merged while their centroids are at most `merge_angle` apart.
/// Centroids are renormalized means of member vectors. Output follows the
/// order of each cluster's first member.
inline std::vector<Direction> cluster_directions(const std::vector<Direction>& dirs,
                                                 double merge_angle = kDefaultMergeAngle) {
  struct Cluster {
    std::array<double, 3> sum;
    Direction first;
    Direction centroid() const {
      const double n = std::sqrt(sum[0] * sum[0] + sum[1] * sum[1] + sum[2] * sum[2]);
      return n < 1e-12 ? first : Direction::from_vector(sum);
    }
  };
  std::vector<Cluster> clusters;
  clusters.reserve(dirs.size());
  for (const auto& d : dirs) clusters.push_back({d.vec(), d});
  while (clusters.size() > 1) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t bi = 0, bj = 0;
    for (std::size_t i = 0; i < clusters.size(); ++i) {
      const Direction ci = clusters[i].centroid();
      for (std::size_t j = i + 1; j < clusters.size(); ++j) {
        const double d = angular_distance(ci, clusters[j].centroid());
        if (d < best) {
          best = d;
          bi = i;
          bj = j;
        }
      }
    }
    if (best > merge_angle) break;
    for (int k = 0; k < 3; ++k) clusters[bi].sum[k] += clusters[bj].sum[k];
    clusters.erase(clusters.begin() + static_cast<std::ptrdiff_t>(bj));
  }
  std::vector<Direction> out;
  out.reserve(clusters.size());
  for (const auto& c : clusters) out.push_back(c.centroid());
  return out;
}

struct LinkedPaths {
  std::vector<ViewingPath> paths;
  std::vector<int> seed_indices;  // seed direction index of each surviving path
  int seed_frame = 0;             // absolute frame index
  bool degenerate = false;
};

namespace detail {

inline std::size_t nearest_index(const std::vector<Direction>& options, const Direction& from) {
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < options.size(); ++i) {
    const double d = angular_distance(from, options[i]);
    if (d < best_d) {
      best_d = d;
      best = i;
    }
  }
  return best;
}

}  // namespace detail

inline constexpr double kDuplicatePathAngle = 1.0;

/// Links per-frame directions into viewing paths spanning the segment.
///
/// One path is seeded per direction at the frame holding the most directions
/// (earliest on ties); each path then walks forward and backward, stepping to
/// the nearest direction of the adjacent frame, or holding its direction
/// where a frame has none. Paths that stay within 1 degree of an earlier
/// path on every frame are dropped.
inline LinkedPaths link_paths(const std::vector<std::vector<Direction>>& per_frame_dirs, const SceneSegment& segment) {
  const auto n = static_cast<std::size_t>(segment.frame_count());
  if (per_frame_dirs.size() != n) throw ContractError("per-frame directions do not cover the segment");
  LinkedPaths out;
  std::size_t seed = 0;
  for (std::size_t f = 1; f < n; ++f) {
    if (per_frame_dirs[f].size() > per_frame_dirs[seed].size()) seed = f;
  }
  out.seed_frame = segment.first_frame + static_cast<int>(seed);
  if (per_frame_dirs[seed].empty()) {
    out.degenerate = true;
    out.paths.push_back({segment.first_frame, std::vector<Direction>(n, dir_from_angles(0.0, 0.0))});
    out.seed_indices.push_back(0);
    return out;
  }
  for (std::size_t s = 0; s < per_frame_dirs[seed].size(); ++s) {
    std::vector<Direction> track(n);
    track[seed] = per_frame_dirs[seed][s];
    for (std::size_t f = seed + 1; f < n; ++f) {
      const auto& opts = per_frame_dirs[f];
      track[f] = opts.empty() ? track[f - 1] : opts[detail::nearest_index(opts, track[f - 1])];
    }
    for (std::size_t f = seed; f-- > 0;) {
      const auto& opts = per_frame_dirs[f];
      track[f] = opts.empty() ? track[f + 1] : opts[detail::nearest_index(opts, track[f + 1])];
    }
    const bool duplicate = std::any_of(out.paths.begin(), out.paths.end(), [&](const ViewingPath& kept) {
      for (std::size_t f = 0; f < n; ++f) {
        if (angular_distance(kept.directions[f], track[f]) >= kDuplicatePathAngle) return false;
      }
      return true;
    });
    if (duplicate) continue;
    out.paths.push_back({segment.first_frame, std::move(track)});
    out.seed_indices.push_back(static_cast<int>(s));
  }
  return out;
}

struct CandidateBranch {
  ViewingPath path;  // smoothed
  std::vector<Viewport> viewport_track;
  std::vector<std::optional<std::string>> captions;
  std::vector<std::vector<double>> embeddings;  // empty inner vector: none available
  int seed_index = 0;
  bool degenerate = false;

  bool has_embeddings() const {
    return !embeddings.empty() &&
           std::all_of(embeddings.begin(), embeddings.end(), [](const auto& e) { return !e.empty(); });
  }
};

struct CandidateOptions {
  ExtractionOptions extraction;
  double merge_angle = kDefaultMergeAngle;
  int smoothing_window = 5;
  double h_fov = Viewport::kDefaultHFov;
  double v_fov = Viewport::kDefaultVFov;
};

/// Caption-embedding lookup by frame and direction.
class EmbeddingIndex {
 public:
  explicit EmbeddingIndex(const std::vector<EmbeddingEntry>& entries) : entries_(&entries) {
    for (std::size_t i = 0; i < entries.size(); ++i) by_frame_[entries[i].frame].push_back(i);
  }

  /// Entry nearest to `d` at `frame`; frames without entries fall back to the
  /// closest frame that has some (earlier frame on ties).
  const EmbeddingEntry* nearest(int frame, const Direction& d) const {
    if (by_frame_.empty()) return nullptr;
    auto it = by_frame_.find(frame);
    if (it == by_frame_.end()) {
      auto after = by_frame_.lower_bound(frame);
      if (after == by_frame_.end()) {
        it = std::prev(after);
      } else if (after == by_frame_.begin()) {
        it = after;
      } else {
        auto before = std::prev(after);
        it = (frame - before->first) <= (after->first - frame) ? before : after;
      }
    }
    const EmbeddingEntry* best = nullptr;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t i : it->second) {
      const double dist = angular_distance((*entries_)[i].direction, d);
      if (dist < best_d) {
        best_d = dist;
        best = &(*entries_)[i];
      }
    }
    return best;
  }

 private:
  const std::vector<EmbeddingEntry>* entries_;
  std::map<int, std::vector<std::size_t>> by_frame_;
};

inline std::vector<CandidateBranch> build_candidates(const SceneSegment& segment, const ProjectInputs& inputs,
                                                     const CandidateOptions& opt = {}) {
  Viewport{Direction{}, opt.h_fov, opt.v_fov}.check();
  if (segment.first_frame < 0 || segment.last_frame >= static_cast<int>(inputs.saliency.size())) {
    throw ContractError("segment outside the saliency grid");
  }
  std::vector<std::vector<Direction>> per_frame;
  per_frame.reserve(static_cast<std::size_t>(segment.frame_count()));
  for (int f = segment.first_frame; f <= segment.last_frame; ++f) {
    per_frame.push_back(cluster_directions(
        extract_viewing_directions(inputs.saliency[static_cast<std::size_t>(f)], opt.extraction), opt.merge_angle));
  }
  const LinkedPaths linked = link_paths(per_frame, segment);
  const EmbeddingIndex index(inputs.embeddings);

  std::vector<CandidateBranch> out;
  for (std::size_t i = 0; i < linked.paths.size(); ++i) {
    CandidateBranch c;
    c.path = smooth_path(linked.paths[i], opt.smoothing_window);
    c.seed_index = linked.seed_indices[i];
    c.degenerate = linked.degenerate;
    for (int f = segment.first_frame; f <= segment.last_frame; ++f) {
      const Direction& d = c.path.at_frame(f);
      c.viewport_track.push_back({d, opt.h_fov, opt.v_fov});
      const EmbeddingEntry* e = index.nearest(f, d);
      c.captions.push_back(e != nullptr && !e->caption.empty() ? std::optional<std::string>(e->caption)
                                                              : std::nullopt);
      c.embeddings.push_back(e != nullptr ? e->embedding : std::vector<double>{});
    }
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace n360
