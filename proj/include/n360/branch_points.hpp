#pragma once

// Branching-point placement: scene cuts moved out of speech and loud music,
// then thinned so consecutive points are more than `min_interval` apart.

#include <algorithm>
#include <string_view>
#include <vector>

#include "n360/error.hpp"
#include "n360/ingest.hpp"

namespace n360 {

enum class IntervalKind { speech, loud_music };

struct TimeInterval {
  double start = 0.0;
  double end = 0.0;
  IntervalKind kind = IntervalKind::speech;

  double duration() const { return end - start; }
  bool strictly_contains(double t) const { return start < t && t < end; }
  friend bool operator==(const TimeInterval&, const TimeInterval&) = default;
};

enum class PointSource { scene_cut, merged, shifted };

struct BranchPoint {
  int id = 0;
  double time = 0.0;
  PointSource source = PointSource::scene_cut;
  friend bool operator==(const BranchPoint&, const BranchPoint&) = default;
};

inline constexpr double kDefaultRmsThreshold = 0.8;
inline constexpr double kDefaultMinInterval = 30.0;

inline std::string_view to_string(IntervalKind k) { return k == IntervalKind::speech ? "speech" : "loud_music"; }

inline std::string_view to_string(PointSource s) {
  switch (s) {
    case PointSource::scene_cut: return "scene_cut";
    case PointSource::merged: return "merged";
    case PointSource::shifted: return "shifted";
  }
  return "scene_cut";
}

inline PointSource point_source_from_string(std::string_view s) {
  if (s == "scene_cut") return PointSource::scene_cut;
  if (s == "merged") return PointSource::merged;
  if (s == "shifted") return PointSource::shifted;
  throw ContractError("unknown branch point source '" + std::string(s) + "'");
}

namespace detail {

inline void coalesce(std::vector<TimeInterval>& v) {
  std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.start < b.start; });
  std::vector<TimeInterval> out;
  for (const auto& iv : v) {
    if (!out.empty() && iv.start <= out.back().end) {
      out.back().end = std::max(out.back().end, iv.end);
    } else {
      out.push_back(iv);
    }
  }
  v = std::move(out);
}

}  // namespace detail

/// Speech segments plus maximal runs of loudness above `rms_threshold`.
/// Intervals of the same kind are coalesced; the result is sorted by start.
inline std::vector<TimeInterval> exclusion_zones(const std::vector<TranscriptSegment>& transcript,
                                                 const LoudnessSeries& loudness,
                                                 double rms_threshold = kDefaultRmsThreshold) {
  std::vector<TimeInterval> speech;
  for (const auto& s : transcript) {
    if (s.start < s.end) speech.push_back({s.start, s.end, IntervalKind::speech});
  }
  detail::coalesce(speech);

  std::vector<TimeInterval> loud;
  const double period = 1.0 / loudness.sample_rate;
  for (std::size_t k = 0; k < loudness.values.size();) {
    if (loudness.values[k] > rms_threshold) {
      std::size_t j = k;
      while (j + 1 < loudness.values.size() && loudness.values[j + 1] > rms_threshold) ++j;
      loud.push_back({static_cast<double>(k) * period, static_cast<double>(j + 1) * period, IntervalKind::loud_music});
      k = j + 1;
    } else {
      ++k;
    }
  }
  detail::coalesce(loud);

  std::vector<TimeInterval> all = std::move(speech);
  all.insert(all.end(), loud.begin(), loud.end());
  std::stable_sort(all.begin(), all.end(), [](const auto& a, const auto& b) { return a.start < b.start; });
  return all;
}

/// Final ordered branching points.
///
/// Candidates inside a zone move to that zone's end, repeatedly while the new
/// time falls inside another zone. The sweep then keeps a candidate only if
/// it is more than `min_interval` after the last kept one, so the earlier of
/// two close candidates survives. Playback start (t <= 0) is never a point,
/// and when `duration` is given, points at or past it are dropped.
inline std::vector<BranchPoint> detect_branching_points(const std::vector<double>& scene_boundaries,
                                                        const std::vector<TimeInterval>& zones,
                                                        double min_interval = kDefaultMinInterval,
                                                        double duration = -1.0) {
  if (!std::is_sorted(scene_boundaries.begin(), scene_boundaries.end())) {
    throw ContractError("scene boundaries must be sorted ascending");
  }
  struct Candidate {
    double time;
    bool shifted;
  };
  std::vector<Candidate> cands;
  for (double t : scene_boundaries) {
    bool shifted = false;
    for (bool moved = true; moved;) {
      moved = false;
      for (const auto& z : zones) {
        if (z.strictly_contains(t)) {
          t = z.end;
          shifted = moved = true;
        }
      }
    }
    if (t <= 0.0) continue;
    if (duration >= 0.0 && t >= duration) continue;
    cands.push_back({t, shifted});
  }
  std::stable_sort(cands.begin(), cands.end(), [](const auto& a, const auto& b) { return a.time < b.time; });

  std::vector<BranchPoint> out;
  for (const auto& c : cands) {
    if (!out.empty() && c.time - out.back().time <= min_interval) {
      if (out.back().source == PointSource::scene_cut) out.back().source = PointSource::merged;
      continue;
    }
    out.push_back({static_cast<int>(out.size()), c.time, c.shifted ? PointSource::shifted : PointSource::scene_cut});
  }
  return out;
}

}  // namespace n360
