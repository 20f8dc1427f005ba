#pragma once

// Spatial, semantic and social diversity of candidate branches, and greedy
// selection of the branch list shown at a branching point.

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "n360/branch_generator.hpp"
#include "n360/error.hpp"
#include "n360/geometry.hpp"
#include "n360/ingest.hpp"

namespace n360 {

struct DiversityWeights {
  double spatial = 1.0 / 3.0;
  double semantic = 1.0 / 3.0;
  double social = 1.0 / 3.0;

  /// Scales non-negative weights to sum to one.
  static DiversityWeights normalized(double spatial, double semantic, double social) {
    if (!(spatial >= 0.0 && semantic >= 0.0 && social >= 0.0)) throw ConfigError("diversity weights must be >= 0");
    const double sum = spatial + semantic + social;
    if (!(sum > 0.0) || !std::isfinite(sum)) throw ConfigError("diversity weights must have a positive sum");
    return {spatial / sum, semantic / sum, social / sum};
  }

  void check() const {
    if (!(spatial >= 0.0 && semantic >= 0.0 && social >= 0.0)) throw ConfigError("diversity weights must be >= 0");
    if (std::abs(spatial + semantic + social - 1.0) > 1e-9) throw ConfigError("diversity weights must sum to 1");
  }
};

struct DiversityBreakdown {
  double d_spa = 0.0;
  double d_sem = 0.0;
  double d_soc = 0.0;
  double overall = 0.0;
};

namespace detail {

inline void require_same_span(const CandidateBranch& a, const CandidateBranch& b) {
  if (a.path.start_frame != b.path.start_frame || a.path.size() != b.path.size() || a.path.size() == 0) {
    throw ContractError("branches cover different frame spans");
  }
}

inline double cosine(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size() || a.empty()) throw ContractError("embedding dimensions differ");
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (!(na > 0.0 && nb > 0.0)) throw ContractError("zero embedding vector");
  return std::clamp(dot / std::sqrt(na * nb), -1.0, 1.0);
}

}  // namespace detail

/// Frame mean of 0.5 * (1 - cos) between the two path directions; in [0, 1].
inline double spatial_diversity(const CandidateBranch& a, const CandidateBranch& b) {
  detail::require_same_span(a, b);
  double sum = 0.0;
  for (std::size_t f = 0; f < a.path.size(); ++f) {
    sum += 0.5 * (1.0 - std::clamp(a.path.directions[f].dot(b.path.directions[f]), -1.0, 1.0));
  }
  return sum / static_cast<double>(a.path.size());
}

/// Frame mean of 1 - cosine similarity of caption embeddings, clamped per frame to [0, 1].
inline double semantic_diversity(const CandidateBranch& a, const CandidateBranch& b) {
  detail::require_same_span(a, b);
  if (!a.has_embeddings() || !b.has_embeddings() || a.embeddings.size() != a.path.size() ||
      b.embeddings.size() != b.path.size()) {
    throw ContractError("semantic diversity needs an embedding on every frame");
  }
  double sum = 0.0;
  for (std::size_t f = 0; f < a.embeddings.size(); ++f) {
    sum += std::clamp(1.0 - detail::cosine(a.embeddings[f], b.embeddings[f]), 0.0, 1.0);
  }
  return sum / static_cast<double>(a.embeddings.size());
}

/// Per-pixel direction and area weight of an equirectangular map.
class PixelSphere {
 public:
  PixelSphere(std::size_t width, std::size_t height) : width_(width), height_(height) {
    dirs_.reserve(width * height);
    weights_.reserve(width * height);
    for (std::size_t y = 0; y < height; ++y) {
      for (std::size_t x = 0; x < width; ++x) {
        const Direction d = pixel_to_direction(x, y, width, height);
        dirs_.push_back(d);
        weights_.push_back(std::cos(deg2rad(d.pitch())));
      }
    }
  }

  std::size_t width() const { return width_; }
  std::size_t height() const { return height_; }

  /// Area-weighted saliency mass inside `vp`.
  double mass_in(const SaliencyFrame& frame, const Viewport& vp) const {
    double sum = 0.0;
    for (std::size_t i = 0; i < dirs_.size(); ++i) {
      if (frame.values[i] > 0.0 && in_viewport(dirs_[i], vp)) sum += frame.values[i] * weights_[i];
    }
    return sum;
  }

 private:
  std::size_t width_;
  std::size_t height_;
  std::vector<Direction> dirs_;
  std::vector<double> weights_;
};

inline constexpr double kSocialTieTolerance = 1e-9;  // relative to the frame's largest mass

/// Social score of each candidate: per frame, viewport saliency mass is
/// min-max normalized across candidates (0.5 for all when they tie), then
/// averaged over frames.
inline std::vector<double> social_scores(const std::vector<CandidateBranch>& candidates,
                                         const std::vector<SaliencyFrame>& saliency) {
  if (candidates.empty()) throw ContractError("social scores need at least one candidate");
  for (const auto& c : candidates) detail::require_same_span(candidates.front(), c);
  if (saliency.empty()) throw ContractError("no saliency frames");
  const PixelSphere sphere(saliency.front().width, saliency.front().height);
  const auto frames = candidates.front().path.size();
  const int start = candidates.front().path.start_frame;
  std::vector<double> scores(candidates.size(), 0.0);
  std::vector<double> raw(candidates.size());
  for (std::size_t f = 0; f < frames; ++f) {
    const auto grid_frame = static_cast<std::size_t>(start) + f;
    if (grid_frame >= saliency.size()) throw ContractError("branch extends past the saliency grid");
    const SaliencyFrame& frame = saliency[grid_frame];
    if (frame.width != sphere.width() || frame.height != sphere.height()) {
      throw ContractError("saliency frames differ in resolution");
    }
    for (std::size_t b = 0; b < candidates.size(); ++b) {
      const auto& c = candidates[b];
      const Viewport vp = f < c.viewport_track.size() ? c.viewport_track[f] : Viewport{c.path.directions[f]};
      raw[b] = sphere.mass_in(frame, vp);
    }
    const auto [lo, hi] = std::minmax_element(raw.begin(), raw.end());
    const double span = *hi - *lo;
    // mirror-image viewports differ by rounding noise; treat that as a tie
    const bool tie = !(span > kSocialTieTolerance * *hi);
    for (std::size_t b = 0; b < candidates.size(); ++b) {
      scores[b] += tie ? 0.5 : (raw[b] - *lo) / span;
    }
  }
  for (double& s : scores) s /= static_cast<double>(frames);
  return scores;
}

/// Pairwise metrics and social scores for a candidate pool, computed once and
/// shared by every subset evaluated during selection.
struct DiversityTable {
  std::vector<std::vector<double>> spatial;
  std::vector<std::vector<double>> semantic;
  std::vector<double> social;

  std::size_t size() const { return social.size(); }
};

/// With `use_semantic` false the semantic matrix is all zeros.
inline DiversityTable build_diversity_table(const std::vector<CandidateBranch>& candidates,
                                            const std::vector<SaliencyFrame>& saliency, bool use_semantic = true) {
  DiversityTable t;
  t.social = social_scores(candidates, saliency);
  const auto n = candidates.size();
  t.spatial.assign(n, std::vector<double>(n, 0.0));
  t.semantic.assign(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      t.spatial[i][j] = t.spatial[j][i] = spatial_diversity(candidates[i], candidates[j]);
      if (use_semantic) t.semantic[i][j] = t.semantic[j][i] = semantic_diversity(candidates[i], candidates[j]);
    }
  }
  return t;
}

/// Diversity of the subset `members` of the table's pool. Pairwise terms
/// average over unordered pairs (0 for a singleton); the social term averages
/// the members' scores.
inline DiversityBreakdown overall_diversity(const DiversityTable& table, std::span<const std::size_t> members,
                                            const DiversityWeights& w) {
  if (members.empty()) throw ContractError("diversity of an empty set");
  DiversityBreakdown d;
  std::size_t pairs = 0;
  for (std::size_t i = 0; i < members.size(); ++i) {
    d.d_soc += table.social.at(members[i]);
    for (std::size_t j = i + 1; j < members.size(); ++j) {
      d.d_spa += table.spatial.at(members[i]).at(members[j]);
      d.d_sem += table.semantic.at(members[i]).at(members[j]);
      ++pairs;
    }
  }
  d.d_soc /= static_cast<double>(members.size());
  if (pairs > 0) {
    d.d_spa /= static_cast<double>(pairs);
    d.d_sem /= static_cast<double>(pairs);
  }
  d.overall = w.spatial * d.d_spa + w.semantic * d.d_sem + w.social * d.d_soc;
  return d;
}

/// Diversity of a whole candidate set, social scores normalized within the set.
inline DiversityBreakdown overall_diversity(const std::vector<CandidateBranch>& set,
                                            const std::vector<SaliencyFrame>& saliency, const DiversityWeights& w) {
  const DiversityTable t = build_diversity_table(set, saliency);
  std::vector<std::size_t> all(set.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  return overall_diversity(t, all, w);
}

inline constexpr double kDefaultLambda = 0.75;
inline constexpr int kDefaultMaxOptions = 5;

struct SelectionStep {
  std::size_t candidate = 0;
  DiversityBreakdown breakdown;  // of the set including `candidate`
  double previous_overall = 0.0;  // D of the set before this step (0 for the first)
  bool accepted = false;
};

struct BranchSet {
  std::vector<std::size_t> order;  // candidate indices in selection order
  DiversityBreakdown breakdown;
  std::vector<SelectionStep> trace;
};

/// Greedy diversity maximization. Starts from the most socially salient
/// candidate, then repeatedly adds the candidate maximizing D of the grown
/// set, stopping when that D falls below `lambda` times the current D, when
/// `max_options` are chosen, or when candidates run out. Ties go to the
/// lowest candidate index.
inline BranchSet select_branches(const DiversityTable& table, const DiversityWeights& weights,
                                 double lambda = kDefaultLambda, int max_options = kDefaultMaxOptions) {
  if (table.size() == 0) throw ContractError("no candidate branches");
  if (!(lambda > 0.0 && lambda <= 1.0)) throw ConfigError("lambda must be in (0, 1]");
  if (max_options < 1) throw ConfigError("max_options must be >= 1");
  BranchSet out;
  std::size_t first = 0;
  for (std::size_t i = 1; i < table.size(); ++i) {
    if (table.social[i] > table.social[first]) first = i;
  }
  out.order.push_back(first);
  out.breakdown = overall_diversity(table, out.order, weights);
  out.trace.push_back({first, out.breakdown, 0.0, true});

  std::vector<char> used(table.size(), 0);
  used[first] = 1;
  std::vector<std::size_t> trial;
  while (out.order.size() < static_cast<std::size_t>(max_options) && out.order.size() < table.size()) {
    std::size_t best = table.size();
    DiversityBreakdown best_d;
    for (std::size_t c = 0; c < table.size(); ++c) {
      if (used[c]) continue;
      trial = out.order;
      trial.push_back(c);
      const DiversityBreakdown d = overall_diversity(table, trial, weights);
      if (best == table.size() || d.overall > best_d.overall) {
        best = c;
        best_d = d;
      }
    }
    const double previous = out.breakdown.overall;
    const bool accept = !(best_d.overall < lambda * previous);
    out.trace.push_back({best, best_d, previous, accept});
    if (!accept) break;
    used[best] = 1;
    out.order.push_back(best);
    out.breakdown = best_d;
  }
  return out;
}

}  // namespace n360
