#pragma once

// Narration slots, word budgets and navigation cue text.

#include <cmath>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "n360/error.hpp"
#include "n360/ingest.hpp"

namespace n360 {

inline constexpr double kDefaultWordsPerSecond = 3.0;

/// Where a branch narration is spoken and how many words fit.
struct NarrationSlot {
  double start = 0.0;
  double end = 0.0;
  int word_budget = 0;
  std::optional<std::string> text;
  bool unplaceable = false;  // no speech-free time in the branch
  bool overrun = false;      // provider text was trimmed to the budget
  // playback speech-rate range for the renderer; narration is not resynthesized here
  double rate_min = 1.1;
  double rate_max = 1.2;

  double duration() const { return end - start; }
};

inline int word_budget_for(double seconds, double words_per_second) {
  return static_cast<int>(std::floor(seconds * words_per_second + 1e-9));
}

/// Longest speech-free sub-interval of [start, end]; earliest wins ties.
inline NarrationSlot narration_slot(double start, double end, const std::vector<TranscriptSegment>& transcript,
                                    double words_per_second = kDefaultWordsPerSecond) {
  if (!(start <= end)) throw ContractError("branch interval is reversed");
  if (!(words_per_second > 0.0)) throw ConfigError("words_per_second must be positive");
  double best_start = start, best_len = -1.0;
  double cursor = start;
  auto consider = [&](double a, double b) {
    if (b - a > best_len) {
      best_len = b - a;
      best_start = a;
    }
  };
  for (const auto& s : transcript) {
    if (s.end <= start || s.start >= end) continue;
    if (s.start > cursor) consider(cursor, s.start);
    cursor = std::max(cursor, s.end);
  }
  if (cursor < end) consider(cursor, end);

  NarrationSlot slot;
  if (best_len <= 0.0) {
    slot.start = slot.end = std::min(cursor, end);
    slot.unplaceable = true;
    return slot;
  }
  slot.start = best_start;
  slot.end = best_start + best_len;
  slot.word_budget = word_budget_for(best_len, words_per_second);
  return slot;
}

inline std::vector<std::string> split_words(const std::string& text) {
  std::istringstream in(text);
  std::vector<std::string> words;
  for (std::string w; in >> w;) words.push_back(std::move(w));
  return words;
}

inline int word_count(const std::string& text) { return static_cast<int>(split_words(text).size()); }

struct TrimResult {
  std::string text;
  bool trimmed = false;
};

/// Keeps the first `budget` words; text within budget is returned verbatim.
inline TrimResult trim_to_budget(const std::string& text, int budget) {
  auto words = split_words(text);
  if (static_cast<int>(words.size()) <= budget) return {text, false};
  std::string out;
  for (int i = 0; i < budget; ++i) {
    if (i) out += ' ';
    out += words[static_cast<std::size_t>(i)];
  }
  return {out, true};
}

/// Numbered location of one (scene, branch) pair; indices are 1-based.
struct NavigationCue {
  int scene_index = 1;
  int scene_count = 1;
  int branch_index = 1;
  int branch_count = 1;
  std::string scene_title;
  std::string branch_title;
  std::optional<std::string> previous_scene_title;  // empty for the first scene

  /// e.g. "[Scene 3 of 7] In the subway; [Branch 3 of 3] Search for Exits"
  std::string text() const {
    std::ostringstream s;
    s << "[Scene " << scene_index << " of " << scene_count << "] " << scene_title << "; [Branch " << branch_index
      << " of " << branch_count << "] " << branch_title;
    return s.str();
  }

  /// e.g. "[Previously] Ground Explosion; [Now] In the subway"; empty for the first scene.
  std::string recap() const {
    if (!previous_scene_title) return {};
    return "[Previously] " + *previous_scene_title + "; [Now] " + scene_title;
  }
};

}  // namespace n360
