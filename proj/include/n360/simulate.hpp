#pragma once

// Deterministic playthroughs of a compiled graph under a choice policy.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "n360/error.hpp"
#include "n360/graph.hpp"

namespace n360 {

enum class Cause { playback_start, user_choice, default_timeout, navigation_jump };

inline std::string_view to_string(Cause c) {
  switch (c) {
    case Cause::playback_start: return "playback_start";
    case Cause::user_choice: return "user_choice";
    case Cause::default_timeout: return "default_timeout";
    case Cause::navigation_jump: return "navigation_jump";
  }
  return "default_timeout";
}

inline Cause cause_from_string(std::string_view s) {
  if (s == "playback_start") return Cause::playback_start;
  if (s == "user_choice") return Cause::user_choice;
  if (s == "default_timeout") return Cause::default_timeout;
  if (s == "navigation_jump") return Cause::navigation_jump;
  throw ContractError("unknown cause '" + std::string(s) + "'");
}

struct TraceEvent {
  double time = 0.0;
  int scene = 0;   // 0-based
  int branch = 0;  // 0-based
  Cause cause = Cause::default_timeout;
  std::string cue;
  std::string recap;
};

struct TraceError {
  int point = 0;
  std::string message;
};

struct PlaythroughTrace {
  std::vector<TraceEvent> events;
  std::vector<TraceError> errors;
};

enum class Policy { default_only, script, social_argmax };

inline Policy policy_from_string(std::string_view s) {
  if (s == "default_only") return Policy::default_only;
  if (s == "script") return Policy::script;
  if (s == "social_argmax") return Policy::social_argmax;
  throw ConfigError("unknown policy '" + std::string(s) + "'");
}

/// One entry per branching point; nullopt lets the choice window time out.
using ChoiceScript = std::vector<std::optional<int>>;

/// Script from a JSON array of branch indices / nulls, or from a trace
/// document (its user choices replayed, everything else left to time out).
inline ChoiceScript parse_script(const nlohmann::json& j) {
  ChoiceScript out;
  if (j.is_object() && j.contains("events")) {
    for (const auto& e : j.at("events")) {
      const Cause c = cause_from_string(e.at("cause").get<std::string>());
      if (c == Cause::playback_start) continue;
      out.push_back(c == Cause::user_choice ? std::optional<int>(e.at("branch").get<int>()) : std::nullopt);
    }
    return out;
  }
  if (!j.is_array()) throw ConfigError("script must be an array or a trace document");
  for (const auto& e : j) {
    if (e.is_null() || (e.is_string() && e.get<std::string>() == "default")) {
      out.push_back(std::nullopt);
    } else if (e.is_number_integer()) {
      out.push_back(e.get<int>());
    } else {
      throw ConfigError("script entries must be branch indices, null or \"default\"");
    }
  }
  return out;
}

inline PlaythroughTrace simulate(const BranchGraph& g, Policy policy, const ChoiceScript& script = {}) {
  if (auto issues = validate(g); !issues.empty()) throw ValidationError(std::move(issues));
  PlaythroughTrace trace;
  const auto cue_for = [&](int scene, int branch) -> const NavigationCue& {
    for (const auto& c : g.cues) {
      if (c.scene_index == scene + 1 && c.branch_index == branch + 1) return c;
    }
    throw ContractError("graph has no cue for a scene branch");
  };
  const auto push = [&](double time, int scene, int branch, Cause cause) {
    const auto& cue = cue_for(scene, branch);
    trace.events.push_back({time, scene, branch, cause, cue.text(), cue.recap()});
  };

  push(0.0, 0, g.scenes.front().default_branch, Cause::playback_start);
  for (std::size_t p = 0; p < g.branch_points.size(); ++p) {
    const auto& scene = g.scenes[p + 1];
    const int scene_index = static_cast<int>(p) + 1;
    const int count = static_cast<int>(scene.branches.size());
    int branch = scene.default_branch;
    Cause cause = Cause::default_timeout;
    switch (policy) {
      case Policy::default_only:
        break;
      case Policy::social_argmax: {
        int best = 0;
        for (int b = 1; b < count; ++b) {
          if (scene.branches[static_cast<std::size_t>(b)].social > scene.branches[static_cast<std::size_t>(best)].social) {
            best = b;
          }
        }
        branch = best;
        cause = Cause::user_choice;
        break;
      }
      case Policy::script:
        if (p < script.size() && script[p]) {
          if (*script[p] >= 0 && *script[p] < count) {
            branch = *script[p];
            cause = Cause::user_choice;
          } else {
            trace.errors.push_back({static_cast<int>(p), "branch " + std::to_string(*script[p]) +
                                                             " does not exist (scene has " + std::to_string(count) +
                                                             "); took the default"});
          }
        }
        break;
    }
    push(g.branch_points[p].time, scene_index, branch, cause);
  }
  return trace;
}

inline nlohmann::json trace_to_json(const PlaythroughTrace& t) {
  nlohmann::json events = nlohmann::json::array();
  for (const auto& e : t.events) {
    events.push_back({{"time", e.time},
                      {"scene", e.scene},
                      {"branch", e.branch},
                      {"cause", std::string(to_string(e.cause))},
                      {"cue", e.cue},
                      {"recap", e.recap}});
  }
  nlohmann::json errors = nlohmann::json::array();
  for (const auto& e : t.errors) errors.push_back({{"point", e.point}, {"message", e.message}});
  return {{"events", std::move(events)}, {"errors", std::move(errors)}};
}

inline std::string emit_trace(const PlaythroughTrace& t) { return canonical_dump(trace_to_json(t)); }

}  // namespace n360
