#pragma once

// Navigation cues and provider-backed narration/title filling for a graph.

#include <cstdlib>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "n360/error.hpp"
#include "n360/graph.hpp"
#include "n360/io.hpp"
#include "n360/narration.hpp"

namespace n360 {

/// Rebuilds the cue table: one cue per (scene, branch), scene-major order.
inline std::vector<NavigationCue> plan_cues(const BranchGraph& g) {
  std::vector<NavigationCue> cues;
  const int scene_count = static_cast<int>(g.scenes.size());
  for (int si = 0; si < scene_count; ++si) {
    const auto& s = g.scenes[static_cast<std::size_t>(si)];
    const int branch_count = static_cast<int>(s.branches.size());
    for (int bi = 0; bi < branch_count; ++bi) {
      NavigationCue c;
      c.scene_index = si + 1;
      c.scene_count = scene_count;
      c.branch_index = bi + 1;
      c.branch_count = branch_count;
      c.scene_title = s.title;
      c.branch_title = s.branches[static_cast<std::size_t>(bi)].title;
      if (si > 0) c.previous_scene_title = g.scenes[static_cast<std::size_t>(si - 1)].title;
      cues.push_back(std::move(c));
    }
  }
  return cues;
}

enum class RequestKind { narration, branch_title, scene_title };

inline std::string_view to_string(RequestKind k) {
  switch (k) {
    case RequestKind::narration: return "narration";
    case RequestKind::branch_title: return "branch_title";
    case RequestKind::scene_title: return "scene_title";
  }
  return "narration";
}

inline RequestKind request_kind_from_string(std::string_view s) {
  if (s == "narration") return RequestKind::narration;
  if (s == "branch_title") return RequestKind::branch_title;
  if (s == "scene_title") return RequestKind::scene_title;
  throw ContractError("unknown request kind '" + std::string(s) + "'");
}

struct DescriptionRequest {
  RequestKind kind = RequestKind::narration;
  int scene_index = 0;   // 0-based
  int branch_index = 0;  // 0-based; unused for scene titles
  std::vector<std::string> captions;
  std::vector<std::string> preceding_narrations;  // oldest first
  std::vector<std::string> directives;
  int word_budget = 0;
};

inline nlohmann::json request_to_json(const DescriptionRequest& r) {
  return {{"kind", std::string(to_string(r.kind))},
          {"scene_index", r.scene_index},
          {"branch_index", r.branch_index},
          {"captions", r.captions},
          {"preceding_narrations", r.preceding_narrations},
          {"directives", r.directives},
          {"word_budget", r.word_budget}};
}

inline DescriptionRequest request_from_json(const nlohmann::json& j) {
  DescriptionRequest r;
  r.kind = request_kind_from_string(j.value("kind", std::string("narration")));
  r.scene_index = j.value("scene_index", 0);
  r.branch_index = j.value("branch_index", 0);
  j.at("captions").get_to(r.captions);
  j.at("preceding_narrations").get_to(r.preceding_narrations);
  j.at("directives").get_to(r.directives);
  j.at("word_budget").get_to(r.word_budget);
  return r;
}

/// Source of narration and title text. `describe` throws ProviderError on failure.
class DescriptionProvider {
 public:
  virtual ~DescriptionProvider() = default;
  virtual std::string describe(const DescriptionRequest& request) = 0;
};

/// Deterministic template text built from the request alone, within budget.
class StubProvider final : public DescriptionProvider {
 public:
  std::string describe(const DescriptionRequest& r) override {
    switch (r.kind) {
      case RequestKind::scene_title:
        return "Scene " + std::to_string(r.scene_index + 1);
      case RequestKind::branch_title:
        return r.captions.empty() ? "Branch " + std::to_string(r.branch_index + 1) : capitalized(r.captions.front());
      case RequestKind::narration: {
        std::vector<std::string> unique;
        for (const auto& c : r.captions) {
          if (unique.empty() || unique.back() != c) unique.push_back(c);
        }
        std::string text = "You look around the scene.";
        if (!unique.empty()) {
          text = "You look toward " + unique.front();
          for (std::size_t i = 1; i < unique.size(); ++i) text += ", then " + unique[i];
          text += ".";
        }
        return trim_to_budget(text, r.word_budget).text;
      }
    }
    return {};
  }

 private:
  static std::string capitalized(std::string s) {
    if (!s.empty() && s.front() >= 'a' && s.front() <= 'z') s.front() = static_cast<char>(s.front() - 'a' + 'A');
    return s;
  }
};

/// Pre-authored texts:
///   {"scenes": [{"title": "...", "branches": [{"title": "...", "narration": "..."}]}]}
/// Missing entries raise ProviderError so the caller falls back to placeholders.
class FileProvider final : public DescriptionProvider {
 public:
  explicit FileProvider(nlohmann::json doc) : doc_(std::move(doc)) {}

  static FileProvider from_file(const std::filesystem::path& path) {
    try {
      return FileProvider(nlohmann::json::parse(io::read_file(path)));
    } catch (const std::exception& e) {
      throw ProviderError("cannot read provider file " + path.string() + ": " + e.what());
    }
  }

  std::string describe(const DescriptionRequest& r) override {
    try {
      const auto& scene = doc_.at("scenes").at(static_cast<std::size_t>(r.scene_index));
      if (r.kind == RequestKind::scene_title) return scene.at("title").get<std::string>();
      const auto& branch = scene.at("branches").at(static_cast<std::size_t>(r.branch_index));
      return branch.at(r.kind == RequestKind::branch_title ? "title" : "narration").get<std::string>();
    } catch (const nlohmann::json::exception&) {
      throw ProviderError("no pre-authored " + std::string(to_string(r.kind)) + " for scene " +
                          std::to_string(r.scene_index) + " branch " + std::to_string(r.branch_index));
    }
  }

 private:
  nlohmann::json doc_;
};

struct FillReport {
  std::vector<std::string> warnings;
  int overruns = 0;
  int provider_failures = 0;
};

struct FillOptions {
  std::vector<std::string> directives;  // guideline directives, forwarded in order
  int title_word_budget = 8;
};

inline const std::vector<std::string>& narration_directives() {
  static const std::vector<std::string> d = {
      "Continue from the earlier narration so the story stays coherent.",
      "Address the viewer as \"you\".",
  };
  return d;
}

/// Asks `provider` for every branch narration, branch title and scene title,
/// trims narrations to their slot budget, and rebuilds the cue table.
/// Provider failures leave placeholders and a warning; they never throw.
/// Earlier scenes contribute the narration of their default branch as context.
inline FillReport fill_descriptions(BranchGraph& g, DescriptionProvider& provider, const FillOptions& opt = {}) {
  FillReport report;
  const auto ask = [&](const DescriptionRequest& req) -> std::optional<std::string> {
    try {
      return provider.describe(req);
    } catch (const std::exception& e) {
      ++report.provider_failures;
      report.warnings.push_back("provider failed for " + std::string(to_string(req.kind)) + " (scene " +
                                std::to_string(req.scene_index + 1) + ", branch " +
                                std::to_string(req.branch_index + 1) + "): " + e.what());
      return std::nullopt;
    }
  };
  const auto with_directives = [&](std::vector<std::string> extra) {
    std::vector<std::string> d = opt.directives;
    d.insert(d.end(), extra.begin(), extra.end());
    return d;
  };

  std::vector<std::string> history;
  for (std::size_t si = 0; si < g.scenes.size(); ++si) {
    auto& scene = g.scenes[si];
    std::vector<std::string> scene_narrations;
    for (std::size_t bi = 0; bi < scene.branches.size(); ++bi) {
      auto& b = scene.branches[bi];
      DescriptionRequest req;
      req.kind = RequestKind::narration;
      req.scene_index = static_cast<int>(si);
      req.branch_index = static_cast<int>(bi);
      for (const auto& c : b.captions) req.captions.push_back(c.text);
      req.preceding_narrations = history;
      req.directives = with_directives(narration_directives());
      req.word_budget = b.narration.word_budget;
      b.narration.overrun = false;
      if (auto text = ask(req)) {
        auto trimmed = trim_to_budget(*text, b.narration.word_budget);
        if (trimmed.trimmed) {
          ++report.overruns;
          b.narration.overrun = true;
          report.warnings.push_back("narration for scene " + std::to_string(si + 1) + " branch " +
                                    std::to_string(bi + 1) + " trimmed to " +
                                    std::to_string(b.narration.word_budget) + " words");
        }
        b.narration.text = trimmed.text;
      } else {
        b.narration.text = std::string{};
      }
      scene_narrations.push_back(*b.narration.text);
    }
    for (std::size_t bi = 0; bi < scene.branches.size(); ++bi) {
      auto& b = scene.branches[bi];
      DescriptionRequest req;
      req.kind = RequestKind::branch_title;
      req.scene_index = static_cast<int>(si);
      req.branch_index = static_cast<int>(bi);
      for (const auto& c : b.captions) req.captions.push_back(c.text);
      req.preceding_narrations = {scene_narrations[bi]};
      req.directives = with_directives({"Give this branch a short title."});
      req.word_budget = opt.title_word_budget;
      const auto text = ask(req);
      b.title = text && !text->empty() ? trim_to_budget(*text, opt.title_word_budget).text
                                       : "Branch " + std::to_string(bi + 1);
    }
    DescriptionRequest req;
    req.kind = RequestKind::scene_title;
    req.scene_index = static_cast<int>(si);
    for (const auto& b : scene.branches) {
      if (!b.captions.empty()) req.captions.push_back(b.captions.front().text);
    }
    req.preceding_narrations = scene_narrations;
    req.directives = with_directives({"Give the scene a short title that covers all of its branches."});
    req.word_budget = opt.title_word_budget;
    const auto text = ask(req);
    scene.title = text && !text->empty() ? trim_to_budget(*text, opt.title_word_budget).text
                                         : "Scene " + std::to_string(si + 1);
    if (!scene.branches.empty()) {
      const auto& chosen = scene.branches[static_cast<std::size_t>(
          std::clamp(scene.default_branch, 0, static_cast<int>(scene.branches.size()) - 1))];
      if (chosen.narration.text && !chosen.narration.text->empty()) history.push_back(*chosen.narration.text);
    }
  }
  g.cues = plan_cues(g);
  return report;
}

}  // namespace n360
