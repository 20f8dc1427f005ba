#pragma once

// End-to-end compilation of project inputs into a BranchGraph.

#include <algorithm>
#include <filesystem>
#include <future>
#include <memory>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "n360/branch_generator.hpp"
#include "n360/branch_points.hpp"
#include "n360/diversity.hpp"
#include "n360/error.hpp"
#include "n360/graph.hpp"
#include "n360/ingest.hpp"
#include "n360/planner.hpp"

namespace n360 {

enum class ProviderKind { stub, file, remote };

struct CompileConfig {
  double rms_threshold = kDefaultRmsThreshold;
  double min_interval_s = kDefaultMinInterval;
  double merge_angle_deg = kDefaultMergeAngle;
  int smoothing_window = 5;
  double h_fov = Viewport::kDefaultHFov;
  double v_fov = Viewport::kDefaultVFov;
  double region_threshold = 0.5;
  double min_area_fraction = 0.001;
  double scene_threshold = kDefaultSceneThreshold;
  DiversityWeights weights;
  double lambda = kDefaultLambda;
  int max_options = kDefaultMaxOptions;
  double words_per_second = kDefaultWordsPerSecond;
  ProviderKind provider = ProviderKind::stub;
  std::string provider_file;    // for ProviderKind::file
  std::string directives_file;  // optional guideline list, one per line

  void check() const {
    const auto need = [](bool ok, const char* msg) {
      if (!ok) throw ConfigError(msg);
    };
    need(rms_threshold > 0.0 && rms_threshold <= 1.0, "rms_threshold must be in (0, 1]");
    need(min_interval_s >= 0.0, "min_interval_s must be >= 0");
    need(merge_angle_deg >= 0.0 && merge_angle_deg <= 180.0, "merge_angle_deg must be in [0, 180]");
    need(smoothing_window >= 1 && smoothing_window % 2 == 1, "smoothing_window must be odd and >= 1");
    need(h_fov > 0.0 && h_fov <= 360.0, "h_fov must be in (0, 360]");
    need(v_fov > 0.0 && v_fov <= 180.0, "v_fov must be in (0, 180]");
    need(region_threshold > 0.0 && region_threshold <= 1.0, "region_threshold must be in (0, 1]");
    need(min_area_fraction >= 0.0 && min_area_fraction < 1.0, "min_area_fraction must be in [0, 1)");
    need(scene_threshold > 0.0 && scene_threshold <= 1.0, "scene_threshold must be in (0, 1]");
    weights.check();
    need(lambda > 0.0 && lambda <= 1.0, "lambda must be in (0, 1]");
    need(max_options >= 1, "max_options must be >= 1");
    need(words_per_second > 0.0, "words_per_second must be positive");
    need(provider != ProviderKind::file || !provider_file.empty(), "provider 'file' needs provider_file");
  }

  /// Flat document; absent keys keep their defaults, unknown keys are errors.
  static CompileConfig from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw ConfigError("config must be an object");
    static const std::set<std::string> known = {
        "rms_threshold", "min_interval_s",    "merge_angle_deg", "smoothing_window", "h_fov",
        "v_fov",         "region_threshold",  "min_area_fraction", "scene_threshold", "w_spa",
        "w_sem",         "w_soc",             "lambda",          "max_options",      "words_per_second",
        "provider",      "provider_file",     "directives_file"};
    for (const auto& [key, _] : j.items()) {
      if (!known.contains(key)) throw ConfigError("unknown config key '" + key + "'");
    }
    CompileConfig c;
    try {
      c.rms_threshold = j.value("rms_threshold", c.rms_threshold);
      c.min_interval_s = j.value("min_interval_s", c.min_interval_s);
      c.merge_angle_deg = j.value("merge_angle_deg", c.merge_angle_deg);
      c.smoothing_window = j.value("smoothing_window", c.smoothing_window);
      c.h_fov = j.value("h_fov", c.h_fov);
      c.v_fov = j.value("v_fov", c.v_fov);
      c.region_threshold = j.value("region_threshold", c.region_threshold);
      c.min_area_fraction = j.value("min_area_fraction", c.min_area_fraction);
      c.scene_threshold = j.value("scene_threshold", c.scene_threshold);
      c.weights = DiversityWeights::normalized(j.value("w_spa", 1.0), j.value("w_sem", 1.0), j.value("w_soc", 1.0));
      c.lambda = j.value("lambda", c.lambda);
      c.max_options = j.value("max_options", c.max_options);
      c.words_per_second = j.value("words_per_second", c.words_per_second);
      const std::string p = j.value("provider", std::string("stub"));
      if (p == "stub") {
        c.provider = ProviderKind::stub;
      } else if (p == "file") {
        c.provider = ProviderKind::file;
      } else if (p == "remote") {
        c.provider = ProviderKind::remote;
      } else {
        throw ConfigError("unknown provider '" + p + "'");
      }
      c.provider_file = j.value("provider_file", std::string{});
      c.directives_file = j.value("directives_file", std::string{});
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(std::string("config value has the wrong type: ") + e.what());
    }
    c.check();
    return c;
  }

  CandidateOptions candidate_options() const {
    CandidateOptions o;
    o.extraction.region_threshold = region_threshold;
    o.extraction.min_area_fraction = min_area_fraction;
    o.merge_angle = merge_angle_deg;
    o.smoothing_window = smoothing_window;
    o.h_fov = h_fov;
    o.v_fov = v_fov;
    return o;
  }
};

inline std::vector<std::string> load_directives(const std::filesystem::path& path) {
  std::vector<std::string> out;
  std::istringstream in(io::read_file(path));
  for (std::string line; std::getline(in, line);) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
    if (!line.empty()) out.push_back(line);
  }
  return out;
}

struct SceneBuild {
  GraphScene scene;
  nlohmann::json report;
  std::vector<std::string> warnings;
};

/// Candidate generation, diversity selection and narration slotting for one segment.
inline SceneBuild build_scene(const SceneSegment& seg, const ProjectInputs& inputs, const CompileConfig& cfg) {
  SceneBuild out;
  const std::string where = "scene " + std::to_string(seg.index + 1);
  const auto candidates = build_candidates(seg, inputs, cfg.candidate_options());
  const bool semantic = std::all_of(candidates.begin(), candidates.end(),
                                    [](const CandidateBranch& c) { return c.has_embeddings(); });
  if (!semantic) out.warnings.push_back(where + ": caption embeddings missing, semantic diversity disabled");
  const bool degenerate = !candidates.empty() && candidates.front().degenerate;
  if (degenerate) out.warnings.push_back(where + ": no salient regions, using a fallback forward branch");

  const DiversityTable table = build_diversity_table(candidates, inputs.saliency, semantic);
  const BranchSet set = select_branches(table, cfg.weights, cfg.lambda, cfg.max_options);
  const NarrationSlot slot = narration_slot(seg.start_time, seg.end_time, inputs.transcript, cfg.words_per_second);
  if (slot.unplaceable) out.warnings.push_back(where + ": no speech-free time for narration");

  GraphScene& s = out.scene;
  s.index = seg.index;
  s.start_point = seg.start_point;
  s.end_point = seg.end_point;
  s.first_frame = seg.first_frame;
  s.last_frame = seg.last_frame;
  s.start_time = seg.start_time;
  s.end_time = seg.end_time;
  s.candidate_count = static_cast<int>(candidates.size());
  s.diversity = set.breakdown;
  for (const auto& step : set.trace) {
    s.selection_trace.push_back({static_cast<int>(step.candidate), step.breakdown, step.previous_overall, step.accepted});
  }
  for (std::size_t k = 0; k < set.order.size(); ++k) {
    const auto& c = candidates[set.order[k]];
    GraphBranch b;
    b.candidate_index = static_cast<int>(set.order[k]);
    b.path = c.path;
    b.h_fov = cfg.h_fov;
    b.v_fov = cfg.v_fov;
    b.social = table.social[set.order[k]];
    b.at_selection = set.trace[k].breakdown;
    b.narration = slot;
    for (std::size_t f = 0; f < c.captions.size(); ++f) {
      if (c.captions[f]) b.captions.push_back({seg.first_frame + static_cast<int>(f), *c.captions[f]});
    }
    b.degenerate = c.degenerate;
    b.title = "Branch " + std::to_string(k + 1);
    s.branches.push_back(std::move(b));
  }
  s.default_branch = 0;
  for (std::size_t k = 1; k < s.branches.size(); ++k) {
    if (s.branches[k].social > s.branches[static_cast<std::size_t>(s.default_branch)].social) {
      s.default_branch = static_cast<int>(k);
    }
  }
  s.title = "Scene " + std::to_string(seg.index + 1);

  nlohmann::json steps = nlohmann::json::array();
  for (const auto& step : set.trace) {
    steps.push_back({{"candidate", step.candidate},
                     {"overall", step.breakdown.overall},
                     {"previous_overall", step.previous_overall},
                     {"accepted", step.accepted}});
  }
  out.report = {{"scene", seg.index + 1},
                {"frames", nlohmann::json::array({seg.first_frame, seg.last_frame})},
                {"candidates", candidates.size()},
                {"selected", set.order.size()},
                {"semantic_enabled", semantic},
                {"degenerate", degenerate},
                {"selection_trace", std::move(steps)}};
  return out;
}

struct CompileResult {
  BranchGraph graph;
  nlohmann::json report;
  std::vector<std::string> warnings;
  bool provider_warning = false;
};

/// Runs the whole pipeline. Scenes are built on up to `jobs` worker threads;
/// results are assembled in scene order, so output does not depend on `jobs`.
inline CompileResult compile(const ProjectInputs& inputs, const CompileConfig& cfg, DescriptionProvider& provider,
                             const std::vector<std::string>& directives = {}, unsigned jobs = 1) {
  cfg.check();
  CompileResult result;
  const auto boundaries = detect_scene_boundaries(inputs.frames, cfg.scene_threshold, inputs.grid.fps);
  const auto zones = exclusion_zones(inputs.transcript, inputs.loudness, cfg.rms_threshold);
  auto points = detect_branching_points(boundaries, zones, cfg.min_interval_s, inputs.grid.duration);
  std::erase_if(points, [&](const BranchPoint& p) {
    return frame_at_or_after(p.time, inputs.grid.fps) >= inputs.grid.frame_count;
  });
  for (std::size_t i = 0; i < points.size(); ++i) points[i].id = static_cast<int>(i);
  const auto segments = make_segments(points, inputs.grid);

  std::vector<SceneBuild> built(segments.size());
  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(segments.size())));
  if (jobs == 1) {
    for (std::size_t i = 0; i < segments.size(); ++i) built[i] = build_scene(segments[i], inputs, cfg);
  } else {
    std::vector<std::future<void>> workers;
    for (unsigned w = 0; w < jobs; ++w) {
      workers.push_back(std::async(std::launch::async, [&, w] {
        for (std::size_t i = w; i < segments.size(); i += jobs) built[i] = build_scene(segments[i], inputs, cfg);
      }));
    }
    for (auto& f : workers) f.get();
  }

  BranchGraph& g = result.graph;
  g.video = {inputs.grid.duration, inputs.grid.fps, inputs.grid.frame_count};
  g.settings = {cfg.weights, cfg.lambda, cfg.max_options, cfg.min_interval_s, cfg.words_per_second};
  g.branch_points = points;
  nlohmann::json scene_reports = nlohmann::json::array();
  for (auto& b : built) {
    g.scenes.push_back(std::move(b.scene));
    scene_reports.push_back(std::move(b.report));
    result.warnings.insert(result.warnings.end(), b.warnings.begin(), b.warnings.end());
  }
  g.cues = plan_cues(g);

  FillOptions fill;
  fill.directives = directives;
  const FillReport filled = fill_descriptions(g, provider, fill);
  result.warnings.insert(result.warnings.end(), filled.warnings.begin(), filled.warnings.end());
  result.provider_warning = filled.provider_failures > 0;

  nlohmann::json zone_list = nlohmann::json::array();
  for (const auto& z : zones) {
    zone_list.push_back({{"start", z.start}, {"end", z.end}, {"kind", std::string(to_string(z.kind))}});
  }
  nlohmann::json point_list = nlohmann::json::array();
  for (const auto& p : points) {
    point_list.push_back({{"time", p.time}, {"source", std::string(to_string(p.source))}});
  }
  result.report = {{"scene_boundaries", boundaries},
                   {"exclusion_zones", std::move(zone_list)},
                   {"branch_points", std::move(point_list)},
                   {"scenes", std::move(scene_reports)},
                   {"narration_overruns", filled.overruns},
                   {"provider_failures", filled.provider_failures},
                   {"warnings", result.warnings}};
  return result;
}

}  // namespace n360
