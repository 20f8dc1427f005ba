#pragma once

// The compiled branching-narrative document: data model, canonical
// serialization, validation, and branching-timing agreement.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "n360/branch_points.hpp"
#include "n360/diversity.hpp"
#include "n360/error.hpp"
#include "n360/geometry.hpp"
#include "n360/narration.hpp"

namespace n360 {

inline constexpr const char* kGraphVersion = "n360.branch-graph/1";

struct VideoInfo {
  double duration = 0.0;
  int fps = 1;
  int frame_count = 0;
};

/// Settings the graph was compiled with; needed to re-check its invariants.
struct GraphSettings {
  DiversityWeights weights;
  double lambda = kDefaultLambda;
  int max_options = kDefaultMaxOptions;
  double min_interval = kDefaultMinInterval;
  double words_per_second = kDefaultWordsPerSecond;
};

struct CaptionRef {
  int frame = 0;
  std::string text;
};

struct GraphBranch {
  int candidate_index = 0;
  std::string title;
  ViewingPath path;
  double h_fov = Viewport::kDefaultHFov;
  double v_fov = Viewport::kDefaultVFov;
  double social = 0.0;
  DiversityBreakdown at_selection;  // set diversity right after this branch joined
  NarrationSlot narration;
  std::vector<CaptionRef> captions;
  bool degenerate = false;
};

struct TraceStep {
  int candidate = 0;
  DiversityBreakdown breakdown;
  double previous_overall = 0.0;
  bool accepted = false;
};

struct GraphScene {
  int index = 0;
  std::optional<int> start_point;
  std::optional<int> end_point;
  int first_frame = 0;
  int last_frame = 0;
  double start_time = 0.0;
  double end_time = 0.0;
  std::string title;
  int default_branch = 0;
  int candidate_count = 0;
  DiversityBreakdown diversity;
  std::vector<TraceStep> selection_trace;
  std::vector<GraphBranch> branches;
};

struct BranchGraph {
  std::string version = kGraphVersion;
  VideoInfo video;
  GraphSettings settings;
  std::vector<BranchPoint> branch_points;
  std::vector<GraphScene> scenes;
  std::vector<NavigationCue> cues;
};

// ---------------------------------------------------------------------------
// JSON mapping

using json = nlohmann::json;

namespace detail {

inline json opt_int(const std::optional<int>& v) { return v ? json(*v) : json(nullptr); }

inline std::optional<int> get_opt_int(const json& j, const char* key) {
  const json& v = j.at(key);
  if (v.is_null()) return std::nullopt;
  return v.get<int>();
}

inline json breakdown_json(const DiversityBreakdown& d) {
  return {{"d_spa", d.d_spa}, {"d_sem", d.d_sem}, {"d_soc", d.d_soc}, {"overall", d.overall}};
}

inline DiversityBreakdown breakdown_from(const json& j) {
  return {j.at("d_spa").get<double>(), j.at("d_sem").get<double>(), j.at("d_soc").get<double>(),
          j.at("overall").get<double>()};
}

}  // namespace detail

inline json graph_to_json(const BranchGraph& g) {
  json doc;
  doc["version"] = g.version;
  doc["video"] = {{"duration", g.video.duration}, {"fps", g.video.fps}, {"frame_count", g.video.frame_count}};
  doc["settings"] = {{"weights",
                      {{"spatial", g.settings.weights.spatial},
                       {"semantic", g.settings.weights.semantic},
                       {"social", g.settings.weights.social}}},
                     {"lambda", g.settings.lambda},
                     {"max_options", g.settings.max_options},
                     {"min_interval", g.settings.min_interval},
                     {"words_per_second", g.settings.words_per_second}};
  json points = json::array();
  for (const auto& p : g.branch_points) {
    points.push_back({{"id", p.id}, {"time", p.time}, {"source", std::string(to_string(p.source))}});
  }
  doc["branch_points"] = std::move(points);
  json scenes = json::array();
  for (const auto& s : g.scenes) {
    json js;
    js["index"] = s.index;
    js["start_point"] = detail::opt_int(s.start_point);
    js["end_point"] = detail::opt_int(s.end_point);
    js["first_frame"] = s.first_frame;
    js["last_frame"] = s.last_frame;
    js["start_time"] = s.start_time;
    js["end_time"] = s.end_time;
    js["title"] = s.title;
    js["default_branch"] = s.default_branch;
    js["candidate_count"] = s.candidate_count;
    js["diversity"] = detail::breakdown_json(s.diversity);
    json trace = json::array();
    for (const auto& t : s.selection_trace) {
      trace.push_back({{"candidate", t.candidate},
                       {"breakdown", detail::breakdown_json(t.breakdown)},
                       {"previous_overall", t.previous_overall},
                       {"accepted", t.accepted}});
    }
    js["selection_trace"] = std::move(trace);
    json branches = json::array();
    for (const auto& b : s.branches) {
      json jb;
      jb["candidate_index"] = b.candidate_index;
      jb["title"] = b.title;
      json path = json::array();
      for (std::size_t i = 0; i < b.path.directions.size(); ++i) {
        const auto& d = b.path.directions[i];
        path.push_back(json::array({b.path.start_frame + static_cast<int>(i), d.yaw(), d.pitch()}));
      }
      jb["path"] = std::move(path);
      jb["viewport"] = {{"h_fov", b.h_fov}, {"v_fov", b.v_fov}};
      jb["social"] = b.social;
      jb["at_selection"] = detail::breakdown_json(b.at_selection);
      const auto& n = b.narration;
      jb["narration"] = {{"start", n.start},
                         {"end", n.end},
                         {"word_budget", n.word_budget},
                         {"text", n.text ? json(*n.text) : json(nullptr)},
                         {"unplaceable", n.unplaceable},
                         {"overrun", n.overrun},
                         {"speech_rate", json::array({n.rate_min, n.rate_max})}};
      json caps = json::array();
      for (const auto& c : b.captions) caps.push_back({{"frame", c.frame}, {"text", c.text}});
      jb["captions"] = std::move(caps);
      jb["degenerate"] = b.degenerate;
      branches.push_back(std::move(jb));
    }
    js["branches"] = std::move(branches);
    scenes.push_back(std::move(js));
  }
  doc["scenes"] = std::move(scenes);
  json cues = json::array();
  for (const auto& c : g.cues) {
    cues.push_back({{"scene_index", c.scene_index},
                    {"scene_count", c.scene_count},
                    {"branch_index", c.branch_index},
                    {"branch_count", c.branch_count},
                    {"scene_title", c.scene_title},
                    {"branch_title", c.branch_title},
                    {"previous_scene_title", c.previous_scene_title ? json(*c.previous_scene_title) : json(nullptr)},
                    {"text", c.text()},
                    {"recap", c.recap()}});
  }
  doc["cues"] = std::move(cues);
  return doc;
}

/// Structural decoding; throws json::exception or DomainError on malformed input.
inline BranchGraph graph_from_json(const json& doc) {
  BranchGraph g;
  g.version = doc.at("version").get<std::string>();
  const json& v = doc.at("video");
  g.video = {v.at("duration").get<double>(), v.at("fps").get<int>(), v.at("frame_count").get<int>()};
  const json& st = doc.at("settings");
  const json& w = st.at("weights");
  g.settings.weights = {w.at("spatial").get<double>(), w.at("semantic").get<double>(), w.at("social").get<double>()};
  g.settings.lambda = st.at("lambda").get<double>();
  g.settings.max_options = st.at("max_options").get<int>();
  g.settings.min_interval = st.at("min_interval").get<double>();
  g.settings.words_per_second = st.at("words_per_second").get<double>();
  for (const auto& p : doc.at("branch_points")) {
    g.branch_points.push_back(
        {p.at("id").get<int>(), p.at("time").get<double>(), point_source_from_string(p.at("source").get<std::string>())});
  }
  for (const auto& js : doc.at("scenes")) {
    GraphScene s;
    s.index = js.at("index").get<int>();
    s.start_point = detail::get_opt_int(js, "start_point");
    s.end_point = detail::get_opt_int(js, "end_point");
    s.first_frame = js.at("first_frame").get<int>();
    s.last_frame = js.at("last_frame").get<int>();
    s.start_time = js.at("start_time").get<double>();
    s.end_time = js.at("end_time").get<double>();
    s.title = js.at("title").get<std::string>();
    s.default_branch = js.at("default_branch").get<int>();
    s.candidate_count = js.at("candidate_count").get<int>();
    s.diversity = detail::breakdown_from(js.at("diversity"));
    for (const auto& t : js.at("selection_trace")) {
      s.selection_trace.push_back({t.at("candidate").get<int>(), detail::breakdown_from(t.at("breakdown")),
                                   t.at("previous_overall").get<double>(), t.at("accepted").get<bool>()});
    }
    for (const auto& jb : js.at("branches")) {
      GraphBranch b;
      b.candidate_index = jb.at("candidate_index").get<int>();
      b.title = jb.at("title").get<std::string>();
      const json& path = jb.at("path");
      b.path.start_frame = path.empty() ? 0 : path.at(0).at(0).get<int>();
      for (const auto& triple : path) {
        if (!triple.is_array() || triple.size() != 3) throw DomainError("path entries must be [frame, yaw, pitch]");
        b.path.directions.push_back(dir_from_angles(triple.at(1).get<double>(), triple.at(2).get<double>()));
      }
      b.h_fov = jb.at("viewport").at("h_fov").get<double>();
      b.v_fov = jb.at("viewport").at("v_fov").get<double>();
      b.social = jb.at("social").get<double>();
      b.at_selection = detail::breakdown_from(jb.at("at_selection"));
      const json& n = jb.at("narration");
      b.narration.start = n.at("start").get<double>();
      b.narration.end = n.at("end").get<double>();
      b.narration.word_budget = n.at("word_budget").get<int>();
      if (!n.at("text").is_null()) b.narration.text = n.at("text").get<std::string>();
      b.narration.unplaceable = n.at("unplaceable").get<bool>();
      b.narration.overrun = n.at("overrun").get<bool>();
      b.narration.rate_min = n.at("speech_rate").at(0).get<double>();
      b.narration.rate_max = n.at("speech_rate").at(1).get<double>();
      for (const auto& c : jb.at("captions")) b.captions.push_back({c.at("frame").get<int>(), c.at("text").get<std::string>()});
      b.degenerate = jb.at("degenerate").get<bool>();
      s.branches.push_back(std::move(b));
    }
    g.scenes.push_back(std::move(s));
  }
  for (const auto& c : doc.at("cues")) {
    NavigationCue cue;
    cue.scene_index = c.at("scene_index").get<int>();
    cue.scene_count = c.at("scene_count").get<int>();
    cue.branch_index = c.at("branch_index").get<int>();
    cue.branch_count = c.at("branch_count").get<int>();
    cue.scene_title = c.at("scene_title").get<std::string>();
    cue.branch_title = c.at("branch_title").get<std::string>();
    if (!c.at("previous_scene_title").is_null()) cue.previous_scene_title = c.at("previous_scene_title").get<std::string>();
    g.cues.push_back(std::move(cue));
  }
  return g;
}

// ---------------------------------------------------------------------------
// Canonical text form: sorted keys, 2-space indent, scalar-only arrays on one
// line, floats with 9 significant digits, trailing newline.

namespace detail {

inline std::string format_number(double v) {
  if (!std::isfinite(v)) throw DomainError("non-finite number in document");
  if (v == 0.0) v = 0.0;  // drop the sign of negative zero
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 9);
  return std::string(buf, res.ptr);
}

inline bool is_scalar_array(const json& j) {
  return j.is_array() && std::all_of(j.begin(), j.end(), [](const json& e) { return e.is_primitive(); });
}

inline void write_canonical(const json& j, std::string& out, int indent) {
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  const std::string inner(static_cast<std::size_t>(indent + 1) * 2, ' ');
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (const auto& [key, value] : j.items()) {  // std::map storage: keys already sorted
        if (!first) out += ",\n";
        first = false;
        out += inner + json(key).dump() + ": ";
        write_canonical(value, out, indent + 1);
      }
      out += "\n" + pad + "}";
      return;
    }
    case json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      if (is_scalar_array(j)) {
        out += "[";
        for (std::size_t i = 0; i < j.size(); ++i) {
          if (i) out += ", ";
          write_canonical(j[i], out, indent + 1);
        }
        out += "]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ",\n";
        out += inner;
        write_canonical(j[i], out, indent + 1);
      }
      out += "\n" + pad + "]";
      return;
    }
    case json::value_t::number_float:
      out += format_number(j.get<double>());
      return;
    default:
      out += j.dump();
  }
}

}  // namespace detail

inline std::string canonical_dump(const json& j) {
  std::string out;
  detail::write_canonical(j, out, 0);
  out += '\n';
  return out;
}

// ---------------------------------------------------------------------------
// Validation

namespace detail {

class Issues {
 public:
  void add(std::string path, std::string message) { list_.push_back({std::move(path), std::move(message)}); }
  std::vector<ValidationIssue> take() { return std::move(list_); }

 private:
  std::vector<ValidationIssue> list_;
};

inline std::string fmt(double v) { return format_number(v); }

}  // namespace detail

inline constexpr double kDocumentTolerance = 1e-8;

/// Checks every structural and module invariant recoverable from the document.
inline std::vector<ValidationIssue> validate(const BranchGraph& g) {
  detail::Issues out;
  const double tol = kDocumentTolerance;
  if (g.version != kGraphVersion) out.add("version", "unsupported version '" + g.version + "'");
  if (!(g.video.duration > 0.0)) out.add("video.duration", "must be positive");
  if (g.video.fps < 1) out.add("video.fps", "must be >= 1");
  if (g.video.frame_count != static_cast<int>(std::floor(g.video.duration * g.video.fps + 1e-9))) {
    out.add("video.frame_count", "does not match duration x fps");
  }
  const auto& st = g.settings;
  if (!(st.weights.spatial >= 0 && st.weights.semantic >= 0 && st.weights.social >= 0) ||
      std::abs(st.weights.spatial + st.weights.semantic + st.weights.social - 1.0) > 1e-9) {
    out.add("settings.weights", "must be non-negative and sum to 1");
  }
  if (!(st.lambda > 0.0 && st.lambda <= 1.0)) out.add("settings.lambda", "must be in (0, 1]");
  if (st.max_options < 1) out.add("settings.max_options", "must be >= 1");
  if (!(st.min_interval >= 0.0)) out.add("settings.min_interval", "must be >= 0");
  if (!(st.words_per_second > 0.0)) out.add("settings.words_per_second", "must be positive");

  std::set<int> point_ids;
  for (std::size_t i = 0; i < g.branch_points.size(); ++i) {
    const auto& p = g.branch_points[i];
    const std::string path = "branch_points[" + std::to_string(i) + "]";
    if (p.id != static_cast<int>(i)) out.add(path + ".id", "expected id " + std::to_string(i));
    point_ids.insert(p.id);
    if (!(p.time > 0.0 && p.time < g.video.duration)) out.add(path + ".time", "outside (0, duration)");
    if (i > 0 && !(p.time - g.branch_points[i - 1].time > st.min_interval)) {
      out.add(path + ".time", "closer than min_interval to the previous point");
    }
  }

  if (g.scenes.empty()) {
    out.add("scenes", "no scenes");
    return out.take();
  }
  if (g.scenes.size() != g.branch_points.size() + 1) {
    out.add("scenes", "expected one more scene than branch points");
  }
  const auto check_ref = [&](const std::optional<int>& ref, const std::string& path) {
    if (ref && !point_ids.contains(*ref)) out.add(path, "dangling branch point id " + std::to_string(*ref));
  };
  for (std::size_t si = 0; si < g.scenes.size(); ++si) {
    const auto& s = g.scenes[si];
    const std::string sp = "scenes[" + std::to_string(si) + "]";
    if (s.index != static_cast<int>(si)) out.add(sp + ".index", "expected " + std::to_string(si));
    check_ref(s.start_point, sp + ".start_point");
    check_ref(s.end_point, sp + ".end_point");
    const std::optional<int> want_start = si == 0 ? std::nullopt : std::optional<int>(static_cast<int>(si) - 1);
    const std::optional<int> want_end =
        si + 1 == g.scenes.size() ? std::nullopt : std::optional<int>(static_cast<int>(si));
    if (s.start_point != want_start) out.add(sp + ".start_point", "does not follow branch point order");
    if (s.end_point != want_end) out.add(sp + ".end_point", "does not follow branch point order");
    const int expect_first = si == 0 ? 0 : g.scenes[si - 1].last_frame + 1;
    if (s.first_frame != expect_first) out.add(sp + ".first_frame", "scenes do not tile the frame grid");
    if (s.last_frame < s.first_frame) out.add(sp + ".last_frame", "empty frame range");
    if (si + 1 == g.scenes.size() && s.last_frame != g.video.frame_count - 1) {
      out.add(sp + ".last_frame", "last scene must end on the final frame");
    }
    if (s.branches.empty()) {
      out.add(sp + ".branches", "scene has no branches");
      continue;
    }
    if (static_cast<int>(s.branches.size()) > st.max_options) out.add(sp + ".branches", "more than max_options");
    if (s.default_branch < 0 || s.default_branch >= static_cast<int>(s.branches.size())) {
      out.add(sp + ".default_branch", "index " + std::to_string(s.default_branch) + " out of range [0, " +
                                          std::to_string(s.branches.size()) + ")");
    } else {
      int best = 0;
      for (std::size_t b = 1; b < s.branches.size(); ++b) {
        if (s.branches[b].social > s.branches[static_cast<std::size_t>(best)].social) best = static_cast<int>(b);
      }
      if (s.branches[static_cast<std::size_t>(s.default_branch)].social < s.branches[static_cast<std::size_t>(best)].social) {
        out.add(sp + ".default_branch", "is not the branch with the highest social score");
      }
    }
    const auto check_breakdown = [&](const DiversityBreakdown& d, const std::string& path) {
      for (double v : {d.d_spa, d.d_sem, d.d_soc, d.overall}) {
        if (!(v >= -tol && v <= 1.0 + tol)) out.add(path, "metric outside [0, 1]");
      }
      const double w = st.weights.spatial * d.d_spa + st.weights.semantic * d.d_sem + st.weights.social * d.d_soc;
      if (std::abs(w - d.overall) > tol) out.add(path + ".overall", "is not the weighted sum of its metrics");
    };
    check_breakdown(s.diversity, sp + ".diversity");
    std::vector<int> accepted;
    for (std::size_t k = 0; k < s.selection_trace.size(); ++k) {
      const auto& t = s.selection_trace[k];
      const std::string tp = sp + ".selection_trace[" + std::to_string(k) + "]";
      check_breakdown(t.breakdown, tp + ".breakdown");
      if (t.candidate < 0 || t.candidate >= s.candidate_count) out.add(tp + ".candidate", "unknown candidate");
      if (k > 0 && t.accepted && t.breakdown.overall < st.lambda * t.previous_overall - tol) {
        out.add(tp, "accepted step violates the lambda stop rule");
      }
      if (t.accepted) accepted.push_back(t.candidate);
    }
    if (accepted.size() != s.branches.size()) {
      out.add(sp + ".selection_trace", "accepted steps do not match the branch list");
    }
    for (std::size_t bi = 0; bi < s.branches.size(); ++bi) {
      const auto& b = s.branches[bi];
      const std::string bp = sp + ".branches[" + std::to_string(bi) + "]";
      if (bi < accepted.size() && accepted[bi] != b.candidate_index) {
        out.add(bp + ".candidate_index", "does not match selection order");
      }
      if (b.path.start_frame != s.first_frame || static_cast<int>(b.path.size()) != s.last_frame - s.first_frame + 1) {
        out.add(bp + ".path", "branch path missing a frame of [" + std::to_string(s.first_frame) + ", " +
                                  std::to_string(s.last_frame) + "]");
      }
      if (!(b.h_fov > 0.0 && b.h_fov <= 360.0 && b.v_fov > 0.0 && b.v_fov <= 180.0)) {
        out.add(bp + ".viewport", "field of view out of range");
      }
      if (!(b.social >= -tol && b.social <= 1.0 + tol)) out.add(bp + ".social", "outside [0, 1]");
      check_breakdown(b.at_selection, bp + ".at_selection");
      const auto& n = b.narration;
      if (!(n.start >= s.start_time - tol && n.end <= s.end_time + tol && n.start <= n.end)) {
        out.add(bp + ".narration", "slot outside the branch interval");
      }
      if (n.unplaceable ? n.word_budget != 0
                        : n.word_budget != word_budget_for(n.end - n.start, st.words_per_second)) {
        out.add(bp + ".narration.word_budget", "does not match slot length x words_per_second");
      }
      if (n.text && word_count(*n.text) > n.word_budget) out.add(bp + ".narration.text", "exceeds word budget");
      for (const auto& c : b.captions) {
        if (c.frame < s.first_frame || c.frame > s.last_frame) out.add(bp + ".captions", "caption frame outside scene");
      }
    }
  }

  // one cue per (scene, branch)
  std::size_t expected = 0;
  for (const auto& s : g.scenes) expected += s.branches.size();
  if (g.cues.size() != expected) out.add("cues", "expected one cue per scene branch");
  std::set<std::pair<int, int>> seen;
  for (std::size_t ci = 0; ci < g.cues.size(); ++ci) {
    const auto& c = g.cues[ci];
    const std::string cp = "cues[" + std::to_string(ci) + "]";
    if (c.scene_index < 1 || c.scene_index > static_cast<int>(g.scenes.size())) {
      out.add(cp + ".scene_index", "out of range");
      continue;
    }
    const auto& s = g.scenes[static_cast<std::size_t>(c.scene_index - 1)];
    if (c.branch_index < 1 || c.branch_index > static_cast<int>(s.branches.size())) {
      out.add(cp + ".branch_index", "out of range");
      continue;
    }
    if (!seen.insert({c.scene_index, c.branch_index}).second) out.add(cp, "duplicate cue");
    if (c.scene_count != static_cast<int>(g.scenes.size())) out.add(cp + ".scene_count", "wrong scene count");
    if (c.branch_count != static_cast<int>(s.branches.size())) out.add(cp + ".branch_count", "wrong branch count");
    if (c.scene_title != s.title) out.add(cp + ".scene_title", "does not match scene title");
    if (c.branch_title != s.branches[static_cast<std::size_t>(c.branch_index - 1)].title) {
      out.add(cp + ".branch_title", "does not match branch title");
    }
    const std::optional<std::string> prev =
        c.scene_index == 1 ? std::nullopt
                           : std::optional<std::string>(g.scenes[static_cast<std::size_t>(c.scene_index - 2)].title);
    if (c.previous_scene_title != prev) out.add(cp + ".previous_scene_title", "does not match the previous scene");
  }
  return out.take();
}

/// Canonical document bytes; throws ValidationError when the graph is invalid.
inline std::string emit(const BranchGraph& g) {
  auto issues = validate(g);
  if (!issues.empty()) throw ValidationError(std::move(issues));
  return canonical_dump(graph_to_json(g));
}

/// Decodes a document; throws ValidationError describing any structural problem.
inline BranchGraph parse_graph(const std::string& text) {
  try {
    return graph_from_json(json::parse(text));
  } catch (const json::exception& e) {
    throw ValidationError({{"$", std::string("malformed document: ") + e.what()}});
  } catch (const std::logic_error& e) {
    throw ValidationError({{"$", std::string("malformed document: ") + e.what()}});
  }
}

/// Full document check; never throws.
inline std::vector<ValidationIssue> validate_document(const std::string& text) {
  try {
    return validate(parse_graph(text));
  } catch (const ValidationError& e) {
    return e.issues();
  } catch (const std::exception& e) {
    return {{"$", e.what()}};
  }
}

// ---------------------------------------------------------------------------
// Timing agreement

inline constexpr double kDefaultTimingTolerance = 5.0;

struct JaccardResult {
  double value = 1.0;
  std::vector<std::pair<double, double>> matches;
};

/// Jaccard index of two branching-point lists where points within `tol`
/// seconds count as equivalent. Points are matched one-to-one by a sweep in
/// time order, which yields a maximum matching. Two empty lists agree fully.
inline JaccardResult jaccard_agreement(const std::vector<double>& a, const std::vector<double>& b,
                                       double tol = kDefaultTimingTolerance) {
  const auto increasing = [](const std::vector<double>& v) {
    return std::adjacent_find(v.begin(), v.end(), [](double x, double y) { return !(x < y); }) == v.end();
  };
  if (!increasing(a) || !increasing(b)) throw ContractError("timestamp lists must be strictly increasing");
  if (!(tol >= 0.0)) throw ConfigError("tolerance must be >= 0");
  JaccardResult r;
  if (a.empty() && b.empty()) return r;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (std::abs(a[i] - b[j]) <= tol) {
      r.matches.emplace_back(a[i], b[j]);
      ++i;
      ++j;
    } else if (a[i] < b[j]) {
      ++i;
    } else {
      ++j;
    }
  }
  const auto m = static_cast<double>(r.matches.size());
  r.value = m / (static_cast<double>(a.size() + b.size()) - m);
  return r;
}

}  // namespace n360
