#pragma once

// Command implementations behind the `n360` executable. Each command writes
// human output to `out`, structured errors to `err`, and returns an exit code.

#include <charconv>
#include <filesystem>
#include <iomanip>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "n360/error.hpp"
#include "n360/graph.hpp"
#include "n360/ingest.hpp"
#include "n360/io.hpp"
#include "n360/pipeline.hpp"
#include "n360/planner.hpp"
#include "n360/remote_provider.hpp"
#include "n360/simulate.hpp"

namespace n360::cli {

enum ExitCode : int { kOk = 0, kInputError = 1, kValidationError = 2, kProviderWarning = 3 };

inline void report_error(std::ostream& err, const std::string& kind, const std::string& message,
                         const std::string& input = {}) {
  nlohmann::json e = {{"kind", kind}, {"message", message}};
  if (!input.empty()) e["input"] = input;
  err << nlohmann::json({{"error", e}}).dump() << '\n';
}

inline void report_issues(std::ostream& err, const std::vector<ValidationIssue>& issues) {
  nlohmann::json list = nlohmann::json::array();
  for (const auto& i : issues) list.push_back({{"path", i.path}, {"message", i.message}});
  err << nlohmann::json({{"error", {{"kind", "validation"}, {"issues", list}}}}).dump() << '\n';
}

inline std::unique_ptr<DescriptionProvider> make_provider(const CompileConfig& cfg) {
  switch (cfg.provider) {
    case ProviderKind::stub: return std::make_unique<StubProvider>();
    case ProviderKind::file: return std::make_unique<FileProvider>(FileProvider::from_file(cfg.provider_file));
    case ProviderKind::remote: return std::make_unique<RemoteProvider>(RemoteProvider::from_environment());
  }
  return std::make_unique<StubProvider>();
}

struct CompileArgs {
  std::filesystem::path manifest;
  std::optional<std::filesystem::path> config;
  std::filesystem::path out = "graph.json";
  std::optional<std::filesystem::path> report;
  unsigned jobs = 1;
};

inline std::filesystem::path default_report_path(const std::filesystem::path& out) {
  auto p = out;
  p.replace_extension(".report.json");
  return p;
}

inline int cmd_compile(const CompileArgs& args, std::ostream& out, std::ostream& err) {
  CompileConfig cfg;
  std::unique_ptr<DescriptionProvider> provider;
  std::vector<std::string> directives;
  try {
    if (args.config) {
      nlohmann::json j;
      try {
        j = nlohmann::json::parse(io::read_file(*args.config));
      } catch (const std::exception& e) {
        throw ConfigError(std::string("cannot read config: ") + e.what());
      }
      cfg = CompileConfig::from_json(j);
    }
    if (!cfg.directives_file.empty()) directives = load_directives(cfg.directives_file);
    provider = make_provider(cfg);
  } catch (const std::exception& e) {
    report_error(err, "config", e.what());
    return kInputError;
  }

  ProjectInputs inputs;
  try {
    inputs = load_project(args.manifest);
  } catch (const LoadError& e) {
    report_error(err, "load", e.what(), e.input());
    return kInputError;
  } catch (const std::exception& e) {
    report_error(err, "load", e.what());
    return kInputError;
  }

  CompileResult result;
  std::string bytes;
  try {
    result = compile(inputs, cfg, *provider, directives, args.jobs);
    bytes = emit(result.graph);
  } catch (const ValidationError& e) {
    report_issues(err, e.issues());
    return kValidationError;
  } catch (const std::exception& e) {
    report_error(err, "compile", e.what());
    return kInputError;
  }

  const auto report_path = args.report.value_or(default_report_path(args.out));
  try {
    io::write_file(args.out, bytes);
    io::write_file(report_path, canonical_dump(result.report));
  } catch (const std::exception& e) {
    report_error(err, "output", e.what());
    return kInputError;
  }

  const auto& g = result.graph;
  out << "compiled " << g.scenes.size() << " scenes, " << g.branch_points.size() << " branch points\n";
  for (const auto& p : g.branch_points) {
    out << "  point " << p.id << " at " << detail::format_number(p.time) << " s (" << to_string(p.source) << ")\n";
  }
  for (const auto& s : g.scenes) {
    out << "  scene " << s.index + 1 << " [" << s.first_frame << ", " << s.last_frame << "]: " << s.branches.size()
        << " of " << s.candidate_count << " candidates, D = " << std::fixed << std::setprecision(3)
        << s.diversity.overall << std::defaultfloat << "\n";
  }
  for (const auto& w : result.warnings) out << "  warning: " << w << "\n";
  out << "graph: " << args.out.string() << "\nreport: " << report_path.string() << "\n";
  return result.provider_warning ? kProviderWarning : kOk;
}

inline std::optional<BranchGraph> read_graph(const std::filesystem::path& path, std::ostream& err, int& code) {
  std::string text;
  try {
    text = io::read_file(path);
  } catch (const std::exception& e) {
    report_error(err, "input", e.what(), path.string());
    code = kInputError;
    return std::nullopt;
  }
  try {
    return parse_graph(text);
  } catch (const ValidationError& e) {
    report_issues(err, e.issues());
    code = kValidationError;
    return std::nullopt;
  }
}

inline int cmd_validate(const std::filesystem::path& graph, std::ostream& out, std::ostream& err) {
  std::string text;
  try {
    text = io::read_file(graph);
  } catch (const std::exception& e) {
    report_error(err, "input", e.what(), graph.string());
    return kInputError;
  }
  const auto issues = validate_document(text);
  if (!issues.empty()) {
    report_issues(err, issues);
    for (const auto& i : issues) out << i.path << ": " << i.message << "\n";
    return kValidationError;
  }
  out << "ok\n";
  return kOk;
}

inline int cmd_inspect(const std::filesystem::path& graph_path, std::optional<int> scene, std::ostream& out,
                       std::ostream& err) {
  int code = kOk;
  const auto g = read_graph(graph_path, err, code);
  if (!g) return code;
  if (scene && (*scene < 1 || *scene > static_cast<int>(g->scenes.size()))) {
    report_error(err, "input", "scene " + std::to_string(*scene) + " does not exist");
    return kInputError;
  }
  out << "version " << g->version << ", " << detail::format_number(g->video.duration) << " s, "
      << g->scenes.size() << " scenes\n";
  for (const auto& s : g->scenes) {
    if (scene && s.index + 1 != *scene) continue;
    out << "[Scene " << s.index + 1 << " of " << g->scenes.size() << "] " << s.title << "  ("
        << detail::format_number(s.start_time) << "-" << detail::format_number(s.end_time) << " s, D "
        << detail::format_number(s.diversity.overall) << ")\n";
    for (std::size_t b = 0; b < s.branches.size(); ++b) {
      const auto& br = s.branches[b];
      const auto& d0 = br.path.directions.front();
      out << "  " << (static_cast<int>(b) == s.default_branch ? "*" : " ") << "[Branch " << b + 1 << " of "
          << s.branches.size() << "] " << br.title << "  social " << detail::format_number(br.social)
          << ", starts yaw " << std::lround(d0.yaw()) << " pitch " << std::lround(d0.pitch()) << "\n";
      out << "      narration " << detail::format_number(br.narration.start) << "-"
          << detail::format_number(br.narration.end) << " s (" << br.narration.word_budget << " words): "
          << br.narration.text.value_or("") << "\n";
    }
  }
  return kOk;
}

struct SimulateArgs {
  std::filesystem::path graph;
  std::string policy = "default_only";
  std::optional<std::filesystem::path> script;
  std::optional<std::filesystem::path> out;
};

inline int cmd_simulate(const SimulateArgs& args, std::ostream& out, std::ostream& err) {
  int code = kOk;
  const auto g = read_graph(args.graph, err, code);
  if (!g) return code;
  Policy policy{};
  ChoiceScript script;
  try {
    policy = policy_from_string(args.policy);
    if (policy == Policy::script) {
      if (!args.script) throw ConfigError("policy 'script' needs --script");
      script = parse_script(nlohmann::json::parse(io::read_file(*args.script)));
    }
  } catch (const std::exception& e) {
    report_error(err, "input", e.what());
    return kInputError;
  }
  PlaythroughTrace trace;
  try {
    trace = simulate(*g, policy, script);
  } catch (const ValidationError& e) {
    report_issues(err, e.issues());
    return kValidationError;
  }
  const std::string bytes = emit_trace(trace);
  if (args.out) {
    try {
      io::write_file(*args.out, bytes);
    } catch (const std::exception& e) {
      report_error(err, "output", e.what());
      return kInputError;
    }
  } else {
    out << bytes;
  }
  return kOk;
}

/// Branching-point times from a graph document or a plain list (one number
/// per line; blank lines and '#' comments ignored).
inline std::vector<double> read_timestamps(const std::filesystem::path& path) {
  const std::string text = io::read_file(path);
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    return [&] {
      const BranchGraph g = parse_graph(text);
      std::vector<double> out;
      for (const auto& p : g.branch_points) out.push_back(p.time);
      return out;
    }();
  }
  std::vector<double> out;
  std::istringstream in(text);
  int line_no = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    const auto e = line.find_last_not_of(" \t\r");
    const std::string tok = line.substr(b, e - b + 1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc{} || ptr != tok.data() + tok.size() || !std::isfinite(v)) {
      throw ConfigError(path.string() + ":" + std::to_string(line_no) + ": not a number: '" + tok + "'");
    }
    out.push_back(v);
  }
  return out;
}

inline int cmd_eval_timing(const std::filesystem::path& a, const std::filesystem::path& b, double tol,
                           std::ostream& out, std::ostream& err) {
  std::vector<double> ta, tb;
  JaccardResult r;
  try {
    ta = read_timestamps(a);
    tb = read_timestamps(b);
    r = jaccard_agreement(ta, tb, tol);
  } catch (const ValidationError& e) {
    report_issues(err, e.issues());
    return kInputError;
  } catch (const std::exception& e) {
    report_error(err, "input", e.what());
    return kInputError;
  }
  out << "J = " << std::fixed << std::setprecision(3) << r.value << "\n";
  out << "points: " << ta.size() << " vs " << tb.size() << ", matched " << r.matches.size() << " (tol "
      << detail::format_number(tol) << " s)\n";
  for (const auto& [x, y] : r.matches) {
    out << "  " << detail::format_number(x) << " <-> " << detail::format_number(y) << "\n";
  }
  return kOk;
}

}  // namespace n360::cli
