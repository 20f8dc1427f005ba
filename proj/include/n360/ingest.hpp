#pragma once

// Project inputs: saliency maps, transcript, loudness, sampled frames and
// caption embeddings, validated and aligned onto the 1 fps frame grid.

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "n360/error.hpp"
#include "n360/geometry.hpp"
#include "n360/io.hpp"

namespace n360 {

using json = nlohmann::json;

struct SaliencyFrame {
  int frame_index = 0;
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<double> values;  // row-major, normalized to [0, 1]

  double at(std::size_t x, std::size_t y) const { return values[y * width + x]; }
  double max_value() const { return values.empty() ? 0.0 : *std::max_element(values.begin(), values.end()); }
};

struct TranscriptSegment {
  double start = 0.0;
  double end = 0.0;
  std::string text;
};

/// RMS loudness sampled at `sample_rate`; value k summarizes the trailing one
/// second of audio ending at (k + 1) / sample_rate.
struct LoudnessSeries {
  double sample_rate = 10.0;
  std::vector<double> values;

  double duration() const { return static_cast<double>(values.size()) / sample_rate; }
};

/// Downsampled HSV image of one sampled frame; channels in [0, 1].
struct FrameDescriptor {
  int frame_index = 0;
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<std::array<double, 3>> hsv;
};

/// Caption and sentence embedding of the viewport centered on `direction` at `frame`.
struct EmbeddingEntry {
  int frame = 0;
  Direction direction;
  std::string caption;
  std::vector<double> embedding;
};

struct GridInfo {
  int fps = 1;
  double duration = 0.0;
  int frame_count = 0;
  std::size_t saliency_width = 0;
  std::size_t saliency_height = 0;
  std::size_t embedding_dim = 0;
};

struct ProjectInputs {
  GridInfo grid;
  std::vector<SaliencyFrame> saliency;
  std::vector<TranscriptSegment> transcript;
  LoudnessSeries loudness;
  std::vector<FrameDescriptor> frames;
  std::vector<EmbeddingEntry> embeddings;
};

// ---------------------------------------------------------------------------
// Signal analysis

/// Trailing one-second RMS of `samples`, emitted at `series_rate` values per
/// second. The head of the stream uses whatever samples are available.
inline LoudnessSeries compute_loudness(std::span<const double> samples, double audio_rate, double series_rate = 10.0) {
  if (!(audio_rate > 0.0) || !(series_rate > 0.0)) throw ConfigError("sample rates must be positive");
  LoudnessSeries out{series_rate, {}};
  if (samples.empty()) return out;
  const auto n = samples.size();
  const auto window = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(audio_rate)));
  const double hop = audio_rate / series_rate;
  const auto count = static_cast<std::size_t>(std::ceil(static_cast<double>(n) / hop - 1e-9));
  // prefix sums of squares keep the per-window cost constant
  std::vector<double> prefix(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + samples[i] * samples[i];
  out.values.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    const auto end = std::min(n, static_cast<std::size_t>(std::llround(static_cast<double>(k + 1) * hop)));
    const auto begin = end > window ? end - window : 0;
    if (end == begin) {
      out.values.push_back(0.0);
      continue;
    }
    const double ms = std::max(0.0, prefix[end] - prefix[begin]) / static_cast<double>(end - begin);
    out.values.push_back(std::clamp(std::sqrt(ms), 0.0, 1.0));
  }
  return out;
}

/// RGB in [0, 1] to HSV in [0, 1].
inline std::array<double, 3> rgb_to_hsv(double r, double g, double b) {
  const double mx = std::max({r, g, b});
  const double mn = std::min({r, g, b});
  const double delta = mx - mn;
  double h = 0.0;
  if (delta > 0.0) {
    if (mx == r) {
      h = std::fmod((g - b) / delta, 6.0);
    } else if (mx == g) {
      h = (b - r) / delta + 2.0;
    } else {
      h = (r - g) / delta + 4.0;
    }
    h /= 6.0;
    if (h < 0.0) h += 1.0;
    if (h >= 1.0) h -= 1.0;
  }
  const double s = mx > 0.0 ? delta / mx : 0.0;
  return {h, s, mx};
}

/// Mean absolute per-channel HSV difference, hue compared on the circle.
inline double hsv_frame_difference(const FrameDescriptor& a, const FrameDescriptor& b) {
  if (a.hsv.size() != b.hsv.size() || a.hsv.empty()) throw ContractError("frame descriptors differ in size");
  double sum = 0.0;
  for (std::size_t i = 0; i < a.hsv.size(); ++i) {
    const double dh = std::abs(a.hsv[i][0] - b.hsv[i][0]);
    sum += std::min(dh, 1.0 - dh) + std::abs(a.hsv[i][1] - b.hsv[i][1]) + std::abs(a.hsv[i][2] - b.hsv[i][2]);
  }
  return sum / (3.0 * static_cast<double>(a.hsv.size()));
}

inline constexpr double kDefaultSceneThreshold = 0.11;

/// Scene start times in seconds; always begins with 0.
inline std::vector<double> detect_scene_boundaries(const std::vector<FrameDescriptor>& frames,
                                                   double threshold = kDefaultSceneThreshold, int fps = 1) {
  if (frames.size() < 2) throw ContractError("scene detection needs at least two frames");
  std::vector<double> out{0.0};
  for (std::size_t i = 1; i < frames.size(); ++i) {
    if (hsv_frame_difference(frames[i - 1], frames[i]) > threshold) {
      out.push_back(static_cast<double>(frames[i].frame_index) / fps);
    }
  }
  return out;
}

inline FrameDescriptor descriptor_from_raster(int frame_index, const io::Raster& r) {
  FrameDescriptor d{frame_index, r.width, r.height, {}};
  d.hsv.reserve(r.width * r.height);
  const double m = r.maxval;
  for (std::size_t y = 0; y < r.height; ++y) {
    for (std::size_t x = 0; x < r.width; ++x) {
      if (r.channels == 1) {
        d.hsv.push_back({0.0, 0.0, r.at(x, y) / m});
      } else {
        d.hsv.push_back(rgb_to_hsv(r.at(x, y, 0) / m, r.at(x, y, 1) / m, r.at(x, y, 2) / m));
      }
    }
  }
  return d;
}

// ---------------------------------------------------------------------------
// Serialization

inline void to_json(json& j, const SaliencyFrame& f) {
  j = json{{"frame", f.frame_index}, {"width", f.width}, {"height", f.height}, {"values", f.values}};
}
inline void from_json(const json& j, SaliencyFrame& f) {
  j.at("frame").get_to(f.frame_index);
  j.at("width").get_to(f.width);
  j.at("height").get_to(f.height);
  j.at("values").get_to(f.values);
}
inline void to_json(json& j, const TranscriptSegment& s) { j = json{{"start", s.start}, {"end", s.end}, {"text", s.text}}; }
inline void from_json(const json& j, TranscriptSegment& s) {
  j.at("start").get_to(s.start);
  j.at("end").get_to(s.end);
  s.text = j.value("text", std::string{});
}
inline void to_json(json& j, const LoudnessSeries& l) { j = json{{"rate", l.sample_rate}, {"values", l.values}}; }
inline void from_json(const json& j, LoudnessSeries& l) {
  j.at("rate").get_to(l.sample_rate);
  j.at("values").get_to(l.values);
}
inline void to_json(json& j, const FrameDescriptor& f) {
  j = json{{"frame", f.frame_index}, {"width", f.width}, {"height", f.height}, {"hsv", f.hsv}};
}
inline void from_json(const json& j, FrameDescriptor& f) {
  j.at("frame").get_to(f.frame_index);
  j.at("width").get_to(f.width);
  j.at("height").get_to(f.height);
  j.at("hsv").get_to(f.hsv);
}
inline void to_json(json& j, const EmbeddingEntry& e) {
  j = json{{"frame", e.frame},
           {"vector", e.direction.vec()},
           {"caption", e.caption},
           {"embedding", e.embedding}};
}
inline void from_json(const json& j, EmbeddingEntry& e) {
  j.at("frame").get_to(e.frame);
  if (j.contains("vector")) {
    e.direction = Direction::from_vector(j.at("vector").get<std::array<double, 3>>());
  } else {
    e.direction = dir_from_angles(j.at("yaw").get<double>(), j.at("pitch").get<double>());
  }
  e.caption = j.value("caption", std::string{});
  j.at("embedding").get_to(e.embedding);
}
inline void to_json(json& j, const GridInfo& g) {
  j = json{{"fps", g.fps},
           {"duration", g.duration},
           {"frame_count", g.frame_count},
           {"saliency_width", g.saliency_width},
           {"saliency_height", g.saliency_height},
           {"embedding_dim", g.embedding_dim}};
}
inline void from_json(const json& j, GridInfo& g) {
  j.at("fps").get_to(g.fps);
  j.at("duration").get_to(g.duration);
  j.at("frame_count").get_to(g.frame_count);
  j.at("saliency_width").get_to(g.saliency_width);
  j.at("saliency_height").get_to(g.saliency_height);
  j.at("embedding_dim").get_to(g.embedding_dim);
}
inline void to_json(json& j, const ProjectInputs& p) {
  j = json{{"grid", p.grid},         {"saliency", p.saliency}, {"transcript", p.transcript},
           {"loudness", p.loudness}, {"frames", p.frames},     {"embeddings", p.embeddings}};
}
inline void from_json(const json& j, ProjectInputs& p) {
  j.at("grid").get_to(p.grid);
  j.at("saliency").get_to(p.saliency);
  j.at("transcript").get_to(p.transcript);
  j.at("loudness").get_to(p.loudness);
  j.at("frames").get_to(p.frames);
  j.at("embeddings").get_to(p.embeddings);
}

// ---------------------------------------------------------------------------
// Loading

namespace detail {

inline json read_json_input(const std::string& input, const std::filesystem::path& path) {
  try {
    return json::parse(io::read_file(path));
  } catch (const json::exception& e) {
    throw LoadError(input, "malformed document " + path.string() + ": " + e.what());
  } catch (const std::runtime_error& e) {
    throw LoadError(input, e.what());
  }
}

// Image files in `dir` named by zero-padded frame index, ordered by index.
inline std::vector<std::pair<int, std::filesystem::path>> indexed_files(const std::string& input,
                                                                          const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) throw LoadError(input, "directory not found: " + dir.string());
  std::vector<std::pair<int, fs::path>> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const std::string stem = entry.path().stem().string();
    int index = -1;
    const auto [ptr, ec] = std::from_chars(stem.data(), stem.data() + stem.size(), index);
    if (ec != std::errc{} || ptr != stem.data() + stem.size() || index < 0) {
      throw LoadError(input, "file name is not a frame index: " + entry.path().filename().string());
    }
    files.emplace_back(index, entry.path());
  }
  std::sort(files.begin(), files.end());
  for (std::size_t i = 0; i < files.size(); ++i) {
    if (files[i].first != static_cast<int>(i)) {
      throw LoadError(input, "frame sequence not contiguous at index " + std::to_string(i));
    }
  }
  if (files.empty()) throw LoadError(input, "no frames in " + dir.string());
  return files;
}

template <typename T>
void align_to_grid(const std::string& input, std::vector<T>& items, int frame_count) {
  const auto n = static_cast<int>(items.size());
  if (std::abs(n - frame_count) > 1) {
    throw LoadError(input, "grid mismatch: " + std::to_string(n) + " frames for a " + std::to_string(frame_count) +
                               "-frame grid");
  }
  while (static_cast<int>(items.size()) > frame_count) items.pop_back();
  while (static_cast<int>(items.size()) < frame_count) {
    T copy = items.back();
    copy.frame_index += 1;
    items.push_back(std::move(copy));
  }
}

inline std::filesystem::path manifest_path(const json& manifest, const std::filesystem::path& base,
                                           const std::string& key, const char* subkey = nullptr) {
  if (!manifest.contains(key)) throw LoadError(key, "missing from manifest");
  const json& v = manifest.at(key);
  std::string rel;
  if (v.is_string()) {
    rel = v.get<std::string>();
  } else if (subkey != nullptr && v.is_object() && v.contains(subkey) && v.at(subkey).is_string()) {
    rel = v.at(subkey).get<std::string>();
  } else {
    throw LoadError(key, "manifest entry must name a path");
  }
  const std::filesystem::path p(rel);
  return p.is_absolute() ? p : base / p;
}

}  // namespace detail

inline std::vector<TranscriptSegment> load_transcript(const std::filesystem::path& path, double duration) {
  const json doc = detail::read_json_input("transcript", path);
  std::vector<TranscriptSegment> segs;
  try {
    const json& arr = doc.is_object() ? doc.at("segments") : doc;
    segs = arr.get<std::vector<TranscriptSegment>>();
  } catch (const json::exception& e) {
    throw LoadError("transcript", std::string("malformed record: ") + e.what());
  }
  for (std::size_t i = 0; i < segs.size(); ++i) {
    auto& s = segs[i];
    if (!(s.start < s.end) || s.start < 0.0) {
      throw LoadError("transcript", "segment " + std::to_string(i) + " has start >= end");
    }
    if (i > 0 && s.start < segs[i - 1].end) {
      throw LoadError("transcript", "segment " + std::to_string(i) + " overlaps or is out of order");
    }
    if (s.start > duration + 1.0) throw LoadError("transcript", "segment " + std::to_string(i) + " beyond video end");
    s.end = std::min(s.end, duration);
  }
  std::erase_if(segs, [](const TranscriptSegment& s) { return !(s.start < s.end); });
  return segs;
}

/// Loudness from (time, value) records with uniform spacing starting at the first period.
inline LoudnessSeries load_loudness_records(const std::filesystem::path& path) {
  const json doc = detail::read_json_input("loudness", path);
  LoudnessSeries out;
  try {
    const json& arr = doc.is_object() ? doc.at("records") : doc;
    if (arr.size() < 2) throw LoadError("loudness", "need at least two records");
    const double t0 = arr.at(0).at("time").get<double>();
    const double t1 = arr.at(1).at("time").get<double>();
    const double step = t1 - t0;
    if (!(step > 0.0)) throw LoadError("loudness", "record times must increase");
    out.sample_rate = 1.0 / step;
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const double t = arr.at(i).at("time").get<double>();
      const double v = arr.at(i).at("value").get<double>();
      if (std::abs(t - (t0 + static_cast<double>(i) * step)) > 1e-6 * std::max(1.0, t)) {
        throw LoadError("loudness", "record " + std::to_string(i) + " breaks uniform spacing");
      }
      if (!(v >= 0.0 && v <= 1.0)) throw LoadError("loudness", "record " + std::to_string(i) + " outside [0, 1]");
      out.values.push_back(v);
    }
  } catch (const json::exception& e) {
    throw LoadError("loudness", std::string("malformed record: ") + e.what());
  }
  return out;
}

/// Loads and validates every input named by the manifest at `manifest_file`.
inline ProjectInputs load_project(const std::filesystem::path& manifest_file) {
  namespace fs = std::filesystem;
  if (!fs::exists(manifest_file)) throw LoadError("manifest", "not found: " + manifest_file.string());
  const json manifest = detail::read_json_input("manifest", manifest_file);
  if (!manifest.is_object()) throw LoadError("manifest", "must be an object");
  const fs::path base = manifest_file.parent_path();

  ProjectInputs p;
  try {
    p.grid.fps = manifest.value("fps", 1);
    p.grid.duration = manifest.at("duration").get<double>();
    p.grid.embedding_dim = manifest.at("embedding_dim").get<std::size_t>();
  } catch (const json::exception& e) {
    throw LoadError("manifest", std::string("grid metadata: ") + e.what());
  }
  if (p.grid.fps != 1) throw LoadError("manifest", "only a 1 fps grid is supported");
  if (!(p.grid.duration > 0.0)) throw LoadError("manifest", "duration must be positive");
  if (p.grid.embedding_dim == 0) throw LoadError("manifest", "embedding_dim must be positive");
  p.grid.frame_count = static_cast<int>(std::floor(p.grid.duration * p.grid.fps + 1e-9));

  // saliency
  {
    const fs::path dir = detail::manifest_path(manifest, base, "saliency", "dir");
    const json& sal = manifest.at("saliency");
    if (!sal.is_object() || !sal.contains("width") || !sal.contains("height")) {
      throw LoadError("saliency", "manifest must declare saliency width and height");
    }
    p.grid.saliency_width = sal.at("width").get<std::size_t>();
    p.grid.saliency_height = sal.at("height").get<std::size_t>();
    if (p.grid.saliency_width != 2 * p.grid.saliency_height || p.grid.saliency_height == 0) {
      throw LoadError("saliency", "saliency aspect: declared width must be twice the height");
    }
    // 0 means "use each file's own maxval"
    const double declared_max = sal.contains("max") ? sal.at("max").get<double>() : 0.0;
    if (declared_max < 0.0) throw LoadError("saliency", "declared max must be positive");
    for (const auto& [index, path] : detail::indexed_files("saliency", dir)) {
      io::Raster r;
      try {
        r = io::read_netpbm(path);
      } catch (const std::runtime_error& e) {
        throw LoadError("saliency", path.filename().string() + ": " + e.what());
      }
      if (r.channels != 1) throw LoadError("saliency", path.filename().string() + ": not grayscale");
      if (r.width != 2 * r.height) {
        throw LoadError("saliency", "saliency aspect: " + path.filename().string() + " is not 2:1");
      }
      if (r.width != p.grid.saliency_width || r.height != p.grid.saliency_height) {
        throw LoadError("saliency", path.filename().string() + ": resolution differs from manifest");
      }
      const double scale = declared_max > 0.0 ? declared_max : static_cast<double>(r.maxval);
      SaliencyFrame f{index, r.width, r.height, {}};
      f.values.reserve(r.samples.size());
      for (auto s : r.samples) {
        const double v = s / scale;
        if (v > 1.0 + 1e-12) throw LoadError("saliency", path.filename().string() + ": value above declared max");
        f.values.push_back(std::min(v, 1.0));
      }
      p.saliency.push_back(std::move(f));
    }
    detail::align_to_grid("saliency", p.saliency, p.grid.frame_count);
  }

  // transcript
  p.transcript = load_transcript(detail::manifest_path(manifest, base, "transcript"), p.grid.duration);

  // audio or precomputed loudness
  if (manifest.contains("audio")) {
    const fs::path path = detail::manifest_path(manifest, base, "audio");
    io::PcmAudio audio;
    try {
      audio = io::read_wav(path);
    } catch (const std::runtime_error& e) {
      throw LoadError("audio", path.filename().string() + ": " + e.what());
    }
    p.loudness = compute_loudness(audio.samples, audio.sample_rate);
  } else if (manifest.contains("loudness")) {
    p.loudness = load_loudness_records(detail::manifest_path(manifest, base, "loudness"));
  } else {
    throw LoadError("audio", "missing from manifest (need audio or loudness)");
  }
  if (std::abs(p.loudness.duration() - p.grid.duration) > 1.0 + 1e-9) {
    throw LoadError("audio", "grid mismatch: audio lasts " + std::to_string(p.loudness.duration()) + " s");
  }
  p.loudness.values.resize(static_cast<std::size_t>(std::llround(p.grid.duration * p.loudness.sample_rate)), 0.0);

  // sampled frames
  {
    const fs::path dir = detail::manifest_path(manifest, base, "frames", "dir");
    std::optional<std::pair<std::size_t, std::size_t>> dims;
    for (const auto& [index, path] : detail::indexed_files("frames", dir)) {
      io::Raster r;
      try {
        r = io::read_netpbm(path);
      } catch (const std::runtime_error& e) {
        throw LoadError("frames", path.filename().string() + ": " + e.what());
      }
      if (dims && (dims->first != r.width || dims->second != r.height)) {
        throw LoadError("frames", path.filename().string() + ": frame size differs from frame 0");
      }
      dims = {r.width, r.height};
      p.frames.push_back(descriptor_from_raster(index, r));
    }
    detail::align_to_grid("frames", p.frames, p.grid.frame_count);
  }

  // caption embeddings
  {
    const json doc = detail::read_json_input("embeddings", detail::manifest_path(manifest, base, "embeddings"));
    try {
      const json& arr = doc.is_object() ? doc.at("entries") : doc;
      p.embeddings = arr.get<std::vector<EmbeddingEntry>>();
    } catch (const json::exception& e) {
      throw LoadError("embeddings", std::string("malformed record: ") + e.what());
    } catch (const DomainError& e) {
      throw LoadError("embeddings", std::string("malformed direction: ") + e.what());
    }
    for (std::size_t i = 0; i < p.embeddings.size(); ++i) {
      const auto& e = p.embeddings[i];
      const std::string where = "entry " + std::to_string(i);
      if (e.embedding.size() != p.grid.embedding_dim) throw LoadError("embeddings", where + ": wrong dimension");
      double n2 = 0.0;
      for (double v : e.embedding) n2 += v * v;
      if (std::abs(std::sqrt(n2) - 1.0) > 1e-6) throw LoadError("embeddings", where + ": not unit-normalized");
      if (e.frame < 0 || e.frame >= p.grid.frame_count) throw LoadError("embeddings", where + ": frame off grid");
    }
  }
  return p;
}

}  // namespace n360
