#pragma once

// Synthetic "desk" project: 120 s, two drifting saliency blobs, hard scene
// cuts at 40 s and 80 s, and speech from 35 s to 45 s. Used by the test
// suites and for trying the CLI without real footage.

#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "n360/geometry.hpp"
#include "n360/io.hpp"

namespace n360::fixture {

struct DeskOptions {
  double duration = 120.0;
  std::size_t saliency_width = 64;
  std::size_t frame_width = 16;
  std::size_t embedding_dim = 8;
  bool loudness_records = false;  // write (time, value) records instead of a WAV file
};

struct Blob {
  double yaw0;
  double yaw_rate;  // degrees per second
  double pitch;
  double amplitude;
  double sigma;  // degrees

  Direction center(double t) const { return dir_from_angles(yaw0 + yaw_rate * t, pitch); }
};

inline const std::array<Blob, 2>& desk_blobs() {
  static const std::array<Blob, 2> blobs = {Blob{-110.0, 0.4, 5.0, 1.0, 10.0}, Blob{100.0, -0.3, -5.0, 0.7, 10.0}};
  return blobs;
}

inline const std::array<std::array<const char*, 2>, 3>& desk_captions() {
  static const std::array<std::array<const char*, 2>, 3> c = {{
      {"a dog running along the beach", "a lighthouse on the cliff"},
      {"a market stall piled with oranges", "a cyclist weaving through the crowd"},
      {"children playing on a climbing frame", "a fountain in the middle of the square"},
  }};
  return c;
}

inline int desk_scene_of(double t) { return t < 40.0 ? 0 : (t < 80.0 ? 1 : 2); }

inline std::string frame_name(int index, const char* ext) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%06d.%s", index, ext);
  return buf;
}

/// Writes the project under `dir` and returns the manifest path.
inline std::filesystem::path write_desk_fixture(const std::filesystem::path& dir, const DeskOptions& opt = {}) {
  namespace fs = std::filesystem;
  fs::create_directories(dir / "saliency");
  fs::create_directories(dir / "frames");
  const int frames = static_cast<int>(opt.duration);
  const std::size_t sw = opt.saliency_width, sh = sw / 2;

  for (int f = 0; f < frames; ++f) {
    io::Raster r{sw, sh, 1, 255, std::vector<std::uint16_t>(sw * sh, 0)};
    for (std::size_t y = 0; y < sh; ++y) {
      for (std::size_t x = 0; x < sw; ++x) {
        const Direction d = pixel_to_direction(x, y, sw, sh);
        double v = 0.0;
        for (const auto& b : desk_blobs()) {
          const double a = angular_distance(d, b.center(f));
          v = std::max(v, b.amplitude * std::exp(-a * a / (2.0 * b.sigma * b.sigma)));
        }
        r.samples[y * sw + x] = static_cast<std::uint16_t>(std::lround(v * 255.0));
      }
    }
    io::write_file(dir / "saliency" / frame_name(f, "pgm"), io::encode_netpbm(r));
  }

  static const std::array<std::array<int, 3>, 3> palette = {{{20, 40, 120}, {230, 140, 30}, {40, 160, 60}}};
  const std::size_t fw = opt.frame_width, fh = fw / 2;
  for (int f = 0; f < frames; ++f) {
    const auto& base = palette[static_cast<std::size_t>(desk_scene_of(f))];
    io::Raster r{fw, fh, 3, 255, {}};
    for (std::size_t y = 0; y < fh; ++y) {
      for (std::size_t x = 0; x < fw; ++x) {
        for (int c = 0; c < 3; ++c) {
          // slow drift plus a fixed texture, both far below the cut threshold
          const int v = base[static_cast<std::size_t>(c)] + (f % 40) / 4 + static_cast<int>((x + 2 * y) % 5);
          r.samples.push_back(static_cast<std::uint16_t>(std::clamp(v, 0, 255)));
        }
      }
    }
    io::write_file(dir / "frames" / frame_name(f, "ppm"), io::encode_netpbm(r));
  }

  nlohmann::json transcript = nlohmann::json::array();
  transcript.push_back({{"start", 35.0}, {"end", 45.0}, {"text", "Look at that, the tide is coming in fast."}});
  io::write_file(dir / "transcript.json", transcript.dump(2) + "\n");

  nlohmann::json manifest = {{"fps", 1},
                             {"duration", opt.duration},
                             {"embedding_dim", opt.embedding_dim},
                             {"saliency", {{"dir", "saliency"}, {"width", sw}, {"height", sh}, {"max", 255}}},
                             {"transcript", "transcript.json"},
                             {"frames", "frames"},
                             {"embeddings", "embeddings.json"}};

  const double rate = 8000.0;
  if (opt.loudness_records) {
    nlohmann::json records = nlohmann::json::array();
    for (int k = 0; k < static_cast<int>(opt.duration * 10.0); ++k) {
      records.push_back({{"time", k / 10.0}, {"value", 0.2}});
    }
    io::write_file(dir / "loudness.json", records.dump() + "\n");
    manifest["loudness"] = "loudness.json";
  } else {
    io::PcmAudio audio{static_cast<std::uint32_t>(rate), {}};
    const auto n = static_cast<std::size_t>(opt.duration * rate);
    audio.samples.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      audio.samples.push_back(0.25 * std::sin(2.0 * std::numbers::pi * 220.0 * static_cast<double>(i) / rate));
    }
    io::write_file(dir / "audio.wav", io::encode_wav(audio));
    manifest["audio"] = "audio.wav";
  }

  // Each caption gets its own axis in embedding space, so the two blobs are
  // semantically orthogonal and scenes never share a caption vector.
  nlohmann::json entries = nlohmann::json::array();
  for (int f = 0; f < frames; ++f) {
    const int scene = desk_scene_of(f);
    for (std::size_t b = 0; b < 2; ++b) {
      std::vector<double> e(opt.embedding_dim, 0.0);
      e[(static_cast<std::size_t>(scene) * 2 + b) % opt.embedding_dim] = 1.0;
      const Direction c = desk_blobs()[b].center(f);
      entries.push_back({{"frame", f},
                         {"yaw", c.yaw()},
                         {"pitch", c.pitch()},
                         {"caption", desk_captions()[static_cast<std::size_t>(scene)][b]},
                         {"embedding", e}});
    }
  }
  io::write_file(dir / "embeddings.json", nlohmann::json({{"entries", entries}}).dump() + "\n");

  const fs::path manifest_path = dir / "manifest.json";
  io::write_file(manifest_path, manifest.dump(2) + "\n");
  return manifest_path;
}

}  // namespace n360::fixture
