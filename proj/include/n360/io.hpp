#pragma once

// Minimal readers/writers for the raster and audio formats the ingest stage
// accepts: binary/ASCII PGM (8 or 16 bit) and PPM, and RIFF/WAVE linear PCM.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "n360/error.hpp"

namespace n360::io {

struct Raster {
  std::size_t width = 0;
  std::size_t height = 0;
  std::size_t channels = 1;
  std::uint32_t maxval = 255;
  std::vector<std::uint16_t> samples;  // row-major, interleaved channels

  std::uint16_t at(std::size_t x, std::size_t y, std::size_t c = 0) const {
    return samples[(y * width + x) * channels + c];
  }
};

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void write_file(const std::filesystem::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("short write to " + path.string());
}

namespace detail {

class HeaderCursor {
 public:
  explicit HeaderCursor(const std::string& data) : data_(data) {}

  std::string token() {
    skip_space_and_comments();
    const std::size_t start = pos_;
    while (pos_ < data_.size() && !std::isspace(static_cast<unsigned char>(data_[pos_]))) ++pos_;
    if (start == pos_) throw std::runtime_error("truncated netpbm header");
    return data_.substr(start, pos_ - start);
  }

  unsigned long number() {
    const std::string t = token();
    std::size_t used = 0;
    unsigned long v = 0;
    try {
      v = std::stoul(t, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != t.size()) throw std::runtime_error("bad netpbm header field '" + t + "'");
    return v;
  }

  // Binary payload starts after exactly one whitespace byte.
  std::size_t payload_offset() const { return pos_ + 1; }

 private:
  void skip_space_and_comments() {
    while (pos_ < data_.size()) {
      if (std::isspace(static_cast<unsigned char>(data_[pos_]))) {
        ++pos_;
      } else if (data_[pos_] == '#') {
        while (pos_ < data_.size() && data_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  const std::string& data_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline Raster parse_netpbm(const std::string& data) {
  detail::HeaderCursor cur(data);
  const std::string magic = cur.token();
  Raster r;
  bool binary = false;
  if (magic == "P5" || magic == "P2") {
    r.channels = 1;
  } else if (magic == "P6" || magic == "P3") {
    r.channels = 3;
  } else {
    throw std::runtime_error("unsupported image type '" + magic + "' (expected PGM or PPM)");
  }
  binary = magic == "P5" || magic == "P6";
  r.width = cur.number();
  r.height = cur.number();
  const unsigned long maxval = cur.number();
  if (r.width == 0 || r.height == 0) throw std::runtime_error("image has zero size");
  if (maxval == 0 || maxval > 65535) throw std::runtime_error("image maxval out of range");
  r.maxval = static_cast<std::uint32_t>(maxval);
  const std::size_t count = r.width * r.height * r.channels;
  r.samples.resize(count);
  if (binary) {
    const std::size_t bytes_per = maxval > 255 ? 2 : 1;
    const std::size_t off = cur.payload_offset();
    if (data.size() < off + count * bytes_per) throw std::runtime_error("truncated image payload");
    const auto* p = reinterpret_cast<const unsigned char*>(data.data() + off);
    for (std::size_t i = 0; i < count; ++i) {
      r.samples[i] = bytes_per == 2 ? static_cast<std::uint16_t>((p[2 * i] << 8) | p[2 * i + 1]) : p[i];
    }
  } else {
    for (std::size_t i = 0; i < count; ++i) r.samples[i] = static_cast<std::uint16_t>(cur.number());
  }
  for (auto s : r.samples) {
    if (s > r.maxval) throw std::runtime_error("image sample exceeds maxval");
  }
  return r;
}

inline Raster read_netpbm(const std::filesystem::path& path) { return parse_netpbm(read_file(path)); }

/// Binary PGM (1 channel) or PPM (3 channels).
inline std::string encode_netpbm(const Raster& r) {
  std::ostringstream out;
  out << (r.channels == 1 ? "P5" : "P6") << '\n' << r.width << ' ' << r.height << '\n' << r.maxval << '\n';
  std::string bytes = out.str();
  for (auto s : r.samples) {
    if (r.maxval > 255) bytes.push_back(static_cast<char>(s >> 8));
    bytes.push_back(static_cast<char>(s & 0xff));
  }
  return bytes;
}

struct PcmAudio {
  std::uint32_t sample_rate = 0;
  std::vector<double> samples;  // mono mixdown, normalized to [-1, 1]
};

namespace detail {

inline std::uint32_t le32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}
inline std::uint16_t le16(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

}  // namespace detail

inline PcmAudio parse_wav(const std::string& data) {
  const auto* b = reinterpret_cast<const unsigned char*>(data.data());
  if (data.size() < 12 || std::memcmp(b, "RIFF", 4) != 0 || std::memcmp(b + 8, "WAVE", 4) != 0) {
    throw std::runtime_error("not a RIFF/WAVE file");
  }
  std::uint16_t format = 0, channels = 0, bits = 0;
  std::uint32_t rate = 0;
  const unsigned char* payload = nullptr;
  std::size_t payload_size = 0;
  std::size_t pos = 12;
  while (pos + 8 <= data.size()) {
    const std::uint32_t size = detail::le32(b + pos + 4);
    const std::size_t body = pos + 8;
    if (body + size > data.size()) throw std::runtime_error("truncated WAV chunk");
    if (std::memcmp(b + pos, "fmt ", 4) == 0) {
      if (size < 16) throw std::runtime_error("short fmt chunk");
      format = detail::le16(b + body);
      channels = detail::le16(b + body + 2);
      rate = detail::le32(b + body + 4);
      bits = detail::le16(b + body + 14);
      if (format == 0xFFFE && size >= 26) format = detail::le16(b + body + 24);  // WAVE_FORMAT_EXTENSIBLE
    } else if (std::memcmp(b + pos, "data", 4) == 0) {
      payload = b + body;
      payload_size = size;
    }
    pos = body + size + (size & 1u);
  }
  if (channels == 0 || rate == 0) throw std::runtime_error("WAV missing fmt chunk");
  if (payload == nullptr) throw std::runtime_error("WAV missing data chunk");
  const bool is_float = format == 3;
  if (!(format == 1 || is_float)) throw std::runtime_error("WAV is not linear PCM");
  if (is_float ? bits != 32 : (bits != 8 && bits != 16 && bits != 24 && bits != 32)) {
    throw std::runtime_error("unsupported WAV bit depth " + std::to_string(bits));
  }
  const std::size_t frame_bytes = static_cast<std::size_t>(bits / 8) * channels;
  const std::size_t frames = payload_size / frame_bytes;
  PcmAudio out;
  out.sample_rate = rate;
  out.samples.resize(frames);
  for (std::size_t f = 0; f < frames; ++f) {
    double acc = 0.0;
    for (std::size_t c = 0; c < channels; ++c) {
      const unsigned char* s = payload + f * frame_bytes + c * (bits / 8);
      double v = 0.0;
      switch (bits) {
        case 8: v = (static_cast<int>(s[0]) - 128) / 128.0; break;
        case 16: v = static_cast<std::int16_t>(detail::le16(s)) / 32768.0; break;
        case 24: {
          std::int32_t i = static_cast<std::int32_t>(s[0] | (s[1] << 8) | (s[2] << 16));
          if (i & 0x800000) i -= 0x1000000;
          v = i / 8388608.0;
          break;
        }
        default: {
          const std::uint32_t u = detail::le32(s);
          if (is_float) {
            float fl = 0.0f;
            std::memcpy(&fl, &u, sizeof fl);
            v = fl;
          } else {
            v = static_cast<std::int32_t>(u) / 2147483648.0;
          }
        }
      }
      acc += v;
    }
    out.samples[f] = std::clamp(acc / channels, -1.0, 1.0);
  }
  return out;
}

inline PcmAudio read_wav(const std::filesystem::path& path) { return parse_wav(read_file(path)); }

/// 16-bit mono PCM.
inline std::string encode_wav(const PcmAudio& audio) {
  std::string out;
  auto put32 = [&](std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
  };
  auto put16 = [&](std::uint16_t v) {
    out.push_back(static_cast<char>(v & 0xff));
    out.push_back(static_cast<char>(v >> 8));
  };
  const auto data_bytes = static_cast<std::uint32_t>(audio.samples.size() * 2);
  out += "RIFF";
  put32(36 + data_bytes);
  out += "WAVEfmt ";
  put32(16);
  put16(1);
  put16(1);
  put32(audio.sample_rate);
  put32(audio.sample_rate * 2);
  put16(2);
  put16(16);
  out += "data";
  put32(data_bytes);
  for (double s : audio.samples) {
    const double c = std::clamp(s, -1.0, 1.0);
    // same scale as the decoder; +1.0 saturates at 32767
    const long q = std::min(32767L, std::lround(c * 32768.0));
    put16(static_cast<std::uint16_t>(static_cast<std::int16_t>(q)));
  }
  return out;
}

}  // namespace n360::io
