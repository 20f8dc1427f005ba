#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "n360/fixture.hpp"
#include "n360/ingest.hpp"
#include "support/temp_dir.hpp"

namespace n360 {
namespace {

namespace fs = std::filesystem;
using testing::TempDir;

std::vector<double> sine(double amplitude, double freq, double rate, double seconds) {
  std::vector<double> s(static_cast<std::size_t>(rate * seconds));
  for (std::size_t i = 0; i < s.size(); ++i) {
    s[i] = amplitude * std::sin(2.0 * std::numbers::pi * freq * static_cast<double>(i) / rate);
  }
  return s;
}

TEST(Loudness, FullScaleSineIsOneOverRootTwo) {
  const auto s = sine(1.0, 440.0, 8000.0, 3.0);
  const auto l = compute_loudness(s, 8000.0);
  ASSERT_EQ(l.values.size(), 30u);
  EXPECT_DOUBLE_EQ(l.sample_rate, 10.0);
  for (std::size_t k = 9; k < l.values.size(); ++k) EXPECT_NEAR(l.values[k], 0.70710678, 1e-3) << k;
}

TEST(Loudness, ConstantSignal) {
  const std::vector<double> s(16000, -0.5);
  const auto l = compute_loudness(s, 8000.0);
  for (double v : l.values) EXPECT_NEAR(v, 0.5, 1e-12);
}

TEST(Loudness, SilenceAndEmpty) {
  EXPECT_TRUE(compute_loudness(std::vector<double>{}, 8000.0).values.empty());
  for (double v : compute_loudness(std::vector<double>(8000, 0.0), 8000.0).values) EXPECT_EQ(v, 0.0);
  EXPECT_THROW(compute_loudness(std::vector<double>(10, 0.0), 0.0), ConfigError);
}

TEST(Loudness, ScalesLinearlyWithAmplitude) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0), c(0.0, 1.0);
  std::vector<double> s(24000);
  for (auto& x : s) x = u(rng);
  const auto base = compute_loudness(s, 8000.0);
  for (int trial = 0; trial < 20; ++trial) {
    const double k = c(rng);
    std::vector<double> scaled(s);
    for (auto& x : scaled) x *= k;
    const auto l = compute_loudness(scaled, 8000.0);
    ASSERT_EQ(l.values.size(), base.values.size());
    for (std::size_t i = 0; i < l.values.size(); ++i) EXPECT_NEAR(l.values[i], k * base.values[i], 1e-9);
  }
}

TEST(Hsv, PrimaryColors) {
  const auto red = rgb_to_hsv(1, 0, 0);
  EXPECT_DOUBLE_EQ(red[0], 0.0);
  EXPECT_DOUBLE_EQ(red[1], 1.0);
  EXPECT_DOUBLE_EQ(red[2], 1.0);
  EXPECT_NEAR(rgb_to_hsv(0, 1, 0)[0], 1.0 / 3.0, 1e-12);
  EXPECT_NEAR(rgb_to_hsv(0, 0, 1)[0], 2.0 / 3.0, 1e-12);
  const auto gray = rgb_to_hsv(0.4, 0.4, 0.4);
  EXPECT_EQ(gray[1], 0.0);
  EXPECT_NEAR(gray[2], 0.4, 1e-12);
}

FrameDescriptor flat(int index, double h, double s, double v, std::size_t n = 4) {
  return {index, n, 1, std::vector<std::array<double, 3>>(n, {h, s, v})};
}

TEST(Hsv, FrameDifferenceWrapsHue) {
  EXPECT_EQ(hsv_frame_difference(flat(0, 0.3, 0.5, 0.5), flat(1, 0.3, 0.5, 0.5)), 0.0);
  EXPECT_NEAR(hsv_frame_difference(flat(0, 0.95, 0.5, 0.5), flat(1, 0.05, 0.5, 0.5)), 0.1 / 3.0, 1e-12);
  EXPECT_NEAR(hsv_frame_difference(flat(0, 0.0, 0.0, 0.0), flat(1, 0.5, 1.0, 1.0)), 2.5 / 3.0, 1e-12);
  EXPECT_THROW(hsv_frame_difference(flat(0, 0, 0, 0, 4), flat(1, 0, 0, 0, 5)), ContractError);
}

TEST(SceneBoundaries, CutsAboveThreshold) {
  std::vector<FrameDescriptor> frames;
  for (int i = 0; i < 10; ++i) frames.push_back(flat(i, 0.1, 0.5, i < 6 ? 0.2 : 0.9));
  const auto cuts = detect_scene_boundaries(frames);
  EXPECT_EQ(cuts, (std::vector<double>{0.0, 6.0}));
  // a difference of exactly the threshold is not a cut
  std::vector<FrameDescriptor> edge{flat(0, 0, 0, 0.0), flat(1, 0, 0, 0.33)};
  EXPECT_EQ(detect_scene_boundaries(edge, 0.11).size(), 1u);
  EXPECT_THROW(detect_scene_boundaries({flat(0, 0, 0, 0)}), ContractError);
}

TEST(Netpbm, RoundTrip16Bit) {
  io::Raster r{3, 2, 1, 1000, {0, 1, 999, 1000, 256, 7}};
  const auto back = io::parse_netpbm(io::encode_netpbm(r));
  EXPECT_EQ(back.width, 3u);
  EXPECT_EQ(back.maxval, 1000u);
  EXPECT_EQ(back.samples, r.samples);
}

TEST(Netpbm, AsciiWithComments) {
  const auto r = io::parse_netpbm("P2\n# made by hand\n2 1\n# max\n15\n3 15\n");
  EXPECT_EQ(r.channels, 1u);
  EXPECT_EQ(r.samples, (std::vector<std::uint16_t>{3, 15}));
  EXPECT_THROW(io::parse_netpbm("P2\n2 1\n15\n3 16\n"), std::runtime_error);
  EXPECT_THROW(io::parse_netpbm("P7\n"), std::runtime_error);
  EXPECT_THROW(io::parse_netpbm("P5\n4 4\n255\nab"), std::runtime_error);
}

TEST(Wav, RoundTripWithin16BitQuantization) {
  io::PcmAudio a{16000, sine(0.8, 300.0, 16000.0, 0.1)};
  const auto back = io::parse_wav(io::encode_wav(a));
  EXPECT_EQ(back.sample_rate, 16000u);
  ASSERT_EQ(back.samples.size(), a.samples.size());
  for (std::size_t i = 0; i < a.samples.size(); ++i) EXPECT_NEAR(back.samples[i], a.samples[i], 0.5 / 32768.0 + 1e-12);
  EXPECT_THROW(io::parse_wav("RIFF\0\0\0\0WAVE"), std::runtime_error);
}

class DeskProject : public ::testing::Test {
 protected:
  TempDir dir{"ingest"};
};

TEST_F(DeskProject, LoadsEveryInput) {
  const auto manifest = fixture::write_desk_fixture(dir.path());
  const auto p = load_project(manifest);
  EXPECT_EQ(p.grid.frame_count, 120);
  EXPECT_EQ(p.grid.saliency_width, 64u);
  ASSERT_EQ(p.saliency.size(), 120u);
  EXPECT_EQ(p.saliency[0].height, 32u);
  EXPECT_NEAR(p.saliency[0].max_value(), 1.0, 0.05);  // peak falls between pixel centers
  ASSERT_EQ(p.transcript.size(), 1u);
  EXPECT_EQ(p.transcript[0].start, 35.0);
  ASSERT_EQ(p.loudness.values.size(), 1200u);
  EXPECT_NEAR(p.loudness.values[600], 0.25 / std::sqrt(2.0), 1e-3);
  EXPECT_EQ(p.frames.size(), 120u);
  EXPECT_EQ(p.embeddings.size(), 240u);
  EXPECT_EQ(detect_scene_boundaries(p.frames), (std::vector<double>{0.0, 40.0, 80.0}));
}

TEST_F(DeskProject, LoudnessRecordsInsteadOfAudio) {
  fixture::DeskOptions opt;
  opt.loudness_records = true;
  const auto p = load_project(fixture::write_desk_fixture(dir.path(), opt));
  ASSERT_EQ(p.loudness.values.size(), 1200u);
  EXPECT_NEAR(p.loudness.sample_rate, 10.0, 1e-9);
  EXPECT_EQ(p.loudness.values[17], 0.2);
}

TEST_F(DeskProject, JsonRoundTrip) {
  const auto p = load_project(fixture::write_desk_fixture(dir.path()));
  const json j = p;
  const auto back = j.get<ProjectInputs>();
  EXPECT_EQ(json(back), j);
}

LoadError expect_load_error(const fs::path& manifest) {
  try {
    load_project(manifest);
  } catch (const LoadError& e) {
    return e;
  }
  ADD_FAILURE() << "expected a LoadError";
  return LoadError("", "");
}

json read_manifest(const fs::path& p) { return json::parse(io::read_file(p)); }

TEST_F(DeskProject, MissingTranscriptNamesTheInput) {
  const auto m = fixture::write_desk_fixture(dir.path());
  auto j = read_manifest(m);
  j.erase("transcript");
  io::write_file(m, j.dump());
  const auto e = expect_load_error(m);
  EXPECT_EQ(e.input(), "transcript");
  EXPECT_NE(std::string(e.what()).find("transcript"), std::string::npos);
}

TEST_F(DeskProject, SaliencyAspectChecked) {
  const auto m = fixture::write_desk_fixture(dir.path());
  io::Raster wide{96, 32, 1, 255, std::vector<std::uint16_t>(96 * 32, 0)};
  io::write_file(dir / "saliency/000003.pgm", io::encode_netpbm(wide));
  const auto e = expect_load_error(m);
  EXPECT_EQ(e.input(), "saliency");
  EXPECT_NE(std::string(e.what()).find("saliency aspect"), std::string::npos);
}

TEST_F(DeskProject, MissingSaliencyDirectory) {
  const auto m = fixture::write_desk_fixture(dir.path());
  fs::remove_all(dir / "saliency");
  EXPECT_EQ(expect_load_error(m).input(), "saliency");
}

TEST_F(DeskProject, OneFrameShortIsAligned) {
  const auto m = fixture::write_desk_fixture(dir.path());
  fs::remove(dir / "saliency/000119.pgm");
  fs::remove(dir / "frames/000119.ppm");
  const auto p = load_project(m);
  ASSERT_EQ(p.saliency.size(), 120u);
  EXPECT_EQ(p.saliency[119].frame_index, 119);
  EXPECT_EQ(p.saliency[119].values, p.saliency[118].values);
  EXPECT_EQ(p.frames.size(), 120u);
}

TEST_F(DeskProject, GridMismatchRejected) {
  const auto m = fixture::write_desk_fixture(dir.path());
  for (int f = 110; f < 120; ++f) fs::remove(dir / ("saliency/" + fixture::frame_name(f, "pgm")));
  const auto e = expect_load_error(m);
  EXPECT_EQ(e.input(), "saliency");
  EXPECT_NE(std::string(e.what()).find("grid mismatch"), std::string::npos);
}

TEST_F(DeskProject, NonUnitEmbeddingRejected) {
  const auto m = fixture::write_desk_fixture(dir.path());
  auto doc = json::parse(io::read_file(dir / "embeddings.json"));
  doc["entries"][5]["embedding"][0] = 2.0;
  io::write_file(dir / "embeddings.json", doc.dump());
  EXPECT_EQ(expect_load_error(m).input(), "embeddings");
}

TEST_F(DeskProject, OverlappingTranscriptRejected) {
  const auto m = fixture::write_desk_fixture(dir.path());
  io::write_file(dir / "transcript.json", R"([{"start": 1, "end": 5}, {"start": 4, "end": 6}])");
  EXPECT_EQ(expect_load_error(m).input(), "transcript");
  io::write_file(dir / "transcript.json", R"([{"start": 5, "end": 5}])");
  EXPECT_EQ(expect_load_error(m).input(), "transcript");
  io::write_file(dir / "transcript.json", "[{\"start\": 1,");
  EXPECT_EQ(expect_load_error(m).input(), "transcript");
}

TEST_F(DeskProject, NonUnitFrameRateRejected) {
  const auto m = fixture::write_desk_fixture(dir.path());
  auto j = read_manifest(m);
  j["fps"] = 30;
  io::write_file(m, j.dump());
  EXPECT_EQ(expect_load_error(m).input(), "manifest");
}

TEST(Ingest, MissingManifest) {
  EXPECT_THROW(load_project("/nonexistent/manifest.json"), LoadError);
}

}  // namespace
}  // namespace n360
