#include <gtest/gtest.h>

#include <random>

#include "n360/branch_generator.hpp"
#include "n360/fixture.hpp"
#include "support/random.hpp"
#include "support/synthetic.hpp"
#include "support/temp_dir.hpp"

namespace n360 {
namespace {

using testing::gaussian_frame;
using testing::Peak;

SceneSegment segment_of(int first, int last) {
  SceneSegment s;
  s.first_frame = first;
  s.last_frame = last;
  s.start_time = first;
  s.end_time = last + 1;
  return s;
}

TEST(Segments, TileTheGrid) {
  GridInfo grid;
  grid.duration = 120;
  grid.frame_count = 120;
  const std::vector<BranchPoint> pts{{0, 45.0, PointSource::shifted}, {1, 80.5, PointSource::scene_cut}};
  const auto segs = make_segments(pts, grid);
  ASSERT_EQ(segs.size(), 3u);
  EXPECT_EQ(segs[0].first_frame, 0);
  EXPECT_EQ(segs[0].last_frame, 44);
  EXPECT_FALSE(segs[0].start_point.has_value());
  EXPECT_EQ(segs[0].end_point, 0);
  EXPECT_EQ(segs[1].first_frame, 45);
  EXPECT_EQ(segs[1].last_frame, 80);
  EXPECT_EQ(segs[1].start_time, 45.0);
  EXPECT_EQ(segs[2].first_frame, 81);
  EXPECT_EQ(segs[2].last_frame, 119);
  EXPECT_EQ(segs[2].end_time, 120.0);
  EXPECT_FALSE(segs[2].end_point.has_value());
  EXPECT_EQ(make_segments({}, grid).size(), 1u);
}

TEST(ExtractDirections, BlobAtQuarterWidth) {
  // continuous x = W/4 is yaw -90; the blob is symmetric about it
  const auto f = gaussian_frame(0, 128, {{dir_from_angles(-90, 0)}});
  const auto dirs = extract_viewing_directions(f);
  ASSERT_EQ(dirs.size(), 1u);
  EXPECT_NEAR(dirs[0].yaw(), -90.0, 2.0);
  EXPECT_NEAR(dirs[0].pitch(), 0.0, 2.0);
}

TEST(ExtractDirections, TwoBlobsTwoDirections) {
  const auto f = gaussian_frame(0, 64, {{dir_from_angles(-100, 10)}, {dir_from_angles(60, -20), 0.8}});
  const auto dirs = extract_viewing_directions(f);
  ASSERT_EQ(dirs.size(), 2u);
  EXPECT_LT(angular_distance(dirs[0], dir_from_angles(-100, 10)), 4.0);
  EXPECT_LT(angular_distance(dirs[1], dir_from_angles(60, -20)), 4.0);
}

TEST(ExtractDirections, ZeroMapIsEmpty) {
  SaliencyFrame f{0, 64, 32, std::vector<double>(64 * 32, 0.0)};
  EXPECT_TRUE(extract_viewing_directions(f).empty());
}

TEST(ExtractDirections, BlobAcrossSeamIsOneRegion) {
  const auto f = gaussian_frame(0, 64, {{dir_from_angles(180, 0)}});
  const auto dirs = extract_viewing_directions(f);
  ASSERT_EQ(dirs.size(), 1u);
  EXPECT_LT(angular_distance(dirs[0], dir_from_angles(180, 0)), 2.0);
}

TEST(ExtractDirections, TinyRegionsIgnored) {
  SaliencyFrame f{0, 64, 32, std::vector<double>(64 * 32, 0.0)};
  f.values[10 * 64 + 10] = 1.0;  // 1 pixel < 0.1% of 2048
  EXPECT_TRUE(extract_viewing_directions(f).empty());
  f.values[10 * 64 + 11] = 1.0;
  f.values[10 * 64 + 12] = 1.0;
  EXPECT_EQ(extract_viewing_directions(f).size(), 1u);
}

TEST(ClusterDirections, CloseDirectionsMergeOnBisector) {
  const auto c = cluster_directions({dir_from_angles(0, 0), dir_from_angles(10, 0)});
  ASSERT_EQ(c.size(), 1u);
  EXPECT_NEAR(c[0].yaw(), 5.0, 1e-9);
  EXPECT_NEAR(c[0].pitch(), 0.0, 1e-9);
}

TEST(ClusterDirections, FarDirectionsUnchanged) {
  const auto a = dir_from_angles(0, 0), b = dir_from_angles(90, 0);
  const auto c = cluster_directions({a, b});
  ASSERT_EQ(c.size(), 2u);
  EXPECT_LT(angular_distance(c[0], a), 1e-9);
  EXPECT_LT(angular_distance(c[1], b), 1e-9);
  EXPECT_TRUE(cluster_directions({}).empty());
}

TEST(ClusterDirections, CentroidLinkageMergesClosestPairFirst) {
  // 0 and 20 merge first (centroid 10); 45 is then 35 away and stays apart.
  const auto c = cluster_directions({dir_from_angles(0, 0), dir_from_angles(20, 0), dir_from_angles(45, 0)});
  ASSERT_EQ(c.size(), 2u);
  EXPECT_NEAR(c[0].yaw(), 10.0, 1e-9);
  EXPECT_NEAR(c[1].yaw(), 45.0, 1e-9);
}

TEST(ClusterDirections, NoPairWithinMergeAngle) {
  std::mt19937_64 rng(31);
  std::uniform_int_distribution<int> count(0, 14);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<Direction> dirs;
    for (int i = count(rng); i > 0; --i) dirs.push_back(testing::random_direction(rng));
    const auto c = cluster_directions(dirs, 30.0);
    EXPECT_LE(c.size(), dirs.size());
    for (std::size_t i = 0; i < c.size(); ++i) {
      for (std::size_t j = i + 1; j < c.size(); ++j) EXPECT_GT(angular_distance(c[i], c[j]), 30.0);
    }
  }
}

TEST(LinkPaths, FollowsDrift) {
  std::vector<std::vector<Direction>> per_frame;
  for (int f = 0; f < 10; ++f) per_frame.push_back({dir_from_angles(5.0 * f, 0)});
  const auto linked = link_paths(per_frame, segment_of(0, 9));
  ASSERT_EQ(linked.paths.size(), 1u);
  for (int f = 0; f < 10; ++f) EXPECT_NEAR(linked.paths[0].directions[static_cast<std::size_t>(f)].yaw(), 5.0 * f, 1e-9);
}

TEST(LinkPaths, ParallelTracksStaySeparate) {
  std::vector<std::vector<Direction>> per_frame;
  for (int f = 0; f < 12; ++f) {
    // order swapped on odd frames so index order cannot carry the track
    const auto a = dir_from_angles(5.0 * f, 0), b = dir_from_angles(90 + 5.0 * f, 0);
    per_frame.push_back(f % 2 ? std::vector<Direction>{b, a} : std::vector<Direction>{a, b});
  }
  const auto linked = link_paths(per_frame, segment_of(20, 31));
  ASSERT_EQ(linked.paths.size(), 2u);
  EXPECT_EQ(linked.seed_frame, 20);
  for (int f = 0; f < 12; ++f) {
    EXPECT_NEAR(linked.paths[0].directions[static_cast<std::size_t>(f)].yaw(), 5.0 * f, 1e-9);
    EXPECT_NEAR(linked.paths[1].directions[static_cast<std::size_t>(f)].yaw(), 90.0 + 5.0 * f, 1e-9);
  }
  EXPECT_EQ(linked.paths[0].start_frame, 20);
}

TEST(LinkPaths, HoldsSeedDirectionsThroughEmptyFrames) {
  std::vector<std::vector<Direction>> per_frame(6);
  per_frame[3] = {dir_from_angles(10, 10), dir_from_angles(-120, 0)};
  const auto linked = link_paths(per_frame, segment_of(0, 5));
  EXPECT_EQ(linked.seed_frame, 3);
  ASSERT_EQ(linked.paths.size(), 2u);
  for (const auto& p : linked.paths) {
    for (const auto& d : p.directions) EXPECT_EQ(d, p.directions[3]);
  }
}

TEST(LinkPaths, EmptySegmentIsDegenerate) {
  const auto linked = link_paths(std::vector<std::vector<Direction>>(4), segment_of(0, 3));
  EXPECT_TRUE(linked.degenerate);
  ASSERT_EQ(linked.paths.size(), 1u);
  for (const auto& d : linked.paths[0].directions) EXPECT_EQ(d, dir_from_angles(0, 0));
}

TEST(LinkPaths, SeedIsEarliestFrameWithMostDirections) {
  std::vector<std::vector<Direction>> per_frame(5);
  per_frame[1] = {dir_from_angles(0, 0), dir_from_angles(100, 0)};
  per_frame[3] = {dir_from_angles(0, 0), dir_from_angles(100, 0)};
  EXPECT_EQ(link_paths(per_frame, segment_of(0, 4)).seed_frame, 1);
}

TEST(LinkPaths, EquidistantTieGoesToLowestIndex) {
  std::vector<std::vector<Direction>> per_frame{{dir_from_angles(0, 0)}, {dir_from_angles(20, 0), dir_from_angles(-20, 0)}};
  EXPECT_NEAR(link_paths(per_frame, segment_of(0, 1)).paths[0].directions[1].yaw(), 20.0, 1e-9);
  std::swap(per_frame[1][0], per_frame[1][1]);
  EXPECT_NEAR(link_paths(per_frame, segment_of(0, 1)).paths[0].directions[1].yaw(), -20.0, 1e-9);
}

// Every step a path takes is the minimum available step from where it stands,
// checked by enumerating all options on small random segments.
TEST(LinkPaths, StepsAreMinimalAgainstBruteForce) {
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<int> frames(1, 10), count(0, 3);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = frames(rng);
    std::vector<std::vector<Direction>> per_frame(static_cast<std::size_t>(n));
    for (auto& opts : per_frame) {
      for (int i = count(rng); i > 0; --i) opts.push_back(testing::random_direction(rng));
    }
    const auto linked = link_paths(per_frame, segment_of(0, n - 1));
    const auto seed = static_cast<std::size_t>(linked.seed_frame);
    std::size_t max_count = 0;
    for (const auto& o : per_frame) max_count = std::max(max_count, o.size());
    EXPECT_LE(linked.paths.size(), std::max<std::size_t>(max_count, 1));
    if (linked.degenerate) continue;
    for (const auto& p : linked.paths) {
      ASSERT_EQ(p.size(), static_cast<std::size_t>(n));
      for (std::size_t f = 0; f < p.size(); ++f) {
        if (f == seed) continue;
        const std::size_t from = f > seed ? f - 1 : f + 1;
        const auto& here = p.directions[f];
        const auto& prev = p.directions[from];
        if (per_frame[f].empty()) {
          EXPECT_EQ(here, prev);
          continue;
        }
        double best = 1e9;
        bool member = false;
        for (const auto& o : per_frame[f]) {
          best = std::min(best, angular_distance(prev, o));
          member |= o == here;
        }
        EXPECT_TRUE(member);
        EXPECT_NEAR(angular_distance(prev, here), best, 1e-9);
      }
    }
    for (std::size_t i = 0; i < linked.paths.size(); ++i) {
      for (std::size_t j = i + 1; j < linked.paths.size(); ++j) {
        double widest = 0.0;
        for (int f = 0; f < n; ++f) {
          widest = std::max(widest, angular_distance(linked.paths[i].directions[static_cast<std::size_t>(f)],
                                                     linked.paths[j].directions[static_cast<std::size_t>(f)]));
        }
        EXPECT_GE(widest, 1.0);
      }
    }
  }
}

ProjectInputs synthetic_inputs(int frames, const std::vector<std::vector<Peak>>& peaks_per_frame) {
  ProjectInputs p;
  p.grid.frame_count = frames;
  p.grid.duration = frames;
  p.grid.saliency_width = 64;
  p.grid.saliency_height = 32;
  p.grid.embedding_dim = 2;
  for (int f = 0; f < frames; ++f) {
    const auto& peaks = peaks_per_frame[static_cast<std::size_t>(f) % peaks_per_frame.size()];
    p.saliency.push_back(gaussian_frame(f, 64, peaks));
  }
  return p;
}

TEST(BuildCandidates, StaticBlobGivesOneConstantPath) {
  auto inputs = synthetic_inputs(8, {{{dir_from_angles(30, 0)}}});
  const auto cands = build_candidates(segment_of(0, 7), inputs);
  ASSERT_EQ(cands.size(), 1u);
  for (const auto& d : cands[0].path.directions) EXPECT_LT(angular_distance(d, cands[0].path.directions[0]), 1e-6);
  EXPECT_FALSE(cands[0].degenerate);
  EXPECT_FALSE(cands[0].has_embeddings());
}

TEST(BuildCandidates, EmptySaliencyFallsBack) {
  ProjectInputs inputs;
  for (int f = 0; f < 4; ++f) inputs.saliency.push_back({f, 64, 32, std::vector<double>(64 * 32, 0.0)});
  const auto cands = build_candidates(segment_of(0, 3), inputs);
  ASSERT_EQ(cands.size(), 1u);
  EXPECT_TRUE(cands[0].degenerate);
}

TEST(BuildCandidates, ViewportsFollowPathAndEmbeddingsAttach) {
  auto inputs = synthetic_inputs(6, {{{dir_from_angles(-60, 0)}, {dir_from_angles(90, 0)}}});
  for (int f = 0; f < 6; ++f) {
    inputs.embeddings.push_back({f, dir_from_angles(-60, 0), "left thing", {1.0, 0.0}});
    inputs.embeddings.push_back({f, dir_from_angles(90, 0), "right thing", {0.0, 1.0}});
  }
  const auto cands = build_candidates(segment_of(0, 5), inputs);
  ASSERT_EQ(cands.size(), 2u);
  for (const auto& c : cands) {
    ASSERT_EQ(c.viewport_track.size(), c.path.size());
    for (std::size_t f = 0; f < c.path.size(); ++f) {
      EXPECT_EQ(c.viewport_track[f].center, c.path.directions[f]);
      EXPECT_EQ(c.viewport_track[f].h_fov, 120.0);
    }
    EXPECT_TRUE(c.has_embeddings());
  }
  EXPECT_EQ(cands[0].captions[0], "left thing");
  EXPECT_EQ(cands[1].captions[3], "right thing");
}

TEST(EmbeddingLookup, NearestFrameFallback) {
  const std::vector<EmbeddingEntry> entries{{2, dir_from_angles(0, 0), "two", {1.0}},
                                            {6, dir_from_angles(0, 0), "six", {1.0}}};
  const EmbeddingIndex idx(entries);
  EXPECT_EQ(idx.nearest(0, dir_from_angles(0, 0))->caption, "two");
  EXPECT_EQ(idx.nearest(4, dir_from_angles(0, 0))->caption, "two");  // tie goes earlier
  EXPECT_EQ(idx.nearest(5, dir_from_angles(0, 0))->caption, "six");
  EXPECT_EQ(idx.nearest(9, dir_from_angles(0, 0))->caption, "six");
  EXPECT_EQ(EmbeddingIndex({}).nearest(0, dir_from_angles(0, 0)), nullptr);
}

TEST(BuildCandidates, DeskSceneHasBothBlobs) {
  testing::TempDir dir("gen");
  const auto inputs = load_project(fixture::write_desk_fixture(dir.path()));
  for (const auto& seg : {segment_of(0, 44), segment_of(45, 79), segment_of(80, 119)}) {
    const auto cands = build_candidates(seg, inputs);
    ASSERT_EQ(cands.size(), 2u);
    const int mid = (seg.first_frame + seg.last_frame) / 2;
    for (std::size_t b = 0; b < 2; ++b) {
      EXPECT_LT(angular_distance(cands[b].path.at_frame(mid), fixture::desk_blobs()[b].center(mid)), 6.0);
    }
  }
}

}  // namespace
}  // namespace n360
