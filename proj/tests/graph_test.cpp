#include <gtest/gtest.h>

#include <random>

#include "n360/graph.hpp"
#include "support/graphs.hpp"
#include "support/oracles.hpp"
#include "support/random.hpp"

namespace n360 {
namespace {

using testing::tiny_graph;

bool has_issue(const std::vector<ValidationIssue>& issues, const std::string& needle) {
  return std::any_of(issues.begin(), issues.end(), [&](const ValidationIssue& i) {
    return i.message.find(needle) != std::string::npos || i.path.find(needle) != std::string::npos;
  });
}

TEST(Graph, TinyGraphIsValid) {
  for (int s = 1; s <= 4; ++s) {
    for (int b = 1; b <= 5; ++b) EXPECT_TRUE(validate(tiny_graph(s, b)).empty()) << s << "x" << b;
  }
}

TEST(Graph, EmitParseFixedPoint) {
  const auto g = tiny_graph(3, 3);
  const std::string bytes = emit(g);
  EXPECT_EQ(emit(parse_graph(bytes)), bytes);
  EXPECT_EQ(bytes.back(), '\n');
  EXPECT_NE(bytes.find("\"version\": \"n360.branch-graph/1\""), std::string::npos);
}

TEST(Graph, RandomPathsSurviveRoundTrip) {
  std::mt19937_64 rng(4242);
  for (int trial = 0; trial < 50; ++trial) {
    auto g = tiny_graph(2, 2);
    for (auto& s : g.scenes) {
      for (auto& b : s.branches) {
        for (auto& d : b.path.directions) d = testing::random_direction(rng);
      }
    }
    const auto bytes = emit(g);
    const auto once = parse_graph(bytes);
    EXPECT_EQ(emit(once), bytes) << "trial " << trial;
    for (std::size_t i = 0; i < g.scenes[0].branches[0].path.size(); ++i) {
      EXPECT_LT(angular_distance(once.scenes[0].branches[0].path.directions[i], g.scenes[0].branches[0].path.directions[i]),
                1e-6);
    }
  }
}

TEST(Graph, DanglingPointIdNamed) {
  auto g = tiny_graph(3, 2);
  g.scenes[1].start_point = 7;
  const auto issues = validate(g);
  EXPECT_TRUE(has_issue(issues, "dangling branch point id 7"));
  EXPECT_THROW(emit(g), ValidationError);
}

TEST(Graph, NoScenes) {
  auto g = tiny_graph(1, 1);
  g.scenes.clear();
  const auto issues = validate(g);
  ASSERT_FALSE(issues.empty());
  EXPECT_TRUE(has_issue(issues, "no scenes"));
}

TEST(Graph, DefaultBranchOutOfRange) {
  auto g = tiny_graph(2, 3);
  g.scenes[0].default_branch = 7;
  EXPECT_TRUE(has_issue(validate(g), "scenes[0].default_branch"));
}

TEST(Graph, DefaultBranchMustBeMaxSocial) {
  auto g = tiny_graph(1, 3);
  g.scenes[0].default_branch = 2;
  EXPECT_TRUE(has_issue(validate(g), "highest social"));
}

TEST(Graph, PathMissingFrame) {
  auto g = tiny_graph(2, 2);
  g.scenes[1].branches[1].path.directions.pop_back();
  EXPECT_TRUE(has_issue(validate(g), "branch path missing a frame"));
}

TEST(Graph, OtherInvariantsReported) {
  {
    auto g = tiny_graph(3, 2);
    g.branch_points[1].time = 50.0;  // 10 s after the first
    EXPECT_TRUE(has_issue(validate(g), "min_interval"));
  }
  {
    auto g = tiny_graph(2, 2);
    g.scenes[0].diversity.overall += 0.01;
    EXPECT_TRUE(has_issue(validate(g), "weighted sum"));
  }
  {
    auto g = tiny_graph(2, 3);
    g.scenes[0].selection_trace[2].breakdown = {0.0, 0.0, 0.1, 0.1 / 3.0};
    EXPECT_TRUE(has_issue(validate(g), "lambda"));
  }
  {
    auto g = tiny_graph(2, 2);
    g.scenes[0].branches[0].narration.text = std::string(500, 'x') + " y z";
    g.scenes[0].branches[0].narration.word_budget = 2;
    EXPECT_TRUE(has_issue(validate(g), "word_budget"));
    EXPECT_TRUE(has_issue(validate(g), "exceeds word budget"));
  }
  {
    auto g = tiny_graph(2, 2);
    g.cues.pop_back();
    EXPECT_TRUE(has_issue(validate(g), "one cue per scene branch"));
  }
  {
    auto g = tiny_graph(2, 2);
    g.scenes[1].title = "Renamed";
    EXPECT_TRUE(has_issue(validate(g), "scene_title"));
  }
  {
    auto g = tiny_graph(2, 2);
    g.scenes[1].first_frame += 1;
    EXPECT_TRUE(has_issue(validate(g), "tile"));
  }
  {
    auto g = tiny_graph(1, 2);
    g.version = "n360.branch-graph/0";
    EXPECT_TRUE(has_issue(validate(g), "version"));
  }
}

TEST(Graph, ValidateDocumentNeverThrows) {
  for (const char* text : {"", "{", "[]", "{\"version\": 3}", "null", "{\"scenes\": []}"}) {
    std::vector<ValidationIssue> issues;
    EXPECT_NO_THROW(issues = validate_document(text));
    EXPECT_FALSE(issues.empty()) << text;
  }
  EXPECT_TRUE(validate_document(emit(tiny_graph(2, 2))).empty());
  EXPECT_THROW(parse_graph("{"), ValidationError);
}

TEST(Graph, MalformedPathEntry) {
  auto doc = graph_to_json(tiny_graph(1, 1));
  doc["scenes"][0]["branches"][0]["path"][3] = nlohmann::json::array({3, 10.0});
  EXPECT_FALSE(validate_document(doc.dump()).empty());
  doc["scenes"][0]["branches"][0]["path"][3] = nlohmann::json::array({3, 10.0, 95.0});
  EXPECT_FALSE(validate_document(doc.dump()).empty());
}

TEST(CanonicalDump, NumbersAndLayout) {
  EXPECT_EQ(detail::format_number(-0.0), "0");
  EXPECT_EQ(detail::format_number(40.0), "40");
  EXPECT_EQ(detail::format_number(0.1), "0.1");
  EXPECT_EQ(detail::format_number(1.0 / 3.0), "0.333333333");
  EXPECT_EQ(detail::format_number(123456789012.0), "1.23456789e+11");
  EXPECT_THROW(detail::format_number(std::numeric_limits<double>::quiet_NaN()), DomainError);
  const nlohmann::json j = {{"b", {1, 2.5, "x"}}, {"a", {{"z", nullptr}, {"y", true}}}, {"c", nlohmann::json::array()}};
  EXPECT_EQ(canonical_dump(j),
            "{\n  \"a\": {\n    \"y\": true,\n    \"z\": null\n  },\n  \"b\": [1, 2.5, \"x\"],\n  \"c\": []\n}\n");
}

TEST(CanonicalDump, InsertionOrderIrrelevant) {
  nlohmann::json a, b;
  a["x"] = 1;
  a["m"] = {{"q", 0.5}, {"p", -0.0}};
  a["b"] = "s";
  b["b"] = "s";
  b["m"] = {{"p", 0.0}, {"q", 0.5}};
  b["x"] = 1;
  EXPECT_EQ(canonical_dump(a), canonical_dump(b));
}

TEST(Jaccard, Examples) {
  EXPECT_EQ(jaccard_agreement({10, 45, 80}, {10, 45, 80}).value, 1.0);
  EXPECT_EQ(jaccard_agreement({0, 100}, {500, 600}).value, 0.0);
  EXPECT_NEAR(jaccard_agreement({0, 100}, {3, 200}).value, 1.0 / 3.0, 1e-12);
  EXPECT_EQ(jaccard_agreement({}, {}).value, 1.0);
  EXPECT_EQ(jaccard_agreement({}, {5}).value, 0.0);
  EXPECT_EQ(jaccard_agreement({0, 10}, {5}, 5).value, 0.5);  // one-to-one: 5 matches only one of them
}

TEST(Jaccard, PerfectMatchingFoundWhereClosestFirstFails) {
  // closest-first would pair 5-4 and strand 0 and 9
  const auto r = jaccard_agreement({0, 5}, {4, 9}, 5);
  EXPECT_EQ(r.value, 1.0);
  EXPECT_EQ(r.matches.size(), 2u);
}

TEST(Jaccard, Preconditions) {
  EXPECT_THROW(jaccard_agreement({5, 5}, {1}), ContractError);
  EXPECT_THROW(jaccard_agreement({5, 1}, {1}), ContractError);
  EXPECT_THROW(jaccard_agreement({1}, {1}, -1), ConfigError);
}

std::vector<double> random_times(std::mt19937_64& rng, int max_n) {
  std::uniform_int_distribution<int> n(0, max_n);
  std::uniform_int_distribution<int> t(0, 120);
  std::set<double> s;
  for (int i = n(rng); i > 0; --i) s.insert(t(rng));
  return {s.begin(), s.end()};
}

TEST(Jaccard, PropertiesAgainstMaximumMatching) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 2000; ++trial) {
    const auto a = random_times(rng, 7), b = random_times(rng, 7);
    const double tol = static_cast<double>(trial % 12);
    const auto r = jaccard_agreement(a, b, tol);
    const std::size_t m = oracle::max_matching(a, b, tol);
    EXPECT_EQ(r.matches.size(), m) << "trial " << trial;
    for (const auto& [x, y] : r.matches) EXPECT_LE(std::abs(x - y), tol);
    EXPECT_EQ(r.value, jaccard_agreement(b, a, tol).value);
    const bool perfect = a.size() == b.size() && m == a.size();
    EXPECT_EQ(r.value == 1.0, perfect);
    EXPECT_GE(r.value, 0.0);
    EXPECT_LE(r.value, 1.0);
    if (tol > 0) {
      EXPECT_LE(jaccard_agreement(a, b, tol - 1).value, r.value);
    }
    EXPECT_EQ(jaccard_agreement(a, a, tol).value, 1.0);
  }
}

}  // namespace
}  // namespace n360
