#include <gtest/gtest.h>

#include <random>

#include "cpufp/dtw.hpp"
#include "cpufp/error.hpp"
#include "oracles/dtw_bruteforce.hpp"

namespace cpufp {
namespace {

CpuTimeSeries series(std::vector<double> v) { return CpuTimeSeries(std::move(v)); }

std::vector<double> values(const CpuTimeSeries& s) { return {s.samples().begin(), s.samples().end()}; }

std::vector<double> random_grid_series(std::mt19937_64& rng, std::size_t len) {
  std::uniform_int_distribution<int> level(0, 4);
  std::vector<double> v(len);
  for (auto& e : v) e = 0.25 * level(rng);
  return v;
}

TEST(PointwiseDistance, Examples) {
  EXPECT_EQ(pointwise_distance(0.5, 0.5), 0.0);
  EXPECT_NEAR(pointwise_distance(0.2, 0.9), 0.7, 1e-15);
  EXPECT_EQ(pointwise_distance(1.0, 0.0), 1.0);
  EXPECT_EQ(pointwise_distance(0.0, 1.0), 1.0);
}

TEST(DtwAlign, WorkedExample) {
  const std::vector<double> x = {0, 1, 2};
  const std::vector<double> y = {0, 2};
  const auto oracle = oracle::brute_force_dtw(x, y);
  EXPECT_EQ(oracle.cost, 1.0);
  const std::vector<std::pair<std::size_t, std::size_t>> expected_path = {{1, 1}, {2, 2}, {3, 2}};
  EXPECT_EQ(oracle.path, expected_path);

  const auto r = dtw_align(series(x), series(y));
  EXPECT_EQ(r.distance, 1.0);
  EXPECT_EQ(r.path, (WarpPath{{1, 1}, {2, 2}, {3, 2}}));
  EXPECT_EQ(values(r.expanded_reference), (std::vector<double>{0, 2, 2}));
}

TEST(DtwAlign, IdentityIsDiagonal) {
  const std::vector<double> x = {0.0, 0.3, 1.0, 0.6, 0.6, 0.2};
  const auto r = dtw_align(series(x), series(x));
  EXPECT_EQ(r.distance, 0.0);
  ASSERT_EQ(r.path.size(), x.size());
  for (std::size_t k = 0; k < x.size(); ++k) EXPECT_EQ(r.path[k], (PathStep{k + 1, k + 1}));
  EXPECT_EQ(values(r.expanded_reference), x);
}

TEST(DtwAlign, EmptySeries) {
  for (const auto& [a, b] : {std::pair{std::vector<double>{}, std::vector<double>{1.0}},
                             std::pair{std::vector<double>{1.0}, std::vector<double>{}}}) {
    try {
      dtw_align(series(a), series(b));
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), Errc::EmptySeries);
    }
  }
}

TEST(DtwAlign, QueryFixesOutputLength) {
  const auto r = dtw_align(series({0, 1}), series({0, 0.2, 0.5, 0.9, 1}));
  EXPECT_EQ(r.expanded_reference.size(), 2u);
  EXPECT_EQ(r.expanded_reference[1], 1.0);
  EXPECT_TRUE(is_valid_warp_path(r.path, 2, 5));
}

TEST(DtwAlign, MatchesExhaustiveEnumeration) {
  std::mt19937_64 rng(20110526);
  std::uniform_int_distribution<std::size_t> len(1, 6);
  for (int trial = 0; trial < 1500; ++trial) {
    const auto x = random_grid_series(rng, len(rng));
    const auto y = random_grid_series(rng, len(rng));
    const auto oracle = oracle::brute_force_dtw(x, y);
    const auto r = dtw_align(series(x), series(y));
    ASSERT_EQ(r.distance, oracle.cost) << "trial " << trial;
    ASSERT_EQ(r.path.size(), oracle.path.size()) << "trial " << trial;
    for (std::size_t k = 0; k < r.path.size(); ++k) {
      ASSERT_EQ(r.path[k].i, oracle.path[k].first);
      ASSERT_EQ(r.path[k].j, oracle.path[k].second);
    }
    ASSERT_EQ(values(r.expanded_reference), oracle::expand_along(oracle.path, y, x.size()));
  }
}

TEST(DtwAlign, Properties) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> len(1, 60);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<double> x(len(rng));
    std::vector<double> y(len(rng));
    for (auto& v : x) v = u(rng);
    for (auto& v : y) v = u(rng);
    const auto xy = dtw_align(series(x), series(y));
    const auto yx = dtw_align(series(y), series(x));
    EXPECT_EQ(xy.distance, yx.distance);
    EXPECT_GE(xy.distance, 0.0);
    EXPECT_TRUE(is_valid_warp_path(xy.path, x.size(), y.size()));
    EXPECT_TRUE(is_valid_warp_path(yx.path, y.size(), x.size()));
    EXPECT_EQ(xy.expanded_reference.size(), x.size());
    EXPECT_EQ(xy.expanded_reference[x.size() - 1], y.back());
    EXPECT_EQ(dtw_align(series(x), series(x)).distance, 0.0);
    EXPECT_EQ(dtw_distance(x, y), xy.distance);

    // path cost equals the reported distance
    double along = 0.0;
    for (const auto& s : xy.path) along += pointwise_distance(x[s.i - 1], y[s.j - 1]);
    EXPECT_NEAR(along, xy.distance, 1e-9);

    // appending a sample grows the matrix and keeps the distance non-negative
    auto longer = x;
    longer.push_back(u(rng));
    EXPECT_GT(longer.size() * y.size(), x.size() * y.size());
    EXPECT_GE(dtw_align(series(longer), series(y)).distance, 0.0);
  }
}

TEST(WarpPathValidity, RejectsBrokenPaths) {
  EXPECT_TRUE(is_valid_warp_path({{1, 1}, {2, 2}}, 2, 2));
  EXPECT_FALSE(is_valid_warp_path({}, 1, 1));
  EXPECT_FALSE(is_valid_warp_path({{1, 1}, {3, 2}}, 3, 2));
  EXPECT_FALSE(is_valid_warp_path({{1, 1}, {1, 1}, {2, 2}}, 2, 2));
  EXPECT_FALSE(is_valid_warp_path({{1, 1}, {2, 2}}, 2, 3));
  EXPECT_FALSE(is_valid_warp_path({{1, 2}, {2, 2}}, 2, 2));
}

ProfileEntry entry(std::string app, std::vector<double> v) {
  return ProfileEntry{std::move(app), ConfigParams{1, 1, 1, 1}, series(std::move(v))};
}

TEST(DtwDistanceMatrix, SingleIdenticalCell) {
  const std::vector<ProfileEntry> q = {entry("a", {0, 1, 0.5})};
  const auto m = dtw_distance_matrix(q, q, 1);
  ASSERT_EQ(m.cells.size(), 1u);
  EXPECT_EQ(m.at(0, 0).distance, 0.0);
  EXPECT_EQ(m.at(0, 0).path_length, 3u);
}

TEST(DtwDistanceMatrix, CellsEqualPairwiseAlignment) {
  const std::vector<ProfileEntry> q = {entry("a", {0, 1, 0.5}), entry("b", {1, 0, 0, 0.2})};
  const std::vector<ProfileEntry> r = {entry("c", {0, 0.4, 1}), entry("d", {1, 0.7})};
  const auto m = dtw_distance_matrix(q, r, 2);
  ASSERT_EQ(m.rows, 2u);
  ASSERT_EQ(m.cols, 2u);
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t j = 0; j < 2; ++j) {
      const auto a = dtw_align(q[i].series, r[j].series);
      EXPECT_EQ(m.at(i, j), (AlignmentSummary{a.distance, a.path.size()}));
    }
  }
}

TEST(DtwDistanceMatrix, IndependentOfThreadCount) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<ProfileEntry> q;
  std::vector<ProfileEntry> r;
  for (int k = 0; k < 7; ++k) {
    std::vector<double> a(20 + static_cast<std::size_t>(k));
    std::vector<double> b(35 - static_cast<std::size_t>(k));
    for (auto& v : a) v = u(rng);
    for (auto& v : b) v = u(rng);
    q.push_back(entry("q" + std::to_string(k), a));
    r.push_back(entry("r" + std::to_string(k), b));
  }
  const auto sequential = dtw_distance_matrix(q, r, 1);
  EXPECT_EQ(dtw_distance_matrix(q, r, 4), sequential);
  EXPECT_EQ(dtw_distance_matrix(q, r, 0), sequential);
}

TEST(DtwDistanceMatrix, EmptyEntryIsNamed) {
  const std::vector<ProfileEntry> q = {entry("a", {0, 1})};
  const std::vector<ProfileEntry> r = {entry("broken", {})};
  try {
    dtw_distance_matrix(q, r);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::EmptySeries);
    EXPECT_NE(std::string(e.what()).find("broken"), std::string::npos);
  }
}

}  // namespace
}  // namespace cpufp
