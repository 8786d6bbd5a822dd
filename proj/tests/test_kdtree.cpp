#include "dustradar/kdtree.hpp"

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "dustradar/error.hpp"
#include "test_helpers.hpp"

namespace dustradar {
namespace {

Frame frame_of(std::vector<Vec3> pts) {
  Frame f;
  for (Vec3 p : pts) f.points.push_back(from_cartesian(p, 0, 0));
  return f;
}

TEST(KdTree, EmptyFrame) {
  const KdTree t = build_kdtree(Frame{});
  EXPECT_EQ(t.size(), 0u);
  EXPECT_TRUE(t.radius_neighbors({0, 0, 0}, 100.0).empty());
}

TEST(KdTree, SinglePoint) {
  const KdTree t = build_kdtree(frame_of({{0, 0, 0}}));
  EXPECT_EQ(t.radius_neighbors({0, 0, 0}, 0.1), std::vector<std::size_t>{0});
}

TEST(KdTree, ZeroRadiusReturnsExactDuplicates) {
  const KdTree t = build_kdtree(frame_of({{1, 2, 3}, {4, 5, 6}, {1, 2, 3}}));
  EXPECT_EQ(t.radius_neighbors({1, 2, 3}, 0.0), (std::vector<std::size_t>{0, 2}));
}

TEST(KdTree, BoundaryIsInclusive) {
  const KdTree t = build_kdtree(frame_of({{0, 0, 0}, {1, 0, 0}}));
  EXPECT_EQ(t.radius_neighbors({0, 0, 0}, 0.999), std::vector<std::size_t>{0});
  EXPECT_EQ(t.radius_neighbors({0, 0, 0}, 1.0), (std::vector<std::size_t>{0, 1}));
}

TEST(KdTree, NegativeRadius) {
  const KdTree t = build_kdtree(frame_of({{0, 0, 0}}));
  try {
    t.radius_neighbors({0, 0, 0}, -0.5);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kNegativeRadius);
  }
}

TEST(KdTree, MatchesLinearScan) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> coord(-10.0, 10.0);
  std::uniform_real_distribution<double> radius(0.0, 4.0);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Vec3> pts(500);
    for (auto& p : pts) p = {coord(rng), coord(rng), coord(rng)};
    // Heavy ties along one axis stress the (coordinate, index) ordering.
    for (std::size_t i = 0; i < pts.size(); i += 3) pts[i].x = std::round(pts[i].x);
    const KdTree t = build_kdtree(frame_of(pts));
    for (int q = 0; q < 50; ++q) {
      const Vec3 c = q % 5 == 0 ? pts[q] : Vec3{coord(rng), coord(rng), coord(rng)};
      const double r = radius(rng);
      ASSERT_EQ(t.radius_neighbors(c, r), oracle::brute_force_ball(pts, c, r));
    }
  }
}

TEST(KdTree, DeterministicLayout) {
  std::mt19937_64 rng(4);
  const Frame f = testing::random_frame(rng, 300);
  const KdTree a = build_kdtree(f);
  const KdTree b = build_kdtree(f);
  std::vector<std::size_t> ra;
  std::vector<std::size_t> rb;
  a.radius_neighbors_into({1, 1, 0}, 6.0, ra);
  b.radius_neighbors_into({1, 1, 0}, 6.0, rb);
  EXPECT_EQ(ra, rb);  // unsorted traversal order, so layouts agree
}

}  // namespace
}  // namespace dustradar
