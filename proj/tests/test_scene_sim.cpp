#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "dustradar/config.hpp"
#include "dustradar/error.hpp"
#include "dustradar/noise_filter.hpp"
#include "dustradar/scene_sim.hpp"

using namespace dustradar;

namespace {

SceneSpec quiet_spec() {
  SceneSpec s;
  s.dust.level = 0;
  s.ghost.enabled = false;
  s.structure.enabled = false;
  s.frame_count = 5;
  return s;
}

bool same_point(const RadarPoint& a, const RadarPoint& b) {
  return a.x == b.x && a.y == b.y && a.z == b.z && a.rcs == b.rcs &&
         a.v == b.v && a.azimuth == b.azimuth && a.elevation == b.elevation;
}

}  // namespace

TEST(MirrorGhost, WallExample) {
  const Plane wall{{0, 1, 0}, 1.5};
  const RadarPoint p = from_cartesian({2, 1, 1}, 0.0, 0.0);
  const RadarPoint g = mirror_ghost(p, wall, 6.0);
  EXPECT_DOUBLE_EQ(g.x, 2.0);
  EXPECT_DOUBLE_EQ(g.y, 2.0);
  EXPECT_DOUBLE_EQ(g.z, 1.0);
  EXPECT_DOUBLE_EQ(g.rcs, 6.0);
  EXPECT_FALSE(validate_point(g, kSimulatorAngleTolerance));
}

TEST(MirrorGhost, PointOnPlaneIsFixed) {
  const Plane wall{{0, 1, 0}, 1.5};
  const RadarPoint p = from_cartesian({3, 1.5, -0.2}, -5.0, 0.7);
  const RadarPoint g = mirror_ghost(p, wall, 0.0);
  EXPECT_DOUBLE_EQ(g.x, p.x);
  EXPECT_DOUBLE_EQ(g.y, p.y);
  EXPECT_DOUBLE_EQ(g.z, p.z);
  EXPECT_DOUBLE_EQ(std::abs(g.v), std::abs(p.v));
}

TEST(MirrorGhost, DoubleReflectionIsIdentity) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  for (int i = 0; i < 10000; ++i) {
    Vec3 n{u(rng), u(rng), u(rng)};
    const double len = norm(n);
    if (len < 1e-3) continue;
    n = (1.0 / len) * n;
    const Plane plane{n, u(rng)};
    const Vec3 p{u(rng), u(rng), u(rng)};
    const Vec3 back = reflect_point(reflect_point(p, plane), plane);
    EXPECT_NEAR(back.x, p.x, 1e-12);
    EXPECT_NEAR(back.y, p.y, 1e-12);
    EXPECT_NEAR(back.z, p.z, 1e-12);
  }
}

TEST(MirrorGhost, CeilingGhostOfApproachingBodyKeepsSpeed) {
  const Plane ceiling{{0, 0, 1}, 2.4};
  const RadarPoint p = from_cartesian({4, 0, 0}, 0.0, -1.2);
  const RadarPoint g = mirror_ghost(p, ceiling, 0.0);
  EXPECT_DOUBLE_EQ(std::abs(g.v), 1.2);
  EXPECT_GT(g.elevation, deg_to_rad(20.0));
}

TEST(SceneSim, EmptySceneGivesEmptyFrames) {
  SceneSpec s = quiet_spec();
  for (const SimFrame& f : simulate(s)) {
    EXPECT_TRUE(f.frame.points.empty());
    EXPECT_TRUE(f.truth.labels.empty());
    EXPECT_EQ(f.truth.true_count(), 0u);
  }
}

TEST(SceneSim, StationaryPedestrian) {
  SceneSpec s = quiet_spec();
  s.frame_count = 1;
  PedestrianSpec ped;
  ped.waypoints = {{4.0, 0.0}};
  ped.speed = 0.0;
  s.pedestrians.push_back(ped);
  const auto frames = simulate(s);
  ASSERT_EQ(frames.size(), 1u);
  const SimFrame& f = frames[0];
  EXPECT_EQ(f.truth.true_count(), 1u);
  ASSERT_EQ(f.frame.points.size(), ped.points_per_frame);
  for (std::size_t i = 0; i < f.frame.points.size(); ++i) {
    EXPECT_EQ(f.truth.labels[i].source, PointSource::kPedestrian);
    EXPECT_EQ(f.truth.labels[i].pedestrian_id, 0);
    EXPECT_LE(std::abs(f.frame.points[i].v), s.sensor.velocity_jitter);
  }
}

TEST(SceneSim, DeterministicForSameSeed) {
  SceneSpec s = default_scene_spec();
  s.frame_count = 20;
  s.dust.level = 3;
  const auto a = simulate(s);
  const auto b = simulate(s);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    ASSERT_EQ(a[i].frame.points.size(), b[i].frame.points.size());
    for (std::size_t k = 0; k < a[i].frame.points.size(); ++k) {
      ASSERT_TRUE(same_point(a[i].frame.points[k], b[i].frame.points[k]));
    }
    EXPECT_EQ(a[i].truth, b[i].truth);
  }
  s.rng_seed += 1;
  const auto c = simulate(s);
  EXPECT_FALSE(same_point(a[0].frame.points[0], c[0].frame.points[0]));
}

TEST(SceneSim, AllPointsValidAndLabelled) {
  SceneSpec s = default_scene_spec();
  s.frame_count = 50;
  s.dust.level = 4;
  for (const SimFrame& f : simulate(s)) {
    ASSERT_EQ(f.truth.labels.size(), f.frame.points.size());
    for (const RadarPoint& p : f.frame.points) {
      ASSERT_FALSE(validate_point(p, kSimulatorAngleTolerance));
    }
  }
}

TEST(SceneSim, RawCountIncreasesWithDustLevel) {
  SceneSpec s = default_scene_spec();
  s.frame_count = 10;
  double previous = -1.0;
  for (int level = 0; level <= 4; ++level) {
    s.dust.level = level;
    double total = 0.0;
    for (const SimFrame& f : simulate(s)) total += static_cast<double>(f.frame.points.size());
    const double mean = total / static_cast<double>(s.frame_count);
    EXPECT_GT(mean, previous) << "level " << level;
    previous = mean;
  }
}

TEST(SceneSim, EscalateRampsDustLevel) {
  SceneSpec s = default_scene_spec();
  s.frame_count = 100;
  s.dust.level = 4;
  s.dust.escalate = true;
  SceneSimulator sim(s);
  EXPECT_EQ(sim.dust_level_at(0), 0);
  EXPECT_EQ(sim.dust_level_at(99), 4);
  int last = 0;
  for (std::uint64_t k = 0; k < 100; ++k) {
    EXPECT_GE(sim.dust_level_at(k), last);
    last = sim.dust_level_at(k);
  }
}

// The filter is only meaningful if dust sits below rcs_min.
TEST(SceneSim, DustPremiseBelowRcsMin) {
  SceneSpec s = default_scene_spec();
  s.frame_count = 50;
  s.dust.level = 4;
  const PipelineConfig cfg = default_pipeline_config();
  std::size_t dust = 0, low = 0;
  for (const SimFrame& f : simulate(s)) {
    for (std::size_t i = 0; i < f.frame.points.size(); ++i) {
      if (f.truth.labels[i].source != PointSource::kDust) continue;
      ++dust;
      const RadarPoint& p = f.frame.points[i];
      if (p.rcs < cfg.filter.rcs_min) ++low;
      EXPECT_LE(std::abs(p.v), s.dust.max_abs_velocity);
    }
  }
  ASSERT_GT(dust, 0u);
  EXPECT_GE(static_cast<double>(low) / static_cast<double>(dust), 0.99);
}

TEST(SceneSim, GhostPremiseViolatesAGate) {
  for (double inflation : {10.0, 15.0}) {
    SceneSpec s = default_scene_spec();
    s.frame_count = 200;
    s.ghost.rcs_inflation_db = inflation;
    const PipelineConfig cfg = default_pipeline_config();
    std::size_t ghosts = 0, gated = 0;
    for (const SimFrame& f : simulate(s)) {
      for (std::size_t i = 0; i < f.frame.points.size(); ++i) {
        if (f.truth.labels[i].source != PointSource::kGhost) continue;
        ++ghosts;
        if (!point_passes(f.frame.points[i], cfg.filter).keep) ++gated;
      }
    }
    ASSERT_GT(ghosts, 0u);
    EXPECT_GE(static_cast<double>(gated) / static_cast<double>(ghosts), 0.95)
        << "inflation " << inflation;
  }
}

TEST(SceneSim, InvalidSpecsRejected) {
  auto expect_invalid = [](SceneSpec s) {
    try {
      s.validate();
      ADD_FAILURE() << "expected InvalidSpec";
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::kInvalidSpec);
    }
  };
  SceneSpec s = default_scene_spec();
  s.room.length = -1.0;
  expect_invalid(s);
  s = default_scene_spec();
  s.dust.level = 9;
  expect_invalid(s);
  s = default_scene_spec();
  s.frame_rate = 0.0;
  expect_invalid(s);
  s = default_scene_spec();
  s.pedestrians[0].waypoints.clear();
  expect_invalid(s);
  s = default_scene_spec();
  s.pedestrians[0].waypoints = {{40.0, 0.0}};
  expect_invalid(s);
}

TEST(RoomPlaneNames, RoundTrip) {
  for (RoomPlane p : {RoomPlane::kFloor, RoomPlane::kCeiling, RoomPlane::kLeftWall,
                      RoomPlane::kRightWall, RoomPlane::kNearWall, RoomPlane::kFarWall}) {
    EXPECT_EQ(parse_room_plane(to_string(p)), p);
  }
  EXPECT_FALSE(parse_room_plane("roof"));
}
