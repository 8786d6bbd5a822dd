#include <gtest/gtest.h>

#include <fstream>
#include <string>

#include "dustradar/config.hpp"
#include "dustradar/error.hpp"

using namespace dustradar;

namespace {

std::string replace_once(std::string text, const std::string& from, const std::string& to) {
  const auto pos = text.find(from);
  EXPECT_NE(pos, std::string::npos) << from;
  if (pos != std::string::npos) text.replace(pos, from.size(), to);
  return text;
}

void expect_config_error(const std::string& text, ErrorKind kind, const std::string& needle) {
  try {
    if (kind == ErrorKind::kInvalidConfig) {
      parse_pipeline_config(text);
    } else {
      parse_scene_spec(text);
    }
    ADD_FAILURE() << "expected failure mentioning " << needle;
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), kind);
    EXPECT_NE(std::string(e.what()).find(needle), std::string::npos) << e.what();
  }
}

const std::string kPipe(default_pipeline_config_text());
const std::string kScene(default_scene_spec_text());

}  // namespace

TEST(Config, DefaultPipelineLoads) {
  const PipelineConfig c = default_pipeline_config();
  EXPECT_DOUBLE_EQ(c.filter.rcs_min, -40.0);
  EXPECT_DOUBLE_EQ(c.filter.rcs_max, 30.0);
  EXPECT_DOUBLE_EQ(c.filter.az_max, deg_to_rad(60.0));
  EXPECT_DOUBLE_EQ(c.filter.el_min, deg_to_rad(-20.0));
  EXPECT_TRUE(c.filter.enable_static_gate);
  EXPECT_DOUBLE_EQ(c.cluster.distance, 0.5);
  EXPECT_EQ(c.cluster.min_cluster_size, 5u);
  EXPECT_DOUBLE_EQ(c.rcs_bin_width, 1.0);
  ASSERT_GE(c.rules.rules().size(), 2u);
  EXPECT_EQ(c.rules.rules().front().label, ClassLabel::kPedestrian);
  EXPECT_DOUBLE_EQ(c.io.match_radius, 0.75);
}

TEST(Config, DefaultSceneLoads) {
  const SceneSpec s = default_scene_spec();
  EXPECT_DOUBLE_EQ(s.room.length, 16.2);
  EXPECT_DOUBLE_EQ(s.room.width, 3.0);
  EXPECT_DOUBLE_EQ(s.room.height, 3.4);
  EXPECT_EQ(s.pedestrians.size(), 2u);
  EXPECT_TRUE(s.ghost.enabled);
  EXPECT_DOUBLE_EQ(s.ghost.rcs_inflation_db, 15.0);
  EXPECT_EQ(s.dust.rates.size(), 5u);
  EXPECT_NO_THROW(s.validate());
}

TEST(Config, UnknownKeyRejected) {
  expect_config_error(replace_once(kPipe, "\"min_cluster_size\"", "\"typo\": 1, \"min_cluster_size\""),
                      ErrorKind::kInvalidConfig, "typo");
  expect_config_error(replace_once(kScene, "\"frame_rate_hz\"", "\"colour\": 1, \"frame_rate_hz\""),
                      ErrorKind::kInvalidSpec, "colour");
}

TEST(Config, MissingKeyRejected) {
  expect_config_error(replace_once(kPipe, "\"rcs_max_dbsm\": 30.0,", ""),
                      ErrorKind::kInvalidConfig, "rcs_max_dbsm");
  expect_config_error(replace_once(kScene, "\"rng_seed\"", "\"rng_seed_old\""),
                      ErrorKind::kInvalidSpec, "rng_seed");
}

TEST(Config, WrongTypeRejected) {
  expect_config_error(replace_once(kPipe, "\"rcs_min_dbsm\": -40.0", "\"rcs_min_dbsm\": \"low\""),
                      ErrorKind::kInvalidConfig, "rcs_min_dbsm");
  expect_config_error(replace_once(kPipe, "\"min_cluster_size\": 5", "\"min_cluster_size\": 2.5"),
                      ErrorKind::kInvalidConfig, "min_cluster_size");
}

TEST(Config, InvalidValuesRejected) {
  expect_config_error(replace_once(kPipe, "\"rcs_min_dbsm\": -40.0", "\"rcs_min_dbsm\": 40.0"),
                      ErrorKind::kInvalidConfig, "rcs");
  expect_config_error(replace_once(kPipe, "\"min_cluster_size\": 5", "\"min_cluster_size\": 0"),
                      ErrorKind::kInvalidConfig, "min_cluster_size");
  expect_config_error(replace_once(kPipe, "\"label\": \"Pedestrian\"", "\"label\": \"Cyclist\""),
                      ErrorKind::kInvalidConfig, "Cyclist");
  expect_config_error("{ not json", ErrorKind::kInvalidConfig, "malformed");
}

TEST(Config, LoadFromFile) {
  const std::string path = ::testing::TempDir() + "dustradar_cfg.json";
  {
    std::ofstream out(path);
    out << replace_once(kPipe, "\"distance_m\": 0.5", "\"distance_m\": 0.8");
  }
  EXPECT_DOUBLE_EQ(load_pipeline_config(path).cluster.distance, 0.8);
  EXPECT_THROW(load_pipeline_config(path + ".missing"), Error);
}
