#pragma once

#include <cstddef>
#include <string>
#include <string_view>

#include "dustradar/classify.hpp"
#include "dustradar/clustering.hpp"
#include "dustradar/noise_filter.hpp"
#include "dustradar/scene_sim.hpp"

namespace dustradar {

struct IoOptions {
  double match_radius = 0.75;  // meters, used by evaluate
  std::size_t threads = 1;     // frame-level worker count for run_pipeline
};

struct PipelineConfig {
  FilterConfig filter;
  ClusterParams cluster;
  double rcs_bin_width = 1.0;
  RuleSet rules;
  IoOptions io;

  // Re-checks every embedded invariant; throws Error(kInvalidConfig).
  void validate() const;
};

// Both loaders parse JSON with // comments allowed. Parsing is strict: every
// documented key is required and unknown keys are rejected, each with the
// JSON path in the message. Angles are given in degrees. Failures throw
// Error(kInvalidConfig) or Error(kInvalidSpec).
PipelineConfig parse_pipeline_config(std::string_view json_text);
PipelineConfig load_pipeline_config(const std::string& path);
SceneSpec parse_scene_spec(std::string_view json_text);
SceneSpec load_scene_spec(const std::string& path);

// The shipped, annotated defaults (config/pipeline_default.json and
// config/scene_default.json), compiled into the library.
std::string_view default_pipeline_config_text();
std::string_view default_scene_spec_text();
PipelineConfig default_pipeline_config();
SceneSpec default_scene_spec();

}  // namespace dustradar
