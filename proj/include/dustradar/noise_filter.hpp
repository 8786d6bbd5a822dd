#pragma once

#include <array>
#include <cstddef>
#include <string_view>
#include <utility>
#include <vector>

#include "dustradar/point_model.hpp"

namespace dustradar {

// Threshold bounds for the per-point noise filter. Angles in radians,
// rcs in dBsm, velocities in m/s, ranges in meters. All bounds inclusive.
struct FilterConfig {
  double rcs_min = 0.0;
  double rcs_max = 0.0;
  double az_min = 0.0;
  double az_max = 0.0;
  double el_min = 0.0;
  double el_max = 0.0;
  double v_abs_max = 0.0;
  // Half-width of the "near zero" velocity band.
  double static_band = 0.0;
  // Near-zero-velocity points are only kept inside this range window.
  double static_range_min = 0.0;
  double static_range_max = 0.0;
  bool enable_static_gate = true;

  // Throws Error(kInvalidConfig) naming the first broken invariant.
  void validate() const;
};

// Rules are evaluated in this order and a rejection is charged to the first
// one that fails.
enum class FilterRule : std::size_t {
  kRcs = 0,
  kAngle = 1,
  kVelocity = 2,
  kVelocityStatic = 3,
};

inline constexpr std::size_t kFilterRuleCount = 4;

std::string_view to_string(FilterRule rule);

struct FilterDecision {
  bool keep = true;
  FilterRule rule = FilterRule::kRcs;  // meaningful only when !keep

  static FilterDecision kept() { return {}; }
  static FilterDecision rejected(FilterRule r) { return {false, r}; }
};

struct FilterReport {
  std::size_t input_count = 0;
  std::size_t kept_count = 0;
  std::array<std::size_t, kFilterRuleCount> rejected_by_rule{};

  std::size_t rejected(FilterRule rule) const {
    return rejected_by_rule[static_cast<std::size_t>(rule)];
  }
  std::size_t rejected_total() const;
};

FilterDecision point_passes(const RadarPoint& p, const FilterConfig& cfg);

// Single pass over the frame; kept points retain their relative order and
// the output keeps the input seq/timestamp. When `kept_indices` is given it
// receives, for each output point, its index in the input frame.
std::pair<Frame, FilterReport> filter_frame(
    const Frame& frame, const FilterConfig& cfg,
    std::vector<std::size_t>* kept_indices = nullptr);

}  // namespace dustradar
