#include "dustradar/noise_filter.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <numeric>

#include "dustradar/error.hpp"

namespace dustradar {
namespace {

void require(bool ok, const char* what) {
  if (!ok) throw Error(ErrorKind::kInvalidConfig, std::string("filter: ") + what);
}

}  // namespace

void FilterConfig::validate() const {
  const double fields[] = {rcs_min,     rcs_max,          az_min,
                           az_max,      el_min,           el_max,
                           v_abs_max,   static_band,      static_range_min,
                           static_range_max};
  for (double f : fields) require(std::isfinite(f), "all bounds must be finite");
  require(rcs_min < rcs_max, "rcs_min < rcs_max");
  require(az_min < az_max, "az_min < az_max");
  require(el_min < el_max, "el_min < el_max");
  require(static_range_min < static_range_max,
          "static_range_min < static_range_max");
  require(v_abs_max > 0.0, "v_abs_max > 0");
  require(static_band >= 0.0, "static_band >= 0");
  require(az_min >= -kPi && az_max <= kPi, "azimuth bounds within [-pi, pi]");
  require(el_min >= -kPi / 2 && el_max <= kPi / 2,
          "elevation bounds within [-pi/2, pi/2]");
}

std::string_view to_string(FilterRule rule) {
  switch (rule) {
    case FilterRule::kRcs: return "rcs";
    case FilterRule::kAngle: return "angle";
    case FilterRule::kVelocity: return "velocity";
    case FilterRule::kVelocityStatic: return "velocity_static";
  }
  return "unknown";
}

std::size_t FilterReport::rejected_total() const {
  return std::accumulate(rejected_by_rule.begin(), rejected_by_rule.end(),
                         std::size_t{0});
}

namespace {

// Bit k set = rule k fails. Every test is evaluated (no short circuit) so the
// hot loop has no data-dependent branches; the lowest set bit is the first
// failing rule in evaluation order.
inline unsigned rejection_mask(const RadarPoint& p, const FilterConfig& cfg) {
  const bool rcs_ok = (p.rcs >= cfg.rcs_min) & (p.rcs <= cfg.rcs_max);
  const bool angle_ok = (p.azimuth >= cfg.az_min) & (p.azimuth <= cfg.az_max) &
                        (p.elevation >= cfg.el_min) & (p.elevation <= cfg.el_max);
  const double speed = std::abs(p.v);
  const bool velocity_ok = speed <= cfg.v_abs_max;
  const double r = p.range();
  const bool static_bad = cfg.enable_static_gate & (speed <= cfg.static_band) &
                          ((r < cfg.static_range_min) | (r > cfg.static_range_max));
  return static_cast<unsigned>(!rcs_ok) | static_cast<unsigned>(!angle_ok) << 1 |
         static_cast<unsigned>(!velocity_ok) << 2 | static_cast<unsigned>(static_bad) << 3;
}

}  // namespace

FilterDecision point_passes(const RadarPoint& p, const FilterConfig& cfg) {
  const unsigned mask = rejection_mask(p, cfg);
  if (mask == 0) return FilterDecision::kept();
  return FilterDecision::rejected(static_cast<FilterRule>(std::countr_zero(mask)));
}

std::pair<Frame, FilterReport> filter_frame(
    const Frame& frame, const FilterConfig& cfg,
    std::vector<std::size_t>* kept_indices) {
  const std::size_t n = frame.points.size();
  Frame out;
  out.seq = frame.seq;
  out.timestamp = frame.timestamp;
  out.points.resize(n);
  if (kept_indices) kept_indices->resize(n);

  FilterReport report;
  report.input_count = n;
  // Slot 4 absorbs kept points so the count update needs no branch.
  std::array<std::size_t, 5> tally{};
  std::size_t k = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const RadarPoint& p = frame.points[i];
    const unsigned mask = rejection_mask(p, cfg);
    const bool keep = mask == 0;
    out.points[k] = p;
    if (kept_indices) (*kept_indices)[k] = i;
    k += keep;
    ++tally[static_cast<std::size_t>(std::countr_zero(mask | 16u))];
  }
  out.points.resize(k);
  out.points.shrink_to_fit();
  if (kept_indices) kept_indices->resize(k);
  std::copy_n(tally.begin(), 4, report.rejected_by_rule.begin());
  report.kept_count = k;
  return {std::move(out), report};
}

}  // namespace dustradar
