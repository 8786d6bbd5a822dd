#pragma once

#include <algorithm>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dustradar/clustering.hpp"
#include "dustradar/point_model.hpp"

namespace dustradar {

struct ClusterDescriptor {
  std::size_t size = 0;
  double mean_velocity = 0.0;      // signed mean of member v
  double abs_mean_velocity = 0.0;  // |mean_velocity|
  double mode_rcs = 0.0;           // center of the most populated rcs bin
  Vec3 centroid;
  Vec3 extent;                     // bounding-box side lengths
  double range = 0.0;              // |centroid|

  double horizontal_extent() const { return std::max(extent.x, extent.y); }
};

// Histogram mode of rcs with bins [k*w, (k+1)*w). Ties go to the lower bin;
// the bin center is returned. Requires a non-empty input and w > 0.
double binned_mode(std::span<const double> values, double bin_width);

// Member order does not affect the result: members are summed in ascending
// index order. Throws Error(kEmptyCluster), Error(kIndexOutOfRange), or
// Error(kInvalidConfig) for a non-positive bin width.
ClusterDescriptor describe_cluster(const Frame& frame,
                                   std::span<const std::size_t> members,
                                   double bin_width);

enum class ClassLabel { kPedestrian, kClutter, kUnknown };

std::string_view to_string(ClassLabel label);
std::optional<ClassLabel> parse_class_label(std::string_view text);

struct Interval {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();

  bool contains(double x) const { return x >= lo && x <= hi; }
};

// Conjunction of inclusive interval constraints over descriptor fields. An
// absent constraint is unconstrained.
struct ClassRule {
  std::string name;
  ClassLabel label = ClassLabel::kUnknown;
  int priority = 0;  // lower value is evaluated first
  std::optional<Interval> size;
  std::optional<Interval> abs_mean_velocity;
  std::optional<Interval> mode_rcs;
  std::optional<Interval> extent_z;
  std::optional<Interval> horizontal_extent;

  bool matches(const ClusterDescriptor& d) const;
  std::string describe() const;
};

class RuleSet {
 public:
  RuleSet() = default;
  // Validates (lo <= hi, unique priorities, non-empty names) and sorts by
  // priority. Throws Error(kInvalidConfig).
  explicit RuleSet(std::vector<ClassRule> rules);

  const std::vector<ClassRule>& rules() const { return rules_; }
  std::string describe() const;

 private:
  std::vector<ClassRule> rules_;
};

struct Detection {
  std::size_t cluster_id = 0;
  ClassLabel label = ClassLabel::kUnknown;
  ClusterDescriptor descriptor;
  std::string rule;  // empty when no rule matched
};

// First matching rule in priority order wins; no match yields kUnknown.
Detection classify_cluster(const ClusterDescriptor& desc, const RuleSet& rules,
                           std::size_t cluster_id = 0);

// One detection per cluster, in cluster-id order. Throws
// Error(kMismatchedClustering) when the clustering does not fit the frame.
std::vector<Detection> classify_frame(const Frame& frame,
                                      const Clustering& clustering,
                                      const RuleSet& rules, double bin_width);

}  // namespace dustradar
