#include "dustradar/classify.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "dustradar/error.hpp"

namespace dustradar {
namespace {

void check_bin_width(double bin_width) {
  if (!(bin_width > 0.0) || !std::isfinite(bin_width)) {
    throw Error(ErrorKind::kInvalidConfig,
                "rcs bin width must be positive and finite");
  }
}

void append_interval(std::ostringstream& out, const char* field,
                     const std::optional<Interval>& iv, bool& first) {
  if (!iv) return;
  if (!first) out << " AND ";
  first = false;
  out << field << " in [" << iv->lo << ", " << iv->hi << "]";
}

}  // namespace

double binned_mode(std::span<const double> values, double bin_width) {
  check_bin_width(bin_width);
  if (values.empty()) {
    throw Error(ErrorKind::kEmptyCluster, "mode of an empty set");
  }
  std::map<long long, std::size_t> counts;
  for (double v : values) {
    ++counts[static_cast<long long>(std::floor(v / bin_width))];
  }
  // std::map iterates ascending, so keeping strict '>' resolves ties low.
  auto best = counts.begin();
  for (auto it = counts.begin(); it != counts.end(); ++it) {
    if (it->second > best->second) best = it;
  }
  return (static_cast<double>(best->first) + 0.5) * bin_width;
}

namespace {

double sorted_sum(std::vector<double>& values) {
  std::sort(values.begin(), values.end());
  double total = 0.0;
  for (double x : values) total += x;
  return total;
}

}  // namespace

ClusterDescriptor describe_cluster(const Frame& frame,
                                   std::span<const std::size_t> members,
                                   double bin_width) {
  check_bin_width(bin_width);
  if (members.empty()) {
    throw Error(ErrorKind::kEmptyCluster, "cluster has no members");
  }
  std::vector<std::size_t> sorted(members.begin(), members.end());
  std::sort(sorted.begin(), sorted.end());
  if (sorted.back() >= frame.points.size()) {
    throw Error(ErrorKind::kIndexOutOfRange,
                "member index " + std::to_string(sorted.back()) +
                    " outside frame of " + std::to_string(frame.points.size()));
  }

  ClusterDescriptor d;
  d.size = sorted.size();
  Vec3 lo = frame.points[sorted.front()].position();
  Vec3 hi = lo;
  std::vector<double> xs, ys, zs, vs, rcs;
  for (auto* v : {&xs, &ys, &zs, &vs, &rcs}) v->reserve(sorted.size());
  for (std::size_t i : sorted) {
    const RadarPoint& p = frame.points[i];
    lo = {std::min(lo.x, p.x), std::min(lo.y, p.y), std::min(lo.z, p.z)};
    hi = {std::max(hi.x, p.x), std::max(hi.y, p.y), std::max(hi.z, p.z)};
    xs.push_back(p.x);
    ys.push_back(p.y);
    zs.push_back(p.z);
    vs.push_back(p.v);
    rcs.push_back(p.rcs);
  }
  // Summing values in sorted order makes the result independent of how the
  // points are ordered in the frame, bit for bit.
  const Vec3 sum{sorted_sum(xs), sorted_sum(ys), sorted_sum(zs)};
  const double v_sum = sorted_sum(vs);
  const double n = static_cast<double>(d.size);
  d.mean_velocity = v_sum / n;
  d.abs_mean_velocity = std::abs(d.mean_velocity);
  d.mode_rcs = binned_mode(rcs, bin_width);
  d.centroid = (1.0 / n) * sum;
  // Rounding in the mean can land a hair outside the member bounds.
  d.centroid = {std::clamp(d.centroid.x, lo.x, hi.x),
                std::clamp(d.centroid.y, lo.y, hi.y),
                std::clamp(d.centroid.z, lo.z, hi.z)};
  d.extent = hi - lo;
  d.range = norm(d.centroid);
  return d;
}

std::string_view to_string(ClassLabel label) {
  switch (label) {
    case ClassLabel::kPedestrian: return "Pedestrian";
    case ClassLabel::kClutter: return "Clutter";
    case ClassLabel::kUnknown: return "Unknown";
  }
  return "Unknown";
}

std::optional<ClassLabel> parse_class_label(std::string_view text) {
  if (text == "Pedestrian") return ClassLabel::kPedestrian;
  if (text == "Clutter") return ClassLabel::kClutter;
  if (text == "Unknown") return ClassLabel::kUnknown;
  return std::nullopt;
}

bool ClassRule::matches(const ClusterDescriptor& d) const {
  auto ok = [](const std::optional<Interval>& iv, double x) {
    return !iv || iv->contains(x);
  };
  return ok(size, static_cast<double>(d.size)) &&
         ok(abs_mean_velocity, d.abs_mean_velocity) &&
         ok(mode_rcs, d.mode_rcs) && ok(extent_z, d.extent.z) &&
         ok(horizontal_extent, d.horizontal_extent());
}

std::string ClassRule::describe() const {
  std::ostringstream out;
  out << "[" << priority << "] " << name << " -> " << to_string(label)
      << " if ";
  bool first = true;
  append_interval(out, "size", size, first);
  append_interval(out, "abs_mean_velocity", abs_mean_velocity, first);
  append_interval(out, "mode_rcs", mode_rcs, first);
  append_interval(out, "extent_z", extent_z, first);
  append_interval(out, "horizontal_extent", horizontal_extent, first);
  if (first) out << "always";
  return out.str();
}

RuleSet::RuleSet(std::vector<ClassRule> rules) : rules_(std::move(rules)) {
  std::set<int> priorities;
  for (const ClassRule& r : rules_) {
    if (r.name.empty()) {
      throw Error(ErrorKind::kInvalidConfig, "rule without a name");
    }
    if (!priorities.insert(r.priority).second) {
      throw Error(ErrorKind::kInvalidConfig,
                  "duplicate rule priority " + std::to_string(r.priority));
    }
    for (const auto* iv : {&r.size, &r.abs_mean_velocity, &r.mode_rcs,
                           &r.extent_z, &r.horizontal_extent}) {
      if (*iv && !((*iv)->lo <= (*iv)->hi)) {
        throw Error(ErrorKind::kInvalidConfig,
                    "rule '" + r.name + "' has an interval with lo > hi");
      }
    }
  }
  std::sort(rules_.begin(), rules_.end(),
            [](const ClassRule& a, const ClassRule& b) {
              return a.priority < b.priority;
            });
}

std::string RuleSet::describe() const {
  std::ostringstream out;
  for (const ClassRule& r : rules_) out << r.describe() << '\n';
  out << "otherwise -> Unknown\n";
  return out.str();
}

Detection classify_cluster(const ClusterDescriptor& desc, const RuleSet& rules,
                           std::size_t cluster_id) {
  Detection det;
  det.cluster_id = cluster_id;
  det.descriptor = desc;
  for (const ClassRule& r : rules.rules()) {
    if (r.matches(desc)) {
      det.label = r.label;
      det.rule = r.name;
      return det;
    }
  }
  det.label = ClassLabel::kUnknown;
  return det;
}

std::vector<Detection> classify_frame(const Frame& frame,
                                      const Clustering& clustering,
                                      const RuleSet& rules, double bin_width) {
  if (clustering.labels.size() != frame.points.size()) {
    throw Error(ErrorKind::kMismatchedClustering,
                "clustering labels " + std::to_string(clustering.labels.size()) +
                    " points, frame has " + std::to_string(frame.points.size()));
  }
  std::vector<Detection> out;
  out.reserve(clustering.clusters.size());
  for (std::size_t id = 0; id < clustering.clusters.size(); ++id) {
    const auto& members = clustering.clusters[id];
    for (std::size_t i : members) {
      if (i >= frame.points.size()) {
        throw Error(ErrorKind::kMismatchedClustering,
                    "cluster " + std::to_string(id) + " references point " +
                        std::to_string(i) + " beyond the frame");
      }
    }
    out.push_back(classify_cluster(describe_cluster(frame, members, bin_width),
                                   rules, id));
  }
  return out;
}

}  // namespace dustradar
