#pragma once

// Independent reference implementations used only by the tests. Nothing
// here calls into the library's filter, kd-tree, clustering or histogram
// code.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "dustradar/point_model.hpp"

namespace dustradar::oracle {

struct Bounds {
  double rcs_lo, rcs_hi;
  double az_lo, az_hi;
  double el_lo, el_hi;
  double speed_max;
  bool static_gate;
  double static_band;
  double range_lo, range_hi;
};

// Returns "" when the point is kept, otherwise the name of the first rule
// (rcs, angle, velocity, velocity_static) that throws it out.
inline std::string first_failing_rule(const RadarPoint& p, const Bounds& b) {
  if (p.rcs < b.rcs_lo || p.rcs > b.rcs_hi) return "rcs";
  if (p.azimuth < b.az_lo || p.azimuth > b.az_hi) return "angle";
  if (p.elevation < b.el_lo || p.elevation > b.el_hi) return "angle";
  const double speed = p.v < 0 ? -p.v : p.v;
  if (speed > b.speed_max) return "velocity";
  if (b.static_gate && !(speed > b.static_band)) {
    const double r = std::sqrt(p.x * p.x + p.y * p.y + p.z * p.z);
    if (!(r >= b.range_lo && r <= b.range_hi)) return "velocity_static";
  }
  return "";
}

inline std::vector<std::size_t> brute_force_ball(const std::vector<Vec3>& pts,
                                                 Vec3 c, double radius) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double dx = pts[i].x - c.x;
    const double dy = pts[i].y - c.y;
    const double dz = pts[i].z - c.z;
    if (dx * dx + dy * dy + dz * dz <= radius * radius) out.push_back(i);
  }
  return out;
}

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
  }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }

 private:
  std::vector<std::size_t> parent_;
};

using Partition = std::set<std::set<std::size_t>>;

// O(n^2) union-find over every pair within `radius`; components smaller
// than `min_size` are dropped.
inline Partition union_find_clusters(const std::vector<Vec3>& pts,
                                     double radius, std::size_t min_size) {
  DisjointSets ds(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      const double dx = pts[i].x - pts[j].x;
      const double dy = pts[i].y - pts[j].y;
      const double dz = pts[i].z - pts[j].z;
      if (dx * dx + dy * dy + dz * dz <= radius * radius) ds.unite(i, j);
    }
  }
  std::map<std::size_t, std::set<std::size_t>> groups;
  for (std::size_t i = 0; i < pts.size(); ++i) groups[ds.find(i)].insert(i);
  Partition out;
  for (auto& [root, members] : groups) {
    if (members.size() >= min_size) out.insert(members);
  }
  return out;
}

// Counts values per integer bin index by scanning every candidate bin.
inline double histogram_mode(const std::vector<double>& values, double width) {
  long long lo = static_cast<long long>(std::floor(values.front() / width));
  long long hi = lo;
  for (double v : values) {
    lo = std::min(lo, static_cast<long long>(std::floor(v / width)));
    hi = std::max(hi, static_cast<long long>(std::floor(v / width)));
  }
  long long best_bin = lo;
  std::size_t best = 0;
  for (long long bin = lo; bin <= hi; ++bin) {
    std::size_t c = 0;
    for (double v : values) {
      if (static_cast<long long>(std::floor(v / width)) == bin) ++c;
    }
    if (c > best) {
      best = c;
      best_bin = bin;
    }
  }
  return (best_bin + 0.5) * width;
}

}  // namespace dustradar::oracle
