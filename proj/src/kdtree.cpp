#include "dustradar/kdtree.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "dustradar/error.hpp"
#include "dustradar/frame_io.hpp"

namespace dustradar {
namespace {

double coord(Vec3 p, std::uint8_t axis) {
  switch (axis) {
    case 0: return p.x;
    case 1: return p.y;
    default: return p.z;
  }
}

void check_radius(double radius) {
  if (!(radius >= 0.0)) {
    throw Error(ErrorKind::kNegativeRadius,
                "radius must be >= 0, got " + format_number(radius));
  }
}

}  // namespace

KdTree::KdTree(std::span<const RadarPoint> points) {
  if (points.size() > std::numeric_limits<std::uint32_t>::max()) {
    throw Error(ErrorKind::kIndexOutOfRange, "kd-tree: too many points");
  }
  positions_.reserve(points.size());
  for (const RadarPoint& p : points) positions_.push_back(p.position());
  order_.resize(points.size());
  for (std::size_t i = 0; i < order_.size(); ++i) {
    order_[i] = static_cast<std::uint32_t>(i);
  }
  split_axis_.assign(points.size(), 0);
  build(0, order_.size());
}

void KdTree::build(std::size_t lo, std::size_t hi) {
  if (hi - lo <= kLeafSize) return;

  double lo_c[3] = {std::numeric_limits<double>::infinity(),
                    std::numeric_limits<double>::infinity(),
                    std::numeric_limits<double>::infinity()};
  double hi_c[3] = {-lo_c[0], -lo_c[1], -lo_c[2]};
  for (std::size_t k = lo; k < hi; ++k) {
    const Vec3 p = positions_[order_[k]];
    for (std::uint8_t a = 0; a < 3; ++a) {
      lo_c[a] = std::min(lo_c[a], coord(p, a));
      hi_c[a] = std::max(hi_c[a], coord(p, a));
    }
  }
  std::uint8_t axis = 0;
  for (std::uint8_t a = 1; a < 3; ++a) {
    if (hi_c[a] - lo_c[a] > hi_c[axis] - lo_c[axis]) axis = a;
  }

  const std::size_t mid = lo + (hi - lo) / 2;
  std::nth_element(order_.begin() + lo, order_.begin() + mid,
                   order_.begin() + hi,
                   [&](std::uint32_t a, std::uint32_t b) {
                     const double ca = coord(positions_[a], axis);
                     const double cb = coord(positions_[b], axis);
                     return ca < cb || (ca == cb && a < b);
                   });
  split_axis_[mid] = axis;
  build(lo, mid);
  build(mid + 1, hi);
}

void KdTree::search(std::size_t lo, std::size_t hi, Vec3 center, double radius,
                    std::vector<std::size_t>& out) const {
  if (hi - lo <= kLeafSize) {
    for (std::size_t k = lo; k < hi; ++k) {
      if (within_radius(positions_[order_[k]], center, radius)) {
        out.push_back(order_[k]);
      }
    }
    return;
  }
  const std::size_t mid = lo + (hi - lo) / 2;
  const Vec3 split = positions_[order_[mid]];
  if (within_radius(split, center, radius)) out.push_back(order_[mid]);

  // Every point left of mid has coordinate <= split, right of mid >= split,
  // so the axis gap alone bounds the distance to a whole side.
  const std::uint8_t axis = split_axis_[mid];
  const double gap = coord(center, axis) - coord(split, axis);
  const double r2 = radius * radius;
  if (gap <= 0.0 || gap * gap <= r2) search(lo, mid, center, radius, out);
  if (gap >= 0.0 || gap * gap <= r2) search(mid + 1, hi, center, radius, out);
}

void KdTree::radius_neighbors_into(Vec3 center, double radius,
                                   std::vector<std::size_t>& out) const {
  check_radius(radius);
  if (!positions_.empty()) search(0, order_.size(), center, radius, out);
}

std::vector<std::size_t> KdTree::radius_neighbors(Vec3 center,
                                                  double radius) const {
  std::vector<std::size_t> out;
  radius_neighbors_into(center, radius, out);
  std::sort(out.begin(), out.end());
  return out;
}

KdTree build_kdtree(const Frame& frame) { return KdTree(frame.points); }

}  // namespace dustradar
