#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "dustradar/point_model.hpp"

namespace dustradar {

// Inclusive Euclidean ball membership, evaluated on squared distances so
// that the tree and any linear scan agree bit-for-bit at the boundary.
inline bool within_radius(Vec3 a, Vec3 b, double radius) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  const double dz = a.z - b.z;
  return dx * dx + dy * dy + dz * dz <= radius * radius;
}

// Balanced 3-D KD-tree over the positions of one frame, stored implicitly in
// a permutation array: each subrange [lo, hi) has its splitting point at the
// midpoint, split along the axis of widest spread. Median selection orders
// by (coordinate, index), so the layout is a pure function of input order.
// Immutable after construction; concurrent queries are safe.
class KdTree {
 public:
  KdTree() = default;
  explicit KdTree(std::span<const RadarPoint> points);

  std::size_t size() const { return positions_.size(); }
  bool empty() const { return positions_.empty(); }

  // Indices j with |p_j - center| <= radius, ascending. Throws
  // Error(kNegativeRadius) for radius < 0 or NaN.
  std::vector<std::size_t> radius_neighbors(Vec3 center, double radius) const;

  // Appends to `out` (unsorted); no allocation beyond `out` growth.
  void radius_neighbors_into(Vec3 center, double radius,
                             std::vector<std::size_t>& out) const;

 private:
  static constexpr std::size_t kLeafSize = 8;

  void build(std::size_t lo, std::size_t hi);
  void search(std::size_t lo, std::size_t hi, Vec3 center, double radius,
              std::vector<std::size_t>& out) const;

  std::vector<Vec3> positions_;
  std::vector<std::uint32_t> order_;
  std::vector<std::uint8_t> split_axis_;
};

KdTree build_kdtree(const Frame& frame);

}  // namespace dustradar
