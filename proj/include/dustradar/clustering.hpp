#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "dustradar/kdtree.hpp"
#include "dustradar/point_model.hpp"

namespace dustradar {

struct ClusterParams {
  double distance = 0.5;           // meters, inclusive
  std::size_t min_cluster_size = 5;
};

struct Clustering {
  static constexpr std::int32_t kUnclustered = -1;

  // labels[i] is the cluster id of point i or kUnclustered.
  std::vector<std::int32_t> labels;
  // Member indices per cluster, ascending. Cluster ids follow the order of
  // each component's lowest member index.
  std::vector<std::vector<std::size_t>> clusters;

  std::size_t unclustered_count() const;
};

// Connected components of the graph joining every pair of points at
// distance <= `distance`. Each unvisited point seeds a breadth-first
// expansion through KD-tree radius queries, so transitive chains end up in
// one component regardless of input order. Components smaller than
// `min_cluster_size` are left unclustered.
//
// Throws Error(kNegativeRadius), Error(kZeroMinSize), or
// Error(kMismatchedClustering) when the tree was built over another frame.
Clustering extract_clusters(const Frame& frame, const KdTree& tree,
                            double distance, std::size_t min_cluster_size);

inline Clustering extract_clusters(const Frame& frame,
                                   const ClusterParams& params) {
  return extract_clusters(frame, build_kdtree(frame), params.distance,
                          params.min_cluster_size);
}

}  // namespace dustradar
