#include "dustradar/clustering.hpp"

#include <algorithm>
#include <string>

#include "dustradar/error.hpp"
#include "dustradar/frame_io.hpp"

namespace dustradar {

std::size_t Clustering::unclustered_count() const {
  return static_cast<std::size_t>(
      std::count(labels.begin(), labels.end(), kUnclustered));
}

Clustering extract_clusters(const Frame& frame, const KdTree& tree,
                            double distance, std::size_t min_cluster_size) {
  if (!(distance >= 0.0)) {
    throw Error(ErrorKind::kNegativeRadius,
                "cluster distance must be >= 0, got " + format_number(distance));
  }
  if (min_cluster_size == 0) {
    throw Error(ErrorKind::kZeroMinSize, "min_cluster_size must be >= 1");
  }
  const std::size_t n = frame.points.size();
  if (tree.size() != n) {
    throw Error(ErrorKind::kMismatchedClustering,
                "kd-tree holds " + std::to_string(tree.size()) +
                    " points but frame has " + std::to_string(n));
  }

  Clustering result;
  result.labels.assign(n, Clustering::kUnclustered);
  std::vector<bool> visited(n, false);
  std::vector<std::size_t> component;
  std::vector<std::size_t> neighbors;

  for (std::size_t seed = 0; seed < n; ++seed) {
    if (visited[seed]) continue;
    visited[seed] = true;
    component.clear();
    component.push_back(seed);
    // `component` doubles as the BFS queue.
    for (std::size_t head = 0; head < component.size(); ++head) {
      neighbors.clear();
      tree.radius_neighbors_into(frame.points[component[head]].position(),
                                 distance, neighbors);
      for (std::size_t j : neighbors) {
        if (!visited[j]) {
          visited[j] = true;
          component.push_back(j);
        }
      }
    }
    if (component.size() < min_cluster_size) continue;

    std::sort(component.begin(), component.end());
    const auto id = static_cast<std::int32_t>(result.clusters.size());
    for (std::size_t i : component) result.labels[i] = id;
    result.clusters.push_back(component);
  }
  return result;
}

}  // namespace dustradar
