#pragma once

#include "sdcbf/types.hpp"

#include <cstddef>
#include <limits>
#include <vector>

namespace sdcbf {

/// Static kd-tree over a fixed point set.
///
/// Besides plain Euclidean nearest-neighbour queries it supports exact
/// branch-and-bound minimisation of any score that can be lower-bounded from
/// the Euclidean distance of a subtree's bounding box to the query.
class KdTree {
 public:
  static constexpr std::size_t kLeafSize = 16;
  static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

  KdTree() = default;
  explicit KdTree(std::vector<Vector> points);

  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }
  const Vector& point(std::size_t i) const { return points_[i]; }

  /// Index of the Euclidean-nearest point; ties go to the smallest index.
  std::size_t nearest(const Vector& query) const;

  /// Index minimising score(i, ||query - p_i||). `lower(d)` must satisfy
  /// lower(d) <= score(i, d') for every point i and every d' >= d. Ties go to
  /// the smallest index.
  template <class Score, class Lower>
  std::size_t argmin(const Vector& query, Score&& score, Lower&& lower) const;

 private:
  struct Node {
    Vector lo;
    Vector hi;
    std::size_t begin = 0;
    std::size_t end = 0;
    std::size_t left = npos;
    std::size_t right = npos;
  };

  std::size_t build(std::size_t begin, std::size_t end);
  double box_distance(const Node& node, const Vector& q) const;

  template <class Score, class Lower>
  void search(std::size_t node, const Vector& q, Score& score, Lower& lower, double& best,
              std::size_t& best_idx) const;

  std::vector<Vector> points_;
  std::vector<std::size_t> order_;
  std::vector<Node> nodes_;
};

template <class Score, class Lower>
std::size_t KdTree::argmin(const Vector& query, Score&& score, Lower&& lower) const {
  if (points_.empty()) return npos;
  double best = std::numeric_limits<double>::infinity();
  std::size_t best_idx = npos;
  search(0, query, score, lower, best, best_idx);
  return best_idx;
}

template <class Score, class Lower>
void KdTree::search(std::size_t node_id, const Vector& q, Score& score, Lower& lower,
                    double& best, std::size_t& best_idx) const {
  const Node& node = nodes_[node_id];
  if (lower(box_distance(node, q)) > best) return;
  if (node.left == npos) {
    for (std::size_t k = node.begin; k < node.end; ++k) {
      const std::size_t i = order_[k];
      const double s = score(i, (points_[i] - q).norm());
      if (s < best || (s == best && i < best_idx)) {
        best = s;
        best_idx = i;
      }
    }
    return;
  }
  const double dl = box_distance(nodes_[node.left], q);
  const double dr = box_distance(nodes_[node.right], q);
  if (dl <= dr) {
    search(node.left, q, score, lower, best, best_idx);
    search(node.right, q, score, lower, best, best_idx);
  } else {
    search(node.right, q, score, lower, best, best_idx);
    search(node.left, q, score, lower, best, best_idx);
  }
}

}  // namespace sdcbf
