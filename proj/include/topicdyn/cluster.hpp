#pragma once

#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "topicdyn/distance_matrix.hpp"

namespace topicdyn {

/// Undirected weighted edge with u < v.
struct MstEdge {
  Eigen::Index u = 0;
  Eigen::Index v = 0;
  double weight = 0.0;

  friend bool operator==(const MstEdge&, const MstEdge&) = default;
};

/// Distance from each point to its core_k-th nearest neighbour, the point
/// itself counting as the first (so core_k = 1 gives zeros).
Eigen::VectorXd core_distances(const Eigen::Ref<const Eigen::MatrixXd>& distances, int core_k);

/// Minimum spanning tree under mutual reachability
/// w(i,j) = max(core_i, core_j, d(i,j)). Kruskal over edges ordered by
/// (weight, u, v), so ties resolve to the lexicographically smallest edge set.
std::vector<MstEdge> mst(const Eigen::Ref<const Eigen::MatrixXd>& distances, int core_k);
std::vector<MstEdge> mst(const DistanceMatrix& matrix, int core_k);

/// One agglomeration step. Leaves are nodes 0..T-1; merge k creates node T+k.
struct Merge {
  Eigen::Index left = 0;
  Eigen::Index right = 0;
  double distance = 0.0;
  Eigen::Index size = 0;

  friend bool operator==(const Merge&, const Merge&) = default;
};

/// Single-linkage merge tree; `merges.back()` is the root.
struct Dendrogram {
  Eigen::Index num_points = 0;
  std::vector<Merge> merges;

  Eigen::Index root() const { return num_points + static_cast<Eigen::Index>(merges.size()) - 1; }
  /// Leaf indices under `node`, ascending.
  std::vector<Eigen::Index> leaves(Eigen::Index node) const;
};

/// Throws MalformedTree unless the edges form a spanning tree over
/// 0..edges.size().
Dendrogram build_hierarchy(std::span<const MstEdge> edges);

/// Condensed-tree record. Points keep their index (< num_points); clusters
/// are labelled from num_points upward with the root at num_points.
struct CondensedEdge {
  Eigen::Index parent = 0;
  Eigen::Index child = 0;
  double lambda = 0.0;
  Eigen::Index child_size = 0;
};

struct CondensedTree {
  Eigen::Index num_points = 0;
  std::vector<CondensedEdge> edges;

  Eigen::Index root() const { return num_points; }
  bool is_cluster(Eigen::Index node) const { return node >= num_points; }
};

struct ExtractOptions {
  int min_cluster_size = 3;
  /// Lets the root compete for selection. Off by default.
  bool allow_single_cluster = false;
  /// Stand-in for zero merge distances when converting to lambda = 1/d.
  /// Non-positive means "derive from the dendrogram": the smallest positive
  /// merge distance times 1e-3.
  double zero_distance = 0.0;
};

inline constexpr int kNoise = -1;

struct ClusterResult {
  /// Cluster id per topic, or kNoise.
  std::vector<int> labels;
  /// Stability per cluster id.
  std::vector<double> stabilities;
  /// Member count per cluster id.
  std::vector<Eigen::Index> sizes;
  /// Normalized distance to the cluster medoid; empty for noise.
  std::vector<std::optional<double>> centroid_distance;
  /// Medoid topic index per cluster id.
  std::vector<Eigen::Index> medoids;
  CondensedTree tree;
  /// Condensed-tree label of each reported cluster id.
  std::vector<Eigen::Index> tree_nodes;

  int num_clusters() const { return static_cast<int>(stabilities.size()); }
  std::size_t num_noise() const;
};

/// Condenses the dendrogram: splits leaving fewer than min_cluster_size points
/// on a side are points falling out of the parent.
CondensedTree condense(const Dendrogram& dendrogram, int min_cluster_size, double zero_distance);

/// Stability of every condensed cluster label (index = label - num_points):
/// sum over member edges of (lambda_leave - lambda_birth) * child_size.
std::vector<double> cluster_stabilities(const CondensedTree& tree);

/// Excess-of-mass selection, leaf to root. A cluster replaces its selected
/// descendants only if its stability strictly exceeds theirs combined. Ids
/// are ordered by decreasing size, then smallest member index. Medoid
/// fields are left empty; see medoid_distances.
ClusterResult extract_clusters(const Dendrogram& dendrogram, const ExtractOptions& options);

struct MedoidSummary {
  std::vector<std::optional<double>> normalized_distance;
  std::vector<Eigen::Index> medoids;
};

/// Medoid = member with the smallest summed distance to its co-members
/// (lowest index on ties). Each member gets d(member, medoid) divided by the
/// largest such distance in its cluster, 0 when that is 0.
MedoidSummary medoid_distances(const Eigen::Ref<const Eigen::MatrixXd>& distances,
                               std::span<const int> labels);

struct HdbscanOptions {
  int min_cluster_size = 3;
  /// Defaults to min_cluster_size.
  std::optional<int> core_k;
  bool allow_single_cluster = false;
};

/// mst -> build_hierarchy -> extract_clusters -> medoid_distances. The zero
/// distance stand-in is the smallest positive matrix entry times 1e-3.
ClusterResult hdbscan(const DistanceMatrix& matrix, const HdbscanOptions& options = {});

}  // namespace topicdyn
