#include "topicdyn/cluster.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <string>
#include <tuple>

#include "topicdyn/error.hpp"

namespace topicdyn {

namespace {

class DisjointSets {
 public:
  explicit DisjointSets(Eigen::Index n) : parent_(static_cast<std::size_t>(n)) {
    std::iota(parent_.begin(), parent_.end(), Eigen::Index{0});
  }

  Eigen::Index find(Eigen::Index x) {
    while (parent_[idx(x)] != x) {
      parent_[idx(x)] = parent_[idx(parent_[idx(x)])];
      x = parent_[idx(x)];
    }
    return x;
  }

  // Keeps the smaller root so representatives are deterministic.
  void unite(Eigen::Index a, Eigen::Index b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (b < a) std::swap(a, b);
    parent_[idx(b)] = a;
  }

 private:
  static std::size_t idx(Eigen::Index x) { return static_cast<std::size_t>(x); }
  std::vector<Eigen::Index> parent_;
};

bool edge_order(const MstEdge& x, const MstEdge& y) {
  return std::tie(x.weight, x.u, x.v) < std::tie(y.weight, y.u, y.v);
}

double smallest_positive(const Eigen::Ref<const Eigen::MatrixXd>& values) {
  double best = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < values.rows(); ++i)
    for (Eigen::Index j = 0; j < values.cols(); ++j)
      if (values(i, j) > 0.0) best = std::min(best, values(i, j));
  return best;
}

}  // namespace

std::size_t ClusterResult::num_noise() const {
  return static_cast<std::size_t>(std::count(labels.begin(), labels.end(), kNoise));
}

Eigen::VectorXd core_distances(const Eigen::Ref<const Eigen::MatrixXd>& distances, int core_k) {
  const Eigen::Index n = distances.rows();
  if (core_k < 1 || core_k > n) {
    throw Error(ErrorKind::InvalidParameter,
                "core_k must lie in [1, " + std::to_string(n) + "], got " + std::to_string(core_k));
  }
  Eigen::VectorXd core(n);
  std::vector<double> row(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) row[static_cast<std::size_t>(j)] = distances(i, j);
    auto kth = row.begin() + (core_k - 1);
    std::nth_element(row.begin(), kth, row.end());
    core(i) = *kth;
  }
  return core;
}

std::vector<MstEdge> mst(const Eigen::Ref<const Eigen::MatrixXd>& distances, int core_k) {
  validate_distances(distances);
  const Eigen::Index n = distances.rows();
  if (n < 2) {
    throw Error(ErrorKind::InsufficientData, "clustering needs at least 2 topics");
  }
  const Eigen::VectorXd core = core_distances(distances, core_k);

  std::vector<MstEdge> candidates;
  candidates.reserve(static_cast<std::size_t>(n * (n - 1) / 2));
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j)
      candidates.push_back({i, j, std::max({core(i), core(j), distances(i, j)})});
  std::sort(candidates.begin(), candidates.end(), edge_order);

  DisjointSets sets(n);
  std::vector<MstEdge> tree;
  tree.reserve(static_cast<std::size_t>(n - 1));
  for (const MstEdge& e : candidates) {
    if (sets.find(e.u) == sets.find(e.v)) continue;
    sets.unite(e.u, e.v);
    tree.push_back(e);
    if (static_cast<Eigen::Index>(tree.size()) == n - 1) break;
  }
  return tree;
}

std::vector<MstEdge> mst(const DistanceMatrix& matrix, int core_k) {
  return mst(matrix.values, core_k);
}

std::vector<Eigen::Index> Dendrogram::leaves(Eigen::Index node) const {
  std::vector<Eigen::Index> out;
  std::vector<Eigen::Index> stack{node};
  while (!stack.empty()) {
    const Eigen::Index x = stack.back();
    stack.pop_back();
    if (x < num_points) {
      out.push_back(x);
    } else {
      const Merge& m = merges[static_cast<std::size_t>(x - num_points)];
      stack.push_back(m.left);
      stack.push_back(m.right);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

Dendrogram build_hierarchy(std::span<const MstEdge> edges) {
  const auto n = static_cast<Eigen::Index>(edges.size()) + 1;
  if (n < 2) throw Error(ErrorKind::MalformedTree, "a hierarchy needs at least one edge");

  std::vector<MstEdge> sorted;
  sorted.reserve(edges.size());
  for (MstEdge e : edges) {
    if (e.u > e.v) std::swap(e.u, e.v);
    if (e.u < 0 || e.v >= n || e.u == e.v) {
      throw Error(ErrorKind::MalformedTree, "edge endpoint outside 0.." + std::to_string(n - 1));
    }
    sorted.push_back(e);
  }
  std::stable_sort(sorted.begin(), sorted.end(), edge_order);

  Dendrogram out;
  out.num_points = n;
  out.merges.reserve(sorted.size());
  DisjointSets sets(n);
  std::vector<Eigen::Index> node_of(static_cast<std::size_t>(n));
  std::vector<Eigen::Index> size_of(static_cast<std::size_t>(n), 1);
  std::iota(node_of.begin(), node_of.end(), Eigen::Index{0});
  for (const MstEdge& e : sorted) {
    const Eigen::Index ru = sets.find(e.u);
    const Eigen::Index rv = sets.find(e.v);
    if (ru == rv) throw Error(ErrorKind::MalformedTree, "edges contain a cycle");
    const Eigen::Index size = size_of[static_cast<std::size_t>(ru)] + size_of[static_cast<std::size_t>(rv)];
    out.merges.push_back({node_of[static_cast<std::size_t>(ru)], node_of[static_cast<std::size_t>(rv)],
                          e.weight, size});
    sets.unite(ru, rv);
    const Eigen::Index root = sets.find(ru);
    node_of[static_cast<std::size_t>(root)] = n + static_cast<Eigen::Index>(out.merges.size()) - 1;
    size_of[static_cast<std::size_t>(root)] = size;
  }
  return out;
}

CondensedTree condense(const Dendrogram& dendrogram, int min_cluster_size, double zero_distance) {
  if (min_cluster_size < 2) {
    throw Error(ErrorKind::InvalidParameter,
                "min_cluster_size must be at least 2, got " + std::to_string(min_cluster_size));
  }
  const Eigen::Index n = dendrogram.num_points;
  const auto lambda_of = [&](double d) { return 1.0 / (d > 0.0 ? d : zero_distance); };
  const auto size_of = [&](Eigen::Index node) {
    return node < n ? Eigen::Index{1} : dendrogram.merges[static_cast<std::size_t>(node - n)].size;
  };

  CondensedTree tree;
  tree.num_points = n;
  Eigen::Index next_label = n + 1;

  // (dendrogram node, condensed cluster label) in breadth-first order, which
  // hands out labels parent-before-child.
  std::vector<std::pair<Eigen::Index, Eigen::Index>> queue{{dendrogram.root(), n}};
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const auto [node, label] = queue[head];
    if (node < n) continue;
    const Merge& m = dendrogram.merges[static_cast<std::size_t>(node - n)];
    const double lambda = lambda_of(m.distance);
    const bool left_big = size_of(m.left) >= min_cluster_size;
    const bool right_big = size_of(m.right) >= min_cluster_size;

    auto fall_out = [&](Eigen::Index child) {
      for (Eigen::Index p : dendrogram.leaves(child)) tree.edges.push_back({label, p, lambda, 1});
    };

    if (left_big && right_big) {
      for (Eigen::Index child : {m.left, m.right}) {
        const Eigen::Index child_label = next_label++;
        tree.edges.push_back({label, child_label, lambda, size_of(child)});
        queue.emplace_back(child, child_label);
      }
    } else if (!left_big && !right_big) {
      fall_out(m.left);
      fall_out(m.right);
    } else if (left_big) {
      fall_out(m.right);
      queue.emplace_back(m.left, label);
    } else {
      fall_out(m.left);
      queue.emplace_back(m.right, label);
    }
  }
  return tree;
}

std::vector<double> cluster_stabilities(const CondensedTree& tree) {
  const Eigen::Index n = tree.num_points;
  Eigen::Index max_label = n;
  for (const CondensedEdge& e : tree.edges) max_label = std::max({max_label, e.parent, e.child});
  const auto count = static_cast<std::size_t>(max_label - n + 1);

  std::vector<double> birth(count, 0.0);
  for (const CondensedEdge& e : tree.edges)
    if (tree.is_cluster(e.child)) birth[static_cast<std::size_t>(e.child - n)] = e.lambda;

  std::vector<double> stability(count, 0.0);
  for (const CondensedEdge& e : tree.edges) {
    const auto p = static_cast<std::size_t>(e.parent - n);
    stability[p] += (e.lambda - birth[p]) * static_cast<double>(e.child_size);
  }
  return stability;
}

ClusterResult extract_clusters(const Dendrogram& dendrogram, const ExtractOptions& options) {
  if (options.min_cluster_size < 2) {
    throw Error(ErrorKind::InvalidParameter, "min_cluster_size must be at least 2, got " +
                                                 std::to_string(options.min_cluster_size));
  }
  const Eigen::Index n = dendrogram.num_points;
  if (n < 2 || static_cast<Eigen::Index>(dendrogram.merges.size()) != n - 1) {
    throw Error(ErrorKind::MalformedTree, "dendrogram must hold exactly T-1 merges");
  }

  double smallest = std::numeric_limits<double>::infinity();
  for (const Merge& m : dendrogram.merges)
    if (m.distance > 0.0) smallest = std::min(smallest, m.distance);
  const bool all_coincident = !std::isfinite(smallest);
  double zero_distance = options.zero_distance;
  if (!(zero_distance > 0.0)) zero_distance = all_coincident ? 1.0 : smallest * 1e-3;

  ClusterResult result;
  result.tree = condense(dendrogram, options.min_cluster_size, zero_distance);
  const CondensedTree& tree = result.tree;
  const std::vector<double> stability = cluster_stabilities(tree);
  const std::size_t num_labels = stability.size();

  std::vector<std::vector<Eigen::Index>> children(num_labels);
  std::vector<Eigen::Index> parent_of_point(static_cast<std::size_t>(n), -1);
  std::vector<Eigen::Index> parent_of_cluster(num_labels, -1);
  for (const CondensedEdge& e : tree.edges) {
    if (tree.is_cluster(e.child)) {
      children[static_cast<std::size_t>(e.parent - n)].push_back(e.child);
      parent_of_cluster[static_cast<std::size_t>(e.child - n)] = e.parent;
    } else {
      parent_of_point[static_cast<std::size_t>(e.child)] = e.parent;
    }
  }

  std::vector<bool> selected(num_labels, false);
  if (all_coincident) {
    // Every topic is identical: there is no density structure to split.
    selected[0] = n >= options.min_cluster_size;
  } else {
    std::vector<double> subtree(num_labels, 0.0);
    for (std::size_t k = num_labels; k-- > 0;) {
      double child_sum = 0.0;
      for (Eigen::Index c : children[k]) child_sum += subtree[static_cast<std::size_t>(c - n)];
      const bool selectable = k != 0 || options.allow_single_cluster;
      if (selectable && stability[k] > child_sum) {
        selected[k] = true;
        subtree[k] = stability[k];
        std::vector<Eigen::Index> stack(children[k].begin(), children[k].end());
        while (!stack.empty()) {
          const auto d = static_cast<std::size_t>(stack.back() - n);
          stack.pop_back();
          selected[d] = false;
          stack.insert(stack.end(), children[d].begin(), children[d].end());
        }
      } else {
        subtree[k] = child_sum;
      }
    }
  }

  // Label each point with its nearest selected ancestor.
  std::vector<Eigen::Index> owner(static_cast<std::size_t>(n), -1);
  for (Eigen::Index p = 0; p < n; ++p) {
    for (Eigen::Index c = parent_of_point[static_cast<std::size_t>(p)]; c >= 0;
         c = parent_of_cluster[static_cast<std::size_t>(c - n)]) {
      if (selected[static_cast<std::size_t>(c - n)]) {
        owner[static_cast<std::size_t>(p)] = c;
        break;
      }
    }
  }

  struct Found {
    Eigen::Index node;
    Eigen::Index size;
    Eigen::Index first_member;
  };
  std::vector<Found> found;
  for (std::size_t k = 0; k < num_labels; ++k) {
    if (!selected[k]) continue;
    const Eigen::Index node = n + static_cast<Eigen::Index>(k);
    Found f{node, 0, n};
    for (Eigen::Index p = 0; p < n; ++p) {
      if (owner[static_cast<std::size_t>(p)] != node) continue;
      ++f.size;
      f.first_member = std::min(f.first_member, p);
    }
    if (f.size > 0) found.push_back(f);
  }
  std::sort(found.begin(), found.end(), [](const Found& a, const Found& b) {
    return std::tie(b.size, a.first_member) < std::tie(a.size, b.first_member);
  });

  result.labels.assign(static_cast<std::size_t>(n), kNoise);
  for (std::size_t id = 0; id < found.size(); ++id) {
    result.tree_nodes.push_back(found[id].node);
    result.sizes.push_back(found[id].size);
    result.stabilities.push_back(stability[static_cast<std::size_t>(found[id].node - n)]);
    for (Eigen::Index p = 0; p < n; ++p)
      if (owner[static_cast<std::size_t>(p)] == found[id].node)
        result.labels[static_cast<std::size_t>(p)] = static_cast<int>(id);
  }
  result.centroid_distance.assign(static_cast<std::size_t>(n), std::nullopt);
  return result;
}

MedoidSummary medoid_distances(const Eigen::Ref<const Eigen::MatrixXd>& distances,
                               std::span<const int> labels) {
  const auto n = static_cast<Eigen::Index>(labels.size());
  if (distances.rows() != n || distances.cols() != n) {
    throw Error(ErrorKind::InvalidInput, "labels do not match the distance matrix");
  }
  const int num_clusters = labels.empty() ? 0 : *std::max_element(labels.begin(), labels.end()) + 1;

  MedoidSummary out;
  out.normalized_distance.assign(labels.size(), std::nullopt);
  for (int c = 0; c < num_clusters; ++c) {
    std::vector<Eigen::Index> members;
    for (Eigen::Index i = 0; i < n; ++i)
      if (labels[static_cast<std::size_t>(i)] == c) members.push_back(i);
    if (members.empty()) {
      out.medoids.push_back(-1);
      continue;
    }

    Eigen::Index medoid = members.front();
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index i : members) {
      double total = 0.0;
      for (Eigen::Index j : members) total += distances(i, j);
      if (total < best) {
        best = total;
        medoid = i;
      }
    }
    double farthest = 0.0;
    for (Eigen::Index i : members) farthest = std::max(farthest, distances(i, medoid));
    for (Eigen::Index i : members) {
      out.normalized_distance[static_cast<std::size_t>(i)] =
          farthest > 0.0 ? distances(i, medoid) / farthest : 0.0;
    }
    out.medoids.push_back(medoid);
  }
  return out;
}

ClusterResult hdbscan(const DistanceMatrix& matrix, const HdbscanOptions& options) {
  if (options.min_cluster_size < 2) {
    throw Error(ErrorKind::InvalidParameter, "min_cluster_size must be at least 2, got " +
                                                 std::to_string(options.min_cluster_size));
  }
  if (matrix.size() < 2) {
    throw Error(ErrorKind::InsufficientData, "clustering needs at least 2 topics");
  }
  const int core_k = std::min<int>(options.core_k.value_or(options.min_cluster_size),
                                   static_cast<int>(matrix.size()));
  const std::vector<MstEdge> tree = mst(matrix, options.core_k ? *options.core_k : core_k);
  const Dendrogram dendrogram = build_hierarchy(tree);

  ExtractOptions extract;
  extract.min_cluster_size = options.min_cluster_size;
  extract.allow_single_cluster = options.allow_single_cluster;
  const double smallest = smallest_positive(matrix.values);
  extract.zero_distance = std::isfinite(smallest) ? smallest * 1e-3 : 0.0;

  ClusterResult result = extract_clusters(dendrogram, extract);
  MedoidSummary medoids = medoid_distances(matrix.values, result.labels);
  result.centroid_distance = std::move(medoids.normalized_distance);
  result.medoids = std::move(medoids.medoids);
  return result;
}

}  // namespace topicdyn
