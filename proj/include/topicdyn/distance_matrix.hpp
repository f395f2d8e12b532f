#pragma once

#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "topicdyn/align.hpp"
#include "topicdyn/metrics.hpp"
#include "topicdyn/tdv.hpp"

namespace topicdyn {

/// Symmetric pairwise distances with zero diagonal. `shifts(i, j)` is the
/// displacement applied to topic j when it was compared against topic i.
struct DistanceMatrix {
  std::vector<std::string> topic_ids;
  Eigen::MatrixXd values;
  Eigen::MatrixXi shifts;
  MetricKind metric = MetricKind::NDS;
  Alignment alignment = Alignment::PairwiseExhaustive;

  Eigen::Index size() const { return values.rows(); }
};

/// Throws InvalidInput unless `values` is square, symmetric, nonnegative and
/// has a zero diagonal.
void validate_distances(const Eigen::Ref<const Eigen::MatrixXd>& values);

/// Fills the upper triangle pair by pair on up to `threads` workers. Each
/// entry is computed independently, so the result does not depend on the
/// thread count or schedule.
DistanceMatrix build_distance_matrix(std::span<const Tdv> topics, MetricKind metric,
                                     Alignment alignment, unsigned threads = 1);

/// Wraps an existing table (tests, fixtures). Validates it.
DistanceMatrix make_distance_matrix(std::vector<std::string> topic_ids, Eigen::MatrixXd values,
                                    MetricKind metric = MetricKind::NDS,
                                    Alignment alignment = Alignment::None);

}  // namespace topicdyn
