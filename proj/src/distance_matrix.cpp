#include "topicdyn/distance_matrix.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <utility>

#include "topicdyn/error.hpp"

namespace topicdyn {

void validate_distances(const Eigen::Ref<const Eigen::MatrixXd>& values) {
  if (values.rows() != values.cols()) {
    throw Error(ErrorKind::InvalidInput, "distance matrix must be square");
  }
  for (Eigen::Index i = 0; i < values.rows(); ++i) {
    if (values(i, i) != 0.0) {
      throw Error(ErrorKind::InvalidInput, "distance matrix diagonal must be zero");
    }
    for (Eigen::Index j = i + 1; j < values.cols(); ++j) {
      const double d = values(i, j);
      if (!(d >= 0.0) || !std::isfinite(d)) {
        throw Error(ErrorKind::InvalidInput, "distances must be finite and nonnegative");
      }
      if (d != values(j, i)) {
        throw Error(ErrorKind::InvalidInput, "distance matrix must be symmetric");
      }
    }
  }
}

DistanceMatrix make_distance_matrix(std::vector<std::string> topic_ids, Eigen::MatrixXd values,
                                    MetricKind metric, Alignment alignment) {
  validate_distances(values);
  if (static_cast<Eigen::Index>(topic_ids.size()) != values.rows()) {
    throw Error(ErrorKind::InvalidInput, "topic id count does not match the matrix size");
  }
  DistanceMatrix out;
  out.topic_ids = std::move(topic_ids);
  out.shifts = Eigen::MatrixXi::Zero(values.rows(), values.cols());
  out.values = std::move(values);
  out.metric = metric;
  out.alignment = alignment;
  return out;
}

DistanceMatrix build_distance_matrix(std::span<const Tdv> topics, MetricKind metric,
                                     Alignment alignment, unsigned threads) {
  const auto n = static_cast<Eigen::Index>(topics.size());
  for (const Tdv& t : topics) {
    if (t.size() != topics.front().size()) {
      throw Error(ErrorKind::IncompatibleVectors,
                  "topic '" + t.topic_id + "' differs in length from '" +
                      topics.front().topic_id + "'");
    }
    if (!is_normalized(t.values)) {
      throw Error(ErrorKind::InvalidInput, "topic '" + t.topic_id + "' is not normalized");
    }
  }

  DistanceMatrix out;
  out.metric = metric;
  out.alignment = alignment;
  out.values = Eigen::MatrixXd::Zero(n, n);
  out.shifts = Eigen::MatrixXi::Zero(n, n);
  for (const Tdv& t : topics) out.topic_ids.push_back(t.topic_id);

  std::vector<std::pair<Eigen::Index, Eigen::Index>> pairs;
  pairs.reserve(static_cast<std::size_t>(n * (n - 1) / 2));
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j) pairs.emplace_back(i, j);

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    try {
      for (std::size_t k = next++; k < pairs.size(); k = next++) {
        const auto [i, j] = pairs[k];
        const PairAlignment r = aligned_distance(metric, alignment, topics[static_cast<std::size_t>(i)].values,
                                                 topics[static_cast<std::size_t>(j)].values);
        // Distinct pairs write distinct cells.
        out.values(i, j) = r.distance;
        out.values(j, i) = r.distance;
        out.shifts(i, j) = r.shift;
        out.shifts(j, i) = -r.shift;
      }
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
      next = pairs.size();
    }
  };

  const unsigned workers =
      std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(1, pairs.size()))));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

}  // namespace topicdyn
