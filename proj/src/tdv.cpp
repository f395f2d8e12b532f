#include "topicdyn/tdv.hpp"

#include <algorithm>
#include <string>
#include <utility>

#include "topicdyn/error.hpp"

namespace topicdyn {

Eigen::VectorXd to_real(const TopicSeries& series) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(series.counts.size()));
  for (std::size_t i = 0; i < series.counts.size(); ++i) {
    if (series.counts[i] < 0) {
      throw Error(ErrorKind::InvalidInput,
                  "topic '" + series.topic_id + "' has a negative count at day " +
                      std::to_string(i));
    }
    out(static_cast<Eigen::Index>(i)) = static_cast<double>(series.counts[i]);
  }
  return out;
}

Eigen::VectorXd smooth(const Eigen::Ref<const Eigen::VectorXd>& values, int window) {
  const Eigen::Index n = values.size();
  if (window < 1 || window % 2 == 0) {
    throw Error(ErrorKind::InvalidParameter,
                "smoothing window must be odd and positive, got " + std::to_string(window));
  }
  if (window > n) {
    throw Error(ErrorKind::InvalidParameter,
                "smoothing window " + std::to_string(window) + " exceeds series length " +
                    std::to_string(n));
  }
  const Eigen::Index half = (window - 1) / 2;
  Eigen::VectorXd out(n);
  for (Eigen::Index m = 0; m < n; ++m) {
    const Eigen::Index lo = std::max<Eigen::Index>(0, m - half);
    const Eigen::Index hi = std::min<Eigen::Index>(n - 1, m + half);
    double sum = 0.0;
    for (Eigen::Index k = lo; k <= hi; ++k) sum += values(k);
    out(m) = sum / static_cast<double>(hi - lo + 1);
  }
  return out;
}

Eigen::VectorXd smooth(const TopicSeries& series, int window) {
  return smooth(to_real(series), window);
}

Tdv normalize(std::string topic_id, const Eigen::Ref<const Eigen::VectorXd>& values) {
  if (values.size() == 0) {
    throw Error(ErrorKind::InvalidInput, "topic '" + topic_id + "' has no days");
  }
  double total = 0.0;
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    const double x = values(i);
    if (!(x >= 0.0) || !std::isfinite(x)) {
      throw Error(ErrorKind::InvalidInput,
                  "topic '" + topic_id + "' has a negative or non-finite value");
    }
    total += x;
  }
  if (total <= 0.0) {
    throw Error(ErrorKind::DegenerateTopic, "topic '" + topic_id + "' has no activity");
  }
  Tdv tdv;
  tdv.topic_id = std::move(topic_id);
  tdv.values = values / total;
  tdv.meta.normalized = true;
  return tdv;
}

Tdv normalize(const TopicSeries& series) { return normalize(series.topic_id, to_real(series)); }

Tdv preprocess(const TopicSeries& series, const PreprocessOptions& options) {
  Tdv out;
  if (options.order == PreprocessOrder::SmoothThenNormalize) {
    out = normalize(series.topic_id, smooth(series, options.window));
  } else {
    const Tdv first = normalize(series);
    out = normalize(series.topic_id, smooth(first.values, options.window));
  }
  out.meta.window = options.window;
  out.meta.order = options.order;
  return out;
}

}  // namespace topicdyn
