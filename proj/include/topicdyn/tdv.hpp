#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace topicdyn {

/// Raw daily counts of one topic, one entry per consecutive day starting at
/// start_date. Missing days must be present as explicit zeros.
struct TopicSeries {
  std::string topic_id;
  std::chrono::year_month_day start_date{};
  std::vector<std::int64_t> counts;
};

/// Tolerance used for every "sums to one" check.
inline constexpr double kMassTolerance = 1e-9;

enum class PreprocessOrder {
  SmoothThenNormalize,
  NormalizeThenSmooth,
};

struct PreprocessRecord {
  int window = 1;
  bool normalized = false;
  PreprocessOrder order = PreprocessOrder::SmoothThenNormalize;
};

/// Topic distribution vector: nonnegative daily activity shares.
struct Tdv {
  std::string topic_id;
  Eigen::VectorXd values;
  PreprocessRecord meta;

  Eigen::Index size() const { return values.size(); }
};

/// Truncated-boundary moving average. Element m is the mean of the inputs in
/// [m - (w-1)/2, m + (w-1)/2] that exist. Throws InvalidParameter when the
/// window is even, non-positive or longer than the series.
Eigen::VectorXd smooth(const Eigen::Ref<const Eigen::VectorXd>& values, int window);

/// Counts converted to reals, then smoothed.
Eigen::VectorXd smooth(const TopicSeries& series, int window);

/// Divides by the total mass. Throws DegenerateTopic for all-zero input and
/// InvalidInput for negative or non-finite entries.
Tdv normalize(std::string topic_id, const Eigen::Ref<const Eigen::VectorXd>& values);
Tdv normalize(const TopicSeries& series);

Eigen::VectorXd to_real(const TopicSeries& series);

struct PreprocessOptions {
  int window = 3;
  PreprocessOrder order = PreprocessOrder::SmoothThenNormalize;
};

/// Full preprocessing. NormalizeThenSmooth renormalizes after smoothing so
/// the result still sums to one.
Tdv preprocess(const TopicSeries& series, const PreprocessOptions& options = {});

/// True when every value is finite, nonnegative and the sum is 1 within
/// kMassTolerance.
template <typename Derived>
bool is_normalized(const Eigen::MatrixBase<Derived>& v) {
  using Scalar = typename Derived::Scalar;
  Scalar sum{0};
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const Scalar x = v(i);
    if (!(x >= Scalar{0}) || !std::isfinite(static_cast<double>(x))) return false;
    sum += x;
  }
  return std::abs(static_cast<double>(sum) - 1.0) <= kMassTolerance;
}

}  // namespace topicdyn
