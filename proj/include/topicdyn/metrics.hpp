#pragma once

#include <algorithm>
#include <cassert>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>

#include <Eigen/Dense>

#include "topicdyn/error.hpp"
#include "topicdyn/tdv.hpp"

namespace topicdyn {

enum class MetricKind { SAD, KS, HDA, NDS };

inline constexpr MetricKind kAllMetrics[] = {MetricKind::SAD, MetricKind::KS, MetricKind::HDA,
                                             MetricKind::NDS};

std::string_view to_string(MetricKind kind) noexcept;
std::optional<MetricKind> parse_metric(std::string_view name) noexcept;

/// Prefix sums of a normalized TDV.
struct CumulativeTdv {
  std::string topic_id;
  Eigen::VectorXd values;
};

namespace detail {

// Distances may leave [0,1] by rounding only; anything larger is a bug.
template <typename Scalar>
Scalar clamp_unit(Scalar d) {
  assert(d > Scalar(-1e-9) && d < Scalar(1 + 1e-9));
  if (d < Scalar(0)) return Scalar(0);
  if (d > Scalar(1)) return Scalar(1);
  return d;
}

// The kernels read both vectors through accessors over a common index range
// [0, length). Alignment reuses them with zero-padded accessors, so a shifted
// distance is bit-identical to the distance of explicitly padded vectors.
template <typename Scalar, typename GetA, typename GetB>
Scalar sad_kernel(Eigen::Index length, GetA a, GetB b) {
  Scalar sum(0);
  for (Eigen::Index m = 0; m < length; ++m) sum += std::abs(a(m) - b(m));
  return clamp_unit(sum / Scalar(2));
}

template <typename Scalar, typename GetA, typename GetB>
Scalar ks_kernel(Eigen::Index length, GetA a, GetB b) {
  Scalar cum_a(0), cum_b(0), best(0);
  for (Eigen::Index m = 0; m < length; ++m) {
    cum_a += a(m);
    cum_b += b(m);
    best = std::max(best, Scalar(std::abs(cum_a - cum_b)));
  }
  return clamp_unit(best);
}

template <typename Scalar, typename GetA, typename GetB>
Scalar hda_kernel(Eigen::Index length, GetA a, GetB b) {
  Scalar sum(0);
  for (Eigen::Index m = 0; m < length; ++m) {
    const Scalar diff = std::sqrt(a(m)) - std::sqrt(b(m));
    sum += diff * diff;
  }
  return clamp_unit(std::sqrt(sum) / std::sqrt(Scalar(2)));
}

template <typename Scalar, typename GetA, typename GetB>
Scalar nds_kernel(Eigen::Index length, GetA a, GetB b) {
  Scalar sum(0);
  for (Eigen::Index m = 0; m < length; ++m) {
    const Scalar diff = a(m) * a(m) - b(m) * b(m);
    sum += diff * diff;
  }
  return clamp_unit(std::sqrt(sum) / std::sqrt(Scalar(2)));
}

template <typename Scalar, typename GetA, typename GetB>
Scalar metric_kernel(MetricKind kind, Eigen::Index length, GetA a, GetB b) {
  switch (kind) {
    case MetricKind::SAD: return sad_kernel<Scalar>(length, a, b);
    case MetricKind::KS: return ks_kernel<Scalar>(length, a, b);
    case MetricKind::HDA: return hda_kernel<Scalar>(length, a, b);
    case MetricKind::NDS: return nds_kernel<Scalar>(length, a, b);
  }
  return Scalar(0);
}

template <typename DerivedA, typename DerivedB>
void require_comparable(const Eigen::MatrixBase<DerivedA>& a,
                        const Eigen::MatrixBase<DerivedB>& b) {
  if (a.size() != b.size()) {
    throw Error(ErrorKind::IncompatibleVectors,
                "vectors differ in length (" + std::to_string(a.size()) + " vs " +
                    std::to_string(b.size()) + ")");
  }
  if (!is_normalized(a) || !is_normalized(b)) {
    throw Error(ErrorKind::InvalidInput, "distance inputs must be normalized");
  }
}

}  // namespace detail

/// Half the L1 distance.
template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar d_sad(const Eigen::MatrixBase<DerivedA>& a,
                                const Eigen::MatrixBase<DerivedB>& b) {
  using Scalar = typename DerivedA::Scalar;
  detail::require_comparable(a, b);
  return detail::sad_kernel<Scalar>(a.size(), [&](Eigen::Index m) { return a(m); },
                                    [&](Eigen::Index m) { return b(m); });
}

/// Largest gap between the prefix sums.
template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar d_ks(const Eigen::MatrixBase<DerivedA>& a,
                               const Eigen::MatrixBase<DerivedB>& b) {
  using Scalar = typename DerivedA::Scalar;
  detail::require_comparable(a, b);
  return detail::ks_kernel<Scalar>(a.size(), [&](Eigen::Index m) { return a(m); },
                                   [&](Eigen::Index m) { return b(m); });
}

/// Hellinger distance; weights low-mass days up through the square roots.
template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar d_hda(const Eigen::MatrixBase<DerivedA>& a,
                                const Eigen::MatrixBase<DerivedB>& b) {
  using Scalar = typename DerivedA::Scalar;
  detail::require_comparable(a, b);
  return detail::hda_kernel<Scalar>(a.size(), [&](Eigen::Index m) { return a(m); },
                                    [&](Eigen::Index m) { return b(m); });
}

/// Norm of the difference of squares; weights peaks up and low-mass noise
/// down. Bounded by [0,1] but not known to satisfy the triangle inequality.
template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar d_nds(const Eigen::MatrixBase<DerivedA>& a,
                                const Eigen::MatrixBase<DerivedB>& b) {
  using Scalar = typename DerivedA::Scalar;
  detail::require_comparable(a, b);
  return detail::nds_kernel<Scalar>(a.size(), [&](Eigen::Index m) { return a(m); },
                                    [&](Eigen::Index m) { return b(m); });
}

template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar distance(MetricKind kind, const Eigen::MatrixBase<DerivedA>& a,
                                   const Eigen::MatrixBase<DerivedB>& b) {
  using Scalar = typename DerivedA::Scalar;
  detail::require_comparable(a, b);
  return detail::metric_kernel<Scalar>(kind, a.size(), [&](Eigen::Index m) { return a(m); },
                                       [&](Eigen::Index m) { return b(m); });
}

inline double distance(MetricKind kind, const Tdv& a, const Tdv& b) {
  return distance(kind, a.values, b.values);
}

template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> cumulate(
    const Eigen::MatrixBase<Derived>& a) {
  if (!is_normalized(a)) throw Error(ErrorKind::InvalidInput, "cumulate needs a normalized vector");
  Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> out(a.size());
  typename Derived::Scalar running(0);
  for (Eigen::Index m = 0; m < a.size(); ++m) {
    running += a(m);
    out(m) = running;
  }
  return out;
}

CumulativeTdv cumulate(const Tdv& tdv);

}  // namespace topicdyn
