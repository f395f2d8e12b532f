#pragma once

#include <cmath>
#include <cstdlib>
#include <optional>
#include <string_view>

#include <Eigen/Dense>

#include "topicdyn/metrics.hpp"
#include "topicdyn/tdv.hpp"

namespace topicdyn {

enum class Alignment { None, MaxPeak, CenterOfMass, PairwiseExhaustive };

inline constexpr Alignment kAllAlignments[] = {Alignment::None, Alignment::MaxPeak,
                                               Alignment::CenterOfMass,
                                               Alignment::PairwiseExhaustive};

std::string_view to_string(Alignment alignment) noexcept;
std::optional<Alignment> parse_alignment(std::string_view name) noexcept;

/// Two vectors zero-padded onto a common frame after displacing `b` by
/// `shift` days relative to `a`. Padding adds no mass.
template <typename Scalar>
struct BasicAlignedPair {
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  Vector a;
  Vector b;
  int shift = 0;
  Eigen::Index padded_length = 0;
};

using AlignedPair = BasicAlignedPair<double>;

template <typename Scalar>
struct BasicExhaustiveAlignment {
  BasicAlignedPair<Scalar> pair;
  Scalar distance{};
};

using ExhaustiveAlignment = BasicExhaustiveAlignment<double>;

/// Shift and distance for one pair under some alignment strategy.
struct PairAlignment {
  int shift = 0;
  double distance = 0.0;
};

/// First index of the maximum.
template <typename Derived>
Eigen::Index peak_index(const Eigen::MatrixBase<Derived>& v) {
  Eigen::Index best = 0;
  for (Eigen::Index m = 1; m < v.size(); ++m) {
    if (v(m) > v(best)) best = m;
  }
  return best;
}

/// Mass-weighted mean day index (0-based); the mass is 1 so no division.
template <typename Derived>
typename Derived::Scalar center_of_mass(const Eigen::MatrixBase<Derived>& v) {
  typename Derived::Scalar c(0);
  for (Eigen::Index m = 0; m < v.size(); ++m) c += static_cast<typename Derived::Scalar>(m) * v(m);
  return c;
}

namespace detail {

// In the padded frame `a` starts at max(0, -shift) and `b` at max(0, shift).
struct ShiftFrame {
  Eigen::Index offset_a;
  Eigen::Index offset_b;
  Eigen::Index length;
};

inline ShiftFrame frame_for(Eigen::Index size, int shift) {
  return {shift < 0 ? Eigen::Index(-shift) : 0, shift > 0 ? Eigen::Index(shift) : 0,
          size + std::abs(shift)};
}

template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar shifted_distance_unchecked(MetricKind kind,
                                                     const Eigen::MatrixBase<DerivedA>& a,
                                                     const Eigen::MatrixBase<DerivedB>& b,
                                                     int shift) {
  using Scalar = typename DerivedA::Scalar;
  const Eigen::Index n = a.size();
  const ShiftFrame f = frame_for(n, shift);
  auto get_a = [&](Eigen::Index j) -> Scalar {
    const Eigen::Index k = j - f.offset_a;
    return (k >= 0 && k < n) ? Scalar(a(k)) : Scalar(0);
  };
  auto get_b = [&](Eigen::Index j) -> Scalar {
    const Eigen::Index k = j - f.offset_b;
    return (k >= 0 && k < n) ? Scalar(b(k)) : Scalar(0);
  };
  return metric_kernel<Scalar>(kind, f.length, get_a, get_b);
}

}  // namespace detail

/// Explicitly padded pair for a given shift.
template <typename DerivedA, typename DerivedB>
BasicAlignedPair<typename DerivedA::Scalar> pad_pair(const Eigen::MatrixBase<DerivedA>& a,
                                                     const Eigen::MatrixBase<DerivedB>& b,
                                                     int shift) {
  if (a.size() != b.size()) {
    throw Error(ErrorKind::IncompatibleVectors, "aligned vectors must share their length");
  }
  const auto f = detail::frame_for(a.size(), shift);
  BasicAlignedPair<typename DerivedA::Scalar> out;
  out.a.setZero(f.length);
  out.b.setZero(f.length);
  out.a.segment(f.offset_a, a.size()) = a;
  out.b.segment(f.offset_b, b.size()) = b;
  out.shift = shift;
  out.padded_length = f.length;
  return out;
}

/// Distance after displacing `b` by `shift`, without materializing padding.
template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar distance_at_shift(MetricKind kind, const Eigen::MatrixBase<DerivedA>& a,
                                            const Eigen::MatrixBase<DerivedB>& b, int shift) {
  detail::require_comparable(a, b);
  return detail::shifted_distance_unchecked(kind, a, b, shift);
}

template <typename DerivedA, typename DerivedB>
int max_peak_shift(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
  return static_cast<int>(peak_index(a) - peak_index(b));
}

/// Rounded half away from zero.
template <typename DerivedA, typename DerivedB>
int center_of_mass_shift(const Eigen::MatrixBase<DerivedA>& a,
                         const Eigen::MatrixBase<DerivedB>& b) {
  return static_cast<int>(std::lround(center_of_mass(a) - center_of_mass(b)));
}

/// Evaluates every shift in [-(M-1), M-1] in the order 0, -1, +1, -2, +2, ...
/// and keeps the first strict improvement, so ties go to the smaller |shift|
/// and then to the negative one.
template <typename DerivedA, typename DerivedB>
PairAlignment best_shift(MetricKind kind, const Eigen::MatrixBase<DerivedA>& a,
                         const Eigen::MatrixBase<DerivedB>& b) {
  detail::require_comparable(a, b);
  const int reach = static_cast<int>(a.size()) - 1;
  PairAlignment best{0, static_cast<double>(detail::shifted_distance_unchecked(kind, a, b, 0))};
  for (int mag = 1; mag <= reach; ++mag) {
    for (int shift : {-mag, mag}) {
      const double d = static_cast<double>(detail::shifted_distance_unchecked(kind, a, b, shift));
      if (d < best.distance) best = {shift, d};
    }
  }
  return best;
}

template <typename DerivedA, typename DerivedB>
BasicAlignedPair<typename DerivedA::Scalar> align_max(const Eigen::MatrixBase<DerivedA>& a,
                                                      const Eigen::MatrixBase<DerivedB>& b) {
  detail::require_comparable(a, b);
  return pad_pair(a, b, max_peak_shift(a, b));
}

template <typename DerivedA, typename DerivedB>
BasicAlignedPair<typename DerivedA::Scalar> align_mean(const Eigen::MatrixBase<DerivedA>& a,
                                                       const Eigen::MatrixBase<DerivedB>& b) {
  detail::require_comparable(a, b);
  return pad_pair(a, b, center_of_mass_shift(a, b));
}

template <typename DerivedA, typename DerivedB>
BasicExhaustiveAlignment<typename DerivedA::Scalar> align_exhaustive(
    const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b, MetricKind kind) {
  const PairAlignment best = best_shift(kind, a, b);
  return {pad_pair(a, b, best.shift), static_cast<typename DerivedA::Scalar>(best.distance)};
}

/// Shift chosen by `alignment` and the metric evaluated at that shift.
template <typename DerivedA, typename DerivedB>
PairAlignment aligned_distance(MetricKind kind, Alignment alignment,
                               const Eigen::MatrixBase<DerivedA>& a,
                               const Eigen::MatrixBase<DerivedB>& b) {
  detail::require_comparable(a, b);
  int shift = 0;
  switch (alignment) {
    case Alignment::None: break;
    case Alignment::MaxPeak: shift = max_peak_shift(a, b); break;
    case Alignment::CenterOfMass: shift = center_of_mass_shift(a, b); break;
    case Alignment::PairwiseExhaustive: return best_shift(kind, a, b);
  }
  return {shift, static_cast<double>(detail::shifted_distance_unchecked(kind, a, b, shift))};
}

inline AlignedPair align_max(const Tdv& a, const Tdv& b) { return align_max(a.values, b.values); }
inline AlignedPair align_mean(const Tdv& a, const Tdv& b) { return align_mean(a.values, b.values); }
inline ExhaustiveAlignment align_exhaustive(const Tdv& a, const Tdv& b, MetricKind kind) {
  return align_exhaustive(a.values, b.values, kind);
}

}  // namespace topicdyn
