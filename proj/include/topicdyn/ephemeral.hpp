#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "topicdyn/tdv.hpp"

namespace topicdyn {

/// Quadrants of the (filtered, sorted) ephemerality plane.
enum class Category { Uniform, Rollercoaster, Burst, Undefined };

std::string_view to_string(Category category) noexcept;

/// How the sorted measure is read when deciding "high" vs "low".
/// Verbatim uses the value as computed (single bursts score low);
/// Flipped uses 1 - value (single bursts score high).
enum class SortedOrientation { Verbatim, Flipped };

std::string_view to_string(SortedOrientation orientation) noexcept;
std::optional<SortedOrientation> parse_orientation(std::string_view name) noexcept;

/// How the lower trim point of the filtered measure is located.
enum class TrimReading {
  Cumulative,  ///< first day whose prefix sum reaches low_cut
  PerDay,      ///< first day whose own share reaches low_cut
};

struct EphemeralityParams {
  double mass_threshold = 0.8;
  double trim_fraction = 0.1;
  TrimReading trim_reading = TrimReading::Cumulative;
  SortedOrientation orientation = SortedOrientation::Verbatim;
  /// Thresholds applied by categorize. Unset means the median over the
  /// analyzed topic set. The sorted threshold applies to the oriented value.
  std::optional<double> filtered_threshold;
  std::optional<double> sorted_threshold;

  double low_cut() const { return trim_fraction; }
  double high_cut() const { return 1.0 - trim_fraction; }
  /// Throws InvalidParameter when out of range.
  void validate() const;
};

struct EphemeralityReport {
  std::string topic_id;
  double e_orig = 0.0;
  double e_filtered = 0.0;
  double e_sorted = 0.0;
  Category category = Category::Undefined;
};

/// 1 - (m_threshold - m_start) / (m_end - m_start) over the active span.
/// Single-active-day topics score 1.
double e_orig(const Eigen::Ref<const Eigen::VectorXd>& t, const EphemeralityParams& params = {});

/// As e_orig, with the numerator replaced by the length of the middle section
/// left after trimming trim_fraction of the mass from each side.
double e_filtered(const Eigen::Ref<const Eigen::VectorXd>& t,
                  const EphemeralityParams& params = {});

/// (1/mass_threshold) * (k / D), where k is the number of busiest days needed
/// to reach mass_threshold and D the number of active days; capped at 1.
double e_sorted(const Eigen::Ref<const Eigen::VectorXd>& t, const EphemeralityParams& params = {});

/// Oriented sorted value: identity for Verbatim, 1 - x for Flipped.
double oriented_sorted(double e_sorted, SortedOrientation orientation) noexcept;

/// Quadrant for one topic. A value is "high" when it strictly exceeds its
/// threshold.
Category categorize(double e_filtered, double e_sorted, double filtered_threshold,
                    double sorted_threshold, SortedOrientation orientation) noexcept;

/// The three measures for one topic; category left Undefined.
EphemeralityReport measure(const Tdv& tdv, const EphemeralityParams& params = {});

struct CategoryThresholds {
  double filtered = 0.0;
  double sorted = 0.0;  // on the oriented scale
};

/// Fixed thresholds from params, or medians of the reports.
CategoryThresholds resolve_thresholds(std::span<const EphemeralityReport> reports,
                                      const EphemeralityParams& params);

/// Measures every topic and categorizes against resolve_thresholds.
std::vector<EphemeralityReport> analyze(std::span<const Tdv> topics,
                                        const EphemeralityParams& params = {});

}  // namespace topicdyn
