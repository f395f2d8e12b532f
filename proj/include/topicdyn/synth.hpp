#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "topicdyn/tdv.hpp"

namespace topicdyn {

enum class ShapeKind { Uniform, Burst, Rollercoaster, Seasonal };

std::string_view to_string(ShapeKind kind) noexcept;
std::optional<ShapeKind> parse_shape(std::string_view name) noexcept;

/// Parameters of one synthetic topic. Burst profiles are Gaussians whose
/// standard deviation is width / 4, so a burst of width w spans about w days.
struct ShapeSpec {
  ShapeKind kind = ShapeKind::Uniform;
  int length = 222;
  std::int64_t total_mass = 10000;
  /// Burst / rollercoaster centre day. Unset: drawn from the middle half of
  /// the range using the seed.
  std::optional<int> center;
  double width = 5.0;
  int bursts = 2;
  int separation = 80;
  /// Share of the mass spread evenly under burst-type shapes.
  double baseline = 0.05;
  double period = 111.0;
  double phase = 0.0;
  double amplitude = 0.8;
  /// Scale of the per-day multiplicative lognormal jitter.
  double noise = 0.0;
  std::uint64_t seed = 0;

  /// Throws InvalidParameter for out-of-range fields.
  void validate() const;
};

struct LabeledSeries {
  TopicSeries series;
  ShapeKind label = ShapeKind::Uniform;
};

/// Deterministic for a given spec (including seed). Jitter draws are clipped
/// to three standard deviations; counts are rounded last.
LabeledSeries generate(const ShapeSpec& spec, std::string topic_id = "synthetic",
                       std::chrono::year_month_day start = {});

/// A batch of `count` topics sharing a spec; topic i uses seed + i and is
/// named "<prefix><i>".
struct FixtureGroup {
  ShapeSpec spec;
  int count = 1;
  std::string prefix;
};

std::vector<LabeledSeries> generate_fixture(const std::vector<FixtureGroup>& groups,
                                            std::chrono::year_month_day start);

}  // namespace topicdyn
