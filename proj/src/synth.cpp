#include "topicdyn/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "topicdyn/error.hpp"

namespace topicdyn {

namespace {

void add_gaussian(std::vector<double>& rate, double center, double sigma, double mass) {
  std::vector<double> profile(rate.size());
  double total = 0.0;
  for (std::size_t m = 0; m < rate.size(); ++m) {
    const double z = (static_cast<double>(m) - center) / sigma;
    profile[m] = std::exp(-0.5 * z * z);
    total += profile[m];
  }
  if (total <= 0.0) return;
  for (std::size_t m = 0; m < rate.size(); ++m) rate[m] += mass * profile[m] / total;
}

}  // namespace

std::string_view to_string(ShapeKind kind) noexcept {
  switch (kind) {
    case ShapeKind::Uniform: return "uniform";
    case ShapeKind::Burst: return "burst";
    case ShapeKind::Rollercoaster: return "rollercoaster";
    case ShapeKind::Seasonal: return "seasonal";
  }
  return "unknown";
}

std::optional<ShapeKind> parse_shape(std::string_view name) noexcept {
  for (ShapeKind k : {ShapeKind::Uniform, ShapeKind::Burst, ShapeKind::Rollercoaster,
                      ShapeKind::Seasonal}) {
    if (to_string(k) == name) return k;
  }
  return std::nullopt;
}

void ShapeSpec::validate() const {
  auto fail = [](const std::string& what) { throw Error(ErrorKind::InvalidParameter, what); };
  if (length < 1) fail("length must be at least 1");
  if (total_mass < 1) fail("total_mass must be positive");
  if (!(width >= 1.0)) fail("burst width must be at least 1");
  if (kind == ShapeKind::Rollercoaster && bursts < 2) fail("rollercoaster needs at least 2 bursts");
  if (bursts < 1) fail("bursts must be positive");
  if (separation < 1) fail("separation must be positive");
  if (!(baseline >= 0.0 && baseline < 1.0)) fail("baseline must lie in [0,1)");
  if (!(period > 0.0)) fail("period must be positive");
  if (!(amplitude >= 0.0 && amplitude <= 1.0)) fail("amplitude must lie in [0,1]");
  if (!(noise >= 0.0) || !std::isfinite(noise)) fail("noise must be a nonnegative real");
  if (center && (*center < 0 || *center >= length)) fail("center must be a day inside the range");
}

LabeledSeries generate(const ShapeSpec& spec, std::string topic_id,
                       std::chrono::year_month_day start) {
  spec.validate();
  std::mt19937_64 rng(spec.seed);
  const auto n = static_cast<std::size_t>(spec.length);
  const double mass = static_cast<double>(spec.total_mass);
  std::vector<double> rate(n, 0.0);

  const double sigma = spec.width / 4.0;
  auto pick_center = [&](int span) {
    if (spec.center) return static_cast<double>(*spec.center);
    const int lo = std::max(0, (spec.length - span) / 4);
    const int hi = std::max(lo, spec.length - 1 - lo - span);
    return static_cast<double>(std::uniform_int_distribution<int>(lo, hi)(rng));
  };

  switch (spec.kind) {
    case ShapeKind::Uniform:
      std::fill(rate.begin(), rate.end(), mass / static_cast<double>(n));
      break;
    case ShapeKind::Burst: {
      std::fill(rate.begin(), rate.end(), spec.baseline * mass / static_cast<double>(n));
      add_gaussian(rate, pick_center(0), sigma, (1.0 - spec.baseline) * mass);
      break;
    }
    case ShapeKind::Rollercoaster: {
      std::fill(rate.begin(), rate.end(), spec.baseline * mass / static_cast<double>(n));
      const int span = spec.separation * (spec.bursts - 1);
      // With a fixed centre the bursts are laid out symmetrically around it.
      const double first = spec.center ? *spec.center - span / 2.0 : pick_center(span);
      const double per_burst = (1.0 - spec.baseline) * mass / spec.bursts;
      for (int b = 0; b < spec.bursts; ++b)
        add_gaussian(rate, first + b * spec.separation, sigma, per_burst);
      break;
    }
    case ShapeKind::Seasonal: {
      double total = 0.0;
      for (std::size_t m = 0; m < n; ++m) {
        rate[m] = 1.0 + spec.amplitude * std::sin(2.0 * std::numbers::pi * static_cast<double>(m) /
                                                       spec.period + spec.phase);
        total += rate[m];
      }
      for (double& r : rate) r *= mass / total;
      break;
    }
  }

  if (spec.noise > 0.0) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (double& r : rate) r *= std::exp(spec.noise * std::clamp(gauss(rng), -3.0, 3.0));
  }

  LabeledSeries out;
  out.label = spec.kind;
  out.series.topic_id = std::move(topic_id);
  out.series.start_date = start;
  out.series.counts.reserve(n);
  for (double r : rate) out.series.counts.push_back(std::max<std::int64_t>(0, std::llround(r)));
  return out;
}

std::vector<LabeledSeries> generate_fixture(const std::vector<FixtureGroup>& groups,
                                            std::chrono::year_month_day start) {
  std::vector<LabeledSeries> out;
  for (const FixtureGroup& g : groups) {
    if (g.count < 0) throw Error(ErrorKind::InvalidParameter, "fixture count must be nonnegative");
    const std::string prefix = g.prefix.empty() ? std::string(to_string(g.spec.kind)) + "_" : g.prefix;
    for (int i = 0; i < g.count; ++i) {
      ShapeSpec spec = g.spec;
      spec.seed = g.spec.seed + static_cast<std::uint64_t>(i);
      out.push_back(generate(spec, prefix + std::to_string(i), start));
    }
  }
  return out;
}

}  // namespace topicdyn
