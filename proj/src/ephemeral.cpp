#include "topicdyn/ephemeral.hpp"

#include <algorithm>
#include <functional>
#include <string>

#include "topicdyn/error.hpp"

namespace topicdyn {

namespace {

// Prefix sums of shares like 0.1 accumulate rounding error (eight times 0.1
// sums to 0.7999999999999999), so thresholds are met within kMassTolerance.
bool reaches(double prefix, double threshold) { return prefix >= threshold - kMassTolerance; }

struct ActiveSpan {
  Eigen::Index start;
  Eigen::Index end;
};

ActiveSpan active_span(const Eigen::Ref<const Eigen::VectorXd>& t) {
  Eigen::Index start = -1, end = -1;
  for (Eigen::Index m = 0; m < t.size(); ++m) {
    if (t(m) > 0.0) {
      if (start < 0) start = m;
      end = m;
    }
  }
  if (start < 0) throw Error(ErrorKind::DegenerateTopic, "topic has no active day");
  return {start, end};
}

void require_normalized(const Eigen::Ref<const Eigen::VectorXd>& t) {
  active_span(t);
  if (!is_normalized(t)) throw Error(ErrorKind::InvalidInput, "ephemerality needs a normalized vector");
}

Eigen::Index first_prefix_reaching(const Eigen::Ref<const Eigen::VectorXd>& t, double threshold) {
  double prefix = 0.0;
  for (Eigen::Index m = 0; m < t.size(); ++m) {
    prefix += t(m);
    if (reaches(prefix, threshold)) return m;
  }
  return t.size() - 1;
}

double median(std::vector<double> values) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  return values.size() % 2 == 1 ? values[mid] : 0.5 * (values[mid - 1] + values[mid]);
}

}  // namespace

std::string_view to_string(Category category) noexcept {
  switch (category) {
    case Category::Uniform: return "uniform";
    case Category::Rollercoaster: return "rollercoaster";
    case Category::Burst: return "burst";
    case Category::Undefined: return "undefined";
  }
  return "undefined";
}

std::string_view to_string(SortedOrientation orientation) noexcept {
  return orientation == SortedOrientation::Verbatim ? "verbatim" : "flipped";
}

std::optional<SortedOrientation> parse_orientation(std::string_view name) noexcept {
  if (name == "verbatim") return SortedOrientation::Verbatim;
  if (name == "flipped") return SortedOrientation::Flipped;
  return std::nullopt;
}

void EphemeralityParams::validate() const {
  if (!(mass_threshold > 0.0 && mass_threshold < 1.0)) {
    throw Error(ErrorKind::InvalidParameter,
                "mass threshold must lie in (0,1), got " + std::to_string(mass_threshold));
  }
  if (!(trim_fraction >= 0.0 && trim_fraction < 0.5)) {
    throw Error(ErrorKind::InvalidParameter,
                "trim fraction must lie in [0,0.5), got " + std::to_string(trim_fraction));
  }
  for (const auto& threshold : {filtered_threshold, sorted_threshold}) {
    if (threshold && !(*threshold > 0.0 && *threshold < 1.0)) {
      throw Error(ErrorKind::InvalidParameter, "category thresholds must lie in (0,1)");
    }
  }
}

double e_orig(const Eigen::Ref<const Eigen::VectorXd>& t, const EphemeralityParams& params) {
  params.validate();
  require_normalized(t);
  const ActiveSpan span = active_span(t);
  if (span.end == span.start) return 1.0;
  const Eigen::Index reached = first_prefix_reaching(t, params.mass_threshold);
  return 1.0 - static_cast<double>(reached - span.start) / static_cast<double>(span.end - span.start);
}

double e_filtered(const Eigen::Ref<const Eigen::VectorXd>& t, const EphemeralityParams& params) {
  params.validate();
  require_normalized(t);
  const ActiveSpan span = active_span(t);
  if (span.end == span.start) return 1.0;

  Eigen::Index low = first_prefix_reaching(t, params.low_cut());
  if (params.trim_reading == TrimReading::PerDay) {
    low = span.start;
    for (Eigen::Index m = 0; m < t.size(); ++m) {
      if (reaches(t(m), params.low_cut())) {
        low = m;
        break;
      }
    }
  }
  const Eigen::Index high = first_prefix_reaching(t, params.high_cut());
  const double value =
      1.0 - static_cast<double>(high - low) / static_cast<double>(span.end - span.start);
  // The per-day reading can put the lower point after the upper one.
  return std::clamp(value, 0.0, 1.0);
}

double e_sorted(const Eigen::Ref<const Eigen::VectorXd>& t, const EphemeralityParams& params) {
  params.validate();
  require_normalized(t);
  std::vector<double> active;
  for (Eigen::Index m = 0; m < t.size(); ++m)
    if (t(m) > 0.0) active.push_back(t(m));
  std::sort(active.begin(), active.end(), std::greater<>());

  std::size_t k = active.size();
  double prefix = 0.0;
  for (std::size_t i = 0; i < active.size(); ++i) {
    prefix += active[i];
    if (reaches(prefix, params.mass_threshold)) {
      k = i + 1;
      break;
    }
  }
  const double value = (1.0 / params.mass_threshold) *
                       (static_cast<double>(k) / static_cast<double>(active.size()));
  return std::min(value, 1.0);
}

double oriented_sorted(double e_sorted, SortedOrientation orientation) noexcept {
  return orientation == SortedOrientation::Verbatim ? e_sorted : 1.0 - e_sorted;
}

Category categorize(double e_filtered, double e_sorted, double filtered_threshold,
                    double sorted_threshold, SortedOrientation orientation) noexcept {
  const bool filtered_high = e_filtered > filtered_threshold;
  const bool sorted_high = oriented_sorted(e_sorted, orientation) > sorted_threshold;
  if (!filtered_high) return sorted_high ? Category::Rollercoaster : Category::Uniform;
  return sorted_high ? Category::Burst : Category::Undefined;
}

EphemeralityReport measure(const Tdv& tdv, const EphemeralityParams& params) {
  EphemeralityReport r;
  r.topic_id = tdv.topic_id;
  r.e_orig = e_orig(tdv.values, params);
  r.e_filtered = e_filtered(tdv.values, params);
  r.e_sorted = e_sorted(tdv.values, params);
  return r;
}

CategoryThresholds resolve_thresholds(std::span<const EphemeralityReport> reports,
                                      const EphemeralityParams& params) {
  CategoryThresholds out;
  if (params.filtered_threshold) {
    out.filtered = *params.filtered_threshold;
  } else {
    std::vector<double> v;
    for (const auto& r : reports) v.push_back(r.e_filtered);
    out.filtered = median(std::move(v));
  }
  if (params.sorted_threshold) {
    out.sorted = *params.sorted_threshold;
  } else {
    std::vector<double> v;
    for (const auto& r : reports) v.push_back(oriented_sorted(r.e_sorted, params.orientation));
    out.sorted = median(std::move(v));
  }
  return out;
}

std::vector<EphemeralityReport> analyze(std::span<const Tdv> topics,
                                        const EphemeralityParams& params) {
  std::vector<EphemeralityReport> reports;
  reports.reserve(topics.size());
  for (const Tdv& t : topics) reports.push_back(measure(t, params));
  const CategoryThresholds th = resolve_thresholds(reports, params);
  for (auto& r : reports)
    r.category = categorize(r.e_filtered, r.e_sorted, th.filtered, th.sorted, params.orientation);
  return reports;
}

}  // namespace topicdyn
