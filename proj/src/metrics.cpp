#include "topicdyn/metrics.hpp"

namespace topicdyn {

std::string_view to_string(MetricKind kind) noexcept {
  switch (kind) {
    case MetricKind::SAD: return "sad";
    case MetricKind::KS: return "ks";
    case MetricKind::HDA: return "hda";
    case MetricKind::NDS: return "nds";
  }
  return "unknown";
}

std::optional<MetricKind> parse_metric(std::string_view name) noexcept {
  for (MetricKind kind : kAllMetrics) {
    if (to_string(kind) == name) return kind;
  }
  return std::nullopt;
}

CumulativeTdv cumulate(const Tdv& tdv) { return {tdv.topic_id, cumulate(tdv.values)}; }

}  // namespace topicdyn
