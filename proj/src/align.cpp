#include "topicdyn/align.hpp"

namespace topicdyn {

std::string_view to_string(Alignment alignment) noexcept {
  switch (alignment) {
    case Alignment::None: return "none";
    case Alignment::MaxPeak: return "max";
    case Alignment::CenterOfMass: return "mean";
    case Alignment::PairwiseExhaustive: return "exhaustive";
  }
  return "unknown";
}

std::optional<Alignment> parse_alignment(std::string_view name) noexcept {
  for (Alignment a : kAllAlignments) {
    if (to_string(a) == name) return a;
  }
  return std::nullopt;
}

}  // namespace topicdyn
