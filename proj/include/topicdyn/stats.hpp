#pragma once

#include <span>

namespace topicdyn {

/// Hubert-Arabie adjusted Rand index between two labelings of the same
/// items. Every distinct label (noise included) counts as one group.
double adjusted_rand_index(std::span<const int> truth, std::span<const int> predicted);

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;  // population (divide by n)
};

/// Summed left to right, so the result depends only on the input order.
MeanStd mean_std(std::span<const double> values);

}  // namespace topicdyn
