#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "topicdyn/align.hpp"

using namespace topicdyn;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> xs) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

}  // namespace

TEST(AlignMax, AlreadyAligned) {
  const auto a = vec({0, 0.2, 0.6, 0.2}), b = vec({0.1, 0.1, 0.7, 0.1});
  const AlignedPair p = align_max(a, b);
  EXPECT_EQ(p.shift, 0);
  EXPECT_EQ(p.a, a);
  EXPECT_EQ(p.b, b);
}

TEST(AlignMax, PeakArithmetic) {
  const AlignedPair p = align_max(vec({0, 0, 1, 0, 0, 0}), vec({0, 0, 0, 0, 0, 1}));
  EXPECT_EQ(p.shift, -3);
  EXPECT_EQ(p.padded_length, 9);
  EXPECT_EQ(peak_index(p.a), peak_index(p.b));
  EXPECT_EQ(p.a.sum(), 1.0);
  EXPECT_EQ(p.b.sum(), 1.0);
}

TEST(AlignMax, TiesUseFirstOccurrence) {
  Eigen::VectorXd a = Eigen::VectorXd::Zero(10);
  a(3) = 0.5;
  a(7) = 0.5;
  EXPECT_EQ(peak_index(a), 3);
}

TEST(AlignMean, CenterOfMassShift) {
  EXPECT_EQ(align_mean(vec({0.2, 0.3, 0.5}), vec({0.2, 0.3, 0.5})).shift, 0);
  EXPECT_EQ(align_mean(vec({1, 0, 0}), vec({0, 0, 1})).shift, -2);
  // Two bursts around the middle share the centre of a single central burst.
  EXPECT_EQ(align_mean(vec({0.5, 0, 0.5}), vec({0, 1, 0})).shift, 0);
}

TEST(AlignMean, RoundsHalfAwayFromZero) {
  // Centres 0.5 and 0: shift +1; centres 0 and 0.5: shift -1.
  EXPECT_EQ(align_mean(vec({0.5, 0.5, 0}), vec({1, 0, 0})).shift, 1);
  EXPECT_EQ(align_mean(vec({1, 0, 0}), vec({0.5, 0.5, 0})).shift, -1);
}

TEST(AlignExhaustive, SelfAndReversal) {
  const auto a = vec({0.1, 0.5, 0.4});
  const ExhaustiveAlignment self = align_exhaustive(a, a, MetricKind::NDS);
  EXPECT_EQ(self.pair.shift, 0);
  EXPECT_EQ(self.distance, 0.0);

  const ExhaustiveAlignment r = align_exhaustive(vec({1, 0, 0}), vec({0, 0, 1}), MetricKind::SAD);
  EXPECT_EQ(r.pair.shift, -2);
  EXPECT_EQ(r.distance, 0.0);
}

TEST(AlignExhaustive, TieBreakPrefersSmallMagnitudeThenNegative) {
  // b is a shifted copy in both directions: shifts -1 and +1 both give the
  // same (nonzero) distance; -1 must win.
  const auto a = vec({0, 1, 0});
  const auto b = vec({0.5, 0, 0.5});
  const PairAlignment best = best_shift(MetricKind::SAD, a, b);
  EXPECT_EQ(best.shift, -1);
  EXPECT_EQ(distance_at_shift(MetricKind::SAD, a, b, 1), best.distance);
}

TEST(AlignExhaustive, ShiftedDistanceMatchesExplicitPadding) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + static_cast<std::size_t>(trial % 25);
    const auto a = oracle::random_tdv(rng, n, 0.3), b = oracle::random_tdv(rng, n, 0.3);
    const auto ea = oracle::to_eigen(a), eb = oracle::to_eigen(b);
    const int s = static_cast<int>(trial % (2 * n - 1)) - static_cast<int>(n - 1);
    const AlignedPair padded = pad_pair(ea, eb, s);
    for (MetricKind k : kAllMetrics) {
      EXPECT_EQ(distance_at_shift(k, ea, eb, s), distance(k, padded.a, padded.b));
    }
    EXPECT_EQ(padded.padded_length, static_cast<Eigen::Index>(n) + std::abs(s));
    EXPECT_NEAR(padded.a.sum(), 1.0, 1e-12);
    EXPECT_NEAR(padded.b.sum(), 1.0, 1e-12);
    // Nonzero values survive padding unchanged.
    EXPECT_EQ((padded.a.array() > 0).count(), (ea.array() > 0).count());
  }
}

TEST(AlignExhaustive, AgreesWithBruteForceAndDominates) {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 150; ++trial) {
    const std::size_t n = 2 + static_cast<std::size_t>(trial % 40);
    const auto a = oracle::random_tdv(rng, n), b = oracle::random_tdv(rng, n);
    const auto ea = oracle::to_eigen(a), eb = oracle::to_eigen(b);
    for (int k = 0; k < 4; ++k) {
      const MetricKind kind = kAllMetrics[k];
      const PairAlignment got = best_shift(kind, ea, eb);
      const auto want = oracle::brute_force_shift(k, a, b);
      EXPECT_EQ(got.shift, want.shift);
      EXPECT_NEAR(got.distance, want.distance, 1e-12);
      for (Alignment other : {Alignment::None, Alignment::MaxPeak, Alignment::CenterOfMass})
        EXPECT_LE(got.distance, aligned_distance(kind, other, ea, eb).distance + 1e-12);

      const PairAlignment back = best_shift(kind, eb, ea);
      EXPECT_EQ(back.distance, got.distance);
      EXPECT_EQ(back.shift, -got.shift);
    }
  }
}

TEST(AlignmentNames, RoundTrip) {
  for (Alignment a : kAllAlignments) EXPECT_EQ(parse_alignment(to_string(a)), a);
  EXPECT_FALSE(parse_alignment("dtw"));
}
