// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits nonzero when any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "topicdyn/align.hpp"
#include "topicdyn/cluster.hpp"
#include "topicdyn/ephemeral.hpp"
#include "topicdyn/metrics.hpp"
#include "topicdyn/pipeline.hpp"
#include "topicdyn/stats.hpp"
#include "topicdyn/synth.hpp"

using namespace topicdyn;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool condition, const std::string& what) {
    if (!condition && pass) detail = what;
    pass = pass && condition;
  }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double x) {
  std::ostringstream s;
  s.precision(6);
  s << x;
  return s.str();
}

fs::path workdir() {
  const fs::path p = fs::temp_directory_path() / "topicdyn_acceptance";
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// 1. Metrics against naive loops, with symmetry, identity and range.
Outcome metric_correctness() {
  Outcome o;
  std::mt19937_64 rng(20240601);
  std::uniform_int_distribution<std::size_t> len(1, 300);
  double worst = 0.0;
  const auto t0 = Clock::now();
  for (int trial = 0; trial < 10000; ++trial) {
    const std::size_t n = len(rng);
    const auto a = oracle::random_tdv(rng, n, trial % 3 == 0 ? 0.5 : 0.0);
    const auto b = oracle::random_tdv(rng, n, trial % 3 == 0 ? 0.5 : 0.0);
    const auto ea = oracle::to_eigen(a), eb = oracle::to_eigen(b);
    for (int k = 0; k < 4; ++k) {
      const MetricKind kind = kAllMetrics[static_cast<std::size_t>(k)];
      const double d = distance(kind, ea, eb);
      worst = std::max(worst, std::abs(d - oracle::metric(k, a, b)));
      o.require(d == distance(kind, eb, ea), "asymmetric " + std::string(to_string(kind)));
      o.require(distance(kind, ea, ea) == 0.0, "d(a,a) != 0 for " + std::string(to_string(kind)));
      o.require(d >= 0.0 && d <= 1.0, "out of [0,1] for " + std::string(to_string(kind)));
    }
  }
  const double elapsed = seconds_since(t0);
  o.require(worst <= 1e-12, "oracle gap " + fmt(worst));
  o.require(elapsed <= 10.0, "took " + fmt(elapsed) + " s");
  if (o.pass) o.detail = "max |lib - oracle| = " + fmt(worst) + ", " + fmt(elapsed) + " s";
  return o;
}

// 2. Disjoint support saturates every metric.
Outcome boundary_constants() {
  Outcome o;
  const Eigen::Vector2d a(1, 0), b(0, 1);
  std::string values;
  for (MetricKind k : kAllMetrics) {
    const double d = distance(k, a, b);
    o.require(std::abs(d - 1.0) <= 1e-12, std::string(to_string(k)) + " = " + fmt(d));
    values += std::string(to_string(k)) + "=" + fmt(d) + " ";
  }
  if (o.pass) o.detail = values;
  return o;
}

// 3. Exhaustive alignment dominates the others and matches brute force.
Outcome alignment_dominance() {
  Outcome o;
  std::mt19937_64 rng(77);
  double library_seconds = 0.0;
  int shift_mismatches = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const auto a = oracle::random_tdv(rng, 222, trial % 2 ? 0.6 : 0.0);
    const auto b = oracle::random_tdv(rng, 222, trial % 2 ? 0.6 : 0.0);
    const auto ea = oracle::to_eigen(a), eb = oracle::to_eigen(b);
    for (int k = 0; k < 4; ++k) {
      const MetricKind kind = kAllMetrics[static_cast<std::size_t>(k)];
      const auto t0 = Clock::now();
      const PairAlignment best = best_shift(kind, ea, eb);
      library_seconds += seconds_since(t0);
      double others = 1e9;
      for (Alignment alt : {Alignment::None, Alignment::MaxPeak, Alignment::CenterOfMass})
        others = std::min(others, aligned_distance(kind, alt, ea, eb).distance);
      o.require(best.distance <= others + 1e-12, "exhaustive above " + fmt(others));
      const auto truth = oracle::brute_force_shift(k, a, b);
      if (truth.shift != best.shift) ++shift_mismatches;
      o.require(std::abs(truth.distance - best.distance) <= 1e-12, "distance differs from brute force");
    }
  }
  o.require(shift_mismatches == 0, std::to_string(shift_mismatches) + " shift mismatches");
  o.require(library_seconds <= 60.0, "took " + fmt(library_seconds) + " s");
  if (o.pass) o.detail = "2000 alignments, library time " + fmt(library_seconds) + " s";
  return o;
}

// 4. Hierarchy equals single linkage; separated blobs give two clusters.
Outcome clustering_oracle() {
  Outcome o;
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + trial % 11;
    const Eigen::MatrixXd d = oracle::random_distance_matrix(rng, n);
    std::vector<std::string> ids;
    for (int i = 0; i < n; ++i) ids.push_back(std::to_string(i));
    const ClusterResult r = hdbscan(make_distance_matrix(ids, d), {2, 1, false});
    const Dendrogram tree = build_hierarchy(mst(d, 1));
    std::vector<oracle::OracleMerge> got;
    for (std::size_t m = 0; m < tree.merges.size(); ++m) {
      std::vector<int> members;
      for (auto leaf : tree.leaves(n + static_cast<Eigen::Index>(m))) members.push_back(static_cast<int>(leaf));
      got.push_back({members, tree.merges[m].distance});
    }
    o.require(got == oracle::single_linkage(d), "merge order differs at T=" + std::to_string(n));
    o.require(r.labels.size() == static_cast<std::size_t>(n), "label count");
  }

  std::uniform_real_distribution<double> intra(0.0, 0.1), inter(0.9, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(10, 10);
    for (int i = 0; i < 10; ++i)
      for (int j = i + 1; j < 10; ++j) d(i, j) = d(j, i) = (i < 5) == (j < 5) ? intra(rng) : inter(rng);
    std::vector<std::string> ids;
    for (int i = 0; i < 10; ++i) ids.push_back(std::to_string(i));
    const ClusterResult r = hdbscan(make_distance_matrix(ids, d), {3, std::nullopt, false});
    o.require(r.num_clusters() == 2 && r.num_noise() == 0,
              "blobs gave " + std::to_string(r.num_clusters()) + " clusters, " +
                  std::to_string(r.num_noise()) + " noise");
  }
  if (o.pass) o.detail = "100 single-linkage trials, 20 blob fixtures";
  return o;
}

void write_recovery_fixture(const fs::path& path) {
  std::ofstream out(path);
  out << "{\"kind\":\"burst\",\"count\":50,\"length\":222,\"noise\":0.02,\"seed\":1000}\n"
         "{\"kind\":\"uniform\",\"count\":50,\"length\":222,\"noise\":0.02,\"seed\":2000}\n";
}

// 5. Burst vs uniform recovery through the full pipeline.
Outcome cluster_recovery(const fs::path& dir) {
  Outcome o;
  PipelineConfig c;
  c.fixtures = dir / "recovery.jsonl";
  write_recovery_fixture(*c.fixtures);
  c.threads = 1;
  c.out_dir = dir / "recovery_mr";
  const auto t0 = Clock::now();
  const PipelineResult mr = run(c);
  const double elapsed = seconds_since(t0);

  c.core_k = 1;
  c.out_dir = dir / "recovery_raw";
  const PipelineResult raw = run(c);

  const double ari = mr.adjusted_rand.value_or(-1.0), ari_raw = raw.adjusted_rand.value_or(-1.0);
  o.require(ari >= 0.9, "ARI " + fmt(ari) + " with core distances");
  o.require(ari_raw >= 0.9, "ARI " + fmt(ari_raw) + " with raw distances");
  o.require(elapsed <= 300.0, "took " + fmt(elapsed) + " s");
  o.detail = (o.pass ? "" : o.detail + "; ") + "ARI " + fmt(ari) + " (core_k 3, " +
             std::to_string(mr.clusters.num_clusters()) + " clusters, " + std::to_string(mr.clusters.num_noise()) +
             " noise), " + fmt(ari_raw) + " (core_k 1), " + fmt(elapsed) + " s";
  return o;
}

// 6. Ephemerality pins.
Outcome ephemerality_pins() {
  Outcome o;
  const Eigen::VectorXd uniform = Eigen::VectorXd::Constant(10, 0.1);
  o.require(std::abs(e_orig(uniform) - 2.0 / 9.0) <= 1e-9, "uniform e_orig " + fmt(e_orig(uniform)));
  o.require(std::abs(e_sorted(uniform) - 1.0) <= 1e-9, "uniform e_sorted " + fmt(e_sorted(uniform)));
  const double filtered = e_filtered(uniform);
  o.require(std::abs(filtered - 1.0 / 9.0) <= 1e-9, "uniform e_filtered " + fmt(filtered));

  Eigen::VectorXd peak = Eigen::VectorXd::Constant(10, 0.1 / 9.0);
  peak(3) = 0.9;
  o.require(std::abs(e_sorted(peak) - 0.125) <= 1e-9, "peak e_sorted " + fmt(e_sorted(peak)));

  Eigen::VectorXd single = Eigen::VectorXd::Zero(222);
  single(40) = 1.0;
  o.require(e_orig(single) == 1.0 && e_filtered(single) == 1.0 && e_sorted(single) == 1.0,
            "single-day topic not 1");
  if (o.pass) {
    o.detail = "uniform e_filtered = " + fmt(filtered) +
               " (below the claimed 0.2 floor, as derived from the formula)";
  }
  return o;
}

// 7. Scaling, translation and permutation invariance.
Outcome invariance_suite() {
  Outcome o;
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> count(0, 60);
  std::bernoulli_distribution zero(0.3);
  for (int trial = 0; trial < 300; ++trial) {
    const int len = 2 + trial % 200;
    std::vector<std::int64_t> counts(static_cast<std::size_t>(len));
    for (auto& c : counts) c = zero(rng) ? 0 : count(rng);
    counts[static_cast<std::size_t>(trial % len)] += 1;

    auto report = [](std::vector<std::int64_t> c) {
      return measure(normalize(TopicSeries{"t", {}, std::move(c)}));
    };
    const EphemeralityReport base = report(counts);
    auto scaled = counts;
    for (auto& c : scaled) c *= 7;
    std::vector<std::int64_t> padded(30, 0);
    padded.insert(padded.end(), counts.begin(), counts.end());
    padded.insert(padded.end(), 30, 0);
    auto shuffled = counts;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);

    const EphemeralityReport x7 = report(scaled), moved = report(padded), perm = report(shuffled);
    auto close = [](double a, double b) { return std::abs(a - b) <= 1e-12; };
    o.require(close(base.e_orig, x7.e_orig) && close(base.e_filtered, x7.e_filtered) &&
                  close(base.e_sorted, x7.e_sorted),
              "scaling changed a measure");
    o.require(close(base.e_orig, moved.e_orig) && close(base.e_filtered, moved.e_filtered),
              "translation changed a measure");
    o.require(close(base.e_sorted, perm.e_sorted), "permutation changed e_sorted");
  }
  if (o.pass) o.detail = "300 topics";
  return o;
}

// 8. Output files do not depend on the thread count.
Outcome determinism(const fs::path& dir) {
  Outcome o;
  PipelineConfig c;
  c.fixtures = dir / "recovery.jsonl";
  int compared = 0;
  for (unsigned threads : {1u, 8u}) {
    c.threads = threads;
    c.out_dir = dir / ("threads_" + std::to_string(threads));
    run(c);
  }
  for (const auto& entry : fs::directory_iterator(dir / "threads_1")) {
    ++compared;
    const fs::path other = dir / "threads_8" / entry.path().filename();
    o.require(fs::exists(other) && slurp(entry.path()) == slurp(other),
              entry.path().filename().string() + " differs");
  }
  o.require(compared > 0, "no output files");
  if (o.pass) o.detail = std::to_string(compared) + " files byte-identical";
  return o;
}

// 9. Burst, rollercoaster and uniform land in distinct cells.
Outcome categorization() {
  Outcome o;
  const PreprocessOptions prep{};
  std::vector<Tdv> topics;
  for (ShapeKind kind : {ShapeKind::Burst, ShapeKind::Rollercoaster, ShapeKind::Uniform}) {
    ShapeSpec spec;
    spec.kind = kind;
    spec.center = 111;
    topics.push_back(preprocess(generate(spec, std::string(to_string(kind))).series, prep));
  }
  EphemeralityParams flipped;
  flipped.orientation = SortedOrientation::Flipped;
  flipped.filtered_threshold = 0.75;
  flipped.sorted_threshold = 0.5;
  const auto f = analyze(topics, flipped);
  o.require(f[0].category == Category::Burst, "burst landed in " + std::string(to_string(f[0].category)));
  o.require(f[1].category == Category::Rollercoaster,
            "rollercoaster landed in " + std::string(to_string(f[1].category)));
  o.require(f[2].category == Category::Uniform, "uniform landed in " + std::string(to_string(f[2].category)));

  // Verbatim reads the same values against 1 - theta: every e_sorted side flips.
  EphemeralityParams verbatim = flipped;
  verbatim.orientation = SortedOrientation::Verbatim;
  verbatim.sorted_threshold = 1.0 - *flipped.sorted_threshold;
  const auto v = analyze(topics, verbatim);
  auto sorted_high = [](Category c) { return c == Category::Burst || c == Category::Rollercoaster; };
  auto filtered_high = [](Category c) { return c == Category::Burst || c == Category::Undefined; };
  for (std::size_t i = 0; i < 3; ++i) {
    o.require(sorted_high(v[i].category) != sorted_high(f[i].category), "e_sorted side not reversed");
    o.require(filtered_high(v[i].category) == filtered_high(f[i].category), "e_filtered side moved");
  }
  std::string cells;
  for (std::size_t i = 0; i < 3; ++i) {
    cells += topics[i].topic_id + ": " + std::string(to_string(f[i].category)) + "/" +
             std::string(to_string(v[i].category)) + " ";
  }
  o.detail = (o.pass ? "" : o.detail + "; ") + "flipped/verbatim " + cells;
  return o;
}

}  // namespace

int main() {
  const fs::path dir = workdir();
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"1 metric correctness", metric_correctness},
      {"2 boundary constants", boundary_constants},
      {"3 alignment dominance", alignment_dominance},
      {"4 clustering oracle", clustering_oracle},
      {"5 cluster recovery", [&] { return cluster_recovery(dir); }},
      {"6 ephemerality pins", ephemerality_pins},
      {"7 invariance suite", invariance_suite},
      {"8 determinism", [&] { return determinism(dir); }},
      {"9 categorization", categorization},
  };
  int failures = 0;
  for (const auto& [name, check] : criteria) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    failures += o.pass ? 0 : 1;
    std::cout << (o.pass ? "PASS " : "FAIL ") << name << ": " << o.detail << std::endl;
  }
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << '\n';
  return failures == 0 ? 0 : 1;
}
