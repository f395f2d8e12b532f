#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "topicdyn/align.hpp"
#include "topicdyn/cluster.hpp"
#include "topicdyn/ephemeral.hpp"
#include "topicdyn/io.hpp"
#include "topicdyn/metrics.hpp"
#include "topicdyn/tdv.hpp"

namespace topicdyn {

std::string_view version() noexcept;

struct PipelineConfig {
  std::vector<std::filesystem::path> inputs;
  InputFormat input_format = InputFormat::Csv;
  /// Synthetic fixture description, used instead of `inputs`.
  std::optional<std::filesystem::path> fixtures;
  std::optional<Date> from;
  std::optional<Date> to;
  int smooth_window = 3;
  PreprocessOrder order = PreprocessOrder::SmoothThenNormalize;
  MetricKind metric = MetricKind::NDS;
  Alignment alignment = Alignment::PairwiseExhaustive;
  int min_cluster_size = 3;
  std::optional<int> core_k;
  bool allow_single_cluster = false;
  EphemeralityParams ephemerality;
  /// Topics for the aligned-pair plot file. Defaults to the medoids of the
  /// two largest clusters, else the first two topics.
  std::optional<std::pair<std::string, std::string>> overlay_pair;
  std::filesystem::path out_dir = "out";
  unsigned threads = 1;

  /// Throws InvalidParameter on inconsistent settings.
  void validate() const;
};

/// Result-affecting settings only: output directory and thread count are
/// left out so the manifest of equivalent runs is identical.
nlohmann::json config_to_json(const PipelineConfig& config);
PipelineConfig config_from_json(const nlohmann::json& j);

struct PipelineResult {
  std::vector<TopicSeries> series;
  std::vector<Tdv> tdvs;
  std::vector<std::string> excluded;
  std::size_t rows_out_of_range = 0;
  DistanceMatrix matrix;
  ClusterResult clusters;
  std::vector<EphemeralityReport> ephemerality;
  CategoryThresholds thresholds;
  /// Generator labels when the run used fixtures.
  std::optional<std::vector<int>> truth;
  std::optional<double> adjusted_rand;
};

/// Preprocess -> distances -> clusters -> ephemerality over already loaded
/// series. Throws InsufficientData with fewer than 2 topics.
PipelineResult analyze_series(std::vector<TopicSeries> series, const PipelineConfig& config);

/// Loads the configured input, analyzes it and writes every artifact into
/// config.out_dir. Throws Io when the directory cannot be written.
PipelineResult run(const PipelineConfig& config);

/// Writes the artifacts of a finished analysis.
void write_outputs(const PipelineResult& result, const PipelineConfig& config,
                   const std::string& input_digest);

}  // namespace topicdyn
