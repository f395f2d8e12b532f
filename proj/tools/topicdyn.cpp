// topicdyn: temporal characterization of discussion topics from daily counts.
//
//   topicdyn run --input counts.csv --out results/
//   topicdyn run --fixtures shapes.jsonl --threads 8 --out results/
//   topicdyn synth --fixtures shapes.jsonl --output counts.csv

#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "topicdyn/error.hpp"
#include "topicdyn/io.hpp"
#include "topicdyn/pipeline.hpp"
#include "topicdyn/synth.hpp"

namespace {

using namespace topicdyn;

Date require_date(const std::string& text, const char* flag) {
  const auto d = parse_date(text);
  if (!d) throw Error(ErrorKind::InvalidParameter, std::string(flag) + " expects YYYY-MM-DD, got '" + text + "'");
  return *d;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Characterize discussion topics from their daily activity curves"};
  app.set_version_flag("--version", std::string(version()));
  app.require_subcommand(1);

  PipelineConfig config;
  std::vector<std::string> inputs;
  std::string fixtures, manifest, from, to, out_dir = "out", input_format = "csv";
  std::string metric = "nds", alignment = "exhaustive", orientation = "verbatim";
  std::string trim_reading = "cumulative", order = "smooth-then-normalize";
  std::vector<std::string> pair;
  int core_k = 0;
  double filtered_threshold = 0.0, sorted_threshold = 0.0;

  CLI::App* run = app.add_subcommand("run", "Run preprocessing, distances, clustering and ephemerality");
  run->add_option("--input", inputs, "Daily count file(s): topic_id,date,count");
  run->add_option("--input-format", input_format, "csv or jsonl")
      ->check(CLI::IsMember({"csv", "jsonl"}));
  run->add_option("--fixtures", fixtures, "Synthetic fixture spec (JSON lines) used instead of --input");
  run->add_option("--manifest", manifest, "Re-run the configuration stored in a manifest.json");
  run->add_option("--from", from, "First day of the common range (YYYY-MM-DD)");
  run->add_option("--to", to, "Last day of the common range (YYYY-MM-DD)");
  run->add_option("--smooth-window", config.smooth_window, "Odd moving-average window")
      ->capture_default_str();
  run->add_option("--preprocess-order", order, "smooth-then-normalize or normalize-then-smooth")
      ->check(CLI::IsMember({"smooth-then-normalize", "normalize-then-smooth"}));
  run->add_option("--metric", metric, "sad, ks, hda or nds")
      ->check(CLI::IsMember({"sad", "ks", "hda", "nds"}))
      ->capture_default_str();
  run->add_option("--alignment", alignment, "none, max, mean or exhaustive")
      ->check(CLI::IsMember({"none", "max", "mean", "exhaustive"}))
      ->capture_default_str();
  run->add_option("--min-cluster-size", config.min_cluster_size, "Smallest reportable cluster")
      ->capture_default_str();
  run->add_option("--core-k", core_k, "Neighbour rank for core distances (default: min cluster size)");
  run->add_flag("--allow-single-cluster", config.allow_single_cluster,
                "Let the whole data set form one cluster");
  run->add_option("--mass-threshold", config.ephemerality.mass_threshold, "Ephemerality mass share")
      ->capture_default_str();
  run->add_option("--trim", config.ephemerality.trim_fraction, "Mass trimmed from each side")
      ->capture_default_str();
  run->add_option("--trim-reading", trim_reading, "cumulative or per-day")
      ->check(CLI::IsMember({"cumulative", "per-day"}));
  run->add_option("--e4-orientation", orientation, "verbatim or flipped")
      ->check(CLI::IsMember({"verbatim", "flipped"}))
      ->capture_default_str();
  run->add_option("--filtered-threshold", filtered_threshold, "Fixed high/low split for e_filtered");
  run->add_option("--sorted-threshold", sorted_threshold,
                  "Fixed high/low split for the oriented e_sorted");
  run->add_option("--pair", pair, "Two topic ids for the aligned-pair plot file")->expected(2)->delimiter(',');
  run->add_option("--out", out_dir, "Output directory")->capture_default_str();
  run->add_option("--threads", config.threads, "Worker threads for the distance matrix")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);

  std::string synth_out = "-";
  CLI::App* synth = app.add_subcommand("synth", "Write synthetic topics in the input CSV format");
  synth->add_option("--fixtures", fixtures, "Fixture spec (JSON lines)")->required();
  synth->add_option("--from", from, "First day (YYYY-MM-DD)");
  synth->add_option("--output", synth_out, "Output file, '-' for stdout")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (synth->parsed()) {
      const Date start = from.empty() ? Date{std::chrono::year(2020), std::chrono::January, std::chrono::day(1)}
                                      : require_date(from, "--from");
      std::vector<TopicSeries> series;
      for (auto& s : generate_fixture(read_fixture_spec(fixtures), start)) series.push_back(std::move(s.series));
      if (synth_out == "-") {
        write_series_csv(std::cout, series);
      } else {
        std::ofstream out(synth_out);
        if (!out) throw Error(ErrorKind::Io, "cannot write " + synth_out);
        write_series_csv(out, series);
        if (!out.flush()) throw Error(ErrorKind::Io, "write failed for " + synth_out);
      }
      return 0;
    }

    if (!manifest.empty()) {
      std::ifstream in(manifest);
      if (!in) throw Error(ErrorKind::Io, "cannot open " + manifest);
      const auto j = nlohmann::json::parse(in, nullptr, false);
      if (j.is_discarded() || !j.contains("config")) throw Error(ErrorKind::Parse, manifest + " is not a run manifest");
      const unsigned threads = config.threads;
      config = config_from_json(j.at("config"));
      config.threads = threads;
    } else {
      for (const auto& p : inputs) config.inputs.emplace_back(p);
      if (!fixtures.empty()) config.fixtures = fixtures;
      config.input_format = input_format == "jsonl" ? InputFormat::JsonLines : InputFormat::Csv;
      if (!from.empty()) config.from = require_date(from, "--from");
      if (!to.empty()) config.to = require_date(to, "--to");
      config.order = order == "normalize-then-smooth" ? PreprocessOrder::NormalizeThenSmooth
                                                      : PreprocessOrder::SmoothThenNormalize;
      config.metric = *parse_metric(metric);
      config.alignment = *parse_alignment(alignment);
      if (run->count("--core-k")) config.core_k = core_k;
      config.ephemerality.orientation = *parse_orientation(orientation);
      config.ephemerality.trim_reading = trim_reading == "per-day" ? TrimReading::PerDay : TrimReading::Cumulative;
      if (run->count("--filtered-threshold")) config.ephemerality.filtered_threshold = filtered_threshold;
      if (run->count("--sorted-threshold")) config.ephemerality.sorted_threshold = sorted_threshold;
      if (pair.size() == 2) config.overlay_pair = std::make_pair(pair[0], pair[1]);
    }
    config.out_dir = out_dir;

    const PipelineResult result = topicdyn::run(config);
    std::cerr << "topics: " << result.series.size() << ", clusters: " << result.clusters.num_clusters()
              << ", noise: " << result.clusters.num_noise() << '\n';
    if (!result.excluded.empty()) std::cerr << "excluded (no activity): " << result.excluded.size() << '\n';
    if (result.rows_out_of_range > 0) {
      std::cerr << "warning: " << result.rows_out_of_range << " row(s) outside the date range were ignored\n";
    }
    if (result.adjusted_rand) std::cerr << "adjusted Rand index vs fixture labels: " << *result.adjusted_rand << '\n';
    return 0;
  } catch (const Error& e) {
    std::cerr << "error (" << to_string(e.kind()) << "): " << e.what() << '\n';
    return exit_code(e.kind());
  }
}
