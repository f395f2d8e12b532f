#include "topicdyn/pipeline.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>
#include <tuple>

#include "topicdyn/distance_matrix.hpp"
#include "topicdyn/error.hpp"
#include "topicdyn/stats.hpp"
#include "topicdyn/synth.hpp"

#ifndef TOPICDYN_VERSION
#define TOPICDYN_VERSION "0.0.0"
#endif

namespace topicdyn {

namespace {

using json = nlohmann::json;
namespace fs = std::filesystem;

constexpr Date kFixtureStart{std::chrono::year(2020), std::chrono::January, std::chrono::day(1)};

std::ofstream open_output(const fs::path& dir, const std::string& name) {
  std::ofstream out(dir / name, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + (dir / name).string());
  return out;
}

void finish(std::ofstream& out, const fs::path& path) {
  out.flush();
  if (!out) throw Error(ErrorKind::Io, "write failed for " + path.string());
}

std::string order_name(PreprocessOrder order) {
  return order == PreprocessOrder::SmoothThenNormalize ? "smooth-then-normalize"
                                                        : "normalize-then-smooth";
}

std::string optional_real(const std::optional<double>& v) { return v ? format_real(*v) : ""; }

Eigen::Index index_of(const std::vector<std::string>& ids, const std::string& id) {
  const auto it = std::find(ids.begin(), ids.end(), id);
  if (it == ids.end()) throw Error(ErrorKind::InvalidParameter, "unknown topic '" + id + "'");
  return static_cast<Eigen::Index>(it - ids.begin());
}

}  // namespace

std::string_view version() noexcept { return TOPICDYN_VERSION; }

void PipelineConfig::validate() const {
  auto fail = [](const std::string& what) { throw Error(ErrorKind::InvalidParameter, what); };
  if (inputs.empty() && !fixtures) fail("either input files or a fixture spec is required");
  if (!inputs.empty() && fixtures) fail("input files and a fixture spec are mutually exclusive");
  if (smooth_window < 1 || smooth_window % 2 == 0) fail("smoothing window must be an odd positive integer");
  if (min_cluster_size < 2) fail("min cluster size must be at least 2");
  if (core_k && *core_k < 1) fail("core-k must be positive");
  if (threads < 1) fail("thread count must be positive");
  if (from && to && std::chrono::sys_days(*to) < std::chrono::sys_days(*from)) fail("--to precedes --from");
  ephemerality.validate();
}

json config_to_json(const PipelineConfig& c) {
  json j;
  j["inputs"] = json::array();
  for (const auto& p : c.inputs) j["inputs"].push_back(p.string());
  j["input_format"] = c.input_format == InputFormat::Csv ? "csv" : "jsonl";
  j["fixtures"] = c.fixtures ? json(c.fixtures->string()) : json(nullptr);
  j["from"] = c.from ? json(format_date(*c.from)) : json(nullptr);
  j["to"] = c.to ? json(format_date(*c.to)) : json(nullptr);
  j["smooth_window"] = c.smooth_window;
  j["preprocess_order"] = order_name(c.order);
  j["metric"] = std::string(to_string(c.metric));
  j["alignment"] = std::string(to_string(c.alignment));
  j["min_cluster_size"] = c.min_cluster_size;
  j["core_k"] = c.core_k ? json(*c.core_k) : json(nullptr);
  j["allow_single_cluster"] = c.allow_single_cluster;
  const auto& e = c.ephemerality;
  j["mass_threshold"] = e.mass_threshold;
  j["trim"] = e.trim_fraction;
  j["trim_reading"] = e.trim_reading == TrimReading::Cumulative ? "cumulative" : "per-day";
  j["e4_orientation"] = std::string(to_string(e.orientation));
  j["filtered_threshold"] = e.filtered_threshold ? json(*e.filtered_threshold) : json(nullptr);
  j["sorted_threshold"] = e.sorted_threshold ? json(*e.sorted_threshold) : json(nullptr);
  j["overlay_pair"] =
      c.overlay_pair ? json::array({c.overlay_pair->first, c.overlay_pair->second}) : json(nullptr);
  return j;
}

PipelineConfig config_from_json(const json& j) {
  try {
    PipelineConfig c;
    for (const auto& p : j.at("inputs")) c.inputs.emplace_back(p.get<std::string>());
    c.input_format = j.at("input_format") == "jsonl" ? InputFormat::JsonLines : InputFormat::Csv;
    if (!j.at("fixtures").is_null()) c.fixtures = j.at("fixtures").get<std::string>();
    auto date = [&](const char* key) -> std::optional<Date> {
      if (j.at(key).is_null()) return std::nullopt;
      const auto d = parse_date(j.at(key).get<std::string>());
      if (!d) throw Error(ErrorKind::Parse, std::string("manifest field '") + key + "' is not a date");
      return d;
    };
    c.from = date("from");
    c.to = date("to");
    c.smooth_window = j.at("smooth_window");
    c.order = j.at("preprocess_order") == "normalize-then-smooth" ? PreprocessOrder::NormalizeThenSmooth
                                                                   : PreprocessOrder::SmoothThenNormalize;
    const auto metric = parse_metric(j.at("metric").get<std::string>());
    const auto alignment = parse_alignment(j.at("alignment").get<std::string>());
    const auto orientation = parse_orientation(j.at("e4_orientation").get<std::string>());
    if (!metric || !alignment || !orientation) throw Error(ErrorKind::Parse, "manifest holds an unknown enum value");
    c.metric = *metric;
    c.alignment = *alignment;
    c.min_cluster_size = j.at("min_cluster_size");
    if (!j.at("core_k").is_null()) c.core_k = j.at("core_k").get<int>();
    c.allow_single_cluster = j.at("allow_single_cluster");
    c.ephemerality.mass_threshold = j.at("mass_threshold");
    c.ephemerality.trim_fraction = j.at("trim");
    c.ephemerality.trim_reading = j.at("trim_reading") == "per-day" ? TrimReading::PerDay : TrimReading::Cumulative;
    c.ephemerality.orientation = *orientation;
    if (!j.at("filtered_threshold").is_null()) c.ephemerality.filtered_threshold = j.at("filtered_threshold").get<double>();
    if (!j.at("sorted_threshold").is_null()) c.ephemerality.sorted_threshold = j.at("sorted_threshold").get<double>();
    if (!j.at("overlay_pair").is_null()) {
      c.overlay_pair = {j.at("overlay_pair").at(0).get<std::string>(), j.at("overlay_pair").at(1).get<std::string>()};
    }
    return c;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Parse, std::string("bad manifest: ") + e.what());
  }
}

PipelineResult analyze_series(std::vector<TopicSeries> series, const PipelineConfig& config) {
  PipelineResult r;
  if (series.size() < 2) {
    throw Error(ErrorKind::InsufficientData,
                "need at least 2 active topics, got " + std::to_string(series.size()));
  }
  r.series = std::move(series);

  const PreprocessOptions prep{config.smooth_window, config.order};
  r.tdvs.reserve(r.series.size());
  for (const TopicSeries& s : r.series) r.tdvs.push_back(preprocess(s, prep));

  r.matrix = build_distance_matrix(r.tdvs, config.metric, config.alignment, config.threads);

  HdbscanOptions cluster_options;
  cluster_options.min_cluster_size = config.min_cluster_size;
  cluster_options.core_k = config.core_k;
  cluster_options.allow_single_cluster = config.allow_single_cluster;
  r.clusters = hdbscan(r.matrix, cluster_options);

  r.ephemerality.reserve(r.tdvs.size());
  for (const Tdv& t : r.tdvs) r.ephemerality.push_back(measure(t, config.ephemerality));
  r.thresholds = resolve_thresholds(r.ephemerality, config.ephemerality);
  for (auto& e : r.ephemerality) {
    e.category = categorize(e.e_filtered, e.e_sorted, r.thresholds.filtered, r.thresholds.sorted,
                            config.ephemerality.orientation);
  }
  return r;
}

PipelineResult run(const PipelineConfig& config) {
  config.validate();
  IngestOptions ingest_options{config.input_format, config.from, config.to};

  IngestResult ingested;
  std::optional<std::map<std::string, int>> truth_by_topic;
  std::string digest;
  if (config.fixtures) {
    const std::vector<FixtureGroup> groups = read_fixture_spec(*config.fixtures);
    const std::vector<LabeledSeries> generated =
        generate_fixture(groups, config.from.value_or(kFixtureStart));
    std::vector<TopicSeries> plain;
    truth_by_topic.emplace();
    for (const auto& g : generated) {
      plain.push_back(g.series);
      (*truth_by_topic)[g.series.topic_id] = static_cast<int>(g.label);
    }
    // Round-trip through the text format so fixtures and files share one path.
    std::stringstream buffer;
    write_series_csv(buffer, plain);
    ingest_options.format = InputFormat::Csv;
    ingested = ingest_stream(buffer, ingest_options, config.fixtures->string());
    digest = digest_files(std::span(&*config.fixtures, 1));
  } else {
    ingested = ingest(config.inputs, ingest_options);
    digest = digest_files(config.inputs);
  }

  PipelineResult r = analyze_series(std::move(ingested.topics), config);
  r.excluded = std::move(ingested.excluded);
  r.rows_out_of_range = ingested.rows_out_of_range;
  if (truth_by_topic) {
    std::vector<int> truth;
    for (const auto& s : r.series) truth.push_back(truth_by_topic->at(s.topic_id));
    r.adjusted_rand = adjusted_rand_index(truth, r.clusters.labels);
    r.truth = std::move(truth);
  }
  write_outputs(r, config, digest);
  return r;
}

void write_outputs(const PipelineResult& r, const PipelineConfig& config,
                   const std::string& input_digest) {
  const fs::path& dir = config.out_dir;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw Error(ErrorKind::Io, "cannot create output directory " + dir.string());
  }
  const auto& ids = r.matrix.topic_ids;
  const auto n = static_cast<Eigen::Index>(ids.size());
  const auto& cl = r.clusters;

  {
    auto out = open_output(dir, "distance_matrix.csv");
    auto shifts = open_output(dir, "alignment_shifts.csv");
    out << "topic_id";
    shifts << "topic_id";
    for (const auto& id : ids) {
      out << ',' << id;
      shifts << ',' << id;
    }
    out << '\n';
    shifts << '\n';
    for (Eigen::Index i = 0; i < n; ++i) {
      out << ids[static_cast<std::size_t>(i)];
      shifts << ids[static_cast<std::size_t>(i)];
      for (Eigen::Index j = 0; j < n; ++j) {
        out << ',' << format_real(r.matrix.values(i, j));
        shifts << ',' << r.matrix.shifts(i, j);
      }
      out << '\n';
      shifts << '\n';
    }
    finish(out, dir / "distance_matrix.csv");
    finish(shifts, dir / "alignment_shifts.csv");
  }

  {
    auto out = open_output(dir, "clusters.csv");
    out << "topic_id,cluster,medoid_distance,is_medoid\n";
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto k = static_cast<std::size_t>(i);
      const int label = cl.labels[k];
      const bool medoid = label != kNoise && cl.medoids[static_cast<std::size_t>(label)] == i;
      out << ids[k] << ',' << label << ',' << optional_real(cl.centroid_distance[k]) << ','
          << (medoid ? 1 : 0) << '\n';
    }
    finish(out, dir / "clusters.csv");
  }

  {
    auto out = open_output(dir, "cluster_summary.csv");
    out << "cluster,size,stability,medoid\n";
    for (int c = 0; c < cl.num_clusters(); ++c) {
      const auto k = static_cast<std::size_t>(c);
      out << c << ',' << cl.sizes[k] << ',' << format_real(cl.stabilities[k]) << ','
          << ids[static_cast<std::size_t>(cl.medoids[k])] << '\n';
    }
    finish(out, dir / "cluster_summary.csv");
  }

  {
    std::map<Eigen::Index, int> reported;
    for (std::size_t c = 0; c < cl.tree_nodes.size(); ++c) reported[cl.tree_nodes[c]] = static_cast<int>(c);
    auto out = open_output(dir, "condensed_tree.jsonl");
    for (const CondensedEdge& e : cl.tree.edges) {
      json rec;
      rec["parent"] = e.parent;
      rec["child"] = e.child;
      rec["child_topic"] = cl.tree.is_cluster(e.child) ? json(nullptr) : json(ids[static_cast<std::size_t>(e.child)]);
      rec["lambda"] = e.lambda;
      rec["child_size"] = e.child_size;
      const auto it = reported.find(e.child);
      rec["selected_cluster"] = it == reported.end() ? json(nullptr) : json(it->second);
      out << rec.dump() << '\n';
    }
    finish(out, dir / "condensed_tree.jsonl");
  }

  const SortedOrientation orientation = config.ephemerality.orientation;
  {
    auto out = open_output(dir, "ephemerality.csv");
    out << "topic_id,e_orig,e_filtered,e_sorted,e_sorted_oriented,category\n";
    for (const auto& e : r.ephemerality) {
      out << e.topic_id << ',' << format_real(e.e_orig) << ',' << format_real(e.e_filtered) << ','
          << format_real(e.e_sorted) << ',' << format_real(oriented_sorted(e.e_sorted, orientation))
          << ',' << to_string(e.category) << '\n';
    }
    finish(out, dir / "ephemerality.csv");
  }

  {
    auto out = open_output(dir, "cluster_ephemerality.csv");
    out << "cluster,size,e_orig_mean,e_orig_std,e_filtered_mean,e_filtered_std,e_sorted_mean,e_sorted_std\n";
    std::vector<int> groups;
    for (int c = 0; c < cl.num_clusters(); ++c) groups.push_back(c);
    if (cl.num_noise() > 0) groups.push_back(kNoise);
    for (int g : groups) {
      std::vector<double> orig, filtered, sorted;
      for (std::size_t i = 0; i < cl.labels.size(); ++i) {
        if (cl.labels[i] != g) continue;
        orig.push_back(r.ephemerality[i].e_orig);
        filtered.push_back(r.ephemerality[i].e_filtered);
        sorted.push_back(r.ephemerality[i].e_sorted);
      }
      const MeanStd a = mean_std(orig), b = mean_std(filtered), c = mean_std(sorted);
      out << g << ',' << orig.size() << ',' << format_real(a.mean) << ',' << format_real(a.std) << ','
          << format_real(b.mean) << ',' << format_real(b.std) << ',' << format_real(c.mean) << ','
          << format_real(c.std) << '\n';
    }
    finish(out, dir / "cluster_ephemerality.csv");
  }

  {
    auto out = open_output(dir, "plot_curves.csv");
    out << "topic_id,day,date,value\n";
    for (std::size_t i = 0; i < r.tdvs.size(); ++i) {
      const Tdv& t = r.tdvs[i];
      for (Eigen::Index d = 0; d < t.size(); ++d) {
        out << t.topic_id << ',' << d << ',' << format_date(add_days(r.series[i].start_date, static_cast<long>(d)))
            << ',' << format_real(t.values(d)) << '\n';
      }
    }
    finish(out, dir / "plot_curves.csv");
  }

  json overlay;
  {
    Eigen::Index a = 0, b = 1;
    if (config.overlay_pair) {
      a = index_of(ids, config.overlay_pair->first);
      b = index_of(ids, config.overlay_pair->second);
    } else if (cl.num_clusters() >= 2) {
      a = cl.medoids[0];
      b = cl.medoids[1];
    }
    const auto& va = r.tdvs[static_cast<std::size_t>(a)].values;
    const auto& vb = r.tdvs[static_cast<std::size_t>(b)].values;
    const PairAlignment pa = aligned_distance(config.metric, config.alignment, va, vb);
    const AlignedPair pair = pad_pair(va, vb, pa.shift);
    auto out = open_output(dir, "plot_aligned_pair.csv");
    out << "position," << ids[static_cast<std::size_t>(a)] << ',' << ids[static_cast<std::size_t>(b)] << '\n';
    for (Eigen::Index m = 0; m < pair.padded_length; ++m)
      out << m << ',' << format_real(pair.a(m)) << ',' << format_real(pair.b(m)) << '\n';
    finish(out, dir / "plot_aligned_pair.csv");
    overlay = {{"a", ids[static_cast<std::size_t>(a)]},
               {"b", ids[static_cast<std::size_t>(b)]},
               {"shift", pa.shift},
               {"distance", pa.distance}};
  }

  {
    struct Row {
      int cluster;
      double distance;
      Eigen::Index index;
    };
    std::vector<Row> rows;
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto k = static_cast<std::size_t>(i);
      if (cl.labels[k] != kNoise) rows.push_back({cl.labels[k], *cl.centroid_distance[k], i});
    }
    std::sort(rows.begin(), rows.end(), [](const Row& x, const Row& y) {
      return std::tie(x.cluster, x.distance, x.index) < std::tie(y.cluster, y.distance, y.index);
    });
    auto out = open_output(dir, "plot_cluster_membership.csv");
    out << "cluster,rank,topic_id,medoid_distance\n";
    int rank = 0, current = -2;
    for (const Row& row : rows) {
      rank = row.cluster == current ? rank + 1 : 0;
      current = row.cluster;
      out << row.cluster << ',' << rank << ',' << ids[static_cast<std::size_t>(row.index)] << ','
          << format_real(row.distance) << '\n';
    }
    finish(out, dir / "plot_cluster_membership.csv");
  }

  {
    auto out = open_output(dir, "plot_ephemerality_scatter.csv");
    out << "topic_id,e_filtered,e_sorted,e_sorted_oriented,category,cluster\n";
    for (std::size_t i = 0; i < r.ephemerality.size(); ++i) {
      const auto& e = r.ephemerality[i];
      out << e.topic_id << ',' << format_real(e.e_filtered) << ',' << format_real(e.e_sorted) << ','
          << format_real(oriented_sorted(e.e_sorted, orientation)) << ',' << to_string(e.category) << ','
          << cl.labels[i] << '\n';
    }
    finish(out, dir / "plot_ephemerality_scatter.csv");
  }

  if (r.truth) {
    auto out = open_output(dir, "ground_truth.csv");
    out << "topic_id,shape\n";
    for (std::size_t i = 0; i < r.truth->size(); ++i)
      out << ids[i] << ',' << to_string(static_cast<ShapeKind>((*r.truth)[i])) << '\n';
    finish(out, dir / "ground_truth.csv");
  }

  {
    json report;
    report["topics"] = n;
    report["excluded_topics"] = r.excluded;
    report["rows_out_of_range"] = r.rows_out_of_range;
    report["clusters"] = cl.num_clusters();
    report["noise"] = cl.num_noise();
    report["category_thresholds"] = {{"e_filtered", r.thresholds.filtered},
                                     {"e_sorted_oriented", r.thresholds.sorted}};
    report["overlay"] = overlay;
    report["adjusted_rand_index"] = r.adjusted_rand ? json(*r.adjusted_rand) : json(nullptr);
    auto out = open_output(dir, "run_report.json");
    out << report.dump(2) << '\n';
    finish(out, dir / "run_report.json");
  }

  {
    json manifest;
    manifest["software"] = "topicdyn";
    manifest["version"] = std::string(version());
    manifest["input_sha256"] = input_digest;
    manifest["config"] = config_to_json(config);
    auto out = open_output(dir, "manifest.json");
    out << manifest.dump(2) << '\n';
    finish(out, dir / "manifest.json");
  }
}

}  // namespace topicdyn
