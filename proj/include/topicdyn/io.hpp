#pragma once

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "topicdyn/synth.hpp"
#include "topicdyn/tdv.hpp"

namespace topicdyn {

using Date = std::chrono::year_month_day;

/// Strict ISO-8601 calendar date (YYYY-MM-DD).
std::optional<Date> parse_date(std::string_view text) noexcept;
std::string format_date(Date date);
Date add_days(Date date, long days);
long days_between(Date from, Date to);

/// Shortest representation that round-trips to the same double.
std::string format_real(double value);

enum class InputFormat { Csv, JsonLines };

struct IngestOptions {
  InputFormat format = InputFormat::Csv;
  std::optional<Date> from;
  std::optional<Date> to;
};

struct IngestResult {
  /// Active topics, ordered by topic id, all spanning [from, to].
  std::vector<TopicSeries> topics;
  /// Topics with no activity inside the range.
  std::vector<std::string> excluded;
  std::size_t rows_read = 0;
  std::size_t rows_out_of_range = 0;
  Date from{};
  Date to{};
};

/// Parses `topic_id,date,count` rows (CSV with that header, or JSON lines
/// with those keys) from every source and re-bases the topics onto one day
/// range, filling absent days with zeros. Without an explicit range the span
/// of the data is used. Throws Parse (with the line number) for malformed
/// rows, DuplicateKey for a repeated (topic, date) pair and Io for unreadable
/// files.
IngestResult ingest(std::span<const std::filesystem::path> paths, const IngestOptions& options = {});
IngestResult ingest_stream(std::istream& in, const IngestOptions& options = {},
                           std::string_view source_name = "<stream>");

/// Writes series in the CSV input format, zero days included.
void write_series_csv(std::ostream& out, std::span<const TopicSeries> series);

/// Fixture description: JSON lines, one group per line, e.g.
/// {"kind":"burst","count":50,"length":222,"noise":0.02,"seed":1}.
std::vector<FixtureGroup> parse_fixture_spec(std::istream& in);
std::vector<FixtureGroup> read_fixture_spec(const std::filesystem::path& path);

/// SHA-256 of the concatenated file contents, lowercase hex.
std::string digest_files(std::span<const std::filesystem::path> paths);

}  // namespace topicdyn
