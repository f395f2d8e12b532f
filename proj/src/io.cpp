#include "topicdyn/io.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <memory>
#include <set>
#include <ostream>
#include <sstream>

#include <json.hpp>
#include <openssl/evp.h>

#include "topicdyn/error.hpp"

namespace topicdyn {

namespace {

using json = nlohmann::json;

struct Row {
  std::string topic_id;
  Date date;
  std::int64_t count;
};

std::string where(std::string_view source, std::size_t line) {
  return std::string(source) + ":" + std::to_string(line) + ": ";
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (true) {
    const std::size_t next = line.find(sep, pos);
    out.push_back(trim(line.substr(pos, next == std::string_view::npos ? line.npos : next - pos)));
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  return out;
}

Row make_row(std::string_view topic, std::string_view date, std::string_view count,
             std::string_view source, std::size_t line) {
  if (topic.empty()) throw Error(ErrorKind::Parse, where(source, line) + "empty topic_id");
  const auto day = parse_date(date);
  if (!day) throw Error(ErrorKind::Parse, where(source, line) + "invalid date '" + std::string(date) + "'");
  std::int64_t value = 0;
  const auto [end, ec] = std::from_chars(count.data(), count.data() + count.size(), value);
  if (ec != std::errc{} || end != count.data() + count.size()) {
    throw Error(ErrorKind::Parse, where(source, line) + "invalid count '" + std::string(count) + "'");
  }
  if (value < 0) {
    throw Error(ErrorKind::Parse, where(source, line) + "negative count " + std::to_string(value));
  }
  return {std::string(topic), *day, value};
}

void read_csv(std::istream& in, std::string_view source, std::vector<Row>& rows) {
  std::string line;
  std::size_t number = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++number;
    const std::string_view text = trim(line);
    if (text.empty()) continue;
    const auto fields = split(text, ',');
    if (!header_seen) {
      if (fields.size() != 3 || fields[0] != "topic_id" || fields[1] != "date" || fields[2] != "count") {
        throw Error(ErrorKind::Parse, where(source, number) + "expected header 'topic_id,date,count'");
      }
      header_seen = true;
      continue;
    }
    if (fields.size() != 3) {
      throw Error(ErrorKind::Parse, where(source, number) + "expected 3 fields, got " +
                                        std::to_string(fields.size()));
    }
    rows.push_back(make_row(fields[0], fields[1], fields[2], source, number));
  }
  if (!header_seen) throw Error(ErrorKind::Parse, std::string(source) + ": missing header");
}

void read_json_lines(std::istream& in, std::string_view source, std::vector<Row>& rows) {
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (trim(line).empty()) continue;
    const json record = json::parse(line, nullptr, false);
    if (record.is_discarded() || !record.is_object()) {
      throw Error(ErrorKind::Parse, where(source, number) + "not a JSON object");
    }
    const auto topic = record.find("topic_id");
    const auto date = record.find("date");
    const auto count = record.find("count");
    if (topic == record.end() || !topic->is_string() || date == record.end() || !date->is_string() ||
        count == record.end() || !count->is_number_integer()) {
      throw Error(ErrorKind::Parse,
                  where(source, number) + "record needs string topic_id, string date, integer count");
    }
    const std::string count_text = count->dump();
    rows.push_back(make_row(topic->get<std::string>(), date->get<std::string>(), count_text, source, number));
  }
}

IngestResult assemble(std::vector<Row> rows, const IngestOptions& options) {
  IngestResult out;
  out.rows_read = rows.size();
  if (rows.empty() && (!options.from || !options.to)) {
    throw Error(ErrorKind::InsufficientData, "input holds no rows");
  }
  Date lo = options.from.value_or(Date{});
  Date hi = options.to.value_or(Date{});
  if (!options.from || !options.to) {
    const auto [min_it, max_it] = std::minmax_element(
        rows.begin(), rows.end(), [](const Row& a, const Row& b) {
          return std::chrono::sys_days(a.date) < std::chrono::sys_days(b.date);
        });
    if (!options.from) lo = min_it->date;
    if (!options.to) hi = max_it->date;
  }
  if (std::chrono::sys_days(hi) < std::chrono::sys_days(lo)) {
    throw Error(ErrorKind::InvalidParameter, "date range ends before it starts");
  }
  out.from = lo;
  out.to = hi;
  const long span = days_between(lo, hi) + 1;

  std::map<std::string, std::vector<std::int64_t>> by_topic;
  std::set<std::pair<std::string, long>> seen;
  for (const Row& row : rows) {
    const long day = days_between(lo, row.date);
    if (!seen.emplace(row.topic_id, day).second) {
      throw Error(ErrorKind::DuplicateKey,
                  "duplicate row for topic '" + row.topic_id + "' on " + format_date(row.date));
    }
    auto& counts = by_topic[row.topic_id];
    if (counts.empty()) counts.assign(static_cast<std::size_t>(span), 0);
    if (day < 0 || day >= span) {
      ++out.rows_out_of_range;
      continue;
    }
    counts[static_cast<std::size_t>(day)] = row.count;
  }

  for (auto& [topic, counts] : by_topic) {
    const bool active = std::any_of(counts.begin(), counts.end(), [](std::int64_t c) { return c > 0; });
    if (!active) {
      out.excluded.push_back(topic);
      continue;
    }
    out.topics.push_back({topic, lo, std::move(counts)});
  }
  return out;
}

}  // namespace

std::optional<Date> parse_date(std::string_view text) noexcept {
  if (text.size() != 10 || text[4] != '-' || text[7] != '-') return std::nullopt;
  auto number = [&](std::size_t pos, std::size_t len, int& value) {
    const char* first = text.data() + pos;
    const auto [end, ec] = std::from_chars(first, first + len, value);
    return ec == std::errc{} && end == first + len && std::all_of(first, first + len, [](char c) {
             return c >= '0' && c <= '9';
           });
  };
  int y = 0, m = 0, d = 0;
  if (!number(0, 4, y) || !number(5, 2, m) || !number(8, 2, d)) return std::nullopt;
  const Date date{std::chrono::year(y), std::chrono::month(static_cast<unsigned>(m)),
                  std::chrono::day(static_cast<unsigned>(d))};
  if (!date.ok()) return std::nullopt;
  return date;
}

std::string format_date(Date date) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(date.year()),
                static_cast<unsigned>(date.month()), static_cast<unsigned>(date.day()));
  return buf;
}

Date add_days(Date date, long days) {
  return Date{std::chrono::sys_days(date) + std::chrono::days(days)};
}

long days_between(Date from, Date to) {
  return static_cast<long>((std::chrono::sys_days(to) - std::chrono::sys_days(from)).count());
}

std::string format_real(double value) {
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, end);
}

IngestResult ingest_stream(std::istream& in, const IngestOptions& options,
                           std::string_view source_name) {
  std::vector<Row> rows;
  if (options.format == InputFormat::Csv) {
    read_csv(in, source_name, rows);
  } else {
    read_json_lines(in, source_name, rows);
  }
  return assemble(std::move(rows), options);
}

IngestResult ingest(std::span<const std::filesystem::path> paths, const IngestOptions& options) {
  if (paths.empty()) throw Error(ErrorKind::InvalidParameter, "no input files given");
  std::vector<Row> rows;
  for (const auto& path : paths) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
    if (options.format == InputFormat::Csv) {
      read_csv(in, path.string(), rows);
    } else {
      read_json_lines(in, path.string(), rows);
    }
  }
  return assemble(std::move(rows), options);
}

void write_series_csv(std::ostream& out, std::span<const TopicSeries> series) {
  out << "topic_id,date,count\n";
  for (const TopicSeries& s : series) {
    for (std::size_t d = 0; d < s.counts.size(); ++d) {
      out << s.topic_id << ',' << format_date(add_days(s.start_date, static_cast<long>(d))) << ','
          << s.counts[d] << '\n';
    }
  }
}

std::vector<FixtureGroup> parse_fixture_spec(std::istream& in) {
  std::vector<FixtureGroup> groups;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (trim(line).empty() || trim(line).front() == '#') continue;
    const json j = json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
      throw Error(ErrorKind::Parse, "fixture line " + std::to_string(number) + ": not a JSON object");
    }
    try {
      FixtureGroup g;
      const auto kind = parse_shape(j.at("kind").get<std::string>());
      if (!kind) throw Error(ErrorKind::Parse, "unknown shape kind");
      g.spec.kind = *kind;
      g.count = j.value("count", 1);
      g.prefix = j.value("prefix", std::string{});
      g.spec.length = j.value("length", g.spec.length);
      g.spec.total_mass = j.value("total_mass", g.spec.total_mass);
      if (j.contains("center")) g.spec.center = j.at("center").get<int>();
      g.spec.width = j.value("width", g.spec.width);
      g.spec.bursts = j.value("bursts", g.spec.bursts);
      g.spec.separation = j.value("separation", g.spec.separation);
      g.spec.baseline = j.value("baseline", g.spec.baseline);
      g.spec.period = j.value("period", g.spec.period);
      g.spec.phase = j.value("phase", g.spec.phase);
      g.spec.amplitude = j.value("amplitude", g.spec.amplitude);
      g.spec.noise = j.value("noise", g.spec.noise);
      g.spec.seed = j.value("seed", g.spec.seed);
      g.spec.validate();
      groups.push_back(std::move(g));
    } catch (const json::exception& e) {
      throw Error(ErrorKind::Parse, "fixture line " + std::to_string(number) + ": " + e.what());
    } catch (const Error& e) {
      throw Error(e.kind(), "fixture line " + std::to_string(number) + ": " + e.what());
    }
  }
  return groups;
}

std::vector<FixtureGroup> read_fixture_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
  return parse_fixture_spec(in);
}

std::string digest_files(std::span<const std::filesystem::path> paths) {
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) {
    throw Error(ErrorKind::Io, "cannot initialise SHA-256");
  }
  std::vector<char> buffer(1 << 16);
  for (const auto& path : paths) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
    while (in) {
      in.read(buffer.data(), static_cast<std::streamsize>(buffer.size()));
      EVP_DigestUpdate(ctx.get(), buffer.data(), static_cast<std::size_t>(in.gcount()));
    }
  }
  unsigned char hash[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx.get(), hash, &len);
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  for (unsigned i = 0; i < len; ++i) {
    out += kHex[hash[i] >> 4];
    out += kHex[hash[i] & 0xf];
  }
  return out;
}

}  // namespace topicdyn
