#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "topicdyn/error.hpp"
#include "topicdyn/io.hpp"

using namespace topicdyn;
namespace fs = std::filesystem;

namespace {

IngestResult ingest_text(const std::string& text, IngestOptions options = {}) {
  std::istringstream in(text);
  return ingest_stream(in, options, "mem");
}

Error error_of(const std::string& text, IngestOptions options = {}) {
  try {
    ingest_text(text, options);
  } catch (const Error& e) {
    return e;
  }
  ADD_FAILURE() << "no error";
  return Error(ErrorKind::Io, "");
}

}  // namespace

TEST(Dates, ParseFormatAndArithmetic) {
  const auto d = parse_date("2020-02-28");
  ASSERT_TRUE(d);
  EXPECT_EQ(format_date(add_days(*d, 1)), "2020-02-29");
  EXPECT_EQ(format_date(add_days(*d, 2)), "2020-03-01");
  EXPECT_EQ(days_between(*d, *parse_date("2021-02-28")), 366);
  for (const char* bad : {"2020-2-28", "2020-02-30", "20-02-28", "2020/02/28", "2020-02-28x", ""})
    EXPECT_FALSE(parse_date(bad)) << bad;
}

TEST(FormatReal, RoundTrips) {
  for (double x : {0.0, 0.1, 1.0 / 3.0, 0.2576941016011038, 1e-300, 1.0}) {
    EXPECT_EQ(std::stod(format_real(x)), x);
  }
  EXPECT_EQ(format_real(0.1), "0.1");
  EXPECT_EQ(format_real(1.0), "1");
}

TEST(Ingest, FillsGapsWithZeros) {
  const auto r = ingest_text("topic_id,date,count\nA,2020-01-01,3\nA,2020-01-03,5\n");
  ASSERT_EQ(r.topics.size(), 1u);
  EXPECT_EQ(r.topics[0].counts, (std::vector<std::int64_t>{3, 0, 5}));
  EXPECT_EQ(format_date(r.from), "2020-01-01");
  EXPECT_EQ(format_date(r.to), "2020-01-03");
}

TEST(Ingest, AlignsTopicsOnCommonRangeSortedById) {
  const auto r = ingest_text(
      "topic_id,date,count\nzeta,2020-01-02,1\nalpha,2020-01-01,2\nalpha,2020-01-04,1\n");
  ASSERT_EQ(r.topics.size(), 2u);
  EXPECT_EQ(r.topics[0].topic_id, "alpha");
  EXPECT_EQ(r.topics[0].counts, (std::vector<std::int64_t>{2, 0, 0, 1}));
  EXPECT_EQ(r.topics[1].counts, (std::vector<std::int64_t>{0, 1, 0, 0}));
  EXPECT_EQ(r.rows_read, 3u);
}

TEST(Ingest, NegativeCountReportsLine) {
  const Error e = error_of("topic_id,date,count\nA,2020-01-01,3\nA,2020-01-02,-1\n");
  EXPECT_EQ(e.kind(), ErrorKind::Parse);
  EXPECT_NE(std::string(e.what()).find("mem:3"), std::string::npos) << e.what();
}

TEST(Ingest, MalformedRows) {
  EXPECT_EQ(error_of("id,day,n\nA,2020-01-01,3\n").kind(), ErrorKind::Parse);
  EXPECT_EQ(error_of("topic_id,date,count\nA,2020-13-01,3\n").kind(), ErrorKind::Parse);
  EXPECT_EQ(error_of("topic_id,date,count\nA,2020-01-01\n").kind(), ErrorKind::Parse);
  EXPECT_EQ(error_of("topic_id,date,count\nA,2020-01-01,x\n").kind(), ErrorKind::Parse);
  EXPECT_EQ(error_of("topic_id,date,count\n,2020-01-01,1\n").kind(), ErrorKind::Parse);
}

TEST(Ingest, DuplicateKey) {
  const Error e = error_of("topic_id,date,count\nA,2020-01-01,3\nB,2020-01-01,1\nA,2020-01-01,4\n");
  EXPECT_EQ(e.kind(), ErrorKind::DuplicateKey);
}

TEST(Ingest, RangeFilteringAndExclusion) {
  IngestOptions opt;
  opt.from = parse_date("2020-01-02");
  opt.to = parse_date("2020-01-04");
  const auto r = ingest_text(
      "topic_id,date,count\nA,2020-01-01,3\nA,2020-01-03,2\nB,2020-01-09,7\nC,2020-01-02,0\n", opt);
  ASSERT_EQ(r.topics.size(), 1u);
  EXPECT_EQ(r.topics[0].topic_id, "A");
  EXPECT_EQ(r.topics[0].counts, (std::vector<std::int64_t>{0, 2, 0}));
  EXPECT_EQ(r.rows_out_of_range, 2u);
  EXPECT_EQ(r.excluded, (std::vector<std::string>{"B", "C"}));
}

TEST(Ingest, JsonLines) {
  IngestOptions opt;
  opt.format = InputFormat::JsonLines;
  const auto r = ingest_text(
      "{\"topic_id\":\"A\",\"date\":\"2020-01-01\",\"count\":3}\n\n"
      "{\"topic_id\":\"A\",\"date\":\"2020-01-02\",\"count\":4}\n",
      opt);
  ASSERT_EQ(r.topics.size(), 1u);
  EXPECT_EQ(r.topics[0].counts, (std::vector<std::int64_t>{3, 4}));
  EXPECT_EQ(error_of("{\"topic_id\":\"A\",\"date\":\"2020-01-01\"}\n", opt).kind(), ErrorKind::Parse);
}

TEST(Ingest, MissingFileIsIo) {
  const std::vector<fs::path> paths{"/nonexistent/counts.csv"};
  try {
    ingest(paths);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Io);
  }
}

TEST(Ingest, SynthRoundTripAtCorpusScale) {
  FixtureGroup g;
  g.spec.kind = ShapeKind::Burst;
  g.spec.noise = 0.2;
  g.count = 68;
  const Date start = *parse_date("2020-03-01");
  std::vector<TopicSeries> series;
  for (auto& s : generate_fixture({g}, start)) series.push_back(s.series);
  std::stringstream buffer;
  write_series_csv(buffer, series);
  const auto r = ingest_stream(buffer);
  ASSERT_EQ(r.topics.size(), 68u);
  std::sort(series.begin(), series.end(), [](auto& a, auto& b) { return a.topic_id < b.topic_id; });
  for (std::size_t i = 0; i < 68; ++i) {
    EXPECT_EQ(r.topics[i].topic_id, series[i].topic_id);
    EXPECT_EQ(r.topics[i].counts, series[i].counts);
    EXPECT_EQ(r.topics[i].counts.size(), 222u);
  }
  EXPECT_EQ(format_date(r.from), "2020-03-01");
}

TEST(FixtureSpec, ParsesGroupsAndRejectsUnknownKinds) {
  std::istringstream in(
      "# burst against uniform\n"
      "{\"kind\":\"burst\",\"count\":50,\"noise\":0.02,\"seed\":1,\"width\":4}\n"
      "{\"kind\":\"uniform\",\"count\":5,\"prefix\":\"flat_\"}\n");
  const auto groups = parse_fixture_spec(in);
  ASSERT_EQ(groups.size(), 2u);
  EXPECT_EQ(groups[0].spec.kind, ShapeKind::Burst);
  EXPECT_EQ(groups[0].count, 50);
  EXPECT_EQ(groups[0].spec.noise, 0.02);
  EXPECT_EQ(groups[0].spec.width, 4.0);
  EXPECT_EQ(groups[1].prefix, "flat_");
  std::istringstream bad("{\"kind\":\"spiral\",\"count\":1}\n");
  EXPECT_THROW(parse_fixture_spec(bad), Error);
}

TEST(Digest, KnownValue) {
  const fs::path p = fs::temp_directory_path() / "topicdyn_digest_test.txt";
  {
    std::ofstream out(p, std::ios::binary);
    out << "abc";
  }
  const std::vector<fs::path> paths{p};
  EXPECT_EQ(digest_files(paths), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  fs::remove(p);
}
