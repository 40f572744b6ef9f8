#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "gyroproxy/cli/app.hpp"
#include "gyroproxy/cli/report.hpp"

using namespace gyroproxy;
using namespace gyroproxy::cli;
namespace fs = std::filesystem;

namespace {

Table sample() {
  Table t{{"case", "kernel", "value"}, {}};
  t.add_row({"sh03b-desk", "stream", "1.5"});
  t.add_row({"sh03b-desk", "shear", "0.25"});
  return t;
}

Table bench(const std::string& variant, const std::vector<std::pair<std::string, double>>& medians) {
  Table t{{"case", "kernel", "variant", "reps", "median_s", "min_s", "checksum"}, {}};
  for (const auto& [k, m] : medians) t.add_row({"sh03b-desk", k, variant, "9", format_double(m), format_double(m), "0"});
  return t;
}

fs::path scratch_dir() {
  const auto dir = fs::temp_directory_path() / "gyroproxy_report_test";
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("csv rendering has exactly one metadata line") {
  Metadata meta;
  meta.set("gyroproxy", "0.1.0");
  meta.set("command", "bench");
  meta.set("command", "verify");
  const auto text = render_csv(meta, sample());
  CHECK(text == "# gyroproxy=0.1.0; command=verify\ncase,kernel,value\nsh03b-desk,stream,1.5\nsh03b-desk,shear,0.25\n");

  const auto parsed = parse_csv(text);
  CHECK(parsed.meta.get("command") == "verify");
  CHECK(!parsed.meta.get("seed"));
  CHECK(parsed.table.columns == sample().columns);
  CHECK(parsed.table.rows == sample().rows);
  CHECK(parsed.table.cell(1, "value") == "0.25");
  CHECK_THROWS_AS(parsed.table.column_index("missing"), IoError);
}

TEST_CASE("metadata") {
  const auto meta = make_metadata("bench", 7);
  CHECK(meta.entries.front().first == "gyroproxy");
  CHECK(meta.get("seed") == "7");
  CHECK(meta.get("timestamp")->back() == 'Z');
  const auto host = *meta.get("host");
  CHECK(host.find(';') == std::string::npos);
  CHECK(host.find(',') == std::string::npos);
  CHECK(!make_metadata("plan-padding", std::nullopt).get("seed"));
}

TEST_CASE("markdown rendering") {
  const auto md = render_markdown(sample());
  std::istringstream is(md);
  std::string line;
  std::vector<std::string> lines;
  while (std::getline(is, line)) lines.push_back(line);
  REQUIRE(lines.size() == 4);
  CHECK(lines[0] == "| case       | kernel | value |");
  CHECK(lines[1] == "|------------|--------|-------|");
  for (const auto& l : lines) CHECK(l.size() == lines[0].size());
}

TEST_CASE("malformed reports") {
  CHECK_THROWS_AS(parse_csv(""), IoError);
  CHECK_THROWS_AS(parse_csv("# only=meta\n"), IoError);
  CHECK_THROWS_AS(parse_csv("a,b\n1,2,3\n"), IoError);
  CHECK(parse_csv("a,b\r\n1,\r\n").table.rows[0] == std::vector<std::string>{"1", ""});
  CHECK_THROWS_AS(read_report(scratch_dir() / "does_not_exist.csv"), IoError);
  Table t{{"a"}, {}};
  CHECK_THROWS_AS(t.add_row({"1", "2"}), SizeError);
}

TEST_CASE("shortest round-trip doubles") {
  for (double v : {0.1, 1.0 / 3.0, 2.5e-7, 123456789.0, 0.0}) CHECK(std::stod(format_double(v)) == v);
  CHECK(format_double(0.5) == "0.5");
}

TEST_CASE("atomic writes") {
  const auto dir = scratch_dir();
  const auto path = dir / "out.csv";
  fs::remove(path);
  write_atomic(path, "first\n");
  write_atomic(path, "second\n");
  std::ifstream in(path);
  std::string content((std::istreambuf_iterator<char>(in)), {});
  CHECK(content == "second\n");
  for (const auto& entry : fs::directory_iterator(dir)) {
    CHECK(entry.path().filename().string().find(".tmp.") == std::string::npos);
  }
  CHECK_THROWS_AS(write_atomic(dir / "missing" / "out.csv", "x"), IoError);
  CHECK_THROWS_AS(write_atomic(dir, "x"), IoError);
  CHECK(!fs::exists(dir / "missing"));
  fs::remove_all(dir);
}

TEST_CASE("speedup summary") {
  const auto before = bench("original", {{"stream", 2.0}, {"shear", 3.0}});
  const auto after = bench("optimized", {{"stream", 1.0}, {"shear", 3.0}});
  const auto s = summarize(before, after, "original", "optimized");
  REQUIRE(s.rows.size() == 2);
  CHECK(s.rows[0].kernel == "stream");
  CHECK(s.rows[0].ratio() == 2.0);
  CHECK(s.rows[1].ratio() == 1.0);
  CHECK(s.overall_ratio() == doctest::Approx(5.0 / 4.0));

  const auto same = summarize(before, before, "original", "original");
  for (const auto& row : same.rows) CHECK(row.ratio() == 1.0);

  CHECK_THROWS_AS(summarize(before, bench("optimized", {{"stream", 1.0}}), "original", "optimized"), CoverageError);
  CHECK_THROWS_AS(summarize(before, after, "original", "original"), CoverageError);
  try {
    summarize(before, bench("optimized", {{"stream", 1.0}, {"field", 1.0}}), "original", "optimized");
  } catch (const CoverageError& e) {
    const std::string what = e.what();
    CHECK(what.find("shear") != std::string::npos);
    CHECK(what.find("field") != std::string::npos);
  }
}

TEST_CASE("floors file") {
  const auto path = fs::temp_directory_path() / "gyroproxy_floors_test.csv";
  {
    std::ofstream(path) << "case,kernel,min_ratio\nsh03b-desk,stream,0.9\n";
  }
  const auto floors = read_floors(path.string());
  REQUIRE(floors.size() == 1);
  CHECK(floors[0].kernel == "stream");
  CHECK(floors[0].min_ratio == 0.9);
  {
    std::ofstream(path) << "case,kernel,min_ratio\nsh03b-desk,stream,fast\n";
  }
  CHECK_THROWS_AS(read_floors(path.string()), IoError);
  fs::remove(path);
}

TEST_CASE("committed reference floors parse") {
  const auto floors = read_floors(std::string(GYROPROXY_TEST_DATA) + "/reference/floors.csv");
  CHECK(floors.size() >= 2);
  for (const auto& f : floors) CHECK((f.min_ratio > 0.0 && f.min_ratio <= 1.0));
}
