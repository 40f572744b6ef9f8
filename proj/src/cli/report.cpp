#include "gyroproxy/cli/report.hpp"

#include <sys/utsname.h>
#include <unistd.h>

#include <charconv>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>
#include <thread>

#ifndef GYROPROXY_VERSION
#define GYROPROXY_VERSION "0.0.0"
#endif

namespace gyroproxy::cli {

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream is(line);
  while (std::getline(is, field, sep)) out.push_back(field);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

std::string strip(std::string s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

void Table::add_row(std::vector<std::string> row) {
  if (row.size() != columns.size()) {
    throw SizeError("table row has " + std::to_string(row.size()) + " cells, expected " +
                    std::to_string(columns.size()));
  }
  rows.push_back(std::move(row));
}

std::size_t Table::column_index(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i] == name) return i;
  }
  throw IoError("report has no column '" + name + "'");
}

const std::string& Table::cell(std::size_t row, const std::string& column) const {
  return rows.at(row).at(column_index(column));
}

void Metadata::set(const std::string& key, const std::string& value) {
  for (auto& [k, v] : entries) {
    if (k == key) {
      v = value;
      return;
    }
  }
  entries.emplace_back(key, value);
}

std::optional<std::string> Metadata::get(const std::string& key) const {
  for (const auto& [k, v] : entries) {
    if (k == key) return v;
  }
  return std::nullopt;
}

std::string host_description() {
  utsname u{};
  std::string out;
  if (uname(&u) == 0) out = std::string(u.sysname) + " " + u.release + " " + u.machine + " " + u.nodename;
  else out = "unknown";
  out += " cpus=" + std::to_string(std::thread::hardware_concurrency());
  for (auto& c : out) {
    if (c == ';' || c == ',' || c == '\n') c = ' ';
  }
  return out;
}

Metadata make_metadata(const std::string& command, std::optional<std::uint64_t> seed) {
  Metadata meta;
  meta.set("gyroproxy", GYROPROXY_VERSION);
  meta.set("command", command);
  if (seed) meta.set("seed", std::to_string(*seed));
  meta.set("timestamp", utc_timestamp());
  meta.set("host", host_description());
  return meta;
}

std::string format_double(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  if (ec != std::errc{}) return "nan";
  return std::string(buf, ptr);
}

std::string render_csv(const Metadata& meta, const Table& table) {
  std::ostringstream os;
  os << "#";
  for (std::size_t i = 0; i < meta.entries.size(); ++i) {
    os << (i ? "; " : " ") << meta.entries[i].first << '=' << meta.entries[i].second;
  }
  os << '\n';
  for (std::size_t i = 0; i < table.columns.size(); ++i) os << (i ? "," : "") << table.columns[i];
  os << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
    os << '\n';
  }
  return os.str();
}

std::string render_markdown(const Table& table) {
  std::vector<std::size_t> width(table.columns.size(), 3);
  for (std::size_t i = 0; i < table.columns.size(); ++i) width[i] = std::max(width[i], table.columns[i].size());
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) width[i] = std::max(width[i], row[i].size());
  }
  std::ostringstream os;
  auto emit = [&](const std::vector<std::string>& cells) {
    os << '|';
    for (std::size_t i = 0; i < cells.size(); ++i) {
      os << ' ' << cells[i] << std::string(width[i] - cells[i].size(), ' ') << " |";
    }
    os << '\n';
  };
  emit(table.columns);
  os << '|';
  for (auto w : width) os << std::string(w + 2, '-') << '|';
  os << '\n';
  for (const auto& row : table.rows) emit(row);
  return os.str();
}

ParsedReport parse_csv(const std::string& text) {
  ParsedReport report;
  std::istringstream is(text);
  std::string line;
  bool have_header = false;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.front() == '#') {
      for (auto& entry : split(line.substr(1), ';')) {
        entry = strip(entry);
        const auto eq = entry.find('=');
        if (eq != std::string::npos) report.meta.set(entry.substr(0, eq), entry.substr(eq + 1));
      }
      continue;
    }
    auto cells = split(line, ',');
    if (!have_header) {
      report.table.columns = std::move(cells);
      have_header = true;
      continue;
    }
    if (cells.size() != report.table.columns.size()) {
      throw IoError("malformed report row: '" + line + "'");
    }
    report.table.rows.push_back(std::move(cells));
  }
  if (!have_header) throw IoError("report has no header row");
  return report;
}

ParsedReport read_report(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_csv(buffer.str());
}

void check_output_location(const std::filesystem::path& path) {
  const auto parent = path.has_parent_path() ? path.parent_path() : std::filesystem::path(".");
  std::error_code ec;
  if (!std::filesystem::is_directory(parent, ec)) throw IoError("output directory does not exist: " + parent.string());
  if (std::filesystem::is_directory(path, ec)) throw IoError("output path is a directory: " + path.string());
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
  check_output_location(path);
  auto tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot create " + tmp.string());
    out << content;
    out.flush();
    if (!out) {
      out.close();
      std::filesystem::remove(tmp);
      throw IoError("write failed for " + tmp.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw IoError("cannot rename " + tmp.string() + " to " + path.string() + ": " + ec.message());
  }
}

}  // namespace gyroproxy::cli
