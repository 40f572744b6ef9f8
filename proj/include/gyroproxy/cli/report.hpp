#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gyroproxy/errors.hpp"

namespace gyroproxy::cli {

/// Reading or writing a report failed.
class IoError : public Error {
 public:
  using Error::Error;
};

/// Two reports do not cover the same rows.
class CoverageError : public Error {
 public:
  using Error::Error;
};

/// Rectangular table of strings with named columns. Rows keep insertion order.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  void add_row(std::vector<std::string> row);
  std::size_t column_index(const std::string& name) const;
  const std::string& cell(std::size_t row, const std::string& column) const;
};

/// Key/value pairs for the single `#` header line. Order is preserved.
struct Metadata {
  std::vector<std::pair<std::string, std::string>> entries;

  void set(const std::string& key, const std::string& value);
  std::optional<std::string> get(const std::string& key) const;
};

/// version, command, seed (when given), UTC timestamp and host description.
Metadata make_metadata(const std::string& command, std::optional<std::uint64_t> seed);

std::string host_description();
std::string format_double(double value);  // shortest round-trip form

std::string render_csv(const Metadata& meta, const Table& table);
std::string render_markdown(const Table& table);

struct ParsedReport {
  Metadata meta;
  Table table;
};

ParsedReport parse_csv(const std::string& text);
ParsedReport read_report(const std::filesystem::path& path);

/// Write to a sibling temporary file and rename it over `path`, so readers never observe a
/// truncated file. Throws IoError.
void write_atomic(const std::filesystem::path& path, const std::string& content);

/// Throws IoError if the directory that would receive `path` does not exist.
void check_output_location(const std::filesystem::path& path);

}  // namespace gyroproxy::cli
