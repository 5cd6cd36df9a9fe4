#pragma once

#include <cstdint>
#include <initializer_list>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

namespace npe::detail {

std::string timestamp_utc();

/// Shortest round-trip form capped at 17 significant digits.
std::string format_double(double value);

struct Cell {
  Cell(double v) : value(v) {}
  Cell(int v) : value(static_cast<long long>(v)) {}
  Cell(long long v) : value(v) {}
  Cell(std::size_t v) : value(static_cast<long long>(v)) {}
  Cell(const char* v) : value(std::string(v)) {}
  Cell(std::string v) : value(std::move(v)) {}

  std::variant<double, long long, std::string> value;
};

/// CSV body with a single timestamp comment line on top; the body is a
/// pure function of the rows.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> columns);

  void row(std::initializer_list<Cell> cells);
  void row(const std::vector<Cell>& cells);
  std::size_t rows() const noexcept { return rows_; }

  std::string body() const { return body_; }
  std::string render() const;

 private:
  std::size_t width_;
  std::size_t rows_ = 0;
  std::string body_;
};

/// Output directory plus the list of files written into it.
class ArtifactLog {
 public:
  explicit ArtifactLog(std::string out_dir);

  const std::string& dir() const noexcept { return dir_; }
  std::string path(const std::string& name) const;

  /// Atomically writes name inside the directory and records it.
  void write(const std::string& name, const std::string& bytes);
  /// Records a file that some other writer produced.
  void record(const std::string& name);

  const nlohmann::json& files() const noexcept { return files_; }

 private:
  std::string dir_;
  nlohmann::json files_ = nlohmann::json::array();
};

std::string checksum_hex(const std::string& bytes);
std::string read_file(const std::string& path);

}  // namespace npe::detail
