#include "experiment/output.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "npe/error.hpp"
#include "npe/experiment.hpp"
#include "npe/field_io.hpp"

namespace npe {

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hex64(std::uint64_t value) {
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i, value >>= 4) out[i] = digits[value & 0xf];
  return out;
}

}  // namespace npe

namespace npe::detail {

std::string timestamp_utc() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

CsvTable::CsvTable(std::vector<std::string> columns) : width_(columns.size()) {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (i) body_ += ',';
    body_ += columns[i];
  }
  body_ += '\n';
}

void CsvTable::row(std::initializer_list<Cell> cells) { row(std::vector<Cell>(cells)); }

void CsvTable::row(const std::vector<Cell>& cells) {
  if (cells.size() != width_) {
    throw Error(ErrorCode::kDomain, "csv: row width does not match the header");
  }
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) body_ += ',';
    const auto& v = cells[i].value;
    if (const auto* d = std::get_if<double>(&v)) {
      body_ += format_double(*d);
    } else if (const auto* n = std::get_if<long long>(&v)) {
      body_ += std::to_string(*n);
    } else {
      body_ += std::get<std::string>(v);
    }
  }
  body_ += '\n';
  ++rows_;
}

std::string CsvTable::render() const { return "# generated " + timestamp_utc() + "\n" + body_; }

std::string checksum_hex(const std::string& bytes) { return "fnv1a64:" + hex64(fnv1a64(bytes)); }

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot read '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

ArtifactLog::ArtifactLog(std::string out_dir) : dir_(std::move(out_dir)) {
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  if (ec) throw Error(ErrorCode::kIo, "cannot create output directory '" + dir_ + "'");
}

std::string ArtifactLog::path(const std::string& name) const {
  return (std::filesystem::path(dir_) / name).string();
}

void ArtifactLog::write(const std::string& name, const std::string& bytes) {
  write_file_atomic(path(name), bytes);
  files_.push_back({{"path", name}, {"bytes", bytes.size()}, {"checksum", checksum_hex(bytes)}});
}

void ArtifactLog::record(const std::string& name) {
  const std::string bytes = read_file(path(name));
  files_.push_back({{"path", name}, {"bytes", bytes.size()}, {"checksum", checksum_hex(bytes)}});
}

}  // namespace npe::detail
