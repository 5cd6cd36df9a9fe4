#include "npe/field_io.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "npe/error.hpp"

namespace npe {

namespace {

constexpr char kMagic[4] = {'N', 'P', 'E', 'F'};
constexpr char kTag[8] = {'v', 'o', 'l', '2', 'p', 'i', '3', '\0'};
constexpr std::uint32_t kVersion = 1;

template <class T>
void put(std::string& out, T value) {
  char bytes[sizeof(T)];
  std::memcpy(bytes, &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) {
    for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(bytes[i], bytes[sizeof(T) - 1 - i]);
  }
  out.append(bytes, sizeof(T));
}

template <class T>
T take(const std::string& in, std::size_t& pos, const std::string& path) {
  if (pos + sizeof(T) > in.size()) {
    throw Error(ErrorCode::kIo, "truncated field file " + path);
  }
  char bytes[sizeof(T)];
  std::memcpy(bytes, in.data() + pos, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) {
    for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(bytes[i], bytes[sizeof(T) - 1 - i]);
  }
  pos += sizeof(T);
  T value;
  std::memcpy(&value, bytes, sizeof(T));
  return value;
}

}  // namespace

void write_file_atomic(const std::string& path, std::string_view bytes) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::kIo, "cannot open " + tmp.string() + " for writing");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error(ErrorCode::kIo, "write failed for " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) throw Error(ErrorCode::kIo, "rename to " + path + " failed: " + ec.message());
}

void save_field(const SpectralField& field, const std::string& path) {
  std::string out;
  out.append(kMagic, 4);
  put<std::uint32_t>(out, kVersion);
  put<std::int32_t>(out, field.lattice().n());
  put<std::int32_t>(out, field.lattice().k());
  out.append(kTag, 8);
  for (const Complex& c : field.data()) {
    put<double>(out, c.real());
    put<double>(out, c.imag());
  }
  write_file_atomic(path, out);
}

SpectralField load_field(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open field file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string bytes = buf.str();
  if (bytes.size() < 24 || std::memcmp(bytes.data(), kMagic, 4) != 0) {
    throw Error(ErrorCode::kIo, path + " is not a field file");
  }
  std::size_t pos = 4;
  const auto version = take<std::uint32_t>(bytes, pos, path);
  if (version != kVersion) {
    throw Error(ErrorCode::kIo, path + ": unsupported field file version " + std::to_string(version));
  }
  const auto n = take<std::int32_t>(bytes, pos, path);
  const auto k = take<std::int32_t>(bytes, pos, path);
  if (std::memcmp(bytes.data() + pos, kTag, 8) != 0) {
    throw Error(ErrorCode::kIo, path + ": unknown norm convention tag");
  }
  pos += 8;
  SpectralField field(Lattice(n, k));
  for (Complex& c : field.data()) {
    const double re = take<double>(bytes, pos, path);
    const double im = take<double>(bytes, pos, path);
    c = Complex{re, im};
  }
  if (pos != bytes.size()) throw Error(ErrorCode::kIo, path + ": trailing bytes after coefficients");
  return field;
}

void save_field_json(const SpectralField& field, const std::string& path) {
  nlohmann::json doc;
  doc["N"] = field.lattice().n();
  doc["K"] = field.lattice().k();
  doc["convention"] = "vol2pi3";
  // Modes at roundoff level relative to the largest coefficient are omitted.
  const double floor = 1e-14 * field.max_abs();
  doc["omitted_below"] = floor;
  auto modes = nlohmann::json::array();
  const auto data = field.data();
  for (std::size_t m = 0; m < field.lattice().mode_count(); ++m) {
    const double mag = std::max({std::abs(data[3 * m]), std::abs(data[3 * m + 1]), std::abs(data[3 * m + 2])});
    if (mag == 0.0 || mag <= floor) continue;
    const auto k = field.lattice().wavevector(m);
    nlohmann::json entry;
    entry["k"] = {k[0], k[1], k[2]};
    entry["re"] = {data[3 * m].real(), data[3 * m + 1].real(), data[3 * m + 2].real()};
    entry["im"] = {data[3 * m].imag(), data[3 * m + 1].imag(), data[3 * m + 2].imag()};
    modes.push_back(std::move(entry));
  }
  doc["modes"] = std::move(modes);
  write_file_atomic(path, doc.dump(1));
}

}  // namespace npe
