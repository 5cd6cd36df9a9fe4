#pragma once

#include <string>
#include <string_view>

#include "npe/spectral_field.hpp"

namespace npe {

/// Binary layout: "NPEF", u32 version, i32 N, i32 K, 8-byte convention tag
/// "vol2pi3", then 3 * (2K+1)^3 complex values (re, im) as little-endian
/// doubles in lexicographic k order.
void save_field(const SpectralField& field, const std::string& path);
SpectralField load_field(const std::string& path);

/// Human-readable dump of the nonzero modes.
void save_field_json(const SpectralField& field, const std::string& path);

/// Writes to a sibling temporary file and renames it over `path`.
void write_file_atomic(const std::string& path, std::string_view bytes);

}  // namespace npe
