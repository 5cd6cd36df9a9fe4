#pragma once

// Configuration ingestion and command orchestration shared by the C API and
// the npectl front end.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "npe/control.hpp"
#include "npe/dynamics.hpp"
#include "npe/quadrature.hpp"

namespace npe {

struct DatumSpec {
  /// zero | single_mode | control_multiple | random_smooth | file
  std::string kind = "zero";
  std::array<int, 3> k{0, 0, 1};
  int component = 1;
  Complex coeff{0.0, 0.5};
  std::optional<double> mu;
  std::optional<double> threshold_multiple;
  std::uint64_t seed = 1;
  double decay = 2.0;
  double norm = 1.0;
  std::string path;
};

struct TimeGridSpec {
  double t_end = 1.0;
  int points = 101;
  std::vector<double> times;  // explicit grid wins when non-empty

  std::vector<double> build() const;
};

struct SweepSpec {
  std::string axis;  // lambda | mu | K
  std::vector<double> values;
};

struct ExperimentConfig {
  int n = 32;
  int k = 8;
  ProductRule product_rule = ProductRule::kMinimalGrid;
  SupportBox box = SupportBox::full_torus();
  std::optional<int> p;
  std::array<double, 3> amplitudes{1.0, 1.0, 1.0};
  bool search = true;
  int search_cutoff = 0;
  QuadratureSpec quadrature;
  TimeGridSpec time_grid;
  DatumSpec datum;
  double tol = 1e-3;
  int cert_points = 200;
  double cert_t_min = 1e-4;
  double cert_t_max = 3.0;
  int constant_samples = 24;
  std::uint64_t constant_seed = 20240601;
  int constant_cutoff = 8;
  SweepSpec sweep;
  std::optional<double> lambda_override;
  double continuation = 10.0;
  int stabilize_points = 201;
  double oracle_dt = 1e-4;
  double oracle_t_end = 1.0;
  int oracle_stride = 100;
  OracleScheme oracle_scheme = OracleScheme::kAdamsBashforth4;
  /// FNV-1a 64 of the ingested document's compact dump.
  std::string hash;

  Lattice lattice() const { return Lattice(n, k, product_rule); }
  ControlParams control() const;
};

/// Parses and validates a configuration document. Unknown keys and invalid
/// values raise Error(kConfiguration).
ExperimentConfig parse_config(const nlohmann::json& doc);
ExperimentConfig load_config(const std::string& path);

struct RunOptions {
  std::string out_dir = "npe_out";
  int threads = 1;
  std::optional<std::uint64_t> seed;
  bool double_k = false;
  bool negate = false;
  bool oracle = false;
  std::optional<double> lambda_override;
};

struct RunResult {
  int exit_code = 0;
  nlohmann::json report;
};

/// Runs one of build-control, certify, simulate, classify, stabilize,
/// sweep. Errors are reported through the exit code and the report; only
/// programming errors escape as exceptions.
RunResult run_command(const std::string& command, const nlohmann::json& config,
                      const RunOptions& options);

const std::vector<std::string>& command_names();

std::uint64_t fnv1a64(std::string_view bytes);
std::string hex64(std::uint64_t value);

/// Resolves the configured initial datum on the configured lattice.
SpectralField resolve_datum(const ExperimentConfig& config, const QuadratureSpec& spec);

}  // namespace npe
