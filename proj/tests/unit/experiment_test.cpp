#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "experiment/output.hpp"
#include "npe/error.hpp"
#include "npe/experiment.hpp"
#include "npe/field_io.hpp"
#include "npe/generators.hpp"
#include "test_support.hpp"

using namespace npe;
using json = nlohmann::json;

namespace {

std::string out_dir(const std::string& name) {
  const std::string dir = std::string(NPE_TEST_TMP) + "/experiment/" + name;
  std::filesystem::remove_all(dir);
  return dir;
}

RunResult run(const std::string& command, const json& config, const std::string& name,
              RunOptions options = {}) {
  options.out_dir = out_dir(name);
  return run_command(command, config, options);
}

// File contents without the leading generation stamp.
std::string body(const std::string& path) {
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ErrorCode parse_code(const json& doc) {
  try {
    parse_config(doc);
  } catch (const Error& e) {
    return e.code();
  }
  return static_cast<ErrorCode>(0);
}

const json kSmallConstants = {{"samples", 3}};

}  // namespace

TEST_SUITE("experiment") {

TEST_CASE("configuration defaults and validation") {
  const ExperimentConfig c = parse_config(json::object());
  CHECK(c.n == 32);
  CHECK(c.k == 8);
  CHECK(c.datum.kind == "zero");
  CHECK(c.constant_seed == 20240601u);
  CHECK(c.quadrature.initial_step == 1e-3);
  CHECK(c.quadrature.growth == 1.05);
  CHECK(c.quadrature.horizon == 30.0);
  CHECK(c.hash == hex64(fnv1a64(json::object().dump())));
  CHECK(c.time_grid.build().size() == 101u);

  CHECK(parse_code({{"lattice", {{"N", 32}, {"K", 8}, {"bogus", 1}}}}) == ErrorCode::kConfiguration);
  CHECK(parse_code({{"extra", 1}}) == ErrorCode::kConfiguration);
  CHECK(parse_code({{"lattice", {{"N", 24}, {"K", 8}}}}) == ErrorCode::kConfiguration);
  CHECK(parse_code({{"lattice", {{"N", "32"}}}}) == ErrorCode::kConfiguration);
  CHECK(parse_code({{"box", {{"a", {0, 0, 0}}, {"b", {1, 1, 1}}}}, {"control", {{"p", 1}}}}) ==
        ErrorCode::kConfiguration);
  CHECK(parse_code({{"datum", {{"kind", "file"}, {"path", "/nonexistent/field.npef"}}}}) ==
        ErrorCode::kConfiguration);
  CHECK(parse_code({{"datum", {{"kind", "control_multiple"}}}}) == ErrorCode::kConfiguration);
  CHECK(parse_code({{"datum", {{"kind", "sphere"}}}}) == ErrorCode::kConfiguration);
  CHECK(parse_code({{"oracle", {{"scheme", "euler"}}}}) == ErrorCode::kConfiguration);
  CHECK(parse_code({{"quadrature", {{"growth", 0.9}}}}) == ErrorCode::kConfiguration);

  const ExperimentConfig box = parse_config({{"box", {{"a", {0, 0, 0}}, {"b", {3.2, 3.2, 3.2}}}}});
  CHECK(box.control().p == 2);
  const ExperimentConfig narrow = parse_config({{"box", {{"a", {0, 0, 0}}, {"b", {2.5, 2.5, 2.5}}}}});
  CHECK(narrow.control().p == 3);
  CHECK(parse_config(json::object()).control().p == 1);
}

TEST_CASE("checksums and number formatting") {
  CHECK(hex64(fnv1a64("")) == "cbf29ce484222325");
  CHECK(hex64(fnv1a64("a")) == "af63dc4c8601ec8c");
  CHECK(hex64(fnv1a64("foobar")) == "85944171f73967e8");
  for (double x : {0.1, 1.0 / 3.0, 6.02214076e23, -2.5e-300, 0.0}) {
    CHECK(std::stod(detail::format_double(x)) == x);
  }
  CHECK(detail::format_double(std::numeric_limits<double>::quiet_NaN()) == "nan");
  CHECK(detail::format_double(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(command_names().size() == 6u);
}

TEST_CASE("datum resolution") {
  ExperimentConfig c = parse_config(
      {{"lattice", {{"N", 26}, {"K", 8}}},
       {"datum", {{"kind", "random_smooth"}, {"seed", 9}, {"decay", 2.0}, {"norm", 2.0}}}});
  const SpectralField y = resolve_datum(c, c.quadrature);
  CHECK(test::rel_err(l2_norm(y), 2.0) < 1e-14);
  CHECK(test::field_rel_err(y, random_smooth(c.lattice(), 9, 2.0, 2.0)) == 0.0);

  const std::string dir = out_dir("datum");
  std::filesystem::create_directories(dir);
  save_field(y, dir + "/y.npef");
  c = parse_config({{"lattice", {{"N", 26}, {"K", 8}}},
                    {"datum", {{"kind", "file"}, {"path", dir + "/y.npef"}}}});
  CHECK(test::field_rel_err(resolve_datum(c, c.quadrature), y) == 0.0);
  c = parse_config({{"datum", {{"kind", "single_mode"}, {"k", {0, 0, 1}}, {"component", 1}}}});
  CHECK(resolve_datum(c, c.quadrature).at(0, 0, 1, 1) == Complex(0.0, 0.5));
}

TEST_CASE("build-control and certify") {
  const json config = {{"constants", kSmallConstants}};
  const RunResult bc = run("build-control", config, "bc");
  CHECK(bc.exit_code == 0);
  CHECK(bc.report["exit_status"] == "ok");
  CHECK(std::filesystem::exists(std::string(NPE_TEST_TMP) + "/experiment/bc/u.npef"));
  CHECK(std::filesystem::exists(std::string(NPE_TEST_TMP) + "/experiment/bc/report.json"));

  const RunResult zero = run("build-control",
                             {{"control", {{"amplitudes", {0, 0, 0}}, {"search", false}}}}, "bc0");
  CHECK(zero.exit_code == 3);
  CHECK(zero.report["error"]["kind"] == "invariant");

  const RunResult plain = run("certify", {{"control", {{"search", false}}}}, "cert_plain");
  CHECK(plain.exit_code == 4);
  const RunResult cert = run("certify", json::object(), "cert");
  CHECK(cert.exit_code == 0);
  RunOptions neg;
  neg.negate = true;
  CHECK(run("certify", json::object(), "cert_neg", neg).exit_code == 4);
}

TEST_CASE("simulate and classify") {
  const json blow = {{"datum", {{"kind", "control_multiple"}, {"threshold_multiple", 2.0}}},
                     {"constants", kSmallConstants}};
  const RunResult r = run("simulate", blow, "sim_blow");
  CHECK(r.exit_code == 5);
  CHECK(r.report["exit_status"] == "blow-up");
  const RunResult cls = run("classify", blow, "cls_blow");
  CHECK(cls.exit_code == 0);
  CHECK(cls.report.dump().find("Explosion") != std::string::npos);

  const json mode = {{"datum", {{"kind", "single_mode"}, {"k", {1, 0, 0}}, {"component", 2}}}};
  const RunResult a = run("simulate", mode, "sim_a");
  const RunResult b = run("simulate", mode, "sim_b");
  CHECK(a.exit_code == 0);
  CHECK(a.report["config_hash"] == hex64(fnv1a64(mode.dump())));
  const std::string base = std::string(NPE_TEST_TMP) + "/experiment/";
  CHECK(body(base + "sim_a/trajectory.csv") == body(base + "sim_b/trajectory.csv"));
  CHECK(!body(base + "sim_a/trajectory.csv").empty());
  CHECK(a.report["files"].size() >= 1u);
  CHECK(run("classify", json::object(), "cls_zero").report.dump().find("Stability") !=
        std::string::npos);

  CHECK(run("simulate", {{"time_grid", {{"t_end", 40.0}}}}, "sim_bad").exit_code == 2);
  CHECK(run("teleport", json::object(), "bad_cmd").exit_code == 2);
  CHECK(run("sweep", {{"sweep", {{"axis", "mu"}, {"values", json::array()}}}}, "sweep_empty").exit_code == 2);
}

TEST_CASE("mu sweep") {
  const json config = {{"sweep", {{"axis", "mu"}, {"values", {0.5, 2.0}}}},
                       {"constants", kSmallConstants}};
  const RunResult r = run("sweep", config, "sweep_mu");
  CHECK(r.exit_code == 0);
  const std::string csv = body(std::string(NPE_TEST_TMP) + "/experiment/sweep_mu/sweep.csv");
  CHECK(csv.find("axis,value,metric,metric_value") != std::string::npos);
  CHECK(csv.find("Explosion") != std::string::npos);
  CHECK(csv.find("Stability") != std::string::npos);
}

}  // TEST_SUITE
