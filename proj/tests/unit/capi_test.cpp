#include <doctest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <numbers>
#include <string>

#include "npe/npe_c.h"

namespace {

struct FieldGuard {
  npe_field* f = nullptr;
  ~FieldGuard() { npe_field_free(f); }
};

}  // namespace

TEST_CASE("version and errors") {
  CHECK(std::string(npe_version()) == "1.0.0");
  npe_field* f = nullptr;
  CHECK(npe_field_zero(31, 8, &f) == NPE_ERR_CONFIGURATION);
  CHECK(f == nullptr);
  CHECK(std::strlen(npe_last_error()) > 0);
  CHECK(npe_field_zero(32, 8, nullptr) == NPE_ERR_ARGUMENT);
  FieldGuard ok;
  CHECK(npe_field_zero(32, 8, &ok.f) == NPE_OK);
  CHECK(std::string(npe_last_error()).empty());
  npe_field_free(nullptr);
  npe_string_free(nullptr);
}

TEST_CASE("field handles") {
  const int k3[3] = {0, 0, 1};
  FieldGuard mode;
  REQUIRE(npe_field_single_mode(16, 4, k3, 1, 0.0, 0.5, &mode.f) == NPE_OK);
  double norm = 0.0;
  CHECK(npe_sobolev_norm(mode.f, 0.0, &norm) == NPE_OK);
  CHECK(norm * norm == doctest::Approx(4 * std::pow(std::numbers::pi, 3)).epsilon(1e-14));
  CHECK(npe_sobolev_norm(mode.f, 5.0, &norm) == NPE_ERR_DOMAIN);
  int n = 0, k = 0;
  CHECK(npe_field_lattice(mode.f, &n, &k) == NPE_OK);
  CHECK(n == 16);
  CHECK(k == 4);

  FieldGuard heat;
  CHECK(npe_heat_propagate(mode.f, 1.0, &heat.f) == NPE_OK);
  double inner = 0.0;
  CHECK(npe_l2_inner(heat.f, mode.f, &inner) == NPE_OK);
  CHECK(inner == doctest::Approx(std::exp(-1.0) * 4 * std::pow(std::numbers::pi, 3)));
  double psi = 1.0;
  CHECK(npe_psi(mode.f, &psi) == NPE_OK);
  CHECK(std::abs(psi) < 1e-12);

  FieldGuard other;
  REQUIRE(npe_field_zero(26, 8, &other.f) == NPE_OK);
  CHECK(npe_l2_inner(mode.f, other.f, &inner) == NPE_ERR_CONFIGURATION);
  FieldGuard sum;
  CHECK(npe_field_combine(1.0, mode.f, -1.0, mode.f, &sum.f) == NPE_OK);
  CHECK(npe_sobolev_norm(sum.f, 0.0, &norm) == NPE_OK);
  CHECK(norm == 0.0);

  const std::string dir = std::string(NPE_TEST_TMP) + "/capi";
  std::filesystem::create_directories(dir);
  CHECK(npe_field_save(mode.f, (dir + "/mode.npef").c_str()) == NPE_OK);
  FieldGuard back;
  CHECK(npe_field_load((dir + "/mode.npef").c_str(), &back.f) == NPE_OK);
  CHECK(npe_l2_inner(back.f, mode.f, &inner) == NPE_OK);
  CHECK(inner == doctest::Approx(4 * std::pow(std::numbers::pi, 3)));
  FieldGuard missing;
  CHECK(npe_field_load((dir + "/missing.npef").c_str(), &missing.f) == NPE_ERR_IO);
}

TEST_CASE("control, classification and trajectories") {
  const double a[3] = {0.0, 0.0, 0.0};
  const double b[3] = {2 * std::numbers::pi, 2 * std::numbers::pi, 2 * std::numbers::pi};
  const double amps[3] = {-1.0, -1.0, 0.0};
  FieldGuard u;
  REQUIRE(npe_field_control(32, 8, a, b, 0, amps, &u.f) == NPE_OK);
  double psi = 0.0;
  CHECK(npe_psi(u.f, &psi) == NPE_OK);
  CHECK(psi == doctest::Approx(1.2671380127594963e-3).epsilon(1e-10));
  const double zero_amps[3] = {0.0, 0.0, 0.0};
  FieldGuard bad;
  CHECK(npe_field_control(32, 8, a, b, 0, zero_amps, &bad.f) == NPE_ERR_INVARIANT);

  double g = 0.0, err = 0.0;
  CHECK(npe_phi_integral(u.f, 30.0, &g, &err) == NPE_OK);
  CHECK(g == doctest::Approx(2.8819858434482804e-4).epsilon(1e-9));
  npe_verdict verdict = NPE_UNDETERMINED;
  double sup = 0.0;
  CHECK(npe_classify(u.f, 1e-3, &verdict, &sup) == NPE_OK);
  CHECK(verdict == NPE_STABILITY);

  FieldGuard big;
  REQUIRE(npe_field_combine(2.0 / g, u.f, 0.0, u.f, &big.f) == NPE_OK);
  CHECK(npe_classify(big.f, 1e-3, &verdict, &sup) == NPE_OK);
  CHECK(verdict == NPE_EXPLOSION);
  const double times[4] = {0.0, 0.05, 0.1, 0.5};
  npe_trajectory* traj = nullptr;
  REQUIRE(npe_simulate(big.f, times, 4, &traj) == NPE_OK);
  CHECK(npe_trajectory_get_status(traj) == NPE_TRAJ_BLOWUP);
  CHECK(npe_trajectory_length(traj) == 3u);
  CHECK(npe_trajectory_blowup_time(traj) == doctest::Approx(0.14829487154048854).epsilon(1e-6));
  double t = 0, n0 = 0, d = 0;
  CHECK(npe_trajectory_sample(traj, 2, &t, &n0, &d) == NPE_OK);
  CHECK(t == 0.1);
  CHECK(d > 0.0);
  CHECK(npe_trajectory_sample(traj, 3, &t, &n0, &d) == NPE_ERR_ARGUMENT);
  npe_trajectory_free(traj);

  const double bad_times[2] = {0.5, 0.1};
  CHECK(npe_simulate(u.f, bad_times, 2, &traj) != NPE_OK);
}

TEST_CASE("running commands") {
  const std::string dir = std::string(NPE_TEST_TMP) + "/capi/run";
  char* report = nullptr;
  int code = -1;
  REQUIRE(npe_run("certify", "{}", dir.c_str(), nullptr, &report, &code) == NPE_OK);
  CHECK(code == 0);
  REQUIRE(report != nullptr);
  CHECK(std::string(report).find("\"certify\"") != std::string::npos);
  npe_string_free(report);
  CHECK(std::filesystem::exists(dir + "/certificate.csv"));

  REQUIRE(npe_run("certify", "{}", dir.c_str(), "{\"negate\": true}", &report, &code) == NPE_OK);
  CHECK(code == 4);
  npe_string_free(report);
  REQUIRE(npe_run("certify", "{\"lattice\": {\"N\": 3}}", dir.c_str(), nullptr, &report, &code) ==
          NPE_OK);
  CHECK(code == 2);
  npe_string_free(report);
  CHECK(npe_run("certify", "{not json", dir.c_str(), nullptr, &report, &code) == NPE_ERR_CONFIGURATION);
  CHECK(npe_run("certify", "{}", dir.c_str(), "{\"bogus\": 1}", &report, &code) ==
        NPE_ERR_ARGUMENT);
  CHECK(npe_run(nullptr, "{}", dir.c_str(), nullptr, &report, &code) == NPE_ERR_ARGUMENT);
}
