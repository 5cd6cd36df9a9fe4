#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace {

const std::string kTmp = std::string(NPE_TEST_TMP) + "/cli";

std::string write_config(const std::string& name, const std::string& body) {
  std::filesystem::create_directories(kTmp);
  const std::string path = kTmp + "/" + name + ".json";
  std::ofstream(path) << body;
  return path;
}

// Exit status of npectl with the given arguments; stdout and stderr are
// captured next to the run directory.
int npectl(const std::string& args, const std::string& name) {
  std::filesystem::create_directories(kTmp);
  const std::string log = kTmp + "/" + name + ".log";
  const std::string cmd = std::string(NPECTL_PATH) + " " + args + " > " + log + " 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("help and usage errors") {
  CHECK(npectl("--help", "help") == 0);
  CHECK(slurp(kTmp + "/help.log").find("stabilize") != std::string::npos);
  CHECK(npectl("", "none") != 0);
  CHECK(npectl("certify", "noconfig") == 2);
  CHECK(npectl("certify --config " + kTmp + "/absent.json --out " + kTmp + "/absent", "absent") == 2);
  const std::string bad = write_config("bad", R"({"lattice": {"N": 10, "K": 8}})");
  CHECK(npectl("certify --config " + bad + " --out " + kTmp + "/bad", "bad") == 2);
  CHECK(slurp(kTmp + "/bad.log").find("npectl: exit 2") != std::string::npos);
}

TEST_CASE("exit codes of the commands") {
  const std::string plain = write_config("plain", "{}");
  CHECK(npectl("build-control --quiet --config " + plain + " --out " + kTmp + "/bc", "bc") == 0);
  CHECK(std::filesystem::exists(kTmp + "/bc/u.npef"));
  CHECK(slurp(kTmp + "/bc.log").empty());
  const auto report = nlohmann::json::parse(slurp(kTmp + "/bc/report.json"));
  CHECK(report["command"] == "build-control");
  CHECK(report["exit_code"] == 0);

  const std::string zero = write_config("zero", R"({"control": {"amplitudes": [0, 0, 0]}})");
  CHECK(npectl("build-control --config " + zero + " --out " + kTmp + "/zero", "zero") == 3);

  CHECK(npectl("certify --config " + plain + " --out " + kTmp + "/cert", "cert") == 0);
  CHECK(slurp(kTmp + "/cert.log").find("\"certify\"") != std::string::npos);
  CHECK(npectl("certify --negate --config " + plain + " --out " + kTmp + "/neg", "neg") == 4);

  const std::string blow = write_config(
      "blow", R"({"datum": {"kind": "control_multiple", "threshold_multiple": 2.0}})");
  CHECK(npectl("simulate --config " + blow + " --out " + kTmp + "/blow", "blow") == 5);
  CHECK(slurp(kTmp + "/blow.log").find("npectl: exit 5") != std::string::npos);
  CHECK(npectl("classify --quiet --config " + blow + " --out " + kTmp + "/cls", "cls") == 0);

  const std::string stab = write_config(
      "stab", R"({"datum": {"kind": "control_multiple", "threshold_multiple": 2.0},
                  "constants": {"samples": 3}})");
  CHECK(npectl("stabilize --quiet --lambda-override 1000 --config " + stab + " --out " + kTmp +
                   "/stab_weak",
               "stab_weak") == 7);
  CHECK(std::filesystem::exists(kTmp + "/stab_weak/controlled.csv"));
}
