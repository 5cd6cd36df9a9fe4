// npectl: command-line front end over the npe C interface.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "npe/npe_c.h"

namespace {

struct Command {
  const char* name;
  const char* help;
};

constexpr Command kCommands[] = {
    {"build-control", "build the normalized control field u"},
    {"certify", "check the decay certificate of u"},
    {"simulate", "sample the closed-form trajectory of the datum"},
    {"classify", "classify the datum by the Phi time integral"},
    {"stabilize", "synthesize a control and run the controlled datum"},
    {"sweep", "scan mu, lambda or K"},
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Normal parabolic equation experiments"};
  app.set_version_flag("--version", npe_version());
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  int threads = 1;
  std::uint64_t seed = 0;
  bool double_k = false;
  bool negate = false;
  bool oracle = false;
  bool quiet = false;
  double lambda_override = 0.0;

  for (const auto& [name, help] : kCommands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_path, "JSON configuration")->required();
    sub->add_option("--out", out_dir, "output directory (default $NPE_OUT_DIR or npe_out)");
    sub->add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--seed", seed, "seed for sampled constants and random data");
    sub->add_flag("--quiet", quiet, "do not print the report");
    if (std::string(name) == "build-control" || std::string(name) == "certify") {
      sub->add_flag("--double-k", double_k, "repeat at twice the cutoff");
    }
    if (std::string(name) == "certify") sub->add_flag("--negate", negate, "certify -u");
    if (std::string(name) == "simulate") {
      sub->add_flag("--oracle", oracle, "compare against the time stepper");
    }
    if (std::string(name) == "stabilize" || std::string(name) == "sweep") {
      sub->add_option("--lambda-override", lambda_override, "fixed control amplitude")
          ->check(CLI::PositiveNumber);
    }
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return NPE_ERR_CONFIGURATION;
  }
  const CLI::App* sub = app.get_subcommands().front();

  if (out_dir.empty()) {
    const char* env = std::getenv("NPE_OUT_DIR");
    out_dir = env && *env ? env : "npe_out";
  }
  std::ifstream in(config_path);
  if (!in) {
    std::cerr << "npectl: cannot read config '" << config_path << "'\n";
    return NPE_ERR_CONFIGURATION;
  }
  std::stringstream buffer;
  buffer << in.rdbuf();

  nlohmann::json options = {{"threads", threads},
                            {"double_k", double_k},
                            {"negate", negate},
                            {"oracle", oracle}};
  if (sub->count("--seed")) options["seed"] = seed;
  if (sub->get_option_no_throw("--lambda-override") && sub->count("--lambda-override")) {
    options["lambda_override"] = lambda_override;
  }

  char* report = nullptr;
  int exit_code = 0;
  const npe_status status = npe_run(sub->get_name().c_str(), buffer.str().c_str(), out_dir.c_str(),
                                    options.dump().c_str(), &report, &exit_code);
  if (status != NPE_OK) {
    std::cerr << "npectl: " << npe_last_error() << "\n";
    return status;
  }
  if (!quiet && report) std::cout << report << "\n";
  if (exit_code != 0) {
    const std::string message = npe_last_error();
    std::cerr << "npectl: exit " << exit_code;
    if (!message.empty()) std::cerr << ": " << message;
    std::cerr << "\n";
  }
  npe_string_free(report);
  return exit_code;
}
