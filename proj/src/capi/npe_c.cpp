#include "npe/npe_c.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <limits>
#include <new>
#include <string>

#include <json.hpp>

#include "npe/control.hpp"
#include "npe/dynamics.hpp"
#include "npe/error.hpp"
#include "npe/experiment.hpp"
#include "npe/field_io.hpp"
#include "npe/functionals.hpp"
#include "npe/generators.hpp"
#include "npe/spectral.hpp"

struct npe_field {
  npe::SpectralField value;
};

struct npe_trajectory {
  npe::Trajectory value;
};

namespace {

thread_local std::string g_last_error;

npe_status fail(npe_status status, const std::string& message) {
  g_last_error = message;
  return status;
}

template <class Fn>
npe_status guarded(Fn&& fn) {
  try {
    g_last_error.clear();
    fn();
    return NPE_OK;
  } catch (const npe::Error& e) {
    return fail(static_cast<npe_status>(static_cast<int>(e.code())), e.what());
  } catch (const std::bad_alloc&) {
    return fail(NPE_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(NPE_ERR_INTERNAL, e.what());
  }
}

npe_status null_argument(const char* what) {
  return fail(NPE_ERR_ARGUMENT, std::string("null argument: ") + what);
}

npe_field* wrap(npe::SpectralField f) { return new npe_field{std::move(f)}; }

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

}  // namespace

extern "C" {

const char* npe_version(void) { return "1.0.0"; }

const char* npe_last_error(void) { return g_last_error.c_str(); }

void npe_string_free(char* s) { std::free(s); }

npe_status npe_field_zero(int n, int k, npe_field** out) {
  if (!out) return null_argument("out");
  return guarded([&] { *out = wrap(npe::SpectralField(npe::Lattice(n, k))); });
}

npe_status npe_field_random(int n, int k, uint64_t seed, double decay, double norm,
                            npe_field** out) {
  if (!out) return null_argument("out");
  return guarded([&] { *out = wrap(npe::random_smooth(npe::Lattice(n, k), seed, decay, norm)); });
}

npe_status npe_field_single_mode(int n, int k, const int wavevector[3], int component, double re,
                                 double im, npe_field** out) {
  if (!out || !wavevector) return null_argument(!out ? "out" : "wavevector");
  return guarded([&] {
    *out = wrap(npe::single_mode(npe::Lattice(n, k), {wavevector[0], wavevector[1], wavevector[2]},
                                 component, npe::Complex(re, im)));
  });
}

npe_status npe_field_control(int n, int k, const double a[3], const double b[3], int p,
                             const double amplitudes[3], npe_field** out) {
  if (!out || !a || !b || !amplitudes) return null_argument("out, a, b or amplitudes");
  return guarded([&] {
    npe::ControlParams params;
    params.box.lower = {a[0], a[1], a[2]};
    params.box.upper = {b[0], b[1], b[2]};
    params.box.validate();
    params.p = p > 0 ? p : npe::choose_p(params.box);
    params.amplitudes = {amplitudes[0], amplitudes[1], amplitudes[2]};
    *out = wrap(npe::build_control_u(params, npe::Lattice(n, k)).u);
  });
}

npe_status npe_field_load(const char* path, npe_field** out) {
  if (!out || !path) return null_argument(!out ? "out" : "path");
  return guarded([&] { *out = wrap(npe::load_field(path)); });
}

npe_status npe_field_save(const npe_field* field, const char* path) {
  if (!field || !path) return null_argument(!field ? "field" : "path");
  return guarded([&] { npe::save_field(field->value, path); });
}

npe_status npe_field_combine(double alpha, const npe_field* x, double beta, const npe_field* y,
                             npe_field** out) {
  if (!x || !y || !out) return null_argument("x, y or out");
  return guarded([&] { *out = wrap(npe::SpectralField::combine(alpha, x->value, beta, y->value)); });
}

npe_status npe_field_lattice(const npe_field* field, int* n, int* k) {
  if (!field || !n || !k) return null_argument("field, n or k");
  *n = field->value.lattice().n();
  *k = field->value.lattice().k();
  return NPE_OK;
}

void npe_field_free(npe_field* field) { delete field; }

npe_status npe_sobolev_norm(const npe_field* field, double s, double* out) {
  if (!field || !out) return null_argument("field or out");
  return guarded([&] { *out = npe::sobolev_norm(field->value, s); });
}

npe_status npe_l2_inner(const npe_field* f, const npe_field* g, double* out) {
  if (!f || !g || !out) return null_argument("f, g or out");
  return guarded([&] { *out = npe::l2_inner(f->value, g->value); });
}

npe_status npe_heat_propagate(const npe_field* field, double t, npe_field** out) {
  if (!field || !out) return null_argument("field or out");
  return guarded([&] { *out = wrap(npe::heat_propagate(field->value, t)); });
}

npe_status npe_psi(const npe_field* field, double* out) {
  if (!field || !out) return null_argument("field or out");
  return guarded([&] { *out = npe::psi(field->value); });
}

npe_status npe_phi(const npe_field* field, double* out) {
  if (!field || !out) return null_argument("field or out");
  return guarded([&] { *out = npe::phi(field->value); });
}

npe_status npe_phi_integral(const npe_field* field, double t, double* value,
                            double* error_estimate) {
  if (!field || !value) return null_argument("field or value");
  return guarded([&] {
    const auto [v, err] = npe::phi_time_integral(field->value, t, npe::QuadratureSpec{});
    *value = v;
    if (error_estimate) *error_estimate = err;
  });
}

npe_status npe_classify(const npe_field* field, double tol, npe_verdict* verdict,
                        double* sup_integral) {
  if (!field || !verdict) return null_argument("field or verdict");
  return guarded([&] {
    const npe::Classification c = npe::classify(field->value, npe::QuadratureSpec{}, tol);
    *verdict = static_cast<npe_verdict>(static_cast<int>(c.verdict));
    if (sup_integral) *sup_integral = c.sup_integral;
  });
}

npe_status npe_simulate(const npe_field* field, const double* times, size_t count,
                        npe_trajectory** out) {
  if (!field || !times || !out) return null_argument("field, times or out");
  return guarded([&] {
    const std::vector<double> grid(times, times + count);
    *out = new npe_trajectory{npe::simulate(field->value, grid, npe::QuadratureSpec{})};
  });
}

size_t npe_trajectory_length(const npe_trajectory* traj) {
  return traj ? traj->value.times.size() : 0;
}

npe_status npe_trajectory_sample(const npe_trajectory* traj, size_t index, double* t,
                                 double* norm0, double* denominator) {
  if (!traj) return null_argument("traj");
  if (index >= traj->value.times.size()) return fail(NPE_ERR_ARGUMENT, "sample index out of range");
  if (t) *t = traj->value.times[index];
  if (norm0) *norm0 = traj->value.norm0[index];
  if (denominator) *denominator = traj->value.denominator[index];
  return NPE_OK;
}

npe_trajectory_status npe_trajectory_get_status(const npe_trajectory* traj) {
  if (!traj) return NPE_TRAJ_QUADRATURE_FAILURE;
  return static_cast<npe_trajectory_status>(static_cast<int>(traj->value.status));
}

double npe_trajectory_blowup_time(const npe_trajectory* traj) {
  if (!traj || traj->value.status != npe::TrajectoryStatus::kBlowUp) {
    return std::numeric_limits<double>::quiet_NaN();
  }
  return traj->value.blowup_time();
}

double npe_trajectory_alpha(const npe_trajectory* traj) {
  return traj ? traj->value.alpha : std::numeric_limits<double>::quiet_NaN();
}

void npe_trajectory_free(npe_trajectory* traj) { delete traj; }

npe_status npe_run(const char* command, const char* config_json, const char* out_dir,
                   const char* options_json, char** report_json, int* exit_code) {
  if (!command || !config_json || !out_dir) return null_argument("command, config_json or out_dir");
  using nlohmann::json;
  json config;
  npe::RunOptions options;
  options.out_dir = out_dir;
  try {
    config = json::parse(config_json);
  } catch (const json::exception& e) {
    return fail(NPE_ERR_CONFIGURATION, std::string("config is not valid JSON: ") + e.what());
  }
  if (options_json && *options_json) {
    try {
      const json o = json::parse(options_json);
      if (!o.is_object()) return fail(NPE_ERR_ARGUMENT, "options must be a JSON object");
      for (const auto& item : o.items()) {
        const std::string& key = item.key();
        const json& v = item.value();
        if (key == "threads") {
          options.threads = v.get<int>();
        } else if (key == "seed") {
          options.seed = v.get<std::uint64_t>();
        } else if (key == "double_k") {
          options.double_k = v.get<bool>();
        } else if (key == "negate") {
          options.negate = v.get<bool>();
        } else if (key == "oracle") {
          options.oracle = v.get<bool>();
        } else if (key == "lambda_override") {
          if (!v.is_null()) options.lambda_override = v.get<double>();
        } else {
          return fail(NPE_ERR_ARGUMENT, "unknown option '" + key + "'");
        }
      }
    } catch (const json::exception& e) {
      return fail(NPE_ERR_ARGUMENT, std::string("invalid options: ") + e.what());
    }
  }
  return guarded([&] {
    const npe::RunResult result = npe::run_command(command, config, options);
    if (exit_code) *exit_code = result.exit_code;
    if (report_json) *report_json = copy_string(result.report.dump(2));
    if (result.exit_code != 0 && result.report.contains("error")) {
      g_last_error = result.report["error"]["message"].get<std::string>();
    }
  });
}

}  // extern "C"
