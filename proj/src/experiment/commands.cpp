#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <string>

#include "experiment/output.hpp"
#include "npe/control.hpp"
#include "npe/dynamics.hpp"
#include "npe/error.hpp"
#include "npe/experiment.hpp"
#include "npe/field_io.hpp"
#include "npe/functionals.hpp"
#include "npe/generators.hpp"
#include "npe/parallel.hpp"
#include "npe/phase_space.hpp"
#include "npe/spectral.hpp"

namespace npe {

using nlohmann::json;
using detail::ArtifactLog;
using detail::Cell;
using detail::CsvTable;

namespace {

// Roundoff allowance when comparing a trajectory with an envelope that it
// touches at t = 0.
constexpr double kEnvelopeSlack = 1e-10;

json triple_json(const std::array<double, 3>& a) { return json::array({a[0], a[1], a[2]}); }

json finite_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kConfiguration:
    case ErrorCode::kDomain:
    case ErrorCode::kIo: return 2;
    default: return static_cast<int>(code);
  }
}

const char* exit_name(int code) {
  switch (code) {
    case 0: return "ok";
    case 2: return "configuration";
    case 3: return "invariant";
    case 4: return "certification";
    case 5: return "blow-up";
    case 6: return "quadrature";
    case 7: return "envelope";
  }
  return "unknown";
}

std::vector<double> linspace(double a, double b, int points) {
  std::vector<double> out(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) out[i] = a + (b - a) * i / (points - 1);
  out.back() = b;
  return out;
}

// Uniform and log-spaced (from 1e-4) samples of [0, t_end], merged.
std::vector<double> mixed_grid(double t_end, int points) {
  std::vector<double> grid = linspace(0.0, t_end, points);
  if (t_end > 1e-4) {
    const double ratio = std::log(t_end / 1e-4) / (points - 1);
    for (int i = 0; i < points; ++i) grid.push_back(1e-4 * std::exp(ratio * i));
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  while (grid.back() > t_end) grid.pop_back();
  if (grid.back() != t_end) grid.push_back(t_end);
  return grid;
}

struct Context {
  ExperimentConfig cfg;
  RunOptions opt;
  ArtifactLog& log;
  json report;
};

std::vector<double> certification_times(const ExperimentConfig& cfg) {
  return certification_grid(cfg.cert_points, cfg.cert_t_min, cfg.cert_t_max);
}

json control_json(const ControlField& cf, const ControlParams& params, const Lattice& lattice) {
  return {{"norm0", l2_norm(cf.u)},
          {"raw_norm", cf.raw_norm},
          {"pre_projection_divergence", cf.pre_projection_divergence},
          {"truncation_residual", cf.truncation_residual},
          {"support_leak", cf.support_leak},
          {"sup_norm", cf.sup_norm},
          {"sup_refinement", cf.sup_refinement},
          {"p", params.p},
          {"amplitudes", triple_json(params.amplitudes)},
          {"K", lattice.k()},
          {"N", lattice.n()}};
}

json decay_json(const DecayCertificate& cert) {
  json out = {{"beta_hat", cert.beta_hat},
              {"min_ratio", cert.min_ratio},
              {"argmin_time", cert.argmin_time},
              {"passed", cert.passed},
              {"points", cert.rows.size()}};
  if (cert.first_failure) {
    const auto& row = cert.rows[*cert.first_failure];
    out["first_failure"] = {{"t", row.t}, {"psi", row.psi}, {"magnitude", row.magnitude}};
  }
  return out;
}

std::string decay_csv(const DecayCertificate& cert) {
  CsvTable table({"t", "psi", "ratio", "threshold", "margin"});
  for (const auto& row : cert.rows) {
    const double threshold = 3.0 * cert.beta_hat * std::exp(-18.0 * row.t);
    const double margin = threshold != 0.0 ? row.psi / threshold - 1.0
                                           : std::numeric_limits<double>::quiet_NaN();
    table.row({row.t, row.psi, row.ratio, threshold, margin});
  }
  return table.render();
}

std::string bound_csv(const PsiBoundCertificate& cert) {
  CsvTable table({"t", "neg_psi", "threshold", "normalized", "normalized_threshold", "margin"});
  for (const auto& row : cert.rows) {
    table.row({row.t, row.neg_psi, row.threshold, row.normalized, row.normalized_threshold,
               row.margin});
  }
  return table.render();
}

json trajectory_json(const Trajectory& traj) {
  json out = {{"status", to_string(traj.status)},
              {"samples", traj.times.size()},
              {"alpha", finite_or_null(traj.alpha)}};
  if (!traj.times.empty()) {
    out["final_time"] = traj.times.back();
    out["final_norm0"] = traj.norm0.back();
  }
  if (traj.status == TrajectoryStatus::kBlowUp) {
    out["blowup_time"] = traj.blowup_time();
    out["blowup_bracket"] = json::array({traj.blowup_lower, traj.blowup_upper});
  }
  if (!traj.message.empty()) out["message"] = traj.message;
  return out;
}

json classification_json(const Classification& c) {
  return {{"verdict", to_string(c.verdict)},
          {"sup_integral", c.sup_integral},
          {"argmax_time", c.argmax_time},
          {"tail_bound", c.tail_bound},
          {"attained", c.attained},
          {"tolerance", c.tolerance}};
}

json estimate_json(const ConstantEstimate& e, const Lattice& lattice, const char* method) {
  return {{"value", e.value},
          {"provenance", "estimated"},
          {"method", method},
          {"samples", e.samples},
          {"seed", e.seed},
          {"argmax", e.argmax},
          {"K", lattice.k()},
          {"N", lattice.n()}};
}

json formula_json(double value, const char* formula) {
  return {{"value", value}, {"provenance", "formula"}, {"formula", formula}};
}

struct ResolvedDatum {
  SpectralField field;
  json info;
};

ResolvedDatum resolve(const ExperimentConfig& cfg, const QuadratureSpec& spec) {
  const Lattice lattice = cfg.lattice();
  const DatumSpec& d = cfg.datum;
  json info = {{"kind", d.kind}};
  if (d.kind == "zero") return {SpectralField(lattice), info};
  if (d.kind == "single_mode") {
    info["k"] = d.k;
    info["component"] = d.component;
    info["coeff"] = json::array({d.coeff.real(), d.coeff.imag()});
    return {single_mode(lattice, d.k, d.component, d.coeff), info};
  }
  if (d.kind == "random_smooth") {
    info["seed"] = d.seed;
    info["decay"] = d.decay;
    info["norm"] = d.norm;
    return {random_smooth(lattice, d.seed, d.decay, d.norm), info};
  }
  if (d.kind == "file") {
    SpectralField f = load_field(d.path);
    info["path"] = d.path;
    info["file_K"] = f.lattice().k();
    info["file_N"] = f.lattice().n();
    if (!(f.lattice() == lattice)) f = f.resampled(lattice);
    f.require_valid("datum file");
    return {std::move(f), info};
  }
  // control_multiple
  const CertifiedControl cc = certified_control(cfg.control(), lattice, certification_times(cfg),
                                                cfg.search, cfg.search_cutoff);
  double mu = d.mu.value_or(0.0);
  info["amplitudes"] = triple_json(cc.amplitudes);
  if (d.threshold_multiple) {
    const StabilityValue b = stability_function_b(cc.control.u, spec);
    if (!(b.value > 0.0)) {
      throw Error(ErrorCode::kInvariant, "control_multiple: b(u) is not positive");
    }
    mu = *d.threshold_multiple / b.value;
    info["threshold_multiple"] = *d.threshold_multiple;
    info["g_inf"] = b.value;
  }
  info["mu"] = mu;
  return {mu * cc.control.u, info};
}

// --- build-control ---------------------------------------------------------

int cmd_build_control(Context& ctx) {
  const ExperimentConfig& cfg = ctx.cfg;
  const ControlParams params = cfg.control();
  const Lattice lattice = cfg.lattice();
  const ControlField cf = build_control_u(params, lattice);
  save_field(cf.u, ctx.log.path("u.npef"));
  ctx.log.record("u.npef");
  save_field_json(cf.u, ctx.log.path("u.json"));
  ctx.log.record("u.json");
  ctx.report["control"] = control_json(cf, params, lattice);

  if (ctx.opt.double_k) {
    const Lattice fine = lattice.with(2 * lattice.n(), 2 * lattice.k());
    const ControlField cf2 = build_control_u(params, fine);
    save_field(cf2.u, ctx.log.path("u_2k.npef"));
    ctx.log.record("u_2k.npef");
    const double diff = l2_norm(cf.u.resampled(fine) - cf2.u);
    CsvTable table({"K", "N", "norm0", "raw_norm", "pre_projection_divergence",
                    "truncation_residual", "support_leak", "sup_norm", "psi", "l2_diff_to_finest"});
    const ControlField* fields[] = {&cf, &cf2};
    const Lattice lats[] = {lattice, fine};
    for (int i = 0; i < 2; ++i) {
      const ControlField& f = *fields[i];
      table.row({lats[i].k(), lats[i].n(), l2_norm(f.u), f.raw_norm, f.pre_projection_divergence,
                 f.truncation_residual, f.support_leak, f.sup_norm, psi(f.u), i == 0 ? diff : 0.0});
    }
    ctx.log.write("convergence.csv", table.render());
    ctx.report["control_2k"] = control_json(cf2, params, fine);
    ctx.report["convergence"] = {{"l2_diff", diff}};
  }
  return 0;
}

// --- certify ---------------------------------------------------------------

int cmd_certify(Context& ctx) {
  const ExperimentConfig& cfg = ctx.cfg;
  const Lattice lattice = cfg.lattice();
  const ControlParams params = cfg.control();
  const auto grid = certification_times(cfg);
  CertifiedControl cc = certified_control(params, lattice, grid, cfg.search, cfg.search_cutoff);
  SpectralField u = cc.control.u;
  DecayCertificate decay = cc.decay;
  if (ctx.opt.negate) {
    u = -u;
    decay = certify_decay(u, grid);
  }
  ctx.log.write("certificate.csv", decay_csv(decay));
  json cert = decay_json(decay);
  cert["negated"] = ctx.opt.negate;
  cert["amplitudes"] = triple_json(cc.amplitudes);
  json tried = json::array();
  for (const auto& a : cc.tried) tried.push_back(triple_json(a));
  cert["amplitudes_tried"] = tried;
  cert["K"] = lattice.k();
  cert["N"] = lattice.n();
  ctx.report["certificate"] = cert;
  ctx.report["control"] = control_json(cc.control, params, lattice);

  if (ctx.opt.double_k && decay.passed) {
    ControlParams fine_params = params;
    fine_params.amplitudes = cc.amplitudes;
    const Lattice fine = lattice.with(2 * lattice.n(), 2 * lattice.k());
    SpectralField u2 = build_control_u(fine_params, fine).u;
    if (ctx.opt.negate) u2 = -u2;
    const DecayCertificate d2 = certify_decay(u2, grid);
    std::size_t at = 0;
    for (std::size_t i = 0; i < decay.rows.size(); ++i) {
      if (decay.rows[i].t == decay.argmin_time) at = i;
    }
    const double drift = std::abs(d2.rows[at].ratio - decay.rows[at].ratio) /
                         std::abs(decay.rows[at].ratio);
    ctx.log.write("certificate_2k.csv", decay_csv(d2));
    ctx.report["certificate_2k"] = decay_json(d2);
    ctx.report["certificate_2k"]["K"] = fine.k();
    ctx.report["certificate_2k"]["drift_at_argmin"] = drift;
    ctx.report["certificate_2k"]["beta_drift"] =
        std::abs(d2.beta_hat - decay.beta_hat) / std::abs(decay.beta_hat);
  }
  return decay.passed ? 0 : 4;
}

// --- simulate --------------------------------------------------------------

std::string trajectory_csv(const Trajectory& traj, const std::function<double(std::size_t)>& envelope,
                           const std::function<std::string(std::size_t)>& row_status,
                           const Trajectory* oracle = nullptr,
                           const std::vector<double>* deviation = nullptr) {
  std::vector<std::string> columns{"t", "norm0", "denominator", "envelope", "status"};
  if (oracle) {
    columns.push_back("oracle_norm0");
    columns.push_back("oracle_deviation");
  }
  CsvTable table(columns);
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    std::vector<Cell> row{traj.times[i], traj.norm0[i], traj.denominator[i], envelope(i),
                          row_status(i)};
    if (oracle) {
      row.emplace_back(oracle->norm0[i]);
      row.emplace_back((*deviation)[i]);
    }
    table.row(row);
  }
  return table.render();
}

std::function<std::string(std::size_t)> last_row_status(const Trajectory& traj) {
  const std::size_t last = traj.times.empty() ? 0 : traj.times.size() - 1;
  const std::string final_status = to_string(traj.status);
  return [last, final_status](std::size_t i) { return i == last ? final_status : std::string("ok"); };
}

int trajectory_exit(const Trajectory& traj) {
  switch (traj.status) {
    case TrajectoryStatus::kBlowUp: return 5;
    case TrajectoryStatus::kQuadratureFailure: return 6;
    default: return 0;
  }
}

int cmd_simulate(Context& ctx) {
  const ExperimentConfig& cfg = ctx.cfg;
  const ResolvedDatum datum = resolve(cfg, cfg.quadrature);
  ctx.report["datum"] = datum.info;
  const double norm_initial = l2_norm(datum.field);

  Trajectory traj;
  if (ctx.opt.oracle) {
    const Trajectory orc = timestep_oracle(datum.field, cfg.oracle_dt, cfg.oracle_t_end,
                                           cfg.oracle_stride, true, cfg.oracle_scheme);
    traj = simulate(datum.field, orc.times, cfg.quadrature, true);
    std::vector<double> deviation(traj.times.size());
    double worst = 0.0;
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
      const double ref = l2_norm(traj.states[i]);
      deviation[i] = ref > 0.0 ? l2_norm(traj.states[i] - orc.states[i]) / ref : 0.0;
      worst = std::max(worst, deviation[i]);
    }
    ctx.log.write("trajectory.csv",
                  trajectory_csv(traj, [&](std::size_t i) { return norm_initial * std::exp(-traj.times[i]); },
                                 last_row_status(traj), &orc, &deviation));
    ctx.report["oracle"] = {{"scheme", to_string(cfg.oracle_scheme)},
                            {"dt", cfg.oracle_dt},
                            {"t_end", cfg.oracle_t_end},
                            {"stride", cfg.oracle_stride},
                            {"status", to_string(orc.status)},
                            {"compared_samples", traj.times.size()},
                            {"max_deviation", worst}};
  } else {
    traj = simulate(datum.field, cfg.time_grid.build(), cfg.quadrature);
    ctx.log.write("trajectory.csv",
                  trajectory_csv(traj, [&](std::size_t i) { return norm_initial * std::exp(-traj.times[i]); },
                                 last_row_status(traj)));
  }
  json summary = trajectory_json(traj);
  if (traj.status != TrajectoryStatus::kQuadratureFailure && norm_initial > 0.0) {
    try {
      summary["verdict"] = to_string(classify(datum.field, cfg.quadrature, cfg.tol).verdict);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kQuadrature) throw;
      summary["verdict"] = nullptr;
    }
  } else if (norm_initial == 0.0) {
    summary["verdict"] = to_string(Verdict::kStability);
  }
  ctx.report["trajectory"] = summary;
  return trajectory_exit(traj);
}

// --- classify --------------------------------------------------------------

int cmd_classify(Context& ctx) {
  const ExperimentConfig& cfg = ctx.cfg;
  const ResolvedDatum datum = resolve(cfg, cfg.quadrature);
  ctx.report["datum"] = datum.info;
  if (datum.field.is_zero()) {
    ctx.report["classification"] = {{"verdict", to_string(Verdict::kStability)},
                                    {"note", "zero datum"}};
    return 0;
  }
  ctx.report["classification"] = classification_json(classify(datum.field, cfg.quadrature, cfg.tol));
  return 0;
}

// --- stabilize -------------------------------------------------------------

SynthesisOptions synthesis_options(const ExperimentConfig& cfg, const RunOptions& opt) {
  SynthesisOptions options;
  options.control = cfg.control();
  options.search_amplitudes = cfg.search;
  options.search_cutoff = cfg.search_cutoff;
  options.quadrature = cfg.quadrature;
  options.certification_times = certification_times(cfg);
  options.constant_samples = cfg.constant_samples;
  options.constant_seed = cfg.constant_seed;
  options.constant_cutoff = cfg.constant_cutoff;
  options.lambda_override = opt.lambda_override ? opt.lambda_override : cfg.lambda_override;
  options.classification_tol = cfg.tol;
  return options;
}

json plan_json(const SynthesisResult& r, const ExperimentConfig& cfg, const Lattice& sample_lattice) {
  const StabilizationPlan& p = r.plan;
  json tried = json::array();
  for (const auto& a : p.amplitudes_tried) tried.push_back(triple_json(a));
  return {
      {"lattice", {{"N", cfg.n}, {"K", cfg.k}, {"product_rule", to_string(cfg.product_rule)}}},
      {"amplitudes", triple_json(p.amplitudes)},
      {"amplitudes_tried", tried},
      {"p", p.p},
      {"beta_hat",
       {{"value", p.beta_hat},
        {"provenance", "certificate"},
        {"grid", {{"points", cfg.cert_points}, {"t_min", cfg.cert_t_min}, {"t_max", cfg.cert_t_max}}},
        {"argmin_time", r.decay.argmin_time}}},
      {"c_hat", estimate_json(r.c_hat, sample_lattice, "max |Psi(y1,y2,y3)| / prod ||y_i||_{1/2}")},
      {"c1_hat", estimate_json(r.c1_hat, sample_lattice,
                               "max_t (|int_0^t Phi| + tail) / ||y||_0 over samples and +-u")},
      {"phi_constant", estimate_json(r.phi_constant, sample_lattice, "max |Phi(w)| / ||w||_{3/2}")},
      {"u_inf", {{"value", p.u_inf}, {"provenance", "estimated"}, {"method", "max over refined grid"},
                 {"refinement", r.control.sup_refinement}}},
      {"t0", formula_json(p.t0, "1 / (8 e u_inf^4)")},
      {"a_t0", formula_json(p.a_t0, "exp(t0 - 1/4) / (sqrt(2) t0^(1/4))")},
      {"lambda01", formula_json(p.lambda01, "(c/beta) e^{15T} (A^2 h + A h^2 + h^3)")},
      {"lambda02", formula_json(p.lambda02,
                                "(c/beta) (A^2 h e^{16 t0} + A h^2 e^{17 t0} + h^3 e^{18 t0})")},
      {"lambda_analytic", formula_json(p.lambda_analytic, "1.1 max(lambda01, lambda02, 7 ||y0||_0)")},
      {"lambda", {{"value", p.lambda}, {"provenance", p.lambda_source}, {"doublings", p.doublings}}},
      {"horizon", formula_json(p.horizon, "ln(1 / x0)")},
      {"root", {{"value", p.root}, {"provenance", "bisection"},
                {"equation", "beta x^16 + 32 c1 x - beta = 0"}}},
      {"r0", formula_json(p.r0, "1 / (2 c1)")},
      {"y0_norm0", p.y0_norm0},
      {"y0_half", p.y0_half},
      {"trivial", p.trivial},
      {"psi_bound",
       {{"passed", r.bound.passed},
        {"precondition_met", r.bound.precondition_met},
        {"worst_margin", finite_or_null(r.bound.worst_margin)},
        {"worst_time", r.bound.worst_time}}}};
}

int cmd_stabilize(Context& ctx) {
  const ExperimentConfig& cfg = ctx.cfg;
  const Lattice lattice = cfg.lattice();
  const ResolvedDatum datum = resolve(cfg, cfg.quadrature);
  ctx.report["datum"] = datum.info;
  const SynthesisOptions options = synthesis_options(cfg, ctx.opt);
  const SynthesisResult r = synthesize(datum.field, lattice, options);
  const StabilizationPlan& plan = r.plan;
  const Lattice sample_lattice =
      cfg.constant_cutoff > 0 && cfg.constant_cutoff < lattice.k()
          ? Lattice(minimal_modes_per_axis(cfg.constant_cutoff), cfg.constant_cutoff, cfg.product_rule)
          : lattice;

  ctx.log.write("plan.json", plan_json(r, cfg, sample_lattice).dump(2) + "\n");
  ctx.log.write("certificate.csv", decay_csv(r.decay));
  if (!r.bound.rows.empty()) ctx.log.write("psi_bound.csv", bound_csv(r.bound));

  QuadratureSpec q = cfg.quadrature;
  if (plan.c1_hat > 0.0) q.tail_constant = plan.c1_hat;
  const double T = plan.horizon;
  const double t_final = T + cfg.continuation;
  if (q.horizon < t_final) q.horizon = std::ceil(t_final) + 1.0;
  const int points = cfg.stabilize_points;

  json run;
  run["quadrature_horizon"] = q.horizon;
  run["tail_constant"] = q.tail_constant;

  // Uncontrolled evolution of the datum.
  if (!datum.field.is_zero()) {
    const Trajectory unc = simulate(datum.field, mixed_grid(t_final, points), q);
    const double n0 = l2_norm(datum.field);
    ctx.log.write("uncontrolled.csv",
                  trajectory_csv(unc, [&](std::size_t i) { return n0 * std::exp(-unc.times[i]); },
                                 last_row_status(unc)));
    run["uncontrolled"] = trajectory_json(unc);
    run["uncontrolled"]["verdict"] = to_string(classify(datum.field, q, cfg.tol).verdict);
  }

  // Controlled evolution of v = y0 - lambda u: plan window [0, T], then the
  // continuation (T, T + tail].
  std::vector<double> grid = mixed_grid(T, points);
  const std::size_t plan_samples = grid.size();
  for (double t : linspace(T, t_final, points)) {
    if (t > T) grid.push_back(t);
  }

  const SpectralField& v = r.v;
  const double vn = l2_norm(v);
  const Trajectory ctl = simulate(v, grid, q);
  auto envelope = [&](double t) {
    return vn * std::exp(-t) / (1.0 + plan.beta_hat / 16.0 * vn * (1.0 - std::exp(-16.0 * t)));
  };
  bool envelope_ok = ctl.status == TrajectoryStatus::kCompleted && ctl.times.size() == grid.size();
  double worst_margin = std::numeric_limits<double>::infinity();
  double worst_time = 0.0;
  double alpha_tail = 0.0;
  std::vector<std::string> row_status(ctl.times.size(), "ok");
  for (std::size_t i = 0; i < ctl.times.size(); ++i) {
    const double t = ctl.times[i];
    if (i < plan_samples) {
      const double env = envelope(t);
      const double margin = env > 0.0 ? 1.0 - ctl.norm0[i] / env : -1.0;
      if (margin < worst_margin) {
        worst_margin = margin;
        worst_time = t;
      }
      if (ctl.norm0[i] > env * (1.0 + kEnvelopeSlack)) {
        envelope_ok = false;
        row_status[i] = "violation";
      }
    } else {
      row_status[i] = "continuation";
      if (vn > 0.0) alpha_tail = std::max(alpha_tail, ctl.norm0[i] * std::exp(t) / vn);
    }
  }
  if (!ctl.times.empty() && ctl.status != TrajectoryStatus::kCompleted) {
    row_status.back() = to_string(ctl.status);
  }
  ctx.log.write("controlled.csv",
                trajectory_csv(ctl,
                               [&](std::size_t i) {
                                 return i < plan_samples ? envelope(ctl.times[i])
                                                         : vn * std::exp(-ctl.times[i]);
                               },
                               [&](std::size_t i) { return row_status[i]; }));

  double norm_at_T = std::numeric_limits<double>::quiet_NaN();
  if (ctl.times.size() >= plan_samples) norm_at_T = ctl.norm0[plan_samples - 1];
  const bool reached = norm_at_T <= plan.r0;
  json controlled = trajectory_json(ctl);
  controlled["verdict"] = vn > 0.0 ? json(to_string(classify(v, q, cfg.tol).verdict))
                                   : json(to_string(Verdict::kStability));
  controlled["v_norm0"] = vn;
  controlled["envelope_satisfied"] = envelope_ok;
  controlled["envelope_worst_margin"] = finite_or_null(worst_margin);
  controlled["envelope_worst_time"] = worst_time;
  controlled["norm_at_horizon"] = finite_or_null(norm_at_T);
  controlled["reached_small_ball"] = reached;
  controlled["alpha_continuation"] = alpha_tail;
  controlled["continuation"] = json::array({T, t_final});
  run["controlled"] = controlled;

  ctx.report["plan"] = {{"lambda", plan.lambda},
                        {"lambda_source", plan.lambda_source},
                        {"beta_hat", plan.beta_hat},
                        {"c1_hat", plan.c1_hat},
                        {"horizon", plan.horizon},
                        {"r0", plan.r0},
                        {"amplitudes", triple_json(plan.amplitudes)},
                        {"trivial", plan.trivial}};
  ctx.report["stabilize"] = run;

  if (plan.trivial) {
    const bool ok = ctl.status == TrajectoryStatus::kCompleted &&
                    controlled["verdict"] == to_string(Verdict::kStability);
    ctx.report["stabilize"]["gate"] = "trivial plan: controlled run completes and decays";
    return ok ? 0 : 7;
  }
  ctx.report["stabilize"]["gate"] = "envelope on [0, T] and ||y(T)||_0 <= r0";
  return envelope_ok && reached && std::isfinite(alpha_tail) ? 0 : 7;
}

// --- sweep -----------------------------------------------------------------

int cmd_sweep(Context& ctx) {
  const ExperimentConfig& cfg = ctx.cfg;
  const SweepSpec& sw = cfg.sweep;
  if (sw.axis != "lambda" && sw.axis != "mu" && sw.axis != "K") {
    throw Error(ErrorCode::kConfiguration, "sweep: axis must be one of lambda, mu, K");
  }
  if (sw.values.empty()) throw Error(ErrorCode::kConfiguration, "sweep: empty value list");

  const Lattice lattice = cfg.lattice();
  CsvTable table({"axis", "value", "metric", "metric_value"});
  using Row = std::vector<std::pair<std::string, Cell>>;
  std::vector<Row> rows(sw.values.size());
  json summary = {{"axis", sw.axis}, {"values", sw.values}};

  if (sw.axis == "mu") {
    const CertifiedControl cc = certified_control(cfg.control(), lattice, certification_times(cfg),
                                                  cfg.search, cfg.search_cutoff);
    const StabilityValue b = stability_function_b(cc.control.u, cfg.quadrature);
    if (!(b.value > 0.0)) throw Error(ErrorCode::kInvariant, "sweep: b(u) is not positive");
    summary["g_inf"] = b.value;
    summary["amplitudes"] = triple_json(cc.amplitudes);
    const std::vector<double> span{0.0, cfg.quadrature.horizon};
    parallel_for(sw.values.size(), [&](std::size_t i) {
      const double mu = sw.values[i] / b.value;
      const SpectralField y0 = mu * cc.control.u;
      const Classification c = classify(y0, cfg.quadrature, cfg.tol);
      const Trajectory traj = simulate(y0, span, cfg.quadrature);
      const bool blowup = traj.status == TrajectoryStatus::kBlowUp;
      rows[i] = {{"mu", mu},
                 {"sup_integral", c.sup_integral},
                 {"verdict", std::string(to_string(c.verdict))},
                 {"blowup", blowup ? 1 : 0},
                 {"blowup_time", blowup ? traj.blowup_time() : std::numeric_limits<double>::quiet_NaN()}};
    });
  } else if (sw.axis == "lambda") {
    const ResolvedDatum datum = resolve(cfg, cfg.quadrature);
    ctx.report["datum"] = datum.info;
    const SynthesisResult r = synthesize(datum.field, lattice, synthesis_options(cfg, ctx.opt));
    const StabilizationPlan& plan = r.plan;
    if (plan.trivial) throw Error(ErrorCode::kConfiguration, "sweep: datum already decays; lambda sweep is empty");
    summary["lambda_plan"] = plan.lambda;
    summary["horizon"] = plan.horizon;
    summary["r0"] = plan.r0;
    QuadratureSpec q = cfg.quadrature;
    if (plan.c1_hat > 0.0) q.tail_constant = plan.c1_hat;
    if (q.horizon < plan.horizon) q.horizon = std::ceil(plan.horizon) + 1.0;
    const std::vector<double> grid = linspace(0.0, plan.horizon, cfg.stabilize_points);
    const auto times = certification_times(cfg);
    for (std::size_t i = 0; i < sw.values.size(); ++i) {
      const double lambda = sw.values[i] * plan.lambda;
      const PsiBoundCertificate bound = verify_psi_bound(datum.field, lambda, r.u, times, plan.beta_hat);
      const SpectralField v = SpectralField::combine(1.0, datum.field, -lambda, r.u);
      const double vn = l2_norm(v);
      const Trajectory traj = simulate(v, grid, q);
      double margin = std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < traj.times.size(); ++j) {
        const double t = traj.times[j];
        const double env = vn * std::exp(-t) / (1.0 + plan.beta_hat / 16.0 * vn * (1.0 - std::exp(-16.0 * t)));
        margin = std::min(margin, 1.0 - traj.norm0[j] / env);
      }
      const bool completed = traj.status == TrajectoryStatus::kCompleted;
      if (!completed) margin = -std::numeric_limits<double>::infinity();
      rows[i] = {{"lambda", lambda},
                 {"psi_margin", bound.worst_margin},
                 {"envelope_margin", margin},
                 {"final_norm0", completed ? traj.norm0.back() : std::numeric_limits<double>::quiet_NaN()},
                 {"blowup", traj.status == TrajectoryStatus::kBlowUp ? 1 : 0}};
    }
  } else {
    const auto times = certification_times(cfg);
    const CertifiedControl cc =
        certified_control(cfg.control(), lattice, times, cfg.search, cfg.search_cutoff);
    summary["amplitudes"] = triple_json(cc.amplitudes);
    ControlParams params = cfg.control();
    params.amplitudes = cc.amplitudes;
    double first_beta = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t i = 0; i < sw.values.size(); ++i) {
      const double kv = sw.values[i];
      if (kv != std::floor(kv) || kv < 1.0) throw Error(ErrorCode::kConfiguration, "sweep: K values must be positive integers");
      const int k = static_cast<int>(kv);
      int n = static_cast<int>(std::ceil(double(cfg.n) * k / cfg.k));
      n += n % 2;
      n = std::max(n, minimal_modes_per_axis(k));
      const Lattice lat(n, k, cfg.product_rule);
      const DecayCertificate d = certify_decay(build_control_u(params, lat).u, times);
      if (i == 0) first_beta = d.beta_hat;
      rows[i] = {{"N", n},
                 {"beta_hat", d.beta_hat},
                 {"argmin_time", d.argmin_time},
                 {"passed", d.passed ? 1 : 0},
                 {"beta_change_vs_first", std::abs(d.beta_hat - first_beta) / std::abs(first_beta)}};
    }
  }
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (const auto& [metric, value] : rows[i]) table.row({sw.axis, sw.values[i], metric, value});
  }
  ctx.log.write("sweep.csv", table.render());
  summary["rows"] = table.rows();
  ctx.report["sweep"] = summary;
  return 0;
}

using Command = int (*)(Context&);

const std::map<std::string, Command>& command_table() {
  static const std::map<std::string, Command> table{
      {"build-control", cmd_build_control}, {"certify", cmd_certify},
      {"simulate", cmd_simulate},           {"classify", cmd_classify},
      {"stabilize", cmd_stabilize},         {"sweep", cmd_sweep}};
  return table;
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"build-control", "certify", "simulate",
                                              "classify",      "stabilize", "sweep"};
  return names;
}

SpectralField resolve_datum(const ExperimentConfig& config, const QuadratureSpec& spec) {
  return resolve(config, spec).field;
}

RunResult run_command(const std::string& command, const json& config, const RunOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  RunResult result;
  json& report = result.report;
  report["command"] = command;
  report["config_hash"] = hex64(fnv1a64(config.dump()));
  report["threads"] = options.threads;
  if (options.seed) report["seed"] = *options.seed;
  report["out_dir"] = options.out_dir;

  std::optional<ArtifactLog> log;
  try {
    const auto it = command_table().find(command);
    if (it == command_table().end()) {
      throw Error(ErrorCode::kConfiguration, "unknown command '" + command + "'");
    }
    log.emplace(options.out_dir);
    ExperimentConfig cfg = parse_config(config);
    if (options.seed) {
      cfg.constant_seed = *options.seed;
      if (cfg.datum.kind == "random_smooth") cfg.datum.seed = *options.seed;
    }
    set_thread_count(options.threads);
    Context ctx{cfg, options, *log, json::object()};
    result.exit_code = it->second(ctx);
    for (auto& [key, value] : ctx.report.items()) report[key] = value;
  } catch (const Error& e) {
    result.exit_code = exit_code_for(e.code());
    report["error"] = {{"kind", to_string(e.code())}, {"message", e.what()}};
  }
  report["exit_code"] = result.exit_code;
  report["exit_status"] = exit_name(result.exit_code);
  report["files"] = log ? log->files() : json::array();
  report["wall_clock_seconds"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (log) {
    try {
      write_file_atomic(log->path("report.json"), report.dump(2) + "\n");
    } catch (const Error& e) {
      report["report_write_error"] = e.what();
    }
  }
  return result;
}

}  // namespace npe
