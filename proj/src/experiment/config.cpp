#include <cmath>
#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>
#include <string>

#include "npe/error.hpp"
#include "npe/experiment.hpp"

namespace npe {

using nlohmann::json;

namespace {

[[noreturn]] void reject(const std::string& what) {
  throw Error(ErrorCode::kConfiguration, "config: " + what);
}

void allow_keys(const json& obj, const std::string& where,
                std::initializer_list<const char*> keys) {
  if (!obj.is_object()) reject(where + " must be an object");
  const std::set<std::string> allowed(keys.begin(), keys.end());
  for (const auto& item : obj.items()) {
    if (!allowed.count(item.key())) reject("unknown key '" + where + "." + item.key() + "'");
  }
}

double number(const json& obj, const char* key, const std::string& where, double fallback) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_number()) reject(where + "." + key + " must be a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) reject(where + "." + key + " must be finite");
  return x;
}

int integer(const json& obj, const char* key, const std::string& where, int fallback) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_number_integer()) reject(where + "." + key + " must be an integer");
  return v.get<int>();
}

std::uint64_t unsigned_integer(const json& obj, const char* key, const std::string& where,
                               std::uint64_t fallback) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_number_integer() || (!v.is_number_unsigned() && v.get<std::int64_t>() < 0)) {
    reject(where + "." + key + " must be a non-negative integer");
  }
  return v.get<std::uint64_t>();
}

bool boolean(const json& obj, const char* key, const std::string& where, bool fallback) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_boolean()) reject(where + "." + key + " must be a boolean");
  return v.get<bool>();
}

std::string text(const json& obj, const char* key, const std::string& where,
                 const std::string& fallback) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_string()) reject(where + "." + key + " must be a string");
  return v.get<std::string>();
}

template <class T>
std::array<T, 3> triple(const json& obj, const char* key, const std::string& where,
                        std::array<T, 3> fallback) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_array() || v.size() != 3) reject(where + "." + key + " must be an array of 3 numbers");
  std::array<T, 3> out{};
  for (int i = 0; i < 3; ++i) {
    if (!v[i].is_number()) reject(where + "." + key + " must be an array of 3 numbers");
    if constexpr (std::is_integral_v<T>) {
      if (!v[i].is_number_integer()) reject(where + "." + key + " must hold integers");
    }
    out[i] = v[i].get<T>();
  }
  return out;
}

std::vector<double> number_list(const json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key)) return {};
  const auto& v = obj.at(key);
  if (!v.is_array()) reject(where + "." + key + " must be an array");
  std::vector<double> out;
  for (const auto& x : v) {
    if (!x.is_number()) reject(where + "." + key + " must hold numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

void parse_lattice(const json& obj, ExperimentConfig& c) {
  allow_keys(obj, "lattice", {"N", "K", "product_rule"});
  c.n = integer(obj, "N", "lattice", c.n);
  c.k = integer(obj, "K", "lattice", c.k);
  c.product_rule = product_rule_from_string(text(obj, "product_rule", "lattice", "minimal"));
  (void)c.lattice();
}

void parse_box(const json& obj, ExperimentConfig& c) {
  allow_keys(obj, "box", {"a", "b"});
  c.box.lower = triple<double>(obj, "a", "box", c.box.lower);
  c.box.upper = triple<double>(obj, "b", "box", c.box.upper);
}

void parse_control(const json& obj, ExperimentConfig& c) {
  allow_keys(obj, "control", {"p", "amplitudes", "search", "search_cutoff"});
  if (obj.contains("p")) c.p = integer(obj, "p", "control", 1);
  c.amplitudes = triple<double>(obj, "amplitudes", "control", c.amplitudes);
  c.search = boolean(obj, "search", "control", c.search);
  c.search_cutoff = integer(obj, "search_cutoff", "control", c.search_cutoff);
  if (c.search_cutoff < 0) reject("control.search_cutoff must be >= 0");
}

void parse_quadrature(const json& obj, ExperimentConfig& c) {
  allow_keys(obj, "quadrature", {"initial_step", "growth", "horizon", "tail_tolerance",
                                 "tail_constant", "max_depth"});
  auto& q = c.quadrature;
  q.initial_step = number(obj, "initial_step", "quadrature", q.initial_step);
  q.growth = number(obj, "growth", "quadrature", q.growth);
  q.horizon = number(obj, "horizon", "quadrature", q.horizon);
  q.tail_tolerance = number(obj, "tail_tolerance", "quadrature", q.tail_tolerance);
  q.tail_constant = number(obj, "tail_constant", "quadrature", q.tail_constant);
  q.max_depth = integer(obj, "max_depth", "quadrature", q.max_depth);
  q.validate();
}

void parse_time_grid(const json& obj, ExperimentConfig& c) {
  allow_keys(obj, "time_grid", {"t_end", "points", "times"});
  auto& g = c.time_grid;
  g.t_end = number(obj, "t_end", "time_grid", g.t_end);
  g.points = integer(obj, "points", "time_grid", g.points);
  g.times = number_list(obj, "times", "time_grid");
  (void)g.build();
}

void parse_datum(const json& obj, ExperimentConfig& c) {
  allow_keys(obj, "datum", {"kind", "k", "component", "re", "im", "mu", "threshold_multiple",
                            "seed", "decay", "norm", "path"});
  auto& d = c.datum;
  d.kind = text(obj, "kind", "datum", d.kind);
  if (d.kind == "zero") {
  } else if (d.kind == "single_mode") {
    d.k = triple<int>(obj, "k", "datum", d.k);
    d.component = integer(obj, "component", "datum", d.component);
    if (d.component < 0 || d.component > 2) reject("datum.component must be 0, 1 or 2");
    d.coeff = Complex(number(obj, "re", "datum", d.coeff.real()),
                      number(obj, "im", "datum", d.coeff.imag()));
  } else if (d.kind == "control_multiple") {
    if (obj.contains("mu") == obj.contains("threshold_multiple")) {
      reject("datum control_multiple needs exactly one of mu, threshold_multiple");
    }
    if (obj.contains("mu")) d.mu = number(obj, "mu", "datum", 0.0);
    if (obj.contains("threshold_multiple")) {
      d.threshold_multiple = number(obj, "threshold_multiple", "datum", 0.0);
    }
  } else if (d.kind == "random_smooth") {
    d.seed = unsigned_integer(obj, "seed", "datum", d.seed);
    d.decay = number(obj, "decay", "datum", d.decay);
    d.norm = number(obj, "norm", "datum", d.norm);
    if (d.norm <= 0.0) reject("datum.norm must be positive");
  } else if (d.kind == "file") {
    d.path = text(obj, "path", "datum", "");
    if (d.path.empty()) reject("datum.path is required for kind 'file'");
    if (!std::ifstream(d.path).good()) reject("datum file '" + d.path + "' does not exist");
  } else {
    reject("unknown datum kind '" + d.kind + "'");
  }
}

void parse_oracle(const json& obj, ExperimentConfig& c) {
  allow_keys(obj, "oracle", {"dt", "t_end", "stride", "scheme"});
  c.oracle_dt = number(obj, "dt", "oracle", c.oracle_dt);
  c.oracle_t_end = number(obj, "t_end", "oracle", c.oracle_t_end);
  c.oracle_stride = integer(obj, "stride", "oracle", c.oracle_stride);
  try {
    c.oracle_scheme = oracle_scheme_from_string(text(obj, "scheme", "oracle", "ab4"));
  } catch (const Error& e) {
    reject(e.what());
  }
  if (!(c.oracle_dt > 0.0) || !(c.oracle_t_end > 0.0) || c.oracle_stride < 1) {
    reject("oracle needs dt > 0, t_end > 0 and stride >= 1");
  }
}

}  // namespace

std::vector<double> TimeGridSpec::build() const {
  if (!times.empty()) {
    if (times.front() != 0.0) reject("time_grid.times must start at 0");
    for (std::size_t i = 1; i < times.size(); ++i) {
      if (!(times[i] > times[i - 1])) reject("time_grid.times must increase");
    }
    return times;
  }
  if (!(t_end > 0.0) || points < 2) reject("time_grid needs t_end > 0 and points >= 2");
  std::vector<double> out(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) out[i] = t_end * i / (points - 1);
  return out;
}

ControlParams ExperimentConfig::control() const {
  ControlParams params;
  params.box = box;
  params.p = p ? *p : choose_p(box);
  params.amplitudes = amplitudes;
  return params;
}

ExperimentConfig parse_config(const json& doc) {
  allow_keys(doc, "config", {"lattice", "box", "control", "quadrature", "time_grid", "datum",
                             "classification", "certification", "constants", "sweep",
                             "stabilize", "oracle"});
  ExperimentConfig c;
  c.hash = hex64(fnv1a64(doc.dump()));
  try {
    if (doc.contains("lattice")) parse_lattice(doc["lattice"], c);
    (void)c.lattice();
    if (doc.contains("box")) parse_box(doc["box"], c);
    c.box.validate();
    if (doc.contains("control")) parse_control(doc["control"], c);
    c.control().validate();
    if (doc.contains("quadrature")) parse_quadrature(doc["quadrature"], c);
    if (doc.contains("time_grid")) parse_time_grid(doc["time_grid"], c);
    if (doc.contains("datum")) parse_datum(doc["datum"], c);
    if (doc.contains("classification")) {
      const auto& o = doc["classification"];
      allow_keys(o, "classification", {"tol"});
      c.tol = number(o, "tol", "classification", c.tol);
      if (!(c.tol > 0.0 && c.tol < 1.0)) reject("classification.tol must lie in (0, 1)");
    }
    if (doc.contains("certification")) {
      const auto& o = doc["certification"];
      allow_keys(o, "certification", {"points", "t_min", "t_max"});
      c.cert_points = integer(o, "points", "certification", c.cert_points);
      c.cert_t_min = number(o, "t_min", "certification", c.cert_t_min);
      c.cert_t_max = number(o, "t_max", "certification", c.cert_t_max);
      if (c.cert_points < 2 || !(c.cert_t_min > 0.0) || !(c.cert_t_max > c.cert_t_min)) {
        reject("certification needs points >= 2 and 0 < t_min < t_max");
      }
    }
    if (doc.contains("constants")) {
      const auto& o = doc["constants"];
      allow_keys(o, "constants", {"samples", "seed", "cutoff"});
      c.constant_samples = integer(o, "samples", "constants", c.constant_samples);
      c.constant_seed = unsigned_integer(o, "seed", "constants", c.constant_seed);
      c.constant_cutoff = integer(o, "cutoff", "constants", c.constant_cutoff);
      if (c.constant_samples < 1 || c.constant_cutoff < 0) {
        reject("constants needs samples >= 1 and cutoff >= 0");
      }
    }
    if (doc.contains("sweep")) {
      const auto& o = doc["sweep"];
      allow_keys(o, "sweep", {"axis", "values"});
      c.sweep.axis = text(o, "axis", "sweep", "");
      c.sweep.values = number_list(o, "values", "sweep");
    }
    if (doc.contains("stabilize")) {
      const auto& o = doc["stabilize"];
      allow_keys(o, "stabilize", {"lambda_override", "continuation", "points"});
      if (o.contains("lambda_override") && !o["lambda_override"].is_null()) {
        c.lambda_override = number(o, "lambda_override", "stabilize", 0.0);
        if (!(*c.lambda_override > 0.0)) reject("stabilize.lambda_override must be positive");
      }
      c.continuation = number(o, "continuation", "stabilize", c.continuation);
      c.stabilize_points = integer(o, "points", "stabilize", c.stabilize_points);
      if (!(c.continuation > 0.0) || c.stabilize_points < 2) {
        reject("stabilize needs continuation > 0 and points >= 2");
      }
    }
    if (doc.contains("oracle")) parse_oracle(doc["oracle"], c);
  } catch (const json::exception& e) {
    reject(e.what());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kConfiguration) throw;
    throw Error(ErrorCode::kConfiguration, std::string("config: ") + e.what());
  }
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) reject("cannot open '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  json doc;
  try {
    doc = json::parse(buffer.str());
  } catch (const json::exception& e) {
    reject(std::string("invalid JSON in '") + path + "': " + e.what());
  }
  return parse_config(doc);
}

}  // namespace npe
