#include "tunnelkit/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "tunnelkit/errors.hpp"

namespace tunnelkit {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string &msg) { throw Error(ErrorCode::InvalidConfig, msg); }

// Reads the members of one JSON object and rejects any key that was never
// asked for.
class ObjectReader {
public:
  ObjectReader(const json &obj, std::string path) : obj_(obj), path_(std::move(path)) {
    if (!obj_.is_object())
      fail("'" + path_ + "' must be an object");
  }

  bool has(const std::string &key) {
    seen_.insert(key);
    return obj_.contains(key);
  }

  const json &at(const std::string &key) {
    if (!has(key))
      fail("missing key '" + child(key) + "'");
    return obj_.at(key);
  }

  double number(const std::string &key) { return as_number(at(key), child(key)); }

  double number(const std::string &key, double fallback) {
    return has(key) ? number(key) : fallback;
  }

  std::optional<double> optional_number(const std::string &key) {
    if (!has(key))
      return std::nullopt;
    return number(key);
  }

  int integer(const std::string &key, int fallback) {
    if (!has(key))
      return fallback;
    const json &v = obj_.at(key);
    if (!v.is_number_integer())
      fail("'" + child(key) + "' must be an integer");
    return v.get<int>();
  }

  bool boolean(const std::string &key, bool fallback) {
    if (!has(key))
      return fallback;
    const json &v = obj_.at(key);
    if (!v.is_boolean())
      fail("'" + child(key) + "' must be true or false");
    return v.get<bool>();
  }

  std::string string(const std::string &key) {
    const json &v = at(key);
    if (!v.is_string())
      fail("'" + child(key) + "' must be a string");
    return v.get<std::string>();
  }

  std::string string(const std::string &key, const std::string &fallback) {
    return has(key) ? string(key) : fallback;
  }

  std::string child(const std::string &key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  void finish() const {
    for (auto it = obj_.begin(); it != obj_.end(); ++it)
      if (!seen_.count(it.key()))
        fail("unknown key '" + child(it.key()) + "'");
  }

  static double as_number(const json &v, const std::string &path) {
    if (!v.is_number())
      fail("'" + path + "' must be a number");
    const double x = v.get<double>();
    if (!std::isfinite(x))
      fail("'" + path + "' must be finite");
    return x;
  }

private:
  const json &obj_;
  std::string path_;
  std::set<std::string> seen_;
};

PotentialSpec parse_potential(const json &j) {
  ObjectReader r(j, "potential");
  const std::string family = r.string("family");
  PotentialSpec spec;
  if (family == "biased_quartic") {
    BiasedQuartic q;
    q.alpha = r.number("alpha");
    q.a = r.number("a");
    q.beta = r.number("beta", 0.0);
    spec.family = q;
  } else if (family == "double_oscillator") {
    DoubleOscillator d;
    d.omega_L = r.number("omega_L");
    d.omega_R = r.number("omega_R");
    d.tilde_eps = r.number("tilde_eps", 0.0);
    d.V0 = r.number("V0");
    spec.family = d;
  } else if (family == "polynomial") {
    const json &c = r.at("coeffs");
    if (!c.is_array())
      fail("'potential.coeffs' must be an array of numbers");
    Polynomial p;
    for (std::size_t i = 0; i < c.size(); ++i)
      p.coeffs.push_back(
          ObjectReader::as_number(c[i], "potential.coeffs[" + std::to_string(i) + "]"));
    spec.family = p;
  } else {
    fail("'potential.family' must be biased_quartic, double_oscillator or polynomial, got '" +
         family + "'");
  }
  if (r.has("bias")) {
    ObjectReader b(r.at("bias"), "potential.bias");
    BiasStep step;
    step.amount = b.number("amount");
    step.x_from = b.number("x_from");
    step.x_to = b.number("x_to");
    b.finish();
    spec.bias = step;
  }
  r.finish();
  validate(spec);
  return spec;
}

PhysConstants parse_constants(const json &j) {
  ObjectReader r(j, "constants");
  PhysConstants c;
  c.hbar = r.number("hbar", 1.0);
  c.mass = r.number("mass", 1.0);
  r.finish();
  c.validate();
  return c;
}

AnalyzeOptions parse_analysis(const json &j) {
  ObjectReader r(j, "analysis");
  AnalyzeOptions o;
  if (r.has("window")) {
    const json &w = r.at("window");
    if (!w.is_array() || w.size() != 2)
      fail("'analysis.window' must be [lo, hi]");
    const double lo = ObjectReader::as_number(w[0], "analysis.window[0]");
    const double hi = ObjectReader::as_number(w[1], "analysis.window[1]");
    if (!(hi > lo))
      fail("'analysis.window' must satisfy lo < hi");
    o.window = std::make_pair(lo, hi);
  }
  o.scan_points = r.integer("scan_points", o.scan_points);
  if (o.scan_points < 16)
    fail("'analysis.scan_points' must be at least 16");
  if (r.boolean("preserve_orientation", false))
    o.orientation = AnalyzeOptions::Orientation::Preserve;
  r.finish();
  return o;
}

OracleGridConfig parse_grid(const json &j) {
  ObjectReader r(j, "oracle_grid");
  OracleGridConfig g;
  g.x_min = r.optional_number("x_min");
  g.x_max = r.optional_number("x_max");
  g.n_points = r.integer("n_points", g.n_points);
  g.richardson = r.boolean("richardson", g.richardson);
  r.finish();
  if (g.x_min.has_value() != g.x_max.has_value())
    fail("'oracle_grid' needs both x_min and x_max, or neither");
  if (g.x_min && !(*g.x_max > *g.x_min))
    fail("'oracle_grid' needs x_min < x_max");
  if (g.n_points < 64)
    fail("'oracle_grid.n_points' must be at least 64");
  return g;
}

SweepConfig parse_sweep(const json &j) {
  ObjectReader r(j, "sweep");
  SweepConfig s;
  s.parameter = r.string("parameter");
  if (s.parameter != "tilde_eps")
    fail("'sweep.parameter' must be tilde_eps, got '" + s.parameter + "'");
  s.from = r.number("from");
  s.to = r.number("to");
  s.steps = r.integer("steps", 0);
  if (!r.has("steps"))
    fail("missing key 'sweep.steps'");
  if (s.steps < 1)
    fail("'sweep.steps' must be positive");
  const std::string model = r.string("model", "frozen_barrier");
  if (model == "frozen_barrier")
    s.model = SweepModel::FrozenBarrier;
  else if (model == "smooth_step")
    s.model = SweepModel::SmoothStep;
  else
    fail("'sweep.model' must be frozen_barrier or smooth_step, got '" + model + "'");
  r.finish();
  return s;
}

QuadratureOptions parse_tolerances(const json &j) {
  ObjectReader r(j, "tolerances");
  QuadratureOptions q;
  q.rel_tol = r.number("quadrature_rel_tol", q.rel_tol);
  const int depth = r.integer("quadrature_max_depth", static_cast<int>(q.max_depth));
  r.finish();
  if (!(q.rel_tol > 0.0 && q.rel_tol < 1e-3))
    fail("'tolerances.quadrature_rel_tol' must lie in (0, 1e-3)");
  if (depth < 4 || depth > 30)
    fail("'tolerances.quadrature_max_depth' must lie in [4, 30]");
  q.max_depth = static_cast<unsigned>(depth);
  return q;
}

ValidityThresholds parse_validity(const json &j) {
  ObjectReader r(j, "validity_thresholds");
  ValidityThresholds v;
  v.max_eps_over_hw = r.number("max_eps_over_hw", v.max_eps_over_hw);
  v.max_gamow = r.number("max_gamow", v.max_gamow);
  v.max_lambda = r.number("max_lambda", v.max_lambda);
  v.max_bprime_ratio = r.number("max_bprime_ratio", v.max_bprime_ratio);
  r.finish();
  for (double x : {v.max_eps_over_hw, v.max_gamow, v.max_lambda, v.max_bprime_ratio})
    if (!(x > 0.0))
      fail("'validity_thresholds' entries must be positive");
  return v;
}

RunConfig parse_config(const json &doc) {
  ObjectReader r(doc, "");
  const std::string schema = r.string("schema");
  if (schema != kSchemaVersion)
    fail("unsupported schema '" + schema + "', expected '" + kSchemaVersion + "'");
  RunConfig c;
  c.potential = parse_potential(r.at("potential"));
  if (r.has("constants"))
    c.constants = parse_constants(r.at("constants"));
  if (r.has("analysis"))
    c.analysis = parse_analysis(r.at("analysis"));
  if (r.has("oracle_grid"))
    c.oracle_grid = parse_grid(r.at("oracle_grid"));
  if (r.has("sweep"))
    c.sweep = parse_sweep(r.at("sweep"));
  if (r.has("tolerances"))
    c.quadrature = parse_tolerances(r.at("tolerances"));
  if (r.has("validity_thresholds"))
    c.validity = parse_validity(r.at("validity_thresholds"));
  r.finish();
  return c;
}

} // namespace

RunConfig parse_config_text(const std::string &text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception &e) {
    fail(std::string("config is not valid JSON: ") + e.what());
  }
  return parse_config(doc);
}

RunConfig load_config(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    fail("cannot read config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

} // namespace tunnelkit
