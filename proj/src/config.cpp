#include "rydpol/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include "rydpol/errors.hpp"

namespace rydpol {

namespace {

using units::Dimension;

// Reads the keys of one section, rejecting unknown ones.
class Section {
 public:
  Section(const json& root, std::string name) : name_(std::move(name)) {
    if (root.contains(name_)) {
      node_ = root.at(name_);
      if (!node_.is_object()) throw ConfigError(name_, "must be an object");
    } else {
      node_ = json::object();
    }
  }

  bool has(const std::string& key) const { return node_.contains(key); }

  double quantity(const std::string& key, double fallback, Dimension dim) {
    seen_.insert(key);
    if (!node_.contains(key)) return fallback;
    const json& v = node_.at(key);
    try {
      if (v.is_number()) return v.get<double>();
      if (v.is_string()) return units::parse_quantity(v.get<std::string>(), dim);
    } catch (const ConfigError& e) {
      throw ConfigError(path(key), e.what());
    }
    throw ConfigError(path(key), "expected a number or a quantity string");
  }

  double number(const std::string& key, double fallback) {
    return quantity(key, fallback, Dimension::Dimensionless);
  }

  int integer(const std::string& key, int fallback) {
    seen_.insert(key);
    if (!node_.contains(key)) return fallback;
    const json& v = node_.at(key);
    if (!v.is_number_integer()) throw ConfigError(path(key), "expected an integer");
    return v.get<int>();
  }

  bool boolean(const std::string& key, bool fallback) {
    seen_.insert(key);
    if (!node_.contains(key)) return fallback;
    const json& v = node_.at(key);
    if (!v.is_boolean()) throw ConfigError(path(key), "expected true or false");
    return v.get<bool>();
  }

  std::string string(const std::string& key, const std::string& fallback) {
    seen_.insert(key);
    if (!node_.contains(key)) return fallback;
    const json& v = node_.at(key);
    if (!v.is_string()) throw ConfigError(path(key), "expected a string");
    return v.get<std::string>();
  }

  std::vector<double> numbers(const std::string& key, const std::vector<double>& fallback) {
    seen_.insert(key);
    if (!node_.contains(key)) return fallback;
    const json& v = node_.at(key);
    if (!v.is_array()) throw ConfigError(path(key), "expected an array of numbers");
    std::vector<double> out;
    for (const auto& x : v) {
      if (!x.is_number()) throw ConfigError(path(key), "expected an array of numbers");
      out.push_back(x.get<double>());
    }
    return out;
  }

  std::vector<int> integers(const std::string& key, const std::vector<int>& fallback) {
    seen_.insert(key);
    if (!node_.contains(key)) return fallback;
    const json& v = node_.at(key);
    if (!v.is_array()) throw ConfigError(path(key), "expected an array of integers");
    std::vector<int> out;
    for (const auto& x : v) {
      if (!x.is_number_integer()) throw ConfigError(path(key), "expected an array of integers");
      out.push_back(x.get<int>());
    }
    return out;
  }

  void finish() const {
    for (const auto& [k, _] : node_.items())
      if (!seen_.count(k)) throw ConfigError(path(k), "unknown key");
  }

  std::string path(const std::string& key) const { return name_ + "." + key; }

 private:
  std::string name_;
  json node_;
  std::set<std::string> seen_;
};

Advection parse_scheme(const std::string& s) {
  if (s == "upwind1") return Advection::Upwind1;
  if (s == "upwind2") return Advection::Upwind2;
  if (s == "periodic_central") return Advection::PeriodicCentral;
  throw ConfigError("solver.scheme", "expected upwind1, upwind2 or periodic_central");
}

std::string scheme_name(Advection a) {
  switch (a) {
    case Advection::Upwind1: return "upwind1";
    case Advection::Upwind2: return "upwind2";
    case Advection::PeriodicCentral: return "periodic_central";
  }
  return "upwind2";
}

Integrator parse_integrator(const std::string& s, const std::string& field) {
  if (s == "rk4") return Integrator::RK4;
  if (s == "sdirk2") return Integrator::SDIRK2;
  throw ConfigError(field, "expected rk4 or sdirk2");
}

std::string integrator_name(Integrator i) { return i == Integrator::RK4 ? "rk4" : "sdirk2"; }

}  // namespace

RunConfig parse_config(const json& j) {
  if (!j.is_object()) throw ConfigError("", "configuration must be a JSON object");
  static const std::set<std::string> sections{"run", "atom", "medium", "grid", "solver", "correlations",
                                              "bands", "planewave", "scan", "vortices", "export"};
  for (const auto& [k, _] : j.items())
    if (!sections.count(k)) throw ConfigError(k, "unknown section");

  RunConfig c;
  {
    Section s(j, "run");
    c.mode = s.string("mode", c.mode);
    if (std::find(run_modes().begin(), run_modes().end(), c.mode) == run_modes().end())
      throw ConfigError("run.mode", "unknown mode '" + c.mode + "'");
    c.out_dir = s.string("out", c.out_dir.string());
    c.precision = parse_precision(s.string("precision", to_string(c.precision)));
    c.threads = s.integer("threads", c.threads);
    if (c.threads < 0) throw ConfigError("run.threads", "must be >= 0");
    s.finish();
  }
  {
    Section s(j, "atom");
    AtomicParams& a = c.atom;
    a.g_coupling = s.quantity("g", a.g_coupling, Dimension::Coupling);
    a.rabi = s.quantity("rabi", a.rabi, Dimension::Frequency);
    a.gamma_p = s.quantity("gamma_p", a.gamma_p, Dimension::Frequency);
    a.gamma_s = s.quantity("gamma_s", a.gamma_s, Dimension::Frequency);
    a.delta_1 = s.quantity("delta_1", a.delta_1, Dimension::Frequency);
    a.delta_2 = s.quantity("delta_2", a.delta_2, Dimension::Frequency);
    a.light_speed = s.quantity("c", a.light_speed, Dimension::Velocity);
    if (s.has("c6") && s.has("r_b")) throw ConfigError("atom.c6", "give either c6 or r_b, not both");
    if (s.has("c6")) {
      a.c6 = s.quantity("c6", a.c6, Dimension::C6);
      c.r_b = a.c6 > 0 ? blockade_radius(a) : 0.0;
    } else {
      c.r_b = s.quantity("r_b", c.r_b, Dimension::Length);
      if (c.r_b < 0) throw ConfigError("atom.r_b", "must be >= 0");
      a.c6 = c6_for_blockade_radius(a.rabi, a.delta_1, c.r_b);
    }
    s.finish();
    a.validate();
  }
  {
    Section s(j, "medium");
    MediumGeometry& m = c.medium;
    m.od = s.number("od", m.od);
    m.l_eff = s.quantity("l_eff", m.l_eff, Dimension::Length);
    m.center = s.quantity("center", m.center, Dimension::Length);
    m.x_out = s.quantity("x_out", m.x_out, Dimension::Length);
    m.od_scale = s.number("od_scale", m.od_scale);
    m.rho_peak_override = s.number("rho_peak", m.rho_peak_override);
    std::string shape = s.string("shape", m.shape == DensityShape::Gaussian ? "gaussian" : "box");
    if (shape == "gaussian") m.shape = DensityShape::Gaussian;
    else if (shape == "box") m.shape = DensityShape::Box;
    else throw ConfigError("medium.shape", "expected gaussian or box");
    s.finish();
  }
  {
    Section s(j, "grid");
    c.n_points = s.integer("n_points", c.n_points);
    if (c.n_points < 3) throw ConfigError("grid.n_points", "must be >= 3");
    s.finish();
  }
  {
    Section s(j, "solver");
    c.scheme = parse_scheme(s.string("scheme", scheme_name(c.scheme)));
    std::string method = s.string("method", c.method == SteadyMethod::Sweep ? "sweep" : "evolve");
    if (method == "sweep") c.method = SteadyMethod::Sweep;
    else if (method == "evolve") c.method = SteadyMethod::Evolve;
    else throw ConfigError("solver.method", "expected sweep or evolve");
    c.steady.integrator = parse_integrator(s.string("integrator", integrator_name(c.steady.integrator)),
                                           "solver.integrator");
    c.steady.dt = s.quantity("dt", c.steady.dt, Dimension::Time);
    c.steady.tol = s.number("tol", c.steady.tol);
    c.steady.t_max = s.quantity("t_max", c.steady.t_max, Dimension::Time);
    if (!(c.steady.tol > 0)) throw ConfigError("solver.tol", "must be > 0");
    s.finish();
  }
  {
    Section s(j, "correlations");
    CorrelationOptions& o = c.correlations;
    o.tau_max = s.quantity("tau_max", o.tau_max, Dimension::Time);
    o.tau_points = s.integer("tau_points", o.tau_points);
    o.substeps = s.integer("substeps", o.substeps);
    o.integrator = parse_integrator(s.string("integrator", integrator_name(o.integrator)),
                                    "correlations.integrator");
    c.tau2_points = s.integer("tau2_points", c.tau2_points);
    c.tau2_max = s.quantity("tau2_max", c.tau2_max, Dimension::Time);
    if (o.tau_points < 2) throw ConfigError("correlations.tau_points", "must be >= 2");
    if (o.substeps < 1) throw ConfigError("correlations.substeps", "must be >= 1");
    if (c.tau2_points != 0 && c.tau2_points < 2) throw ConfigError("correlations.tau2_points", "must be >= 2");
    s.finish();
  }
  {
    Section s(j, "bands");
    BandOptions& b = c.bands;
    b.order = s.integer("order", b.order);
    b.k_max = s.number("k_max", b.k_max);
    b.k_points = s.integer("k_points", b.k_points);
    b.si = s.boolean("si", b.si);
    if (b.order < 2 || b.order > 4) throw ConfigError("bands.order", "must be 2, 3 or 4");
    if (b.k_points < 2) throw ConfigError("bands.k_points", "must be >= 2");
    s.finish();
  }
  {
    Section s(j, "planewave");
    PlaneWaveRunOptions& o = c.planewave;
    o.r_b = s.number("r_b", o.r_b);
    o.cell_over_rb = s.number("cell_over_rb", o.cell_over_rb);
    o.basis_count = static_cast<size_t>(s.integer("basis_count", static_cast<int>(o.basis_count)));
    o.R = s.numbers("R", o.R);
    o.quad_per_rb = s.integer("quad_per_rb", o.quad_per_rb);
    o.image_half_width = s.number("image_half_width", o.image_half_width);
    o.image_points = s.integer("image_points", o.image_points);
    o.multiband = s.boolean("multiband", o.multiband);
    o.singleband = s.boolean("singleband", o.singleband);
    if (o.basis_count < 1) throw ConfigError("planewave.basis_count", "must be >= 1");
    if (!(o.cell_over_rb > 2)) throw ConfigError("planewave.cell_over_rb", "must be > 2");
    if (o.quad_per_rb < 2) throw ConfigError("planewave.quad_per_rb", "must be >= 2");
    s.finish();
  }
  {
    Section s(j, "scan");
    ScanOptions& o = c.scan;
    o.lambda = s.numbers("lambda", o.lambda);
    o.phi = s.numbers("phi", o.phi);
    o.n_points = s.integer("n_points", o.n_points);
    o.parallel_points = s.boolean("parallel_points", o.parallel_points);
    if (o.lambda.empty() || o.phi.empty()) throw ConfigError("scan.lambda", "grids must be non-empty");
    for (double p : o.phi)
      if (!(p > 0)) throw ConfigError("scan.phi", "values must be > 0");
    s.finish();
  }
  {
    Section s(j, "vortices");
    c.vortices.input = s.string("input", c.vortices.input);
    c.vortices.component = s.integer("component", c.vortices.component);
    c.vortices.amplitude_floor = s.number("amplitude_floor", c.vortices.amplitude_floor);
    s.finish();
  }
  {
    Section s(j, "export");
    ExportOptions& e = c.export_opts;
    e.input = s.string("input", e.input);
    std::string kind = s.string("kind", e.slice.kind == SliceSpec::Kind::Axis ? "axis" : "jacobi");
    if (kind == "axis") e.slice.kind = SliceSpec::Kind::Axis;
    else if (kind == "jacobi") e.slice.kind = SliceSpec::Kind::Jacobi;
    else throw ConfigError("export.kind", "expected axis or jacobi");
    e.slice.component = s.integer("component", e.slice.component);
    e.slice.fixed = s.integers("fixed", e.slice.fixed);
    e.slice.fixed_coord = s.integer("fixed_coord", e.slice.fixed_coord);
    e.slice.value = s.quantity("value", e.slice.value, Dimension::Length);
    e.slice.lo = s.quantity("lo", e.slice.lo, Dimension::Length);
    e.slice.hi = s.quantity("hi", e.slice.hi, Dimension::Length);
    e.slice.points = s.integer("points", e.slice.points);
    s.finish();
  }
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open config " + path.string());
  json j;
  try {
    j = json::parse(is, nullptr, true, true);
  } catch (const json::parse_error& e) {
    throw ConfigError("", std::string("config is not valid JSON: ") + e.what());
  }
  return parse_config(j);
}

json resolved_config(const RunConfig& c) {
  json j;
  j["run"] = {{"mode", c.mode}, {"out", c.out_dir.string()}, {"precision", to_string(c.precision)},
              {"threads", c.threads}};
  j["atom"] = {{"g", c.atom.g_coupling},     {"rabi", c.atom.rabi},       {"gamma_p", c.atom.gamma_p},
               {"gamma_s", c.atom.gamma_s},  {"delta_1", c.atom.delta_1}, {"delta_2", c.atom.delta_2},
               {"c", c.atom.light_speed},    {"r_b", c.r_b}};
  j["medium"] = {{"od", c.medium.od},
                 {"l_eff", c.medium.l_eff},
                 {"center", c.medium.center},
                 {"x_out", c.medium.x_out},
                 {"od_scale", c.medium.od_scale},
                 {"rho_peak", c.medium.rho_peak_override},
                 {"shape", c.medium.shape == DensityShape::Gaussian ? "gaussian" : "box"}};
  j["grid"] = {{"n_points", c.n_points}};
  j["solver"] = {{"scheme", scheme_name(c.scheme)},
                 {"method", c.method == SteadyMethod::Sweep ? "sweep" : "evolve"},
                 {"integrator", integrator_name(c.steady.integrator)},
                 {"dt", c.steady.dt},
                 {"tol", c.steady.tol},
                 {"t_max", c.steady.t_max}};
  j["correlations"] = {{"tau_max", c.correlations.tau_max},
                       {"tau_points", c.correlations.tau_points},
                       {"substeps", c.correlations.substeps},
                       {"integrator", integrator_name(c.correlations.integrator)},
                       {"tau2_points", c.tau2_points},
                       {"tau2_max", c.tau2_max}};
  j["bands"] = {{"order", c.bands.order}, {"k_max", c.bands.k_max}, {"k_points", c.bands.k_points},
                {"si", c.bands.si}};
  j["planewave"] = {{"r_b", c.planewave.r_b},
                    {"cell_over_rb", c.planewave.cell_over_rb},
                    {"basis_count", c.planewave.basis_count},
                    {"R", c.planewave.R},
                    {"quad_per_rb", c.planewave.quad_per_rb},
                    {"image_half_width", c.planewave.image_half_width},
                    {"image_points", c.planewave.image_points},
                    {"multiband", c.planewave.multiband},
                    {"singleband", c.planewave.singleband}};
  j["scan"] = {{"lambda", c.scan.lambda}, {"phi", c.scan.phi}, {"n_points", c.scan.n_points},
               {"parallel_points", c.scan.parallel_points}};
  j["vortices"] = {{"input", c.vortices.input}, {"component", c.vortices.component},
                   {"amplitude_floor", c.vortices.amplitude_floor}};
  const auto& sl = c.export_opts.slice;
  j["export"] = {{"input", c.export_opts.input},
                 {"kind", sl.kind == SliceSpec::Kind::Axis ? "axis" : "jacobi"},
                 {"component", sl.component},
                 {"fixed", sl.fixed},
                 {"fixed_coord", sl.fixed_coord},
                 {"value", sl.value},
                 {"lo", sl.lo},
                 {"hi", sl.hi},
                 {"points", sl.points}};
  return j;
}

}  // namespace rydpol
