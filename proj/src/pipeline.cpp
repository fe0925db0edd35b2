#include "rydpol/pipeline.hpp"

#include <cmath>
#include <fstream>
#include <numbers>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "rydpol/errors.hpp"
#include "rydpol/multiband.hpp"
#include "rydpol/phase_diagram.hpp"
#include "rydpol/planewave.hpp"

namespace rydpol {

namespace fs = std::filesystem;

namespace {

constexpr double kPi = std::numbers::pi;

class Context {
 public:
  Context(const RunConfig& c, RunOutcome& out) : cfg(c), outcome(out) {}

  fs::path path(const std::string& name) {
    outcome.artifacts.push_back(name);
    return cfg.out_dir / name;
  }

  void columns(const std::string& name, const std::vector<std::string>& names,
               const std::vector<std::vector<double>>& cols) {
    write_columns(path(name), names, cols);
  }

  void field(const std::string& name, const PolaritonField& f) {
    write_field(path(name), f, cfg.precision, {{"mode", cfg.mode}});
  }

  void json_file(const std::string& name, const json& j) {
    std::ofstream os(path(name));
    if (!os) throw IoError("cannot write " + name);
    os << j.dump(2) << '\n';
  }

  const RunConfig& cfg;
  RunOutcome& outcome;
};

MediumProfile profile(const RunConfig& c) { return make_profile(c.atom, c.medium, c.n_points); }

HierarchyOptions hierarchy_options(const RunConfig& c, int order) {
  HierarchyOptions ho;
  ho.max_order = order;
  ho.scheme = c.scheme;
  ho.method = c.method;
  ho.evolve = c.steady;
  return ho;
}

void write_grid_one(Context& ctx, const std::string& name, const PolaritonField& one) {
  std::vector<std::vector<double>> cols(7);
  for (int i = 0; i < one.N; ++i) {
    cols[0].push_back(i * one.dx);
    for (int a = 0; a < 3; ++a) {
      cols[1 + 2 * a].push_back(one(a, i).real());
      cols[2 + 2 * a].push_back(one(a, i).imag());
    }
  }
  ctx.columns(name, {"x_um", "re_E", "im_E", "re_P", "im_P", "re_S", "im_S"}, cols);
}

void transmission_status(RunOutcome& out, const PolaritonField& one) {
  cplx e = one(kE, one.N - 1);
  out.status["transmission_abs"] = std::abs(e);
  out.status["transmission_arg"] = std::arg(e);
}

void record_convergence(RunOutcome& out, const HierarchyResult& r) {
  out.status["converged"] = r.converged;
  if (!r.converged) {
    out.status["partial"] = true;
    out.exit_code = kExitNotConverged;
    out.message = "steady state did not converge within t_max";
  }
}

void vortex_artifacts(Context& ctx, const ComplexGrid& g, double floor, const std::string& stem) {
  VortexOptions vo;
  vo.amplitude_floor = floor;
  if (g.rank == 2) {
    VortexSet set = find_vortices_2d(g, vo);
    ctx.json_file(stem + ".json", vortex_set_json(set));
    ctx.outcome.status["vortex_points"] = set.points.size();
  } else {
    VortexSet set = trace_vortex_tubes_3d(g, vo);
    ctx.json_file(stem + ".json", vortex_set_json(set));
    write_tube_polylines(ctx.path(stem + "_polylines.txt"), set);
    ctx.outcome.status["vortex_tubes"] = set.tubes.size();
    ctx.outcome.status["vortex_rings"] = set.ring_count();
  }
}

void run_single(Context& ctx) {
  const RunConfig& c = ctx.cfg;
  MediumProfile m = profile(c);
  HierarchyResult r = hierarchical_solve(m, c.atom, hierarchy_options(c, 1));
  {
    std::ofstream os(ctx.path("single_continuum.txt"));
    if (!os) throw IoError("cannot write single_continuum.txt");
    write_single_columns(os, r.continuum);
  }
  write_grid_one(ctx, "single_grid.txt", r.one);
  transmission_status(ctx.outcome, r.one);
  record_convergence(ctx.outcome, r);
}

void run_few(Context& ctx, int order) {
  const RunConfig& c = ctx.cfg;
  MediumProfile m = profile(c);
  HierarchyResult r = hierarchical_solve(m, c.atom, hierarchy_options(c, order));
  ctx.field("one.rpf", r.one);
  ctx.field("two.rpf", r.two);
  if (order == 3) ctx.field("three.rpf", r.three);
  transmission_status(ctx.outcome, r.one);
  const PolaritonField& top = order == 3 ? r.three : r.two;
  vortex_artifacts(ctx, component_grid(top, 0), c.vortices.amplitude_floor,
                   order == 3 ? "vortices_three" : "vortices_two");
  record_convergence(ctx.outcome, r);
}

std::vector<double> tau2_grid(const RunConfig& c, const MediumProfile& m) {
  CorrelationOptions o = c.correlations;
  if (c.tau2_points > 0) o.tau_points = c.tau2_points;
  if (c.tau2_max > 0) o.tau_max = c.tau2_max;
  return default_tau_grid(m, c.atom, o);
}

void run_g2(Context& ctx) {
  const RunConfig& c = ctx.cfg;
  MediumProfile m = profile(c);
  HierarchyResult r = hierarchical_solve(m, c.atom, hierarchy_options(c, 2));
  record_convergence(ctx.outcome, r);
  auto tau = default_tau_grid(m, c.atom, c.correlations);
  CorrelationMap g = g2_phi2(r.two, r.one, m, c.atom, tau, c.correlations);
  ctx.columns("g2.txt", {"tau_us", "g2", "phi2_rad"}, {g.tau1, g.g, g.phi});
}

void run_g3(Context& ctx) {
  const RunConfig& c = ctx.cfg;
  MediumProfile m = profile(c);
  HierarchyResult r = hierarchical_solve(m, c.atom, hierarchy_options(c, 3));
  record_convergence(ctx.outcome, r);
  auto tau1 = default_tau_grid(m, c.atom, c.correlations);
  auto tau2 = tau2_grid(c, m);
  CorrelationMap g = g3_phi3(r, m, c.atom, tau1, tau2, c.correlations);
  std::vector<std::vector<double>> cols(4);
  for (size_t i = 0; i < tau1.size(); ++i) {
    for (size_t j = 0; j < tau2.size(); ++j) {
      cols[0].push_back(tau1[i]);
      cols[1].push_back(tau2[j]);
      cols[2].push_back(g.g_at(i, j));
      cols[3].push_back(g.phi_at(i, j));
    }
  }
  ctx.columns("g3.txt", {"tau1_us", "tau2_us", "g3", "phi3_rad"}, cols);

  const double half = std::min(tau1.back(), tau2.back()) / std::sqrt(2.0);
  const int n = c.correlations.tau_points;
  std::vector<double> axis(n);
  for (int i = 0; i < n; ++i) axis[i] = -half + 2.0 * half * i / (n - 1);
  JacobiMap jm = to_jacobi_times(g, axis, axis);
  std::vector<std::vector<double>> jc(4);
  for (size_t i = 0; i < axis.size(); ++i) {
    for (size_t j = 0; j < axis.size(); ++j) {
      jc[0].push_back(axis[i]);
      jc[1].push_back(axis[j]);
      jc[2].push_back(jm.g[i * axis.size() + j]);
      jc[3].push_back(jm.phi[i * axis.size() + j]);
    }
  }
  ctx.columns("g3_jacobi.txt", {"eta_us", "zeta_us", "g3", "phi3_rad"}, jc);
}

void run_bands(Context& ctx) {
  const RunConfig& c = ctx.cfg;
  MediumProfile m = profile(c);
  const BandOptions& b = c.bands;
  BandParams bp = band_params(c.atom, m.rho_peak, b.si);
  // k_max is given in units of ω_D/c.
  const double kmax = b.k_max * bp.wd;
  auto axis = [&](int i) { return -kmax + 2.0 * kmax * i / (b.k_points - 1); };
  ctx.outcome.status["wd"] = bp.wd;
  ctx.outcome.status["wdt"] = bp.wdt;
  if (b.order == 2) {
    std::vector<std::vector<double>> cols(4);
    for (int i = 0; i < b.k_points; ++i) {
      double k = axis(i);
      auto K = bands_two(k, bp);
      cols[0].push_back(k);
      cols[1].push_back(K[0]);
      cols[2].push_back(K[1]);
      cols[3].push_back(schrodinger_two(k, bp));
    }
    ctx.columns("bands2.txt", {"k", "K_minus", "K_plus", "K_single_band"}, cols);
  } else if (b.order == 3) {
    std::vector<std::vector<double>> cols(6);
    for (int i = 0; i < b.k_points; ++i) {
      for (int j = 0; j < b.k_points; ++j) {
        double ke = axis(i), kz = axis(j);
        auto pt = bands_three(ke, kz, bp);
        cols[0].push_back(ke);
        cols[1].push_back(kz);
        for (int nu = 0; nu < 3; ++nu) cols[2 + nu].push_back(pt.K(nu));
        cols[5].push_back(massive_three(std::hypot(ke, kz), bp));
      }
    }
    ctx.columns("bands3.txt", {"k_eta", "k_zeta", "K0", "K1", "K2", "K_single_band"}, cols);
  } else {
    std::vector<std::vector<double>> cols(6);
    for (int i = 0; i < b.k_points; ++i) {
      for (int j = 0; j < b.k_points; ++j) {
        double k1 = axis(i), k2 = axis(j);
        auto pt = bands_four(k1, k2, 0.0, bp);
        cols[0].push_back(k1);
        cols[1].push_back(k2);
        for (int nu = 0; nu < 4; ++nu) cols[2 + nu].push_back(pt.K(nu));
      }
    }
    ctx.columns("bands4_kappa3_0.txt", {"kappa1", "kappa2", "K0", "K1", "K2", "K3"}, cols);
  }
}

void run_planewave(Context& ctx) {
  const RunConfig& c = ctx.cfg;
  const PlaneWaveRunOptions& o = c.planewave;
  MediumProfile m = profile(c);
  BandParams bp = band_params(c.atom, m.rho_peak, false);
  double r_b = o.r_b > 0 ? o.r_b : c.r_b * band_unit_to_si(c.atom, m.rho_peak);
  if (!(r_b > 0)) throw ConfigError("planewave.r_b", "needs a positive blockade radius");
  PlaneWaveBasis basis = make_basis_count(o.cell_over_rb * r_b, o.basis_count);
  PlaneWaveOptions po;
  po.bp = bp;
  po.r_b = r_b;
  po.quad_per_rb = o.quad_per_rb;
  ctx.outcome.status["basis_size"] = basis.size();
  ctx.outcome.status["r_b_natural"] = r_b;

  auto emit = [&](PropagationMode mode, const std::string& name) {
    PlaneWaveResult res = planewave_propagate(basis, o.R, mode, po);
    ctx.outcome.status[name + "_tail_weight"] = res.tail_weight;
    if (res.aliasing_warning) ctx.outcome.status[name + "_aliasing_warning"] = true;
    const double hw = o.image_half_width * r_b;
    std::vector<std::vector<double>> cols(7);
    for (size_t r = 0; r < o.R.size(); ++r) {
      for (int i = 0; i < o.image_points; ++i) {
        for (int j = 0; j < o.image_points; ++j) {
          double eta = -hw + 2.0 * hw * i / std::max(o.image_points - 1, 1);
          double zeta = -hw + 2.0 * hw * j / std::max(o.image_points - 1, 1);
          cplx v = res.field(basis, r, eta, zeta);
          cols[0].push_back(o.R[r]);
          cols[1].push_back(eta);
          cols[2].push_back(zeta);
          cols[3].push_back(v.real());
          cols[4].push_back(v.imag());
          cols[5].push_back(std::abs(v));
          cols[6].push_back(std::arg(v));
        }
      }
    }
    ctx.columns("planewave_" + name + ".txt", {"R", "eta", "zeta", "re", "im", "abs", "arg"}, cols);
  };
  if (o.multiband) emit(PropagationMode::Multiband, "multiband");
  if (o.singleband) emit(PropagationMode::Singleband, "singleband");
}

void run_vortices(Context& ctx) {
  const RunConfig& c = ctx.cfg;
  if (!c.vortices.input.empty()) {
    LoadedField lf = read_field(c.vortices.input);
    vortex_artifacts(ctx, component_grid(lf.field, c.vortices.component), c.vortices.amplitude_floor,
                     "vortices");
    return;
  }
  MediumProfile m = profile(c);
  HierarchyResult r = hierarchical_solve(m, c.atom, hierarchy_options(c, 2));
  record_convergence(ctx.outcome, r);
  vortex_artifacts(ctx, component_grid(r.two, c.vortices.component), c.vortices.amplitude_floor, "vortices");
}

void run_scan(Context& ctx) {
  const RunConfig& c = ctx.cfg;
  LambdaPhiRunnerConfig rc;
  rc.atom = c.atom;
  rc.geometry = c.medium;
  rc.n_points = c.scan.n_points;
  rc.hierarchy = hierarchy_options(c, 3);
  std::vector<double> phi;
  for (double p : c.scan.phi) phi.push_back(p * kPi);
  PhaseDiagram pd = scan_phase_diagram(c.scan.lambda, phi, make_lambda_phi_runner(rc), c.scan.parallel_points);
  pd.phi = c.scan.phi;
  for (auto& line : pd.single_curve)
    for (auto& p : line) p[1] /= kPi;
  for (auto& line : pd.pair_curve)
    for (auto& p : line) p[1] /= kPi;
  ctx.json_file("phase_diagram.json", phase_diagram_json(pd));
  size_t excluded = 0;
  for (bool b : pd.excluded) excluded += b;
  ctx.outcome.status["excluded_points"] = excluded;
}

void run_export(Context& ctx) {
  const RunConfig& c = ctx.cfg;
  if (c.export_opts.input.empty()) throw ConfigError("export.input", "a field container is required");
  regrid_and_export(c.export_opts.input, c.export_opts.slice, ctx.path("slice.txt"));
}

}  // namespace

void regrid_and_export(const fs::path& field_file, const SliceSpec& spec, const fs::path& out_file) {
  LoadedField lf = read_field(field_file);
  write_slice(out_file, extract_slice(lf.field, spec));
}

RunOutcome run(const RunConfig& config) {
  RunOutcome out;
#ifdef _OPENMP
  if (config.threads > 0) omp_set_num_threads(config.threads);
#endif
  try {
    std::error_code ec;
    fs::create_directories(config.out_dir, ec);
    if (ec) throw IoError("cannot create output directory " + config.out_dir.string() + ": " + ec.message());
  } catch (const IoError& e) {
    out.exit_code = kExitIo;
    out.message = e.what();
    return out;
  }

  Context ctx(config, out);
  try {
    const std::string& mode = config.mode;
    if (mode == "single") run_single(ctx);
    else if (mode == "two") run_few(ctx, 2);
    else if (mode == "three") run_few(ctx, 3);
    else if (mode == "g2") run_g2(ctx);
    else if (mode == "g3") run_g3(ctx);
    else if (mode == "bands") run_bands(ctx);
    else if (mode == "planewave") run_planewave(ctx);
    else if (mode == "vortices") run_vortices(ctx);
    else if (mode == "scan") run_scan(ctx);
    else if (mode == "export") run_export(ctx);
    else throw ConfigError("run.mode", "unknown mode '" + mode + "'");
  } catch (const ConfigError& e) {
    out.exit_code = kExitConfig;
    out.message = e.what();
  } catch (const DomainError& e) {
    out.exit_code = kExitConfig;
    out.message = e.what();
  } catch (const SolverError& e) {
    out.exit_code = kExitNotConverged;
    out.message = e.what();
    out.status["partial"] = true;
  } catch (const IoError& e) {
    out.exit_code = kExitIo;
    out.message = e.what();
  }

  out.status["exit_code"] = out.exit_code;
  if (!out.message.empty()) out.status["message"] = out.message;
  try {
    write_manifest(config.out_dir, resolved_config(config), out.artifacts, out.status);
  } catch (const IoError& e) {
    if (out.exit_code == kExitOk) {
      out.exit_code = kExitIo;
      out.message = e.what();
    }
  }
  return out;
}

}  // namespace rydpol
