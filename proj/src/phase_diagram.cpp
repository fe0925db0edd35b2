#include "rydpol/phase_diagram.hpp"

namespace rydpol {

ScanRunner make_lambda_phi_runner(const LambdaPhiRunnerConfig& cfg) {
  return [cfg](double lambda, double phi) {
    LambdaPhiTarget t = od_and_rb_for(lambda, phi, cfg.atom, cfg.geometry.l_eff, cfg.geometry.od_scale);
    AtomicParams p = cfg.atom.with_blockade_radius(t.r_b);
    MediumGeometry geom = cfg.geometry;
    geom.od = t.od;
    MediumProfile m = make_profile(p, geom, cfg.n_points);
    HierarchyOptions ho = cfg.hierarchy;
    ho.max_order = 3;
    HierarchyResult r = hierarchical_solve(m, p, ho);
    ScanSample s;
    s.field = component_grid(r.three, 0);
    s.converged = r.converged;
    return s;
  };
}

}  // namespace rydpol
