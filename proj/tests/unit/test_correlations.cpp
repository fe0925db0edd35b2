#include <cmath>
#include <numbers>

#include "doctest.h"
#include "rydpol/correlations.hpp"
#include "rydpol/errors.hpp"
#include "rydpol/jacobi.hpp"

using namespace rydpol;

namespace {
MediumProfile medium(const AtomicParams& p, double od, int N) {
  MediumGeometry g;
  g.od = od;
  return make_profile(p, g, N);
}

CorrelationOptions coarse() {
  CorrelationOptions o;
  o.tau_points = 24;
  o.substeps = 8;
  return o;
}
}  // namespace

TEST_CASE("non-interacting photons are uncorrelated") {
  AtomicParams p = default_atomic_params();
  p.c6 = 0;
  auto m = medium(p, 110, 24);
  auto r = hierarchical_solve(m, p);
  auto o = coarse();
  auto tau = default_tau_grid(m, p, o);
  auto g2 = g2_phi2(r.two, r.one, m, p, tau, o);
  for (size_t i = 0; i < tau.size(); ++i) {
    CHECK(std::abs(g2.g[i] - 1) < 1e-6);
    CHECK(std::abs(g2.phi[i]) < 1e-6);
  }
  auto g3 = g3_phi3(r, m, p, tau, tau, o);
  for (size_t i = 0; i < g3.g.size(); ++i) {
    CHECK(std::abs(g3.g[i] - 1) < 1e-6);
    CHECK(std::abs(g3.phi[i]) < 1e-6);
  }
}

TEST_CASE("zero delay is the stationary slice") {
  AtomicParams p = default_atomic_params();
  auto m = medium(p, 110, 32);
  auto r = hierarchical_solve(m, p, HierarchyOptions{.max_order = 2});
  auto o = coarse();
  auto g2 = g2_phi2(r.two, r.one, m, p, default_tau_grid(m, p, o), o);
  const int N = m.grid.n_points;
  cplx e = r.one.at(kE, N - 1);
  CHECK(g2.ratio[0] == r.two(0, N - 1, N - 1) / (e * e));
}

TEST_CASE("blockade bunches photon pairs and decorrelates at long delay") {
  AtomicParams p = default_atomic_params();
  auto m = medium(p, 110, 64);
  auto r = hierarchical_solve(m, p, HierarchyOptions{.max_order = 2});
  CorrelationOptions o;
  o.tau_points = 200;
  o.substeps = 4;
  o.tau_max = 20 * transit_time(m, p);
  auto tau = default_tau_grid(m, p, o);
  auto g2 = g2_phi2(r.two, r.one, m, p, tau, o);
  CHECK(g2.g[0] > 1.0);
  CHECK(std::abs(g2.g.back() - 1) < 1e-3);
}

TEST_CASE("conditional faces follow the conditional single-photon field") {
  AtomicParams p = default_atomic_params();
  auto m = medium(p, 90, 20);
  auto r = hierarchical_solve(m, p);
  auto o = coarse();
  auto tau = default_tau_grid(m, p, o);
  const int N = m.grid.n_points;
  double worst = 0;
  bool first = true;
  conditional_two_after_one(r.three, r.two, m, p, tau,
                            [&](size_t i, double, const PolaritonField& two, const PolaritonField& one) {
                              if (i == 0) {
                                auto s = detect_first(r.three);
                                first = max_rel_diff(s, two) == 0.0;
                              }
                              for (int a1 = 0; a1 < 3; ++a1)
                                for (int j = 1; j < N; ++j) {
                                  // second slot in E at x = 0
                                  cplx face = two(a1 * 3 + kE, j, 0);
                                  worst = std::max(worst, std::abs(face - one(a1, j)));
                                }
                            },
                            o);
  CHECK(first);
  CHECK(worst < 1e-10);
}

TEST_CASE("grids must start at zero and increase") {
  AtomicParams p = default_atomic_params();
  auto m = medium(p, 10, 12);
  auto r = hierarchical_solve(m, p, HierarchyOptions{.max_order = 2});
  CHECK_THROWS_AS(g2_phi2(r.two, r.one, m, p, {0.1, 0.2}), DomainError);
  CHECK_THROWS_AS(g2_phi2(r.two, r.one, m, p, {0.0, 0.2, 0.1}), DomainError);
}

TEST_CASE("temporal Jacobi unfolding") {
  // Substitution table for t1 <= t2 <= t3 with τ1 = t2 - t1, τ2 = t3 - t2.
  struct Row {
    double tau1, tau2, eta, zeta;
  };
  const double s2 = std::sqrt(2.0), s6 = std::sqrt(6.0);
  for (Row r : {Row{0, 0, 0, 0}, Row{1, 0, 1 / s2, -1 / s6}, Row{0, 1, 0, -2 / s6}, Row{1, 1, 1 / s2, -3 / s6}}) {
    auto z = temporal_jacobi(0.0, r.tau1, r.tau1 + r.tau2);
    CHECK(z[0] == doctest::Approx(r.eta));
    CHECK(z[1] == doctest::Approx(r.zeta));
  }

  CorrelationMap map;
  map.order = 3;
  for (int i = 0; i < 11; ++i) {
    map.tau1.push_back(0.1 * i);
    map.tau2.push_back(0.1 * i);
  }
  for (double a : map.tau1)
    for (double b : map.tau2) map.ratio.push_back(cplx(1 + a * a + 0.5 * b, a - 2 * b));

  // The unfolded map is invariant under 120° rotations and η -> -η.
  const double c = std::cos(2 * std::numbers::pi / 3), s = std::sin(2 * std::numbers::pi / 3);
  double worst = 0;
  for (double eta = -0.3; eta <= 0.3; eta += 0.05)
    for (double zeta = -0.3; zeta <= 0.3; zeta += 0.05) {
      cplx v = jacobi_lookup(map, eta, zeta);
      worst = std::max(worst, std::abs(v - jacobi_lookup(map, c * eta - s * zeta, s * eta + c * zeta)));
      worst = std::max(worst, std::abs(v - jacobi_lookup(map, -eta, zeta)));
    }
  CHECK(worst < 1e-12);
  CHECK(jacobi_lookup(map, 0, 0) == map.ratio[0]);
  CHECK(std::isnan(jacobi_lookup(map, 5.0, 0.0).real()));

  std::vector<double> axis{-0.2, 0.0, 0.2};
  auto jm = to_jacobi_times(map, axis, axis);
  CHECK(jm.g.size() == 9);
  CHECK(jm.g[4] == doctest::Approx(1.0));
}
