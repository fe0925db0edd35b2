#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "rydpol/evolver.hpp"
#include "rydpol/hamiltonian_oracle.hpp"

using namespace rydpol;
using rydpol::testing::dense_steady;
using rydpol::testing::random_field;
using rydpol::testing::rhs_oracle;

namespace {
MediumProfile small_medium(const AtomicParams& p, double od, int N) {
  MediumGeometry g;
  g.od = od;
  return make_profile(p, g, N);
}

double rel_err(const std::vector<cplx>& a, const PolaritonField& f, size_t site) {
  double num = 0, den = 0;
  for (size_t c = 0; c < a.size(); ++c) {
    num = std::max(num, std::abs(a[c] - f.at(static_cast<int>(c), site)));
    den = std::max(den, std::abs(a[c]));
  }
  return num / den;
}
}  // namespace

TEST_CASE("component labels") {
  CHECK(component_count(3) == 27);
  CHECK(component_name(3, 0) == "EEE");
  CHECK(component_name(3, 26) == "SSS");
  CHECK(component_from_name("PSE") == 1 * 9 + 2 * 3 + 0);
  for (int a = 0; a < 27; ++a) {
    CHECK(component_from_name(component_name(3, a)) == a);
    for (int k = 0; k < 3; ++k) {
      int l = slot_label(3, a, k);
      CHECK(with_slot_label(3, a, k, l) == a);
    }
  }
  CHECK(drop_slot(3, component_from_name("ESP"), 1) == component_from_name("EP"));
}

TEST_CASE("oracle has the single block on the diagonal of n = 1") {
  AtomicParams p = default_atomic_params();
  std::vector<double> g{2.5}, x{0.0};
  Eigen::MatrixXcd H = build_hamiltonian_oracle(1, p, g, x, 0.0);
  CHECK((H - Eigen::MatrixXcd(single_block(p, 2.5))).norm() == 0.0);
}

TEST_CASE("interaction only on doubly excited Rydberg labels") {
  AtomicParams p = default_atomic_params().with_blockade_radius(15.3);
  std::vector<double> g{0.0, 0.0, 0.0}, x{10.0, 20.0, 35.0};
  AtomicParams bare = p;
  bare.c6 = 0;
  Eigen::MatrixXcd dH = build_hamiltonian_oracle(3, p, g, x, 0.0) - build_hamiltonian_oracle(3, bare, g, x, 0.0);
  for (int a = 0; a < 27; ++a) {
    int s = 0;
    for (int k = 0; k < 3; ++k) s += slot_label(3, a, k) == kS;
    double expect = 0;
    for (int k = 0; k < 3; ++k)
      for (int l = k + 1; l < 3; ++l)
        if (slot_label(3, a, k) == kS && slot_label(3, a, l) == kS) expect += vdw_pair(x[k], x[l], p, 0.0);
    CHECK(std::abs(dH(a, a) - expect) <= 1e-12 * std::max(1.0, expect));
    if (s < 2) CHECK(dH(a, a) == 0.0);
  }
  CHECK(dH(26, 26).real() == doctest::Approx(vdw_pair(10, 20, p, 0) + vdw_pair(10, 35, p, 0) +
                                             vdw_pair(20, 35, p, 0)));
}

TEST_CASE("operator action matches the Kronecker-sum oracle") {
  AtomicParams p = default_atomic_params().with_blockade_radius(15.3);
  std::mt19937_64 rng(2024);
  for (int n : {1, 2, 3}) {
    const int N = n == 3 ? 12 : 24;
    auto m = small_medium(p, 90, N);
    PolaritonOperator op(n, m, p, Advection::Upwind2);
    std::uniform_int_distribution<int> pick(2, N - 1);
    for (int t = 0; t < 100; ++t) {
      auto y = random_field(n, N, m.grid.dx, rng);
      PolaritonField out = op.make_field();
      op.apply(y, out);
      std::array<int, 3> idx{0, 0, 0};
      for (int k = 0; k < n; ++k) idx[k] = pick(rng);
      auto expect = rhs_oracle(y, m, p, idx);
      REQUIRE(rel_err(expect, out, y.site(idx)) < 1e-12);
    }
  }
}

TEST_CASE("vacuum generator is pure advection") {
  AtomicParams p = default_atomic_params();
  p.rabi = 0;
  p.c6 = 0;
  MediumGeometry g;
  g.od = 0;
  auto m = make_profile(p, g, 16);
  PolaritonOperator op(2, m, p);
  LocalMatrix L;
  op.local_matrix({5, 7, 0}, L);
  for (int a = 0; a < 9; ++a)
    for (int b = 0; b < 9; ++b)
      if (a != b) CHECK(L(a, b) == 0.0);
  CHECK(L(0, 0) == 0.0);
}

TEST_CASE("sweep equals a sparse direct solve") {
  AtomicParams p = default_atomic_params().with_blockade_radius(15.3);
  for (auto scheme : {Advection::Upwind1, Advection::Upwind2}) {
    auto m = small_medium(p, 90, 10);
    HierarchyOptions o;
    o.scheme = scheme;
    auto r = hierarchical_solve(m, p, o);
    PolaritonOperator op1(1, m, p, scheme), op2(2, m, p, scheme), op3(3, m, p, scheme);
    Boundary b1;
    Boundary b2;
    b2.lower = &r.one;
    Boundary b3;
    b3.lower = &r.two;
    CHECK(max_rel_diff(dense_steady(op1, b1), r.one) < 1e-10);
    CHECK(max_rel_diff(dense_steady(op2, b2), r.two) < 1e-10);
    CHECK(max_rel_diff(dense_steady(op3, b3), r.three) < 1e-10);
    CHECK(op3.residual(r.three) < 1e-8 * r.three.max_abs() * p.light_speed / m.grid.dx);
  }
}

TEST_CASE("time evolution reaches the swept stationary state") {
  AtomicParams p = default_atomic_params().with_blockade_radius(15.3);
  auto m = small_medium(p, 50, 16);
  HierarchyOptions sweep;
  sweep.max_order = 2;
  auto a = hierarchical_solve(m, p, sweep);
  HierarchyOptions ev = sweep;
  ev.method = SteadyMethod::Evolve;
  ev.evolve.tol = 1e-9;
  ev.evolve.t_max = 400 * transit_time(m, p);
  auto b = hierarchical_solve(m, p, ev);
  CHECK(b.converged);
  CHECK(max_rel_diff(a.one, b.one) < 1e-6);
  CHECK(max_rel_diff(a.two, b.two) < 1e-6);

  // Halving the step changes the stationary state by less than 10 tol.
  ev.evolve.tol = 1e-7;
  ev.evolve.dt = transit_time(m, p) / 20.0;
  auto c1 = hierarchical_solve(m, p, ev);
  ev.evolve.dt /= 2;
  auto c2 = hierarchical_solve(m, p, ev);
  CHECK(max_rel_diff(c1.two, c2.two) < 1e-6);
}

TEST_CASE("vacuum reaches the product of boundary data within one transit") {
  AtomicParams p = default_atomic_params();
  MediumGeometry g;
  g.od = 0;
  auto m = make_profile(p, g, 12);
  PolaritonOperator op(1, m, p);
  SteadyOptions o;
  o.integrator = Integrator::SDIRK2;
  o.check_interval = transit_time(m, p);
  o.dt = o.check_interval / 400;
  o.t_max = 10 * o.check_interval;
  Boundary b;
  auto r = solve_steady(op, b, o);
  CHECK(r.converged);
  CHECK(std::abs(r.field.at(kE, 11) - 1.0) < 1e-6);
}

TEST_CASE("non-interacting three-photon state factorizes") {
  AtomicParams p = default_atomic_params();
  p.c6 = 0;
  auto m = small_medium(p, 110, 20);
  auto r = hierarchical_solve(m, p);
  auto prod = product_field(r.one, 3);
  CHECK(max_rel_diff(prod, r.three) < 1e-6);
  CHECK(max_rel_diff(product_field(r.one, 2), r.two) < 1e-6);

  HierarchyOptions o;
  o.product_faces = true;
  auto q = hierarchical_solve(m, p, o);
  CHECK(max_rel_diff(r.three, q.three) < 1e-12);
}

TEST_CASE("steady state is symmetric under photon exchange") {
  AtomicParams p = default_atomic_params().with_blockade_radius(15.3);
  auto m = small_medium(p, 90, 20);
  auto r = hierarchical_solve(m, p);
  const auto& f = r.three;
  const int N = f.N;
  double worst = 0;
  for (int a = 0; a < 27; ++a) {
    int b = with_slot_label(3, with_slot_label(3, a, 1, slot_label(3, a, 2)), 2, slot_label(3, a, 1));
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j)
        for (int k = 0; k < N; ++k) worst = std::max(worst, std::abs(f(a, i, j, k) - f(b, i, k, j)));
  }
  CHECK(worst < 1e-8 * f.max_abs());
}

TEST_CASE("three-photon faces carry the two-photon solution") {
  AtomicParams p = default_atomic_params().with_blockade_radius(15.3);
  auto m = small_medium(p, 90, 16);
  auto r = hierarchical_solve(m, p);
  const int N = m.grid.n_points;
  for (int a2 = 0; a2 < 9; ++a2) {
    int a3 = a2 * 3 + kE;  // third photon in E on the x3 = 0 face
    for (int i = 1; i < N; ++i)
      for (int j = 1; j < N; ++j) CHECK(r.three(a3, i, j, 0) == r.two(a2, i, j));
  }
}

TEST_CASE("lossless periodic evolution conserves the norm") {
  AtomicParams p = default_atomic_params().with_blockade_radius(15.3);
  p.gamma_p = p.gamma_s = p.delta_1 = p.delta_2 = 0;
  MediumGeometry g;
  g.rho_peak_override = 50.0 * 28.5 * 3.03 / (p.g_coupling * p.g_coupling);  // moderate coupling
  auto m = make_profile(p, g, 32);
  PolaritonOperator op(2, m, p, Advection::PeriodicCentral);
  auto y = op.make_field();
  for (int a = 0; a < 9; ++a)
    for (int i = 0; i < 32; ++i)
      for (int j = 0; j < 32; ++j) {
        double u = 2 * M_PI * i / 32, v = 2 * M_PI * j / 32;
        y(a, i, j) = cplx(std::cos(u + a), std::sin(v - a)) / (1.0 + a);
      }
  const double n0 = y.norm2();
  const double transit = m.x_out / p.light_speed;
  const double dt = 0.2 * m.grid.dx / p.light_speed;
  Boundary none;
  const int steps = static_cast<int>(std::ceil(transit / dt));
  for (int s = 0; s < steps; ++s) step_two(op, y, none, transit / steps, Integrator::RK4);
  CHECK(std::abs(y.norm2() / n0 - 1) < 1e-8);
}
