#include "rydpol/evolver.hpp"

#include <algorithm>
#include <cmath>

#include "rydpol/errors.hpp"

namespace rydpol {

namespace {

const double kSdirkGamma = 1.0 - 1.0 / std::sqrt(2.0);

// y = a + s*b, elementwise
void axpy_into(PolaritonField& y, const PolaritonField& a, double s, const PolaritonField& b) {
  if (y.data.size() != a.data.size()) y = a;
  const size_t n = a.data.size();
#pragma omp parallel for schedule(static)
  for (long long i = 0; i < static_cast<long long>(n); ++i)
    y.data[i] = a.data[i] + s * b.data[i];
}

}  // namespace

HierarchyStepper::HierarchyStepper(Integrator integrator, std::vector<PolaritonOperator*> ops,
                                   Boundary base, std::vector<cplx> alphas)
    : integrator_(integrator), ops_(std::move(ops)), base_(base), alphas_(std::move(alphas)) {
  if (ops_.empty()) throw DomainError("HierarchyStepper: no levels");
  for (size_t l = 1; l < ops_.size(); ++l) {
    if (ops_[l]->n() != ops_[l - 1]->n() + 1 || ops_[l]->N() != ops_[l - 1]->N())
      throw DomainError("HierarchyStepper: level " + std::to_string(l) + " does not extend level below");
  }
  if (alphas_.empty()) alphas_.assign(ops_.size(), cplx(1.0, 0.0));
  if (alphas_.size() != ops_.size()) throw DomainError("HierarchyStepper: one alpha per level");
}

Boundary HierarchyStepper::boundary_for(size_t level, const std::vector<PolaritonField>& stage) const {
  if (level == 0) return base_;
  Boundary b;
  b.lower = &stage[level - 1];
  b.alpha = alphas_[level];
  return b;
}

void HierarchyStepper::pin(std::vector<PolaritonField>& ys) const {
  for (size_t l = 0; l < ops_.size(); ++l) ops_[l]->pin(ys[l], boundary_for(l, ys));
}

void HierarchyStepper::step(std::vector<PolaritonField>& ys, double dt) {
  if (ys.size() != ops_.size()) throw DomainError("HierarchyStepper: wrong number of fields");
  if (integrator_ == Integrator::RK4)
    step_rk4(ys, dt);
  else
    step_sdirk(ys, dt);
  for (auto& y : ys) y.time += dt;
}

void HierarchyStepper::step_rk4(std::vector<PolaritonField>& ys, double dt) {
  const size_t L = ops_.size();
  for (auto* v : {&k1_, &k2_, &k3_, &k4_, &stage_}) v->resize(L);
  pin(ys);
  for (size_t l = 0; l < L; ++l) ops_[l]->apply(ys[l], k1_[l]);
  for (size_t l = 0; l < L; ++l) {
    axpy_into(stage_[l], ys[l], 0.5 * dt, k1_[l]);
    ops_[l]->pin(stage_[l], boundary_for(l, stage_));
  }
  for (size_t l = 0; l < L; ++l) ops_[l]->apply(stage_[l], k2_[l]);
  for (size_t l = 0; l < L; ++l) {
    axpy_into(stage_[l], ys[l], 0.5 * dt, k2_[l]);
    ops_[l]->pin(stage_[l], boundary_for(l, stage_));
  }
  for (size_t l = 0; l < L; ++l) ops_[l]->apply(stage_[l], k3_[l]);
  for (size_t l = 0; l < L; ++l) {
    axpy_into(stage_[l], ys[l], dt, k3_[l]);
    ops_[l]->pin(stage_[l], boundary_for(l, stage_));
  }
  for (size_t l = 0; l < L; ++l) ops_[l]->apply(stage_[l], k4_[l]);
  for (size_t l = 0; l < L; ++l) {
    auto& y = ys[l].data;
    const auto &a = k1_[l].data, &b = k2_[l].data, &c = k3_[l].data, &d = k4_[l].data;
    const size_t n = y.size();
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < static_cast<long long>(n); ++i)
      y[i] += dt / 6.0 * (a[i] + 2.0 * b[i] + 2.0 * c[i] + d[i]);
  }
  pin(ys);
}

void HierarchyStepper::step_sdirk(std::vector<PolaritonField>& ys, double dt) {
  const size_t L = ops_.size();
  const double sigma = 1.0 / (kSdirkGamma * dt);
  for (auto* v : {&stage_, &tmp_, &k1_}) v->resize(L);
  for (auto* op : ops_) op->prepare(sigma, size_t(1) << 28);

  // Stage 1: (σ - A) Y1 = σ y
  for (size_t l = 0; l < L; ++l) {
    tmp_[l] = ys[l];
    for (auto& v : tmp_[l].data) v *= sigma;
    ops_[l]->solve_shifted(sigma, &tmp_[l], boundary_for(l, stage_), stage_[l]);
  }
  // Stage 2: (σ - A) Y2 = σ (y + dt (1-γ) f1),  f1 = σ (Y1 - y)
  const double w = dt * (1.0 - kSdirkGamma) * sigma;
  for (size_t l = 0; l < L; ++l) {
    auto& r = tmp_[l].data;
    const auto& y = ys[l].data;
    const auto& y1 = stage_[l].data;
    for (size_t i = 0; i < r.size(); ++i) r[i] = sigma * (y[i] + w * (y1[i] - y[i]));
  }
  for (size_t l = 0; l < L; ++l) {
    // Level l's faces come from level l-1 at the new time, already in ys.
    ops_[l]->solve_shifted(sigma, &tmp_[l], boundary_for(l, ys), ys[l]);
  }
}

void step_field(PolaritonOperator& op, PolaritonField& y, const Boundary& bc, double dt,
                Integrator integrator) {
  HierarchyStepper stepper(integrator, {&op}, bc);
  std::vector<PolaritonField> ys{std::move(y)};
  stepper.step(ys, dt);
  y = std::move(ys[0]);
}

void step_two(PolaritonOperator& op, PolaritonField& y, const Boundary& bc, double dt,
              Integrator integrator) {
  if (op.n() != 2 || y.n != 2) throw DomainError("step_two: needs a two-photon operator and field");
  step_field(op, y, bc, dt, integrator);
}

void step_three(PolaritonOperator& op, PolaritonField& y, const Boundary& bc, double dt,
                Integrator integrator) {
  if (op.n() != 3 || y.n != 3) throw DomainError("step_three: needs a three-photon operator and field");
  step_field(op, y, bc, dt, integrator);
}

PolaritonField steady_sweep(const PolaritonOperator& op, const Boundary& bc) {
  PolaritonField y = op.make_field();
  op.solve_shifted(0.0, nullptr, bc, y);
  return y;
}

double eit_delay(const MediumProfile& m, const AtomicParams& p) {
  if (p.rabi == 0) return 0.0;
  // ∫g²ρ dx / (c Ω²)
  double integral = m.rho_peak * m.derived.L_eff * p.g_coupling * p.g_coupling;
  return integral / (p.light_speed * p.rabi * p.rabi);
}

double transit_time(const MediumProfile& m, const AtomicParams& p) {
  return m.x_out / p.light_speed + eit_delay(m, p);
}

SteadyResult solve_steady(PolaritonOperator& op, const Boundary& bc, const SteadyOptions& opt) {
  if (!(opt.check_interval > 0)) throw DomainError("solve_steady: check_interval must be > 0");
  SteadyResult res;
  double dt = opt.dt;
  if (dt <= 0) dt = opt.integrator == Integrator::RK4 ? op.rk4_dt() : opt.check_interval / 20.0;
  const long per_check = std::max(1L, static_cast<long>(std::ceil(opt.check_interval / dt - 1e-9)));
  dt = opt.check_interval / static_cast<double>(per_check);
  const double t_max = opt.t_max > 0 ? opt.t_max : 40.0 * opt.check_interval;

  HierarchyStepper stepper(opt.integrator, {&op}, bc);
  std::vector<PolaritonField> ys{op.make_field()};
  stepper.pin(ys);
  PolaritonField prev = ys[0];
  double t = 0.0;
  while (t < t_max * (1.0 - 1e-12)) {
    for (long s = 0; s < per_check; ++s) {
      stepper.step(ys, dt);
      ++res.steps;
    }
    t += opt.check_interval;
    double change = 0.0, scale = 0.0;
    for (size_t i = 0; i < prev.data.size(); ++i) {
      change = std::max(change, std::abs(ys[0].data[i] - prev.data[i]));
      scale = std::max(scale, std::abs(ys[0].data[i]));
    }
    for (const auto& v : ys[0].data)
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
        throw SolverError("solve_steady: non-finite amplitude at t = " + std::to_string(t));
    double rel = scale > 0 ? change / scale : change;
    res.history.push_back(rel);
    prev = ys[0];
    if (rel < opt.tol) {
      res.converged = true;
      break;
    }
  }
  res.t = t;
  res.field = std::move(ys[0]);
  res.field.time = t;
  return res;
}

PolaritonField product_field(const PolaritonField& one, int n) {
  if (one.n != 1) throw DomainError("product_field: need a one-photon field");
  PolaritonField out(n, one.N, one.dx);
  const int K = out.components();
  for (size_t s = 0; s < out.sites(); ++s) {
    auto idx = out.index(s);
    for (int a = 0; a < K; ++a) {
      cplx v = 1.0;
      for (int k = 0; k < n; ++k) v *= one.at(slot_label(n, a, k), static_cast<size_t>(idx[k]));
      out.at(a, s) = v;
    }
  }
  return out;
}

HierarchyResult hierarchical_solve(const MediumProfile& m, const AtomicParams& p,
                                   const HierarchyOptions& opt) {
  if (opt.max_order < 1 || opt.max_order > 3) throw DomainError("hierarchical_solve: max_order in 1..3");
  HierarchyResult r;
  r.continuum = solve_single_steady(m, p, opt.input);

  SteadyOptions ev = opt.evolve;
  if (ev.check_interval <= 0) ev.check_interval = transit_time(m, p);

  auto solve_level = [&](PolaritonOperator& op, const Boundary& bc) {
    if (opt.method == SteadyMethod::Sweep) return steady_sweep(op, bc);
    SteadyResult sr = solve_steady(op, bc, ev);
    r.converged = r.converged && sr.converged;
    PolaritonField f = sr.field;
    r.runs.push_back(std::move(sr));
    return f;
  };

  PolaritonOperator op1(1, m, p, opt.scheme);
  Boundary b1;
  b1.scalar = 1.0;
  b1.alpha = opt.input;
  r.one = solve_level(op1, b1);
  if (opt.max_order >= 2 && !opt.product_faces) {
    PolaritonOperator op2(2, m, p, opt.scheme);
    Boundary b2;
    b2.lower = &r.one;
    b2.alpha = opt.input;
    r.two = solve_level(op2, b2);
  }
  if (opt.product_faces && opt.max_order >= 2) r.two = product_field(r.one, 2);
  if (opt.max_order >= 3) {
    PolaritonOperator op3(3, m, p, opt.scheme);
    Boundary b3;
    b3.lower = &r.two;
    b3.alpha = opt.input;
    r.three = solve_level(op3, b3);
  }
  return r;
}

}  // namespace rydpol
