#include "rydpol/correlations.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rydpol/errors.hpp"
#include "rydpol/jacobi.hpp"

namespace rydpol {

namespace {

void finish(CorrelationMap& map) {
  map.g.resize(map.ratio.size());
  map.phi.resize(map.ratio.size());
  for (size_t i = 0; i < map.ratio.size(); ++i) {
    map.g[i] = std::norm(map.ratio[i]);
    map.phi[i] = std::arg(map.ratio[i]);
  }
}

void check_grid(const std::vector<double>& tau) {
  if (tau.empty()) throw DomainError("correlations: empty τ grid");
  if (tau.front() != 0.0) throw DomainError("correlations: τ grid must start at 0");
  for (size_t i = 1; i < tau.size(); ++i)
    if (!(tau[i] > tau[i - 1])) throw DomainError("correlations: τ grid must increase");
}

// Advances a hierarchy through the τ grid, calling `at` on every grid time.
template <class F>
void march(HierarchyStepper& stepper, std::vector<PolaritonField>& ys, const std::vector<double>& tau,
           int substeps, F&& at) {
  stepper.pin(ys);
  at(size_t(0));
  for (size_t i = 1; i < tau.size(); ++i) {
    double dt = (tau[i] - tau[i - 1]) / substeps;
    for (int s = 0; s < substeps; ++s) stepper.step(ys, dt);
    at(i);
  }
}

}  // namespace

std::vector<double> default_tau_grid(const MediumProfile& m, const AtomicParams& p,
                                     const CorrelationOptions& opt) {
  double tmax = opt.tau_max > 0 ? opt.tau_max : 3.0 * transit_time(m, p);
  if (opt.tau_points < 2) throw ConfigError("correlations.tau_points", "must be >= 2");
  std::vector<double> tau(opt.tau_points);
  for (int i = 0; i < opt.tau_points; ++i) tau[i] = tmax * i / (opt.tau_points - 1);
  return tau;
}

PolaritonField detect_first(const PolaritonField& field) {
  if (field.n < 2) throw DomainError("detect_first: need at least two photons");
  PolaritonField out(field.n - 1, field.N, field.dx);
  const size_t offset = static_cast<size_t>(field.N - 1) * field.stride(0);
  // Components with an E label in the first slot have the same index as the
  // (n-1)-photon component of the remaining slots.
  for (int a = 0; a < out.components(); ++a)
    for (size_t s = 0; s < out.sites(); ++s) out.at(a, s) = field.at(a, offset + s);
  return out;
}

CorrelationMap g2_phi2(const PolaritonField& two, const PolaritonField& one, const MediumProfile& m,
                       const AtomicParams& p, const std::vector<double>& tau,
                       const CorrelationOptions& opt) {
  check_grid(tau);
  if (two.n != 2 || one.n != 1) throw DomainError("g2_phi2: need two- and one-photon fields");
  const int N = one.N;
  const cplx e_out = one.at(kE, static_cast<size_t>(N - 1));
  if (e_out == 0.0) throw SolverError("g2_phi2: zero transmission, correlations undefined");

  PolaritonOperator op1(1, m, p, opt.scheme);
  std::vector<PolaritonField> ys{detect_first(two)};
  Boundary base;
  base.scalar = ys[0].at(kE, 0);
  HierarchyStepper stepper(opt.integrator, {&op1}, base);

  CorrelationMap map;
  map.order = 2;
  map.tau1 = tau;
  map.ratio.resize(tau.size());
  march(stepper, ys, tau, opt.substeps, [&](size_t i) {
    map.ratio[i] = ys[0].at(kE, static_cast<size_t>(N - 1)) / (e_out * e_out);
  });
  finish(map);
  return map;
}

void conditional_two_after_one(const PolaritonField& three, const PolaritonField& two,
                               const MediumProfile& m, const AtomicParams& p,
                               const std::vector<double>& tau, const ConditionalObserver& observe,
                               const CorrelationOptions& opt) {
  check_grid(tau);
  if (three.n != 3 || two.n != 2) throw DomainError("conditional_two_after_one: need 3- and 2-photon fields");
  PolaritonOperator op1(1, m, p, opt.scheme);
  PolaritonOperator op2(2, m, p, opt.scheme);
  std::vector<PolaritonField> ys{detect_first(two), detect_first(three)};
  Boundary base;
  base.scalar = ys[0].at(kE, 0);
  HierarchyStepper stepper(opt.integrator, {&op1, &op2}, base, {cplx(1.0), opt.input});
  march(stepper, ys, tau, opt.substeps, [&](size_t i) { observe(i, tau[i], ys[1], ys[0]); });
}

CorrelationMap g3_phi3(const HierarchyResult& states, const MediumProfile& m, const AtomicParams& p,
                       const std::vector<double>& tau1, const std::vector<double>& tau2,
                       const CorrelationOptions& opt) {
  check_grid(tau1);
  check_grid(tau2);
  const PolaritonField& one = states.one;
  if (one.n != 1 || states.two.n != 2 || states.three.n != 3)
    throw DomainError("g3_phi3: hierarchy must contain one-, two- and three-photon states");
  const int N = one.N;
  const cplx e_out = one.at(kE, static_cast<size_t>(N - 1));
  if (e_out == 0.0) throw SolverError("g3_phi3: zero transmission, correlations undefined");
  const cplx norm = e_out * e_out * e_out;

  // Stage one: cache the detector slices of the conditional two-photon field.
  std::vector<PolaritonField> slices(tau1.size());
  conditional_two_after_one(
      states.three, states.two, m, p, tau1,
      [&](size_t i, double, const PolaritonField& cond2, const PolaritonField&) {
        slices[i] = detect_first(cond2);
      },
      opt);

  CorrelationMap map;
  map.order = 3;
  map.tau1 = tau1;
  map.tau2 = tau2;
  map.ratio.assign(tau1.size() * tau2.size(), cplx(0.0, 0.0));
  const size_t n2 = tau2.size();

  // Stage two: one independent single-photon evolution per τ1.
#pragma omp parallel
  {
    PolaritonOperator op1(1, m, p, opt.scheme);
#pragma omp for schedule(dynamic)
    for (long long i1 = 0; i1 < static_cast<long long>(tau1.size()); ++i1) {
      std::vector<PolaritonField> ys{slices[static_cast<size_t>(i1)]};
      Boundary base;
      base.scalar = ys[0].at(kE, 0);
      HierarchyStepper stepper(opt.integrator, {&op1}, base);
      march(stepper, ys, tau2, opt.substeps, [&](size_t i2) {
        map.ratio[static_cast<size_t>(i1) * n2 + i2] = ys[0].at(kE, static_cast<size_t>(N - 1)) / norm;
      });
    }
  }
  finish(map);
  return map;
}

cplx jacobi_lookup(const CorrelationMap& map, double eta, double zeta) {
  if (map.order != 3) throw DomainError("jacobi_lookup: needs a three-photon map");
  auto t = temporal_jacobi_inverse(eta, zeta);
  std::sort(t.begin(), t.end());
  double a = t[1] - t[0];
  double b = t[2] - t[1];
  const auto& x = map.tau1;
  const auto& y = map.tau2;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  // Allow roundoff right at the grid edge.
  const double ex = 1e-12 * x.back(), ey = 1e-12 * y.back();
  if (a > x.back() + ex || b > y.back() + ey) return {nan, nan};
  a = std::min(std::max(a, 0.0), x.back());
  b = std::min(std::max(b, 0.0), y.back());
  size_t i = std::upper_bound(x.begin(), x.end(), a) - x.begin();
  size_t j = std::upper_bound(y.begin(), y.end(), b) - y.begin();
  i = std::clamp<size_t>(i, 1, x.size() - 1) - 1;
  j = std::clamp<size_t>(j, 1, y.size() - 1) - 1;
  if (x.size() == 1 || y.size() == 1) return map.ratio[i * y.size() + j];
  double u = (a - x[i]) / (x[i + 1] - x[i]);
  double v = (b - y[j]) / (y[j + 1] - y[j]);
  const size_t n2 = y.size();
  auto r = [&](size_t p, size_t q) { return map.ratio[p * n2 + q]; };
  return (1 - u) * (1 - v) * r(i, j) + u * (1 - v) * r(i + 1, j) + (1 - u) * v * r(i, j + 1) +
         u * v * r(i + 1, j + 1);
}

JacobiMap to_jacobi_times(const CorrelationMap& map, const std::vector<double>& eta,
                          const std::vector<double>& zeta) {
  JacobiMap out;
  out.eta = eta;
  out.zeta = zeta;
  out.ratio.resize(eta.size() * zeta.size());
  out.g.resize(out.ratio.size());
  out.phi.resize(out.ratio.size());
  for (size_t i = 0; i < eta.size(); ++i) {
    for (size_t j = 0; j < zeta.size(); ++j) {
      cplx r = jacobi_lookup(map, eta[i], zeta[j]);
      size_t k = i * zeta.size() + j;
      out.ratio[k] = r;
      out.g[k] = std::norm(r);
      out.phi[k] = std::arg(r);
    }
  }
  return out;
}

}  // namespace rydpol
