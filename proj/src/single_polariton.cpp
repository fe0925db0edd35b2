#include "rydpol/single_polariton.hpp"

#include <cmath>
#include <ostream>

#include "rydpol/errors.hpp"

namespace rydpol {

namespace {

cplx local_q(const AtomicParams& p) {
  return cplx(p.delta_1, p.gamma_p) * cplx(p.delta_2, p.gamma_s) - p.rabi * p.rabi;
}

// dE/dx = kappa(x) E
cplx kappa(double x, const MediumProfile& m, const AtomicParams& p, cplx q) {
  double g2rho = p.g_coupling * p.g_coupling * m.density(x);
  return cplx(0, -1) * g2rho * cplx(p.delta_2, p.gamma_s) / (p.light_speed * q);
}

cplx rk4_step(cplx e, double x, double h, const MediumProfile& m, const AtomicParams& p, cplx q) {
  cplx k1 = kappa(x, m, p, q) * e;
  cplx k2 = kappa(x + 0.5 * h, m, p, q) * (e + 0.5 * h * k1);
  cplx k3 = kappa(x + 0.5 * h, m, p, q) * (e + 0.5 * h * k2);
  cplx k4 = kappa(x + h, m, p, q) * (e + h * k3);
  return e + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

// Step-doubling RK4 across [x0, x1].
cplx integrate_interval(cplx e, double x0, double x1, const MediumProfile& m, const AtomicParams& p,
                        cplx q) {
  constexpr double kTol = 1e-13;
  double x = x0;
  double h = x1 - x0;
  int guard = 0;
  while (x < x1) {
    if (++guard > 1'000'000) throw SolverError("solve_single_steady: step size underflow");
    h = std::min(h, x1 - x);
    cplx full = rk4_step(e, x, h, m, p, q);
    cplx half = rk4_step(rk4_step(e, x, 0.5 * h, m, p, q), x + 0.5 * h, 0.5 * h, m, p, q);
    double err = std::abs(full - half) / 15.0;
    double scale = std::max(std::abs(half), 1e-300);
    if (err <= kTol * scale || h < 1e-12 * (x1 - x0)) {
      e = half + (half - full) / 15.0;
      x += h;
      if (err < 0.1 * kTol * scale) h *= 2.0;
    } else {
      h *= 0.5;
    }
  }
  return e;
}

}  // namespace

LocalAtomic eliminate_atomic(cplx e, double coupling, const AtomicParams& p) {
  cplx q = local_q(p);
  cplx d2(p.delta_2, p.gamma_s);
  return {-coupling * e * d2 / q, p.rabi * coupling * e / q};
}

SinglePolaritonState solve_single_steady(const MediumProfile& m, const AtomicParams& p, cplx input) {
  cplx q = local_q(p);
  double scale = std::abs(cplx(p.delta_1, p.gamma_p) * cplx(p.delta_2, p.gamma_s)) + p.rabi * p.rabi;
  if (std::abs(q) <= 1e-14 * std::max(scale, 1e-300)) {
    throw DomainError("solve_single_steady: (Δ+iΓ)(δ+iγ) - Ω² vanishes; ill-conditioned parameters");
  }
  const int n = m.grid.n_points;
  SinglePolaritonState s;
  s.x.resize(n);
  s.e_field.resize(n);
  s.p_field.resize(n);
  s.s_field.resize(n);
  cplx e = input;
  for (int i = 0; i < n; ++i) {
    double x = m.grid_x(i);
    if (i > 0) e = integrate_interval(e, m.grid_x(i - 1), x, m, p, q);
    s.x[i] = x;
    s.e_field[i] = e;
    auto at = eliminate_atomic(e, m.coupling(x, p), p);
    s.p_field[i] = at.p;
    s.s_field[i] = at.s;
  }
  return s;
}

std::array<double, 3> single_residual(const SinglePolaritonState& s, const MediumProfile& m,
                                      const AtomicParams& p, int i) {
  double x = s.x[i];
  double g = m.coupling(x, p);
  cplx e = s.e_field[i], pp = s.p_field[i], ss = s.s_field[i];
  cplx de = kappa(x, m, p, local_q(p)) * e;
  cplx r1 = cplx(0, 1) * p.light_speed * de + g * pp;
  cplx r2 = g * e + cplx(p.delta_1, p.gamma_p) * pp + p.rabi * ss;
  cplx r3 = p.rabi * pp + cplx(p.delta_2, p.gamma_s) * ss;
  return {std::abs(r1), std::abs(r2), std::abs(r3)};
}

double single_dispersion_shift(const AtomicParams& p, double rho) {
  if (p.delta_1 == 0) throw DomainError("single_dispersion_shift: delta_1 = 0");
  return rho * p.g_coupling * p.g_coupling / p.delta_1;
}

double single_dispersion_shift_tilde(const AtomicParams& p, double rho) {
  return single_dispersion_shift(p, rho) + p.rabi * p.rabi / p.delta_1;
}

void write_single_columns(std::ostream& os, const SinglePolaritonState& s) {
  os << "# x_um re_E im_E re_P im_P re_S im_S\n";
  os.precision(17);
  for (size_t i = 0; i < s.x.size(); ++i) {
    os << s.x[i] << ' ' << s.e_field[i].real() << ' ' << s.e_field[i].imag() << ' '
       << s.p_field[i].real() << ' ' << s.p_field[i].imag() << ' ' << s.s_field[i].real() << ' '
       << s.s_field[i].imag() << '\n';
  }
}

}  // namespace rydpol
