#pragma once

#include <array>
#include <complex>
#include <iosfwd>
#include <vector>

#include "rydpol/core_model.hpp"

namespace rydpol {

using cplx = std::complex<double>;

struct SinglePolaritonState {
  std::vector<double> x;
  std::vector<cplx> e_field;
  std::vector<cplx> p_field;
  std::vector<cplx> s_field;
};

// Continuum stationary solution of H(x)ψ = 0 with E(0) = input. P and S are
// eliminated analytically at every x, leaving
//   dE/dx = -i g²ρ(x)(δ+iγ) / (c Q) · E,   Q = (Δ+iΓ)(δ+iγ) - Ω²,
// which is integrated with adaptive RK4 (steps never larger than dx).
// Throws DomainError if Q vanishes (resonance of the eliminated system).
SinglePolaritonState solve_single_steady(const MediumProfile& m, const AtomicParams& p,
                                         cplx input = 1.0);

// Local algebraic reconstruction used by the solver.
struct LocalAtomic {
  cplx p;
  cplx s;
};
LocalAtomic eliminate_atomic(cplx e, double coupling, const AtomicParams& p);

// Residuals of the three rows of H(x)ψ = 0 at grid point i (the derivative is
// taken from the analytic right-hand side, so only the algebraic rows test
// anything nontrivial).
std::array<double, 3> single_residual(const SinglePolaritonState& s, const MediumProfile& m,
                                      const AtomicParams& p, int i);

// ω_D = ρg²/Δ and ω̃_D = ω_D + Ω²/Δ.
double single_dispersion_shift(const AtomicParams& p, double rho);
double single_dispersion_shift_tilde(const AtomicParams& p, double rho);

void write_single_columns(std::ostream& os, const SinglePolaritonState& s);

}  // namespace rydpol
