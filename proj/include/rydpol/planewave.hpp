#pragma once

#include <array>
#include <complex>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "rydpol/multiband.hpp"

namespace rydpol {

// Hexagonal reciprocal lattice b_nm = n b1 + m b2 with
// b1 = (2πD/S)(1, 0), b2 = (2πD/S)(1/2, √3/2), S = √3 D²/2, truncated to
// |b| <= b_max. The real-space lattice dual to (b1, b2) is
// a1 = (√3D/2, -D/2), a2 = (0, D).
struct PlaneWaveBasis {
  double D = 0.0;
  double S = 0.0;
  double b_max = 0.0;
  std::vector<std::array<int, 2>> nm;
  std::vector<Eigen::Vector2d> b;

  size_t size() const { return b.size(); }
  Eigen::Vector2d b_of(int n, int m) const;
  Eigen::Vector2d a1() const;
  Eigen::Vector2d a2() const;
};

PlaneWaveBasis make_basis(double D, double b_max);
// Smallest shell-complete basis with at least `count` vectors.
PlaneWaveBasis make_basis_count(double D, size_t count);

// V3/ω_D as a function of (η, ζ); the default is the three-photon blockade
// form 1/(1 + (2/3) Σ_{i≠j} r_b⁶/|x_i - x_j|⁶).
using RelativePotential = std::function<double(double eta, double zeta)>;
RelativePotential blockade_potential_three(double r_b);

struct PlaneWaveOptions {
  BandParams bp;            // wd, wdt in inverse length units
  double r_b = 1.0;
  int quad_per_rb = 8;      // samples per r_b along each lattice vector
  RelativePotential potential;  // empty: blockade_potential_three(r_b)
};

enum class PropagationMode { Multiband, Singleband };

struct PlaneWaveResult {
  PropagationMode mode = PropagationMode::Multiband;
  std::vector<double> R;
  // coefficients[r] holds the b-space vector at R[r]: 3N (component-minor) or N.
  std::vector<Eigen::VectorXcd> coefficients;
  double tail_weight = 0.0;  // Fourier weight of V3 beyond b_max, relative
  bool aliasing_warning = false;

  // First-component field at (η, ζ) for R index r.
  cplx field(const PlaneWaveBasis& basis, size_t r, double eta, double zeta) const;
};

// Fourier components f_{nm} = (1/S)∫_cell e^{-i b_nm·r} f(r) d²r for |n|,|m|
// <= range, by the trapezoid rule on an M x M grid of the unit cell.
struct PotentialFourier {
  int range = 0;
  std::vector<cplx> coeff;  // [(n+range)*(2range+1) + (m+range)]
  double total_weight = 0.0;  // Σ over all M² discrete coefficients of |f|²
  cplx at(int n, int m) const { return coeff[(n + range) * (2 * range + 1) + (m + range)]; }
};
PotentialFourier potential_fourier(const PlaneWaveBasis& basis, const RelativePotential& f, int M,
                                   int range);

// Hermitian (real symmetric) generator: i ∂_R ψ = H ψ.
Eigen::MatrixXd planewave_hamiltonian(const PlaneWaveBasis& basis, const PotentialFourier& vf,
                                      const BandParams& bp, PropagationMode mode);

PlaneWaveResult planewave_propagate(const PlaneWaveBasis& basis, const std::vector<double>& R_grid,
                                    PropagationMode mode, const PlaneWaveOptions& opt);

}  // namespace rydpol
