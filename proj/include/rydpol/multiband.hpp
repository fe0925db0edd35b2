#pragma once

#include <array>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "rydpol/core_model.hpp"
#include "rydpol/field.hpp"

namespace rydpol {

// Dispersion parameters: wd = ω_D/c and wdt = ω̃_D/c. In the natural band
// units ρg²/(cΔ), wd = 1 and wdt = 1 + Ω²/(ρg²).
struct BandParams {
  double wd = 1.0;
  double wdt = 1.0;
};

// Natural units (wd = 1) or inverse µm when si is true.
BandParams band_params(const AtomicParams& p, double rho, bool si = false);
// Multiply a band value in natural units by this to get 1/µm.
double band_unit_to_si(const AtomicParams& p, double rho);

struct BandPoint {
  Eigen::VectorXd K;   // ascending
  Eigen::MatrixXcd v;  // columns are eigenvectors
};

// Hermitian n x n block whose eigenvalues λ give K = scale·λ:
//   two:   √2 · [ (1/√2) diag(-k, k) - wdt + (wd/2) J ]
//   three: √3 · [ -diag(q) - wdt + (wd/3) J ], q the relative photon momenta
//   four:  2  · [ diag(κ1/√2+κ3/2, -κ1/√2+κ3/2, κ2/√2-κ3/2, -κ2/√2-κ3/2) - wdt + (wd/4) J ]
Eigen::MatrixXcd band_matrix_two(double k, const BandParams& bp);
Eigen::MatrixXcd band_matrix_three(double k_eta, double k_zeta, const BandParams& bp);
Eigen::MatrixXcd band_matrix_four(double k1, double k2, double k3, const BandParams& bp);
// General n from raw photon momenta; the centre-of-mass part is projected out.
Eigen::MatrixXcd band_matrix_n(std::span<const double> photon_momenta, const BandParams& bp);
// Three-photon block in the symmetric basis (ESS+, ESS-, ESS-').
Eigen::MatrixXcd band_matrix_three_symmetric(double k_eta, double k_zeta, const BandParams& bp);

BandPoint diagonalize(const Eigen::MatrixXcd& h);

std::array<double, 2> bands_two(double k, const BandParams& bp);         // {K-, K+} numerically
std::array<double, 2> bands_two_closed(double k, const BandParams& bp);  // closed form
double schrodinger_two(double k, const BandParams& bp);
BandPoint bands_three(double k_eta, double k_zeta, const BandParams& bp);
BandPoint bands_four(double k1, double k2, double k3, const BandParams& bp);
BandPoint bands_n(std::span<const double> photon_momenta, const BandParams& bp);

// Massive-band small-k forms.
double massive_three(double k, const BandParams& bp);  // -√3 wdt + √3 wd + k²/(√3 wd)
double massive_four(double k, const BandParams& bp);   // -2 wdt + 2 wd + k²/(2 wd)

// Along a momentum path, re-threads eigenpairs by eigenvector overlap so
// that bands keep their identity through degeneracies. out[i].K[ν] is band ν.
std::vector<BandPoint> thread_bands(const std::vector<Eigen::MatrixXcd>& path);

// max over bands of (max_θ K_ν - min_θ K_ν) at fixed |k|, divided by the mean
// of |K| over angles and bands.
double warping_metric(double kabs, const BandParams& bp, int n_angles = 360);
// max over θ, ν of |K_ν(θ + δθ) - K_ν(θ)| at fixed |k|.
double rotation_asymmetry(double kabs, double dtheta, const BandParams& bp, int n_angles = 360);

}  // namespace rydpol
