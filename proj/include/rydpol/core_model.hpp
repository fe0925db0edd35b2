#pragma once

#include <span>
#include <string>

#include "rydpol/units.hpp"

namespace rydpol {

struct AtomicParams {
  double g_coupling = 1.0;   // MHz um^0.5
  double rabi = 9.5;         // Ω
  double gamma_p = 3.03;     // Γ
  double gamma_s = 0.07;     // γ
  double delta_1 = 28.5;     // Δ
  double delta_2 = 1.03;     // δ
  double c6 = 0.0;           // MHz um^6, set from a blockade radius via with_blockade_radius
  double light_speed = units::kSpeedOfLight;

  // Throws ConfigError naming the offending field.
  void validate() const;
  // Analytic reductions assume |Δ| >= 3Γ; the full model does not.
  bool near_resonance() const;
  AtomicParams with_blockade_radius(double r_b) const;
};

// Defaults used throughout the examples and acceptance checks.
AtomicParams default_atomic_params();

double blockade_radius(const AtomicParams& p);
double c6_for_blockade_radius(double rabi, double delta_1, double r_b);

enum class DensityShape { Gaussian, Box };

struct GridSpec {
  int n_points = 96;
  double dx = 0.0;
  double t_step = 0.0;
  double t_max = 0.0;
};

struct MediumGeometry {
  double l_eff = 75.0;      // sqrt(2π)σ
  double center = -1.0;     // < 0: 5σ
  double x_out = -1.0;      // < 0: 10σ
  double od = 110.0;
  DensityShape shape = DensityShape::Gaussian;
  // Multiplies the optical-depth-to-density conversion.
  double od_scale = 1.0;
  // > 0 overrides the density derived from od (needed when Γ = 0).
  double rho_peak_override = -1.0;
};

struct DerivedMedium {
  double omega_d_peak = 0.0;
  double omega_d_tilde_peak = 0.0;
  double r_b = 0.0;
  double U = 0.0;
  double mass = 0.0;
  double lambda_param = 0.0;
  double phi_param = 0.0;
  double L_eff = 0.0;
};

struct MediumProfile {
  double sigma = 0.0;
  double center = 0.0;
  double x_out = 0.0;
  double od = 0.0;
  DensityShape shape = DensityShape::Gaussian;
  double rho_peak = 0.0;  // g^2 rho_peak is what enters the dynamics
  GridSpec grid;
  DerivedMedium derived;

  double density(double x) const;
  // g·sqrt(ρ(x))
  double coupling(double x, const AtomicParams& p) const;
  double grid_x(int i) const { return i * grid.dx; }
  // dx <= r_b/4; a C6 = 0 medium is always resolved.
  bool resolved() const;
  // ρ at the grid ends relative to the peak.
  double edge_density_ratio() const;
};

MediumProfile make_profile(const AtomicParams& p, const MediumGeometry& geom, int n_points);

double density_profile(const MediumProfile& m, double x);

// C6/d^6 with d clamped from below at dx/2 (dx = 0 disables the cap).
double vdw_pair(double x1, double x2, const AtomicParams& p, double dx);

double potential_vn(std::span<const double> positions, double r_b, double omega_d);
double potential_vn(std::span<const double> positions, const MediumProfile& m);

// Two-photon blockade well in the rotated relative coordinate r = (x1-x2)/√2.
// Factor4 is what the substitution d = √2 r yields, Factor8 is the
// alternative prefactor; both are kept selectable.
enum class WellConvention { Factor4, Factor8 };
double blockade_well(double r, double U, double r_b, WellConvention conv);

struct InteractionParameters {
  double U = 0.0;
  double mass = 0.0;
  double lambda = 0.0;
  double phi = 0.0;
};

InteractionParameters interaction_parameters(const MediumProfile& m, const AtomicParams& p);

// Inverse map used by the phase-diagram runner: optical depth and blockade
// radius that realize a requested (λ, φ) at fixed Γ, Δ, L_eff.
struct LambdaPhiTarget {
  double od = 0.0;
  double r_b = 0.0;
};
LambdaPhiTarget od_and_rb_for(double lambda, double phi, const AtomicParams& p, double l_eff,
                              double od_scale = 1.0);

}  // namespace rydpol
