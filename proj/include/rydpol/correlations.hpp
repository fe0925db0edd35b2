#pragma once

#include <functional>
#include <vector>

#include "rydpol/evolver.hpp"

namespace rydpol {

struct CorrelationOptions {
  double tau_max = 0.0;  // 0: 3 x (photon transit + EIT delay)
  int tau_points = 128;
  int substeps = 16;     // integrator steps per τ grid interval
  Integrator integrator = Integrator::SDIRK2;
  Advection scheme = Advection::Upwind2;
  cplx input = 1.0;      // amplitude used for the steady states
};

// order 2: values indexed by tau1 only. order 3: row-major [i1 * n2 + i2].
struct CorrelationMap {
  int order = 2;
  std::vector<double> tau1;
  std::vector<double> tau2;
  std::vector<cplx> ratio;  // e / E(x_out)^order
  std::vector<double> g;    // |ratio|²
  std::vector<double> phi;  // arg ratio in (-π, π]

  double g_at(size_t i1, size_t i2 = 0) const { return g[i1 * std::max<size_t>(tau2.size(), 1) + i2]; }
  double phi_at(size_t i1, size_t i2 = 0) const { return phi[i1 * std::max<size_t>(tau2.size(), 1) + i2]; }
};

std::vector<double> default_tau_grid(const MediumProfile& m, const AtomicParams& p,
                                     const CorrelationOptions& opt);

// g²(τ), φ²(τ) from the two-photon steady state (detection of the first
// photon at the last grid point) and the grid-consistent one-photon state.
CorrelationMap g2_phi2(const PolaritonField& two, const PolaritonField& one, const MediumProfile& m,
                       const AtomicParams& p, const std::vector<double>& tau,
                       const CorrelationOptions& opt = {});

// Evolves the conditional two-photon amplitudes after a detection at x_out,
// with faces driven by the conditional one-photon amplitudes e⁽²⁾, p⁽²⁾, s⁽²⁾.
// `observe` is called at every τ in `tau` (including τ = 0) with the
// conditional two-photon field and the driving one-photon field.
using ConditionalObserver =
    std::function<void(size_t index, double tau, const PolaritonField& two, const PolaritonField& one)>;
void conditional_two_after_one(const PolaritonField& three, const PolaritonField& two,
                               const MediumProfile& m, const AtomicParams& p,
                               const std::vector<double>& tau, const ConditionalObserver& observe,
                               const CorrelationOptions& opt = {});

// Initial data for the conditional evolutions (slices at the detector).
PolaritonField detect_first(const PolaritonField& field);

CorrelationMap g3_phi3(const HierarchyResult& states, const MediumProfile& m, const AtomicParams& p,
                       const std::vector<double>& tau1, const std::vector<double>& tau2,
                       const CorrelationOptions& opt = {});

// Map over the temporal Jacobi plane; NaN where the unfolded point falls
// outside the computed wedge.
struct JacobiMap {
  std::vector<double> eta;
  std::vector<double> zeta;
  std::vector<cplx> ratio;  // [i_eta * nz + i_zeta]
  std::vector<double> g;
  std::vector<double> phi;
};

// Unfolds the τ1, τ2 >= 0 wedge to the full (η, ζ) plane by permutation of
// the detection labels; bilinear interpolation of the complex ratio.
JacobiMap to_jacobi_times(const CorrelationMap& map, const std::vector<double>& eta,
                          const std::vector<double>& zeta);
// Single lookup used by to_jacobi_times.
cplx jacobi_lookup(const CorrelationMap& map, double eta, double zeta);

}  // namespace rydpol
