#pragma once

#include "rydpol/evolver.hpp"
#include "rydpol/topology.hpp"

namespace rydpol {

struct LambdaPhiRunnerConfig {
  AtomicParams atom;
  MediumGeometry geometry;
  int n_points = 48;
  HierarchyOptions hierarchy;
};

// Realizes (λ, φ) by choosing OD and r_b at fixed Γ, Δ, Ω and L_eff, then
// returns the EEE amplitude of the three-photon steady state.
ScanRunner make_lambda_phi_runner(const LambdaPhiRunnerConfig& cfg);

}  // namespace rydpol
