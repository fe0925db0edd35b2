#pragma once

#include <string>
#include <vector>

#include "rydpol/polariton_operator.hpp"
#include "rydpol/single_polariton.hpp"

namespace rydpol {

enum class Integrator {
  RK4,     // explicit, needs dt below the CFL and stiffness bounds
  SDIRK2,  // two-stage L-stable singly diagonally implicit RK; each stage is one upwind sweep
};

// Steps a chain of fields where level l > 0 takes its inflow faces from the
// current stage value of level l-1 (time-dependent hierarchical boundary).
// Level 0 uses `base` as given.
class HierarchyStepper {
 public:
  HierarchyStepper(Integrator integrator, std::vector<PolaritonOperator*> ops, Boundary base,
                   std::vector<cplx> alphas = {});

  void step(std::vector<PolaritonField>& ys, double dt);
  // Pins all levels consistently (call once on initial data).
  void pin(std::vector<PolaritonField>& ys) const;

 private:
  Boundary boundary_for(size_t level, const std::vector<PolaritonField>& stage) const;
  void step_rk4(std::vector<PolaritonField>& ys, double dt);
  void step_sdirk(std::vector<PolaritonField>& ys, double dt);

  Integrator integrator_;
  std::vector<PolaritonOperator*> ops_;
  Boundary base_;
  std::vector<cplx> alphas_;
  std::vector<PolaritonField> k1_, k2_, k3_, k4_, stage_, tmp_;
};

// Single-level steps with stationary faces.
void step_field(PolaritonOperator& op, PolaritonField& y, const Boundary& bc, double dt,
                Integrator integrator);
void step_two(PolaritonOperator& op, PolaritonField& y, const Boundary& bc, double dt,
              Integrator integrator = Integrator::RK4);
void step_three(PolaritonOperator& op, PolaritonField& y, const Boundary& bc, double dt,
                Integrator integrator = Integrator::RK4);

// Direct stationary solution: the fixed point of the semi-discrete system,
// obtained by one upwind sweep.
PolaritonField steady_sweep(const PolaritonOperator& op, const Boundary& bc);

struct SteadyOptions {
  Integrator integrator = Integrator::SDIRK2;
  double dt = 0.0;              // 0: RK4 bound for RK4, check_interval/20 for SDIRK2
  double tol = 1e-6;
  double t_max = 0.0;           // 0: 40 check intervals
  double check_interval = 0.0;  // 0: must be supplied via transit_time()
};

struct SteadyResult {
  PolaritonField field;
  bool converged = false;
  double t = 0.0;
  long steps = 0;
  std::vector<double> history;  // relative max-norm change per check interval
};

// Evolves ψ(t=0) = 0 until max|ψ(t+T) - ψ(t)| / max|ψ(t+T)| < tol, where T is
// the check interval (one polariton transit by default).
SteadyResult solve_steady(PolaritonOperator& op, const Boundary& bc, const SteadyOptions& opt);

// Photon transit x_out/c plus the EIT group delay OD·Γ/(2Ω²).
double transit_time(const MediumProfile& m, const AtomicParams& p);
double eit_delay(const MediumProfile& m, const AtomicParams& p);

enum class SteadyMethod { Sweep, Evolve };

struct HierarchyOptions {
  int max_order = 3;
  Advection scheme = Advection::Upwind2;
  SteadyMethod method = SteadyMethod::Sweep;
  SteadyOptions evolve;
  cplx input = 1.0;
  // Feed the three-photon faces with one⊗one instead of the solved
  // two-photon state.
  bool product_faces = false;
};

struct HierarchyResult {
  SinglePolaritonState continuum;
  PolaritonField one;
  PolaritonField two;
  PolaritonField three;
  bool converged = true;
  std::vector<SteadyResult> runs;  // only for SteadyMethod::Evolve
};

HierarchyResult hierarchical_solve(const MediumProfile& m, const AtomicParams& p,
                                   const HierarchyOptions& opt = {});

// Product state ψ_{a}(x) = Π_k one_{a_k}(x_k) on the same grid.
PolaritonField product_field(const PolaritonField& one, int n);

}  // namespace rydpol
