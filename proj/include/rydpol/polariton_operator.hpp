#pragma once

#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "rydpol/core_model.hpp"
#include "rydpol/field.hpp"

namespace rydpol {

enum class Advection {
  Upwind1,          // (ψ_i - ψ_{i-1})/dx
  Upwind2,          // (3ψ_i - 4ψ_{i-1} + ψ_{i-2})/(2dx), first order next to the inflow face
  PeriodicCentral,  // (ψ_{i+1} - ψ_{i-1})/(2dx) with wrap-around, no inflow faces
};

// Inflow data for the faces x_k = 0 of E-labelled slots. For n = 1 the
// face value is `scalar`; for n > 1 it is alpha·lower(labels without k,
// positions without k), the product form of the hierarchical boundary.
struct Boundary {
  const PolaritonField* lower = nullptr;
  cplx scalar = 1.0;
  cplx alpha = 1.0;
};

using LocalMatrix = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, 0, 27, 27>;
using LocalVector = Eigen::Matrix<cplx, Eigen::Dynamic, 1, 0, 27, 1>;

// Method-of-lines generator dψ/dt = Aψ for the n-photon amplitudes
// (n = 1, 2, 3). Local part per component a with labels l_k:
//   E slot k: -c ∂_k,  i g̃(x_k) ψ[k->P]
//   P slot k: -(Γ - iΔ),  i g̃(x_k) ψ[k->E],  iΩ ψ[k->S]
//   S slot k: -(γ - iδ),  iΩ ψ[k->P]
//   each S pair (k,l): -i V_ss(x_k, x_l)
class PolaritonOperator {
 public:
  PolaritonOperator(int n, const MediumProfile& m, const AtomicParams& p,
                    Advection scheme = Advection::Upwind2);

  int n() const { return n_; }
  int N() const { return N_; }
  double dx() const { return dx_; }
  Advection scheme() const { return scheme_; }
  const AtomicParams& params() const { return p_; }

  PolaritonField make_field() const { return PolaritonField(n_, N_, dx_); }

  // Local (non-derivative) couplings at grid multi-index idx.
  void local_matrix(const std::array<int, 3>& idx, LocalMatrix& L) const;

  bool pinned(int a, const std::array<int, 3>& idx) const;
  cplx boundary_value(int a, const std::array<int, 3>& idx, const Boundary& b) const;
  void pin(PolaritonField& y, const Boundary& b) const;

  // out = A y on free entries, 0 on pinned entries (y's pinned entries are
  // read as they are; call pin() first).
  void apply(const PolaritonField& y, PolaritonField& out) const;

  // Solves (σ - A) y = rhs on free entries with pinned entries taken from b.
  // rhs may be null (zero). Only for inflow schemes: the upwind operator is
  // block lower triangular in the sweep order, so this is a direct solve.
  void solve_shifted(double sigma, const PolaritonField* rhs, const Boundary& b,
                     PolaritonField& y) const;

  // Caches inverted local matrices for one σ (worthwhile for repeated implicit steps
  // on 1-D and 2-D grids). Returns false if the cache would exceed max_bytes.
  bool prepare(double sigma, size_t max_bytes = size_t(1) << 30);

  // max over free entries of |(A y)|, i.e. the steady-state residual.
  double residual(const PolaritonField& y) const;

  // Largest local frequency scale max(|Δ|+Γ, Ω, V_max, g̃_max) times n.
  double stiffness_scale() const;
  // RK4 step bound: min(cfl·dx/c, safety/stiffness_scale).
  double rk4_dt(double cfl = 0.5, double safety = 0.1) const;

  double coupling_at(int i) const { return gtil_[i]; }
  double vdw_at(int i, int j) const { return vtab_[static_cast<size_t>(i) * N_ + j]; }

 private:
  struct Coupling {
    int target;
    int slot;
    bool photon_atom;  // i g̃(x_slot) if true, iΩ otherwise
  };
  struct CompInfo {
    cplx diag;                       // decay/detuning part
    std::vector<int> e_slots;
    std::vector<std::pair<int, int>> s_pairs;
    std::vector<Coupling> couplings;
  };

  void advection_coeffs(int i, double& a0, double& a1, double& a2) const;
  void build_order();

  int n_;
  int N_;
  double dx_;
  Advection scheme_;
  AtomicParams p_;
  std::vector<double> gtil_;
  std::vector<double> vtab_;
  std::vector<CompInfo> comps_;
  size_t sites_;
  std::array<size_t, 3> strides_{0, 0, 0};
  // Sites grouped by index sum; every upstream neighbour lies in an earlier group.
  std::vector<size_t> order_;
  std::vector<size_t> level_start_;

  double cached_sigma_ = -1.0;
  std::vector<cplx> inv_cache_;  // per site, K x K column-major inverse
};

}  // namespace rydpol
