#include "rydpol/polariton_operator.hpp"

#include <algorithm>
#include <cmath>

#include "rydpol/errors.hpp"

namespace rydpol {

namespace {
const cplx I(0.0, 1.0);
}

PolaritonOperator::PolaritonOperator(int n, const MediumProfile& m, const AtomicParams& p,
                                     Advection scheme)
    : n_(n), N_(m.grid.n_points), dx_(m.grid.dx), scheme_(scheme), p_(p) {
  if (n < 1 || n > 3) throw DomainError("PolaritonOperator: n must be 1, 2 or 3");
  if (N_ < 3) throw DomainError("PolaritonOperator: need at least 3 grid points");

  gtil_.resize(N_);
  for (int i = 0; i < N_; ++i) gtil_[i] = m.coupling(m.grid_x(i), p);
  vtab_.assign(static_cast<size_t>(N_) * N_, 0.0);
  if (n > 1 && p.c6 > 0) {
    for (int i = 0; i < N_; ++i)
      for (int j = 0; j < N_; ++j)
        vtab_[static_cast<size_t>(i) * N_ + j] = vdw_pair(m.grid_x(i), m.grid_x(j), p, dx_);
  }

  const int K = component_count(n);
  comps_.resize(K);
  const cplx decay_p(-p.gamma_p, p.delta_1);  // -(Γ - iΔ)
  const cplx decay_s(-p.gamma_s, p.delta_2);  // -(γ - iδ)
  for (int a = 0; a < K; ++a) {
    CompInfo& c = comps_[a];
    c.diag = 0.0;
    for (int k = 0; k < n; ++k) {
      int l = slot_label(n, a, k);
      if (l == kE) {
        c.e_slots.push_back(k);
        c.couplings.push_back({with_slot_label(n, a, k, kP), k, true});
      } else if (l == kP) {
        c.diag += decay_p;
        c.couplings.push_back({with_slot_label(n, a, k, kE), k, true});
        c.couplings.push_back({with_slot_label(n, a, k, kS), k, false});
      } else {
        c.diag += decay_s;
        c.couplings.push_back({with_slot_label(n, a, k, kP), k, false});
      }
    }
    for (int k = 0; k < n; ++k)
      for (int l = k + 1; l < n; ++l)
        if (slot_label(n, a, k) == kS && slot_label(n, a, l) == kS) c.s_pairs.emplace_back(k, l);
  }

  sites_ = 1;
  for (int k = 0; k < n; ++k) sites_ *= static_cast<size_t>(N_);
  size_t s = 1;
  for (int k = n - 1; k >= 0; --k) {
    strides_[k] = s;
    s *= static_cast<size_t>(N_);
  }
  build_order();
}

void PolaritonOperator::build_order() {
  const int levels = n_ * (N_ - 1) + 1;
  std::vector<size_t> count(levels + 1, 0);
  auto level_of = [&](size_t site) {
    int sum = 0;
    for (int k = 0; k < n_; ++k) {
      sum += static_cast<int>(site / strides_[k]);
      site %= strides_[k];
    }
    return sum;
  };
  for (size_t s = 0; s < sites_; ++s) ++count[level_of(s) + 1];
  level_start_.assign(levels + 1, 0);
  for (int l = 0; l < levels; ++l) level_start_[l + 1] = level_start_[l] + count[l + 1];
  order_.resize(sites_);
  std::vector<size_t> fill(level_start_.begin(), level_start_.end() - 1);
  for (size_t s = 0; s < sites_; ++s) order_[fill[level_of(s)]++] = s;
}

void PolaritonOperator::advection_coeffs(int i, double& a0, double& a1, double& a2) const {
  a2 = 0.0;
  if (scheme_ == Advection::Upwind2 && i >= 2) {
    a0 = 1.5;
    a1 = -2.0;
    a2 = 0.5;
  } else {
    a0 = 1.0;
    a1 = -1.0;
  }
}

void PolaritonOperator::local_matrix(const std::array<int, 3>& idx, LocalMatrix& L) const {
  const int K = component_count(n_);
  L.setZero(K, K);
  for (int a = 0; a < K; ++a) {
    const CompInfo& c = comps_[a];
    cplx d = c.diag;
    for (auto [k, l] : c.s_pairs) d -= I * vdw_at(idx[k], idx[l]);
    L(a, a) += d;
    for (const Coupling& cp : c.couplings) {
      double w = cp.photon_atom ? gtil_[idx[cp.slot]] : p_.rabi;
      L(a, cp.target) += I * w;
    }
  }
}

bool PolaritonOperator::pinned(int a, const std::array<int, 3>& idx) const {
  if (scheme_ == Advection::PeriodicCentral) return false;
  for (int k : comps_[a].e_slots)
    if (idx[k] == 0) return true;
  return false;
}

cplx PolaritonOperator::boundary_value(int a, const std::array<int, 3>& idx, const Boundary& b) const {
  for (int k : comps_[a].e_slots) {
    if (idx[k] != 0) continue;
    if (n_ == 1) return b.alpha * b.scalar;
    if (!b.lower) return 0.0;
    const PolaritonField& lo = *b.lower;
    if (lo.n != n_ - 1 || lo.N != N_) throw DomainError("boundary: lower field has wrong shape");
    std::array<int, 3> sub{0, 0, 0};
    int j = 0;
    for (int q = 0; q < n_; ++q)
      if (q != k) sub[j++] = idx[q];
    return b.alpha * lo.at(drop_slot(n_, a, k), lo.site(sub));
  }
  return 0.0;
}

void PolaritonOperator::pin(PolaritonField& y, const Boundary& b) const {
  if (scheme_ == Advection::PeriodicCentral) return;
  const int K = component_count(n_);
  // Pinned sites lie on faces; iterate the whole grid but skip interior quickly.
#pragma omp parallel for schedule(static)
  for (long long s = 0; s < static_cast<long long>(sites_); ++s) {
    auto idx = y.index(static_cast<size_t>(s));
    bool face = false;
    for (int k = 0; k < n_; ++k) face = face || idx[k] == 0;
    if (!face) continue;
    for (int a = 0; a < K; ++a)
      if (pinned(a, idx)) y.at(a, static_cast<size_t>(s)) = boundary_value(a, idx, b);
  }
}

void PolaritonOperator::apply(const PolaritonField& y, PolaritonField& out) const {
  if (out.n != n_ || out.N != N_) out = make_field();
  const int K = component_count(n_);
  const double cdx = p_.light_speed / dx_;
#pragma omp parallel for schedule(static)
  for (long long ss = 0; ss < static_cast<long long>(sites_); ++ss) {
    const size_t s = static_cast<size_t>(ss);
    auto idx = y.index(s);
    for (int a = 0; a < K; ++a) {
      if (pinned(a, idx)) {
        out.at(a, s) = 0.0;
        continue;
      }
      const CompInfo& c = comps_[a];
      cplx d = c.diag;
      for (auto [k, l] : c.s_pairs) d -= I * vdw_at(idx[k], idx[l]);
      cplx acc = d * y.at(a, s);
      for (const Coupling& cp : c.couplings) {
        double w = cp.photon_atom ? gtil_[idx[cp.slot]] : p_.rabi;
        acc += I * w * y.at(cp.target, s);
      }
      for (int k : c.e_slots) {
        const size_t st = strides_[k];
        if (scheme_ == Advection::PeriodicCentral) {
          size_t sp = idx[k] == N_ - 1 ? s - static_cast<size_t>(N_ - 1) * st : s + st;
          size_t sm = idx[k] == 0 ? s + static_cast<size_t>(N_ - 1) * st : s - st;
          acc -= 0.5 * cdx * (y.at(a, sp) - y.at(a, sm));
        } else {
          double a0, a1, a2;
          advection_coeffs(idx[k], a0, a1, a2);
          cplx dv = a0 * y.at(a, s) + a1 * y.at(a, s - st);
          if (a2 != 0.0) dv += a2 * y.at(a, s - 2 * st);
          acc -= cdx * dv;
        }
      }
      out.at(a, s) = acc;
    }
  }
}

bool PolaritonOperator::prepare(double sigma, size_t max_bytes) {
  const int K = component_count(n_);
  size_t bytes = sites_ * static_cast<size_t>(K) * K * sizeof(cplx);
  if (bytes > max_bytes) {
    inv_cache_.clear();
    cached_sigma_ = -1.0;
    return false;
  }
  if (cached_sigma_ == sigma && !inv_cache_.empty()) return true;
  inv_cache_.assign(sites_ * static_cast<size_t>(K) * K, cplx(0.0, 0.0));
  const double cdx = p_.light_speed / dx_;
  PolaritonField shape = PolaritonField(n_, N_, dx_);
#pragma omp parallel for schedule(static)
  for (long long ss = 0; ss < static_cast<long long>(sites_); ++ss) {
    const size_t s = static_cast<size_t>(ss);
    auto idx = shape.index(s);
    LocalMatrix M;
    local_matrix(idx, M);
    M = -M;
    for (int a = 0; a < K; ++a) {
      if (pinned(a, idx)) {
        M.row(a).setZero();
        M(a, a) = 1.0;
        continue;
      }
      double adv = 0.0;
      for (int k : comps_[a].e_slots) {
        double a0, a1, a2;
        advection_coeffs(idx[k], a0, a1, a2);
        adv += a0;
      }
      M(a, a) += sigma + cdx * adv;
    }
    LocalMatrix inv = M.partialPivLu().inverse();
    std::copy(inv.data(), inv.data() + K * K, inv_cache_.begin() + static_cast<long>(s * K * K));
  }
  cached_sigma_ = sigma;
  return true;
}

void PolaritonOperator::solve_shifted(double sigma, const PolaritonField* rhs, const Boundary& b,
                                      PolaritonField& y) const {
  if (scheme_ == Advection::PeriodicCentral)
    throw SolverError("solve_shifted: periodic scheme has no sweep order");
  if (y.n != n_ || y.N != N_) y = make_field();
  const int K = component_count(n_);
  const double cdx = p_.light_speed / dx_;
  const bool cached = cached_sigma_ == sigma && !inv_cache_.empty();
  const int levels = static_cast<int>(level_start_.size()) - 1;

  for (int lev = 0; lev < levels; ++lev) {
    const long long lo = static_cast<long long>(level_start_[lev]);
    const long long hi = static_cast<long long>(level_start_[lev + 1]);
#pragma omp parallel for schedule(static)
    for (long long o = lo; o < hi; ++o) {
      const size_t s = order_[static_cast<size_t>(o)];
      auto idx = y.index(s);
      LocalVector r(K);
      for (int a = 0; a < K; ++a) {
        if (pinned(a, idx)) {
          r(a) = boundary_value(a, idx, b);
          continue;
        }
        cplx v = rhs ? rhs->at(a, s) : cplx(0.0, 0.0);
        for (int k : comps_[a].e_slots) {
          const size_t st = strides_[k];
          double a0, a1, a2;
          advection_coeffs(idx[k], a0, a1, a2);
          cplx up = a1 * y.at(a, s - st);
          if (a2 != 0.0) up += a2 * y.at(a, s - 2 * st);
          v -= cdx * up;
        }
        r(a) = v;
      }
      LocalVector sol;
      if (cached) {
        Eigen::Map<const Eigen::MatrixXcd> inv(inv_cache_.data() + s * K * K, K, K);
        sol = inv * r;
      } else {
        LocalMatrix M;
        local_matrix(idx, M);
        M = -M;
        for (int a = 0; a < K; ++a) {
          if (pinned(a, idx)) {
            M.row(a).setZero();
            M(a, a) = 1.0;
            continue;
          }
          double adv = 0.0;
          for (int k : comps_[a].e_slots) {
            double a0, a1, a2;
            advection_coeffs(idx[k], a0, a1, a2);
            adv += a0;
          }
          M(a, a) += sigma + cdx * adv;
        }
        sol = M.partialPivLu().solve(r);
      }
      for (int a = 0; a < K; ++a) y.at(a, s) = pinned(a, idx) ? r(a) : sol(a);
    }
  }
}

double PolaritonOperator::residual(const PolaritonField& y) const {
  PolaritonField out = make_field();
  apply(y, out);
  double m = 0.0;
  for (const auto& v : out.data) m = std::max(m, std::abs(v));
  return m;
}

double PolaritonOperator::stiffness_scale() const {
  double gmax = 0.0;
  for (double g : gtil_) gmax = std::max(gmax, g);
  double vmax = 0.0;
  for (double v : vtab_) vmax = std::max(vmax, v);
  double atom = std::max(std::abs(p_.delta_1) + p_.gamma_p, std::abs(p_.delta_2) + p_.gamma_s);
  double pairs = 0.5 * n_ * (n_ - 1);
  return n_ * (atom + gmax + p_.rabi) + pairs * vmax;
}

double PolaritonOperator::rk4_dt(double cfl, double safety) const {
  double scale = stiffness_scale();
  double dt = cfl * dx_ / p_.light_speed;
  if (scale > 0) dt = std::min(dt, safety / scale);
  return dt;
}

}  // namespace rydpol
