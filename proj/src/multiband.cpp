#include "rydpol/multiband.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "rydpol/errors.hpp"
#include "rydpol/jacobi.hpp"

namespace rydpol {

namespace {

Eigen::MatrixXcd coupled_block(const Eigen::VectorXd& diag, const BandParams& bp) {
  const int n = static_cast<int>(diag.size());
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Constant(n, n, bp.wd / n);
  for (int i = 0; i < n; ++i) h(i, i) += diag(i) - bp.wdt;
  return h;
}

}  // namespace

BandParams band_params(const AtomicParams& p, double rho, bool si) {
  if (p.delta_1 == 0) throw DomainError("band_params: delta_1 = 0");
  if (!(rho > 0)) throw DomainError("band_params: density must be > 0");
  BandParams bp;
  double wd = rho * p.g_coupling * p.g_coupling / (p.delta_1 * p.light_speed);
  double offset = p.rabi * p.rabi / (p.delta_1 * p.light_speed);
  if (si) {
    bp.wd = wd;
    bp.wdt = wd + offset;
  } else {
    bp.wd = 1.0;
    bp.wdt = 1.0 + offset / wd;
  }
  return bp;
}

double band_unit_to_si(const AtomicParams& p, double rho) {
  return rho * p.g_coupling * p.g_coupling / (p.delta_1 * p.light_speed);
}

Eigen::MatrixXcd band_matrix_two(double k, const BandParams& bp) {
  Eigen::VectorXd d(2);
  d << -k / std::sqrt(2.0), k / std::sqrt(2.0);
  return std::sqrt(2.0) * coupled_block(d, bp);
}

Eigen::MatrixXcd band_matrix_three(double k_eta, double k_zeta, const BandParams& bp) {
  std::array<double, 3> jac{0.0, k_eta, k_zeta};
  auto q = jacobi_inverse(jac);
  Eigen::VectorXd d(3);
  d << -q[0], -q[1], -q[2];
  return std::sqrt(3.0) * coupled_block(d, bp);
}

Eigen::MatrixXcd band_matrix_four(double k1, double k2, double k3, const BandParams& bp) {
  const double s2 = std::sqrt(2.0);
  Eigen::VectorXd d(4);
  d << k1 / s2 + k3 / 2, -k1 / s2 + k3 / 2, k2 / s2 - k3 / 2, -k2 / s2 - k3 / 2;
  return 2.0 * coupled_block(d, bp);
}

Eigen::MatrixXcd band_matrix_n(std::span<const double> k, const BandParams& bp) {
  const int n = static_cast<int>(k.size());
  if (n < 2) throw DomainError("band_matrix_n: n must be >= 2");
  double mean = std::accumulate(k.begin(), k.end(), 0.0) / n;
  Eigen::VectorXd d(n);
  for (int i = 0; i < n; ++i) d(i) = -(k[i] - mean);
  return std::sqrt(static_cast<double>(n)) * coupled_block(d, bp);
}

Eigen::MatrixXcd band_matrix_three_symmetric(double ke, double kz, const BandParams& bp) {
  const double s2 = std::sqrt(2.0), s3 = std::sqrt(3.0);
  Eigen::Matrix3d m;
  m << 0.0, ke, kz,
       ke, kz / s2, ke / s2,
       kz, ke / s2, -kz / s2;
  Eigen::MatrixXcd h = (-m).cast<cplx>();
  for (int i = 0; i < 3; ++i) h(i, i) -= s3 * bp.wdt;
  h(0, 0) += s3 * bp.wd;
  return h;
}

BandPoint diagonalize(const Eigen::MatrixXcd& h) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
  if (es.info() != Eigen::Success) throw SolverError("diagonalize: eigensolver failed");
  return {es.eigenvalues(), es.eigenvectors()};
}

std::array<double, 2> bands_two(double k, const BandParams& bp) {
  auto bpnt = diagonalize(band_matrix_two(k, bp));
  return {bpnt.K(0), bpnt.K(1)};
}

std::array<double, 2> bands_two_closed(double k, const BandParams& bp) {
  const double s2 = std::sqrt(2.0);
  double base = -s2 * bp.wdt + s2 * bp.wd / 2.0;
  double root = std::sqrt(0.5 * bp.wd * bp.wd + k * k);
  return {base - root, base + root};
}

double schrodinger_two(double k, const BandParams& bp) {
  return bands_two_closed(0.0, bp)[1] + k * k / (std::sqrt(2.0) * bp.wd);
}

BandPoint bands_three(double k_eta, double k_zeta, const BandParams& bp) {
  return diagonalize(band_matrix_three(k_eta, k_zeta, bp));
}

BandPoint bands_four(double k1, double k2, double k3, const BandParams& bp) {
  return diagonalize(band_matrix_four(k1, k2, k3, bp));
}

BandPoint bands_n(std::span<const double> k, const BandParams& bp) {
  return diagonalize(band_matrix_n(k, bp));
}

double massive_three(double k, const BandParams& bp) {
  const double s3 = std::sqrt(3.0);
  return -s3 * bp.wdt + s3 * bp.wd + k * k / (s3 * bp.wd);
}

double massive_four(double k, const BandParams& bp) {
  return -2.0 * bp.wdt + 2.0 * bp.wd + k * k / (2.0 * bp.wd);
}

std::vector<BandPoint> thread_bands(const std::vector<Eigen::MatrixXcd>& path) {
  std::vector<BandPoint> out;
  if (path.empty()) return out;
  out.push_back(diagonalize(path[0]));
  const int n = static_cast<int>(out[0].K.size());
  Eigen::MatrixXcd ref = out[0].v;

  auto degenerate = [](const Eigen::VectorXd& K, int i) {
    double scale = std::max(1.0, K.cwiseAbs().maxCoeff());
    for (int j = 0; j < K.size(); ++j)
      if (j != i && std::abs(K(j) - K(i)) < 1e-9 * scale) return true;
    return false;
  };
  auto update_ref = [&](const BandPoint& b) {
    for (int i = 0; i < n; ++i)
      if (!degenerate(b.K, i)) ref.col(i) = b.v.col(i);
  };
  update_ref(out[0]);

  for (size_t s = 1; s < path.size(); ++s) {
    BandPoint raw = diagonalize(path[s]);
    Eigen::MatrixXd overlap = (ref.adjoint() * raw.v).cwiseAbs2();
    std::vector<int> perm(n), best(n);
    std::iota(perm.begin(), perm.end(), 0);
    if (n <= 6) {
      double best_score = -1.0;
      do {
        double score = 0.0;
        for (int i = 0; i < n; ++i) score += overlap(i, perm[i]);
        if (score > best_score + 1e-12) {
          best_score = score;
          best = perm;
        }
      } while (std::next_permutation(perm.begin(), perm.end()));
    } else {
      std::vector<bool> used(n, false);
      for (int i = 0; i < n; ++i) {
        int arg = -1;
        for (int j = 0; j < n; ++j)
          if (!used[j] && (arg < 0 || overlap(i, j) > overlap(i, arg))) arg = j;
        best[i] = arg;
        used[arg] = true;
      }
    }
    BandPoint b{Eigen::VectorXd(n), Eigen::MatrixXcd(n, n)};
    for (int i = 0; i < n; ++i) {
      b.K(i) = raw.K(best[i]);
      b.v.col(i) = raw.v.col(best[i]);
    }
    update_ref(b);
    out.push_back(std::move(b));
  }
  return out;
}

double warping_metric(double kabs, const BandParams& bp, int n_angles) {
  if (!(kabs > 0)) throw DomainError("warping_metric: |k| must be > 0");
  std::vector<Eigen::VectorXd> vals;
  double mean = 0.0;
  for (int t = 0; t < n_angles; ++t) {
    double th = 2.0 * std::numbers::pi * t / n_angles;
    auto b = bands_three(kabs * std::cos(th), kabs * std::sin(th), bp);
    vals.push_back(b.K);
    mean += b.K.cwiseAbs().sum();
  }
  mean /= 3.0 * n_angles;
  double worst = 0.0;
  for (int nu = 0; nu < 3; ++nu) {
    double lo = vals[0](nu), hi = vals[0](nu);
    for (const auto& v : vals) {
      lo = std::min(lo, v(nu));
      hi = std::max(hi, v(nu));
    }
    worst = std::max(worst, hi - lo);
  }
  return mean > 0 ? worst / mean : worst;
}

double rotation_asymmetry(double kabs, double dtheta, const BandParams& bp, int n_angles) {
  double worst = 0.0;
  for (int t = 0; t < n_angles; ++t) {
    double th = 2.0 * std::numbers::pi * t / n_angles;
    auto a = bands_three(kabs * std::cos(th), kabs * std::sin(th), bp);
    auto b = bands_three(kabs * std::cos(th + dtheta), kabs * std::sin(th + dtheta), bp);
    worst = std::max(worst, (a.K - b.K).cwiseAbs().maxCoeff());
  }
  return worst;
}

}  // namespace rydpol
