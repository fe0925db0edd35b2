#include "rydpol/planewave.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "rydpol/errors.hpp"
#include "rydpol/jacobi.hpp"

namespace rydpol {

namespace {
constexpr double kPi = std::numbers::pi;
}

Eigen::Vector2d PlaneWaveBasis::b_of(int n, int m) const {
  double beta = 2.0 * kPi * D / S;
  return {beta * (n + 0.5 * m), beta * (std::sqrt(3.0) / 2.0) * m};
}

Eigen::Vector2d PlaneWaveBasis::a1() const { return {std::sqrt(3.0) * D / 2.0, -D / 2.0}; }
Eigen::Vector2d PlaneWaveBasis::a2() const { return {0.0, D}; }

PlaneWaveBasis make_basis(double D, double b_max) {
  if (!(D > 0)) throw DomainError("make_basis: D must be > 0");
  PlaneWaveBasis basis;
  basis.D = D;
  basis.S = std::sqrt(3.0) * D * D / 2.0;
  basis.b_max = b_max;
  double beta = 2.0 * kPi * D / basis.S;
  int range = static_cast<int>(std::ceil(2.0 * b_max / beta)) + 1;
  const double tol = 1e-9 * std::max(b_max, beta);
  for (int n = -range; n <= range; ++n) {
    for (int m = -range; m <= range; ++m) {
      Eigen::Vector2d b = basis.b_of(n, m);
      if (b.norm() <= b_max + tol) {
        basis.nm.push_back({n, m});
        basis.b.push_back(b);
      }
    }
  }
  return basis;
}

PlaneWaveBasis make_basis_count(double D, size_t count) {
  double beta = 4.0 * kPi / (std::sqrt(3.0) * D);
  // Shell radii are |b_nm|; walk outwards until the count is reached.
  std::vector<double> radii;
  int range = static_cast<int>(std::sqrt(static_cast<double>(count))) + 3;
  PlaneWaveBasis probe;
  probe.D = D;
  probe.S = std::sqrt(3.0) * D * D / 2.0;
  for (int n = -range; n <= range; ++n)
    for (int m = -range; m <= range; ++m) radii.push_back(probe.b_of(n, m).norm() / beta);
  std::sort(radii.begin(), radii.end());
  if (count == 0 || count > radii.size()) throw DomainError("make_basis_count: bad count");
  double r = radii[count - 1];
  return make_basis(D, r * beta);
}

RelativePotential blockade_potential_three(double r_b) {
  return [r_b](double eta, double zeta) {
    if (r_b == 0) return 1.0;
    std::array<double, 3> q{0.0, eta, zeta};
    auto x = jacobi_inverse(q);
    double rb6 = std::pow(r_b, 6);
    double sum = 0.0;
    for (int i = 0; i < 3; ++i) {
      for (int j = i + 1; j < 3; ++j) {
        double d = x[i] - x[j];
        double d6 = d * d * d * d * d * d;
        if (d6 == 0) return 0.0;
        sum += 2.0 * rb6 / d6;
      }
    }
    return 1.0 / (1.0 + (2.0 / 3.0) * sum);
  };
}

PotentialFourier potential_fourier(const PlaneWaveBasis& basis, const RelativePotential& f, int M,
                                   int range) {
  if (M < 2 * range + 1) throw DomainError("potential_fourier: grid too coarse for requested range");
  const Eigen::Vector2d a1 = basis.a1(), a2 = basis.a2();
  const Eigen::Vector2d cands[] = {Eigen::Vector2d(0, 0), a1, a2, a1 + a2, a1 - a2, -a1 + a2, -a1 - a2,
                                   -a1, -a2};
  // Sample at the minimum image so the periodic extension is continuous.
  Eigen::MatrixXd samples(M, M);
  double total = 0.0;
  for (int i = 0; i < M; ++i) {
    for (int j = 0; j < M; ++j) {
      double u = static_cast<double>(i) / M, v = static_cast<double>(j) / M;
      if (u > 0.5) u -= 1.0;
      if (v > 0.5) v -= 1.0;
      Eigen::Vector2d r = u * a1 + v * a2;
      Eigen::Vector2d best = r;
      for (const auto& c : cands) {
        Eigen::Vector2d t = r - c;
        if (t.squaredNorm() < best.squaredNorm() - 1e-12 * basis.D * basis.D) best = t;
      }
      double val = f(best.x(), best.y());
      samples(i, j) = val;
      total += val * val;
    }
  }
  PotentialFourier out;
  out.range = range;
  out.total_weight = total / (static_cast<double>(M) * M);
  const int W = 2 * range + 1;
  // Separable DFT: first over j (m index), then over i (n index).
  Eigen::MatrixXcd partial(M, W);
  for (int m = -range; m <= range; ++m) {
    std::vector<cplx> tw(M);
    for (int j = 0; j < M; ++j) tw[j] = std::polar(1.0, -2.0 * kPi * m * j / M);
    for (int i = 0; i < M; ++i) {
      cplx acc = 0.0;
      for (int j = 0; j < M; ++j) acc += samples(i, j) * tw[j];
      partial(i, m + range) = acc;
    }
  }
  out.coeff.assign(static_cast<size_t>(W) * W, cplx(0.0, 0.0));
  const double norm = 1.0 / (static_cast<double>(M) * M);
  for (int n = -range; n <= range; ++n) {
    for (int i = 0; i < M; ++i) {
      cplx tw = std::polar(1.0, -2.0 * kPi * n * i / M);
      for (int m = 0; m < W; ++m) out.coeff[(n + range) * W + m] += tw * partial(i, m);
    }
  }
  for (auto& c : out.coeff) c *= norm;
  return out;
}

Eigen::MatrixXd planewave_hamiltonian(const PlaneWaveBasis& basis, const PotentialFourier& vf,
                                      const BandParams& bp, PropagationMode mode) {
  const int N = static_cast<int>(basis.size());
  const double s2 = std::sqrt(2.0), s3 = std::sqrt(3.0);
  const int comps = mode == PropagationMode::Multiband ? 3 : 1;
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(comps * N, comps * N);
  for (int p = 0; p < N; ++p) {
    const double be = basis.b[p].x(), bz = basis.b[p].y();
    if (mode == PropagationMode::Multiband) {
      Eigen::Matrix3d m;
      m << 0.0, be, bz,
           be, bz / s2, be / s2,
           bz, be / s2, -bz / s2;
      H.block(3 * p, 3 * p, 3, 3) = m;
      for (int a = 0; a < 3; ++a) H(3 * p + a, 3 * p + a) += s3 * bp.wdt;
    } else {
      H(p, p) = -basis.b[p].squaredNorm() / (s3 * bp.wd) + s3 * bp.wdt;
    }
    for (int q = 0; q < N; ++q) {
      int dn = basis.nm[p][0] - basis.nm[q][0];
      int dm = basis.nm[p][1] - basis.nm[q][1];
      if (std::abs(dn) > vf.range || std::abs(dm) > vf.range)
        throw DomainError("planewave_hamiltonian: Fourier range too small");
      double v = vf.at(dn, dm).real();
      H(comps * p, comps * q) -= s3 * bp.wd * v;
    }
  }
  return H;
}

cplx PlaneWaveResult::field(const PlaneWaveBasis& basis, size_t r, double eta, double zeta) const {
  const int comps = mode == PropagationMode::Multiband ? 3 : 1;
  cplx acc = 0.0;
  for (size_t p = 0; p < basis.size(); ++p) {
    double phase = basis.b[p].x() * eta + basis.b[p].y() * zeta;
    acc += coefficients[r](static_cast<long>(comps * p)) * std::polar(1.0, phase);
  }
  return acc;
}

PlaneWaveResult planewave_propagate(const PlaneWaveBasis& basis, const std::vector<double>& R_grid,
                                    PropagationMode mode, const PlaneWaveOptions& opt) {
  if (basis.size() == 0) throw DomainError("planewave_propagate: empty basis");
  int range = 0;
  for (const auto& nm : basis.nm) range = std::max({range, std::abs(nm[0]), std::abs(nm[1])});
  range *= 2;
  int M = 2 * range + 1;
  if (opt.r_b > 0) M = std::max(M, static_cast<int>(std::ceil(opt.quad_per_rb * basis.D / opt.r_b)));
  RelativePotential f = opt.potential ? opt.potential : blockade_potential_three(opt.r_b);
  PotentialFourier vf = potential_fourier(basis, f, M, range);

  PlaneWaveResult res;
  res.mode = mode;
  res.R = R_grid;
  double inside = 0.0;
  for (int n = -range; n <= range; ++n)
    for (int m = -range; m <= range; ++m)
      if (basis.b_of(n, m).norm() <= basis.b_max * (1 + 1e-9)) inside += std::norm(vf.at(n, m));
  res.tail_weight = vf.total_weight > 0 ? std::max(0.0, 1.0 - inside / vf.total_weight) : 0.0;
  res.aliasing_warning = res.tail_weight > 0.01;

  Eigen::MatrixXd H = planewave_hamiltonian(basis, vf, opt.bp, mode);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
  if (es.info() != Eigen::Success) throw SolverError("planewave_propagate: eigensolver failed");
  const Eigen::MatrixXd& U = es.eigenvectors();
  const Eigen::VectorXd& lam = es.eigenvalues();

  // ψ(R=0): first component at b = 0.
  long zero = -1;
  for (size_t p = 0; p < basis.size(); ++p)
    if (basis.nm[p][0] == 0 && basis.nm[p][1] == 0) zero = static_cast<long>(p);
  if (zero < 0) throw DomainError("planewave_propagate: basis lacks b = 0");
  const int comps = mode == PropagationMode::Multiband ? 3 : 1;
  Eigen::VectorXd overlap = U.row(comps * zero).transpose();

  for (double R : R_grid) {
    Eigen::VectorXcd c(lam.size());
    for (long i = 0; i < lam.size(); ++i) c(i) = overlap(i) * std::polar(1.0, -lam(i) * R);
    res.coefficients.push_back(U.cast<cplx>() * c);
  }
  return res;
}

}  // namespace rydpol
