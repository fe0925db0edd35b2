#include "rydpol/hamiltonian_oracle.hpp"

#include <unsupported/Eigen/KroneckerProduct>

#include "rydpol/errors.hpp"

namespace rydpol {

Eigen::Matrix3cd single_block(const AtomicParams& p, double coupling) {
  using C = std::complex<double>;
  Eigen::Matrix3cd h;
  h << 0.0, coupling, 0.0,
       coupling, C(p.delta_1, p.gamma_p), p.rabi,
       0.0, p.rabi, C(p.delta_2, p.gamma_s);
  return -h;
}

Eigen::MatrixXcd build_hamiltonian_oracle(int n, const AtomicParams& p,
                                          std::span<const double> couplings,
                                          std::span<const double> positions, double cap_dx) {
  if (n != 2 && n != 3 && n != 1) throw DomainError("oracle: n must be 1, 2 or 3");
  if (static_cast<int>(couplings.size()) != n || static_cast<int>(positions.size()) != n)
    throw DomainError("oracle: need one coupling and one position per photon");

  auto identity = [](int dim) { return Eigen::MatrixXcd::Identity(dim, dim); };
  int dim = 1;
  for (int k = 0; k < n; ++k) dim *= 3;
  Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(dim, dim);
  for (int k = 0; k < n; ++k) {
    int left = 1, right = 1;
    for (int j = 0; j < k; ++j) left *= 3;
    for (int j = k + 1; j < n; ++j) right *= 3;
    Eigen::MatrixXcd block = single_block(p, couplings[k]);
    Eigen::MatrixXcd term = Eigen::kroneckerProduct(
        identity(left), Eigen::MatrixXcd(Eigen::kroneckerProduct(block, identity(right))));
    H += term;
  }

  // Projector onto S in slot k, then V_ss(x_k, x_l) P_k P_l for each pair.
  Eigen::Matrix3cd ps = Eigen::Matrix3cd::Zero();
  ps(2, 2) = 1.0;
  for (int k = 0; k < n; ++k) {
    for (int l = k + 1; l < n; ++l) {
      Eigen::MatrixXcd op = Eigen::MatrixXcd::Identity(1, 1);
      for (int j = 0; j < n; ++j) {
        Eigen::MatrixXcd f = (j == k || j == l) ? Eigen::MatrixXcd(ps) : identity(3);
        op = Eigen::kroneckerProduct(op, f).eval();
      }
      H += vdw_pair(positions[k], positions[l], p, cap_dx) * op;
    }
  }
  return H;
}

}  // namespace rydpol
