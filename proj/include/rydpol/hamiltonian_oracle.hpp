#pragma once

#include <span>

#include <Eigen/Dense>

#include "rydpol/core_model.hpp"

namespace rydpol {

// Test oracle: the n-polariton Hamiltonian at fixed positions, built as a
// Kronecker sum of single-polariton blocks plus the pairwise Rydberg shift on
// S-labelled slots. The derivative term of H(x) is left out; i∂_t ψ = 𝓗 ψ,
// so the local generator is -i𝓗.
//   couplings[k] = g√ρ(x_k), positions[k] = x_k, cap_dx as in vdw_pair.
Eigen::MatrixXcd build_hamiltonian_oracle(int n, const AtomicParams& p,
                                          std::span<const double> couplings,
                                          std::span<const double> positions, double cap_dx);

// 3x3 single-polariton block without the derivative.
Eigen::Matrix3cd single_block(const AtomicParams& p, double coupling);

}  // namespace rydpol
