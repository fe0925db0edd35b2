#pragma once

#include <array>
#include <span>
#include <vector>

namespace rydpol {

// Orthogonal centre-of-mass / relative coordinates.
//   n=2: (R, r)            R = (x1+x2)/√2, r = (x1-x2)/√2
//   n=3: (R, η, ζ)         R = Σx/√3, η = (x1-x2)/√2, ζ = (x1+x2-2x3)/√6
//   n=4: (R, η1, η2, η3)   R = Σx/2, η1 = (x1-x2)/√2, η2 = (x3-x4)/√2,
//                          η3 = (x1+x2-x3-x4)/2
// The same matrices map photon momenta to (K, relative momenta).
std::vector<double> jacobi_forward(std::span<const double> x);
std::vector<double> jacobi_inverse(std::span<const double> q);

// Rows are the new coordinates; orthogonal.
std::vector<std::vector<double>> jacobi_matrix(int n);

// Temporal coordinates for three detection times:
//   η = (t2-t1)/√2, ζ = (t1+t2-2t3)/√6.
std::array<double, 2> temporal_jacobi(double t1, double t2, double t3);
// Times with zero mean that map to (η, ζ).
std::array<double, 3> temporal_jacobi_inverse(double eta, double zeta);

}  // namespace rydpol
