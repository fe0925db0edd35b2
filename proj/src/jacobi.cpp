#include "rydpol/jacobi.hpp"

#include <cmath>

#include "rydpol/errors.hpp"

namespace rydpol {

std::vector<std::vector<double>> jacobi_matrix(int n) {
  const double s2 = std::sqrt(2.0), s3 = std::sqrt(3.0), s6 = std::sqrt(6.0);
  switch (n) {
    case 2:
      return {{1 / s2, 1 / s2}, {1 / s2, -1 / s2}};
    case 3:
      return {{1 / s3, 1 / s3, 1 / s3}, {1 / s2, -1 / s2, 0.0}, {1 / s6, 1 / s6, -2 / s6}};
    case 4:
      return {{0.5, 0.5, 0.5, 0.5},
              {1 / s2, -1 / s2, 0.0, 0.0},
              {0.0, 0.0, 1 / s2, -1 / s2},
              {0.5, 0.5, -0.5, -0.5}};
    default:
      throw DomainError("jacobi coordinates defined for n in {2,3,4}, got " + std::to_string(n));
  }
}

std::vector<double> jacobi_forward(std::span<const double> x) {
  auto J = jacobi_matrix(static_cast<int>(x.size()));
  std::vector<double> q(x.size(), 0.0);
  for (size_t i = 0; i < x.size(); ++i)
    for (size_t j = 0; j < x.size(); ++j) q[i] += J[i][j] * x[j];
  return q;
}

std::vector<double> jacobi_inverse(std::span<const double> q) {
  auto J = jacobi_matrix(static_cast<int>(q.size()));
  std::vector<double> x(q.size(), 0.0);
  for (size_t i = 0; i < q.size(); ++i)
    for (size_t j = 0; j < q.size(); ++j) x[i] += J[j][i] * q[j];
  return x;
}

std::array<double, 2> temporal_jacobi(double t1, double t2, double t3) {
  return {(t2 - t1) / std::sqrt(2.0), (t1 + t2 - 2.0 * t3) / std::sqrt(6.0)};
}

std::array<double, 3> temporal_jacobi_inverse(double eta, double zeta) {
  const double s2 = std::sqrt(2.0), s6 = std::sqrt(6.0);
  return {-eta / s2 + zeta / s6, eta / s2 + zeta / s6, -2.0 * zeta / s6};
}

}  // namespace rydpol
