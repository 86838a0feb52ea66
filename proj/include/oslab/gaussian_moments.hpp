#pragma once

// Exact expectations of polynomial-times-exponential functionals under a
// centered Gaussian measure on the lattice:
//
//   E[ prod_j q_j^{d_j} * exp(i sum_j g_j q_j) ]
//     = exp(-g^T C g / 2) * E[ prod_j (q_j + i (C g)_j)^{d_j} ]
//
// The shifted moment is evaluated with the Gaussian integration-by-parts
// recursion E[y_a G(y)] = mu_a E[G] + sum_b C_ab E[d_b G], memoised on the
// multiplicity vector. For mu = 0 this is Isserlis/Wick's theorem.

#include <complex>
#include <cstddef>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace oslab {

struct GaussianFunctional {
  // (lattice index, power), sorted by index with distinct indices.
  std::vector<std::pair<std::size_t, int>> powers;
  // Coefficients g of the phase exp(i g.q), already including the pairing
  // spacing. Empty means no exponential factor.
  std::vector<std::complex<double>> phase;

  static GaussianFunctional constant();
  static GaussianFunctional monomial(std::vector<std::pair<std::size_t, int>> powers);

  int degree() const;
  GaussianFunctional shifted(std::ptrdiff_t steps) const;

  friend GaussianFunctional operator*(const GaussianFunctional& a, const GaussianFunctional& b);
};

std::complex<double> gaussian_expectation(const Eigen::MatrixXd& covariance, const GaussianFunctional& f);

// Real-valued moment E[prod q_{i_a}] of an index list with repetitions.
double gaussian_moment(const Eigen::MatrixXd& covariance, const std::vector<std::size_t>& indices);

}  // namespace oslab
