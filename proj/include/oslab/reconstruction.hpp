#pragma once

// Reconstruction of the physical Hilbert space on a finite lattice.
//
// Positive-time observables F_k span K0. The J-inner product
//   <F_k, F_l>_J = E[conj(Theta F_k) F_l]
// is positive semidefinite exactly when the measure is reflection positive
// on that span; quotienting its null space gives the physical space K with
// an orthonormal basis e_a = sum_k W_ka F_k. Time translation compresses to
// a contraction T(s) on K whose logarithm is the Hamiltonian, and the
// constant functional is the vacuum.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "oslab/gaussian_moments.hpp"
#include "oslab/lattice.hpp"

namespace oslab {

enum class ObservableKind { field_monomial, exponential };

// Either prod_i q(t_i)^{d_i} or exp(i q(f)) with f in D+.
class ObservableFunctional {
 public:
  static ObservableFunctional monomial(std::vector<std::pair<std::size_t, int>> powers,
                                       const TimeLattice& lattice);
  static ObservableFunctional exponential(const TestFunction& f);

  ObservableKind kind() const noexcept { return kind_; }
  const std::vector<std::pair<std::size_t, int>>& powers() const noexcept { return powers_; }
  const std::optional<TestFunction>& test_function() const noexcept { return f_; }

  int degree() const;
  // Largest lattice index carrying weight (support end).
  std::size_t max_index() const;

  // F as a Gaussian functional (phase includes the lattice spacing).
  GaussianFunctional functional() const;
  // conj(Theta F).
  GaussianFunctional reflected_conjugate() const;

  std::string describe() const;

 private:
  ObservableFunctional(ObservableKind kind, TimeLattice lattice) : kind_(kind), lattice_(lattice) {}

  ObservableKind kind_;
  TimeLattice lattice_;
  std::vector<std::pair<std::size_t, int>> powers_;
  std::optional<TestFunction> f_;
};

struct BasisSpec {
  int max_degree = 3;
  std::vector<std::size_t> time_indices;  // lattice indices, all positive times
  std::vector<TestFunction> exponentials;  // optional exp(i q(f)) elements
};

// All monomials of total degree <= max_degree in q(t_i), degree-lex order,
// starting with the constant.
std::vector<ObservableFunctional> monomial_basis(int max_degree, const std::vector<std::size_t>& time_indices,
                                                 const TimeLattice& lattice);

struct HamiltonianSpectrum {
  Eigen::MatrixXcd hamiltonian;   // -(1/tau) log T on K, Hermitian
  Eigen::MatrixXcd eigenvectors;  // columns, ascending energy
  Eigen::VectorXd raw;            // ascending
  Eigen::VectorXd shifted;        // raw - raw(0)
  double step_time = 0.0;         // tau
  double transfer_asymmetry = 0.0;
};

struct ReconstructedSpace {
  TimeLattice lattice{2, 1.0};
  BasisSpec spec;
  std::vector<ObservableFunctional> basis;
  Eigen::MatrixXcd j_gram;
  Eigen::VectorXd j_gram_spectrum;  // ascending
  double null_tolerance = 1e-10;
  std::size_t physical_dim = 0;
  Eigen::MatrixXcd metric_factor;  // W, basis.size() x physical_dim
  Eigen::VectorXcd vacuum;         // K-coordinates of the constant functional

  // Filled by reconstruct().
  std::size_t step = 0;
  std::optional<Eigen::MatrixXcd> transfer;
  std::optional<HamiltonianSpectrum> hamiltonian;

  // K-coordinates of the class of an arbitrary positive-time functional.
  Eigen::VectorXcd coordinates(const Eigen::MatrixXd& covariance, const GaussianFunctional& f) const;
};

// Throws PreconditionError for an empty basis or non-positive times,
// ReflectionPositivityViolation when the J-Gram is indefinite beyond
// null_tolerance * lambda_max, DegenerateSpace when nothing survives the
// quotient.
ReconstructedSpace build_k0(const GaussianEuclideanMeasure& measure, const BasisSpec& spec,
                            double null_tolerance = 1e-10);

// Largest shift (lattice steps) that keeps every basis functional on the lattice.
std::size_t max_representable_step(const ReconstructedSpace& space);

// Compression of F(q(t_1), ...) -> F(q(t_1 + s), ...) to K; RangeError when
// the shift leaves the lattice.
Eigen::MatrixXcd transfer_operator(const ReconstructedSpace& space, const GaussianEuclideanMeasure& measure,
                                   std::size_t step);

// H = -(1/tau) log T with tau = step * spacing, on the Hermitian part of T.
// NumericalError when T has an eigenvalue <= 0.
HamiltonianSpectrum extract_hamiltonian(const ReconstructedSpace& space, const Eigen::MatrixXcd& transfer,
                                        std::size_t step);

// build_k0 + transfer_operator + extract_hamiltonian.
ReconstructedSpace reconstruct(const GaussianEuclideanMeasure& measure, const BasisSpec& spec, std::size_t step,
                               double null_tolerance = 1e-10);

// Time-zero multiplication operator by q^power compressed to K. Uses
//   E[conj(Theta F_k) q(a/2)^p F_l(. + a)] = <F_k, e^{-aH/2} q^p e^{-aH/2} F_l>
// and undoes the two half-step propagators with the reconstructed H.
Eigen::MatrixXcd field_power_operator(const ReconstructedSpace& space, const GaussianEuclideanMeasure& measure,
                                      int power);

struct NPointFactor {
  std::size_t index;  // lattice index
  int power;          // A_k = q^power
};

struct NPointReport {
  std::string description;
  double lhs = 0.0;        // <Omega, A_1 e^{-(t2-t1)H} A_2 ... A_n Omega>
  double rhs_exact = 0.0;  // Wick
  std::optional<double> rhs_mc;
  std::optional<double> mc_stderr;
  bool within_truncation = true;  // intermediate degrees fit the basis
};

NPointReport verify_npoint_identity(const ReconstructedSpace& space, const GaussianEuclideanMeasure& measure,
                                    const std::vector<NPointFactor>& observables, std::size_t mc_samples,
                                    std::uint64_t seed);

// Reflection symmetry of the time-shift representation on path space:
// R1 J^2 = id, R2 J U(t) = U(-t) J, on monomials over the space's times and
// their mirror images (degree <= min(max_degree, 2)).
struct R1R2Report {
  std::size_t shift = 0;
  std::size_t basis_dim = 0;
  bool j_squared_identity = false;  // exact, on the basis permutation
  double j_squared_residual = 0.0;  // ||J^2 - I|| in L2-orthonormal coordinates
  double r2_residual = 0.0;         // ||J U(t) - U(-t) J||_2
};

// `flip_index`, when set, negates J on that basis element (negative control).
R1R2Report check_r1_r2(const ReconstructedSpace& space, const GaussianEuclideanMeasure& measure, std::size_t shift,
                       std::optional<std::size_t> flip_index = std::nullopt);

// max_t ||V(t)^H V(t) - I||_2 with V(t) = exp(i t H) computed by scaling and
// squaring (independent of the eigendecomposition that produced H).
double unitarity_defect(const HamiltonianSpectrum& h, const std::vector<double>& times);

std::string space_to_text(const ReconstructedSpace& space);

}  // namespace oslab
