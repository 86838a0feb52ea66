#pragma once

// Finite Gram-matrix certificates for the two positivity statements of a
// Euclidean measure: positive definiteness of the characteristic functional
//   sum_kl conj(c_k) c_l S(f_k - conj(f_l)) >= 0,
// and reflection positivity over positive-time real test functions
//   sum_kl conj(c_k) c_l S(theta f_k - f_l) >= 0.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "oslab/gaussian_moments.hpp"
#include "oslab/lattice.hpp"

namespace oslab {

enum class Verdict { positive, indefinite };
enum class ToleranceKind {
  relative,     // min eigenvalue >= -tolerance * ||gram||_2
  statistical,  // min eigenvalue >= -tolerance (absolute, k sigma)
};

struct PsdCertificate {
  std::string description;
  Eigen::MatrixXcd gram;
  double min_eigenvalue = 0.0;
  double spectral_norm = 0.0;
  double tolerance = 0.0;
  ToleranceKind tolerance_kind = ToleranceKind::relative;
  Verdict verdict = Verdict::positive;
  std::optional<Eigen::VectorXcd> witness;  // unit eigenvector of min_eigenvalue, iff indefinite
  double asymmetry = 0.0;                   // relative, before Hermitian projection

  bool positive() const noexcept { return verdict == Verdict::positive; }
};

// Certifies an already-built Gram matrix. Throws NumericalError when the
// relative asymmetry exceeds 1e-12, which indicates a builder bug.
PsdCertificate certify_gram(Eigen::MatrixXcd gram, double tolerance, std::string description);

// theta f: coefficient permutation j -> n - 1 - j.
TestFunction reflect(const TestFunction& f);

// Real part, with every coefficient at t_j < 0 set to zero.
TestFunction project_dplus(const TestFunction& f);

// gram[k][l] = S(f_k - conj(f_l)).
PsdCertificate pd_gram_certificate(const Functional& s, const std::vector<TestFunction>& fs,
                                   double tolerance = 1e-10);

// gram[k][l] = S(theta f_k - f_l); every f_k must be in D+.
PsdCertificate rp_gram_certificate(const Functional& s, const std::vector<TestFunction>& fs,
                                   double tolerance = 1e-10);

// Monte-Carlo moment matrix E[conj(Y_k) Y_l] with Y_k = exp(-i q(conj f_k)),
// the sampled counterpart of the pd Gram. PSD by construction.
struct SampledGram {
  Eigen::MatrixXcd mean;
  Eigen::MatrixXd stderr_real;
  Eigen::MatrixXd stderr_imag;
};
SampledGram sampled_pd_gram(const std::vector<PathSample>& paths, const std::vector<TestFunction>& fs);

// ---------------------------------------------------------------------------
// Sampled reflection positivity for bounded/polynomial path observables.

enum class LocalFunction { one, q, q2, q3, q4, tanh };

struct ObservableFactor {
  std::size_t index;  // lattice index, must be a positive time
  LocalFunction function;
};

// F(q) = prod_i f_i(q(t_i)). An empty product is the constant 1.
struct ObservableProduct {
  std::vector<ObservableFactor> factors;

  double evaluate(const PathSample& path) const;
  double evaluate_reflected(const PathSample& path) const;  // (Theta F)(q)
  bool is_polynomial() const;
  // Polynomial observables as Gaussian functionals; nullopt if tanh occurs.
  std::optional<GaussianFunctional> as_functional(bool reflected, const TimeLattice& lattice) const;
};

std::string describe(const ObservableProduct& obs, const TimeLattice& lattice);

// gram[k][l] = MC estimate of E[Theta(F_k) F_l], symmetrised per path as
// (Theta F_k F_l + Theta F_l F_k) / 2 (unbiased under reflection
// invariance). Verdict: min eigenvalue >= -sigmas * se(lambda_min) with
// se(lambda_min)^2 = sum_kl |v_k v_l|^2 se_kl^2 (delta method).
PsdCertificate rp_sampled_certificate(const std::vector<PathSample>& paths,
                                      const std::vector<ObservableProduct>& observables,
                                      double sigmas = 3.0);

// Exact counterpart for polynomial observables via Wick's theorem.
Eigen::MatrixXd rp_exact_gram(const GaussianEuclideanMeasure& measure,
                              const std::vector<ObservableProduct>& observables);

// Structured text (YAML) report with 17 significant digits.
std::string certificate_to_text(const PsdCertificate& cert);

}  // namespace oslab
