#pragma once

// Real Lie algebras given by structure constants, involutive automorphisms
// and the h + q splitting, the c-dual algebra h + iq, hyperbolic cones in q,
// sampled compression semigroups H exp(C), and commutants (irreducibility tests).

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace oslab {

// [X_i, X_j] = sum_k c(i, j, k) X_k.
class LieAlgebraData {
 public:
  struct Entry {
    std::size_t i, j, k;
    double value;
  };

  LieAlgebraData(std::vector<std::string> labels, std::vector<double> structure);

  // Sets c(i,j,k) = value and c(j,i,k) = -value for every entry.
  static LieAlgebraData from_brackets(std::vector<std::string> labels, const std::vector<Entry>& entries);

  std::size_t dim() const noexcept { return labels_.size(); }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  double c(std::size_t i, std::size_t j, std::size_t k) const { return c_[(i * dim() + j) * dim() + k]; }
  const std::vector<double>& structure() const noexcept { return c_; }

  Eigen::VectorXd bracket(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const;
  // Matrix of ad x in the basis: column j holds [x, X_j].
  Eigen::MatrixXd ad(const Eigen::VectorXd& x) const;

 private:
  std::vector<std::string> labels_;
  std::vector<double> c_;
};

struct AlgebraReport {
  double antisymmetry_residual = 0.0;  // max |c(i,j,k) + c(j,i,k)|, exact check
  double jacobi_residual = 0.0;        // max over (i,j,k,l) of the cyclic sum
  std::array<std::size_t, 3> worst_triple{0, 0, 0};
  bool valid = false;
};

class InvalidAlgebra : public std::runtime_error {
 public:
  InvalidAlgebra(const std::string& what, AlgebraReport report)
      : std::runtime_error(what), report_(report) {}
  const AlgebraReport& report() const noexcept { return report_; }

 private:
  AlgebraReport report_;
};

// Antisymmetry must hold exactly; Jacobi within jacobi_tol per component.
AlgebraReport algebra_residuals(const LieAlgebraData& data, double jacobi_tol = 1e-12);
// Same, but throws InvalidAlgebra naming the offending triple.
AlgebraReport validate_algebra(const LieAlgebraData& data, double jacobi_tol = 1e-12);

// New basis Y_a = sum_i p(i, a) X_i; p must be invertible.
LieAlgebraData change_basis(const LieAlgebraData& data, const Eigen::MatrixXd& p,
                            std::vector<std::string> labels = {});

struct InvolutionData {
  Eigen::MatrixXd matrix;  // column j = tau(X_j)
};

struct InvolutionReport {
  double square_residual = 0.0;       // ||tau^2 - I||_max
  double automorphism_residual = 0.0;  // max over basis pairs
};
InvolutionReport check_involution(const LieAlgebraData& data, const InvolutionData& tau);

struct SplitAlgebra {
  Eigen::MatrixXd h_basis;  // columns, tau = +1
  Eigen::MatrixXd q_basis;  // columns, tau = -1
  Eigen::MatrixXd h_projection;  // (I + tau) / 2
  Eigen::MatrixXd q_projection;  // (I - tau) / 2
  std::vector<std::string> h_labels, q_labels;
  double hh_residual = 0.0;  // [h,h] component in q
  double hq_residual = 0.0;  // [h,q] component in h
  double qq_residual = 0.0;  // [q,q] component in q

  std::size_t dim_h() const { return static_cast<std::size_t>(h_basis.cols()); }
  std::size_t dim_q() const { return static_cast<std::size_t>(q_basis.cols()); }
};

// +1 / -1 eigenspaces of tau, each basis in reduced row-echelon form.
// Throws PreconditionError when tau is not an involutive automorphism
// within `tol` (its eigenvalues are then not +-1).
SplitAlgebra split_by_involution(const LieAlgebraData& data, const InvolutionData& tau, double tol = 1e-12);

// g^c = h + iq on the basis (h_basis, i q_basis): [h,h] and [h,iq] keep
// their constants, [iq, iq'] = -[q, q']. Validates the result.
LieAlgebraData c_dual(const LieAlgebraData& data, const SplitAlgebra& split);

// tau on g^c in the (h, iq) basis: diag(+1..., -1...).
InvolutionData c_dual_involution(const SplitAlgebra& split);

// max |c(i,j,k) - eps_ijk| for a 3-dimensional algebra.
double su2_deviation(const LieAlgebraData& data);

// ---------------------------------------------------------------------------
// Cones

struct ConeSample {
  Eigen::MatrixXd generators;      // columns in g-coordinates, all in q
  Eigen::VectorXd interior_witness;
  Eigen::MatrixXd sampled_points;  // columns
};

struct DirectionCheck {
  Eigen::VectorXcd eigenvalues;
  double max_imag_ratio = 0.0;  // max |Im lambda| / ||ad x||
  bool real_spectrum = false;
  bool semisimple = false;
  bool hyperbolic() const { return real_spectrum && semisimple; }
};

// Eigenvalues of ad x, |Im| <= imag_tol ||ad x||, and for each cluster of
// radius cluster_tol ||ad x||: rank(ad x - lambda)^2 == rank(ad x - lambda).
DirectionCheck classify_direction(const LieAlgebraData& data, const Eigen::VectorXd& x, double imag_tol = 1e-8,
                                  double cluster_tol = 1e-6);

enum class ConeFailure { empty_interior, complex_spectrum, not_semisimple, invariance_violated };
std::string failure_name(ConeFailure f);

struct ConeReport {
  std::vector<std::pair<ConeFailure, std::string>> failures;
  std::size_t points_checked = 0;
  double max_imag_ratio = 0.0;
  double max_invariance_residual = 0.0;  // relative NNLS residual
  double max_conjugation_drift = 0.0;    // eigenvalue drift of ad under exp(ad Z)
  bool hyperbolic() const { return failures.empty(); }
  bool has(ConeFailure f) const;
};

// Throws PreconditionError when a cone point leaves q by more than 1e-12.
ConeReport hyperbolic_cone_check(const LieAlgebraData& data, const SplitAlgebra& split, const ConeSample& cone,
                                 std::size_t h_samples = 8, std::uint64_t seed = 1);

// ---------------------------------------------------------------------------
// Built-in instances and semigroup sampling

struct MatrixRealization {
  std::vector<Eigen::MatrixXd> basis;  // matrices of X_1..X_n
  // Group-level involution sigma with sigma(exp X) = exp(tau X).
  std::function<Eigen::MatrixXd(const Eigen::MatrixXd&)> sigma;
};

struct BuiltinExample {
  std::string id;
  LieAlgebraData algebra;
  InvolutionData involution;
  ConeSample cone;
  std::optional<MatrixRealization> realization;
  // Basis change (in c-dual coordinates) onto the standard su(2) table, when known.
  std::optional<Eigen::MatrixXd> su2_basis_change;
};

// sl2R-cartan, sl2R-adH, heisenberg, abelian-n (n = 3) or abelian-<k>.
BuiltinExample builtin_example(const std::string& id);
std::vector<std::string> builtin_example_ids();

struct Factorization {
  bool converged = false;
  Eigen::MatrixXd h;         // sigma(h) = h
  Eigen::MatrixXd x_matrix;  // tau x = -x
  Eigen::VectorXd x_coords;
  double residual = 0.0;  // ||h exp(x) - g|| / ||g||
};

// g = h exp(X) via X = log(sigma(g)^{-1} g) / 2 (iterative square roots).
Factorization factor_h_exp_q(const MatrixRealization& rep, const Eigen::MatrixXd& g);

struct MembershipSample {
  bool converged = false;
  bool member = false;
  double factorization_residual = 0.0;
  double cone_residual = 0.0;  // relative NNLS residual of X on the generators
};

struct MembershipReport {
  std::size_t samples = 0;
  std::size_t members = 0;
  std::size_t non_converged = 0;
  double worst_residual = 0.0;  // over members: max(factorization, cone)
  std::vector<MembershipSample> details;
  double success_rate() const { return samples ? static_cast<double>(members) / static_cast<double>(samples) : 0.0; }
};

// Random s_i = h_i exp(X_i), X_i in the sampled cone; checks s_1 s_2 = h exp(X)
// with X in the cone hull. A diagnostic, not a proof of closedness.
MembershipReport semigroup_membership_sample(const BuiltinExample& example, std::size_t samples, std::uint64_t seed,
                                             const std::optional<ConeSample>& cone_override = std::nullopt,
                                             double tolerance = 1e-6);

// dim { A : A M = M A for all M }, by SVD of the stacked map A -> AM - MA
// with threshold rel_tol * sigma_max.
std::size_t commutant_dimension(const std::vector<Eigen::MatrixXd>& matrices, double rel_tol = 1e-8);

// ---------------------------------------------------------------------------
// Text format (YAML): labels, brackets [i, j, k, value], involution rows,
// optional cone {generators, witness, samples}.

struct AlgebraDocument {
  LieAlgebraData algebra;
  std::optional<InvolutionData> involution;
  std::optional<ConeSample> cone;
};

AlgebraDocument load_algebra(const std::string& text);
std::string algebra_to_text(const LieAlgebraData& data);

}  // namespace oslab
