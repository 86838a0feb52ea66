#pragma once

// Small dense linear-algebra helpers shared by the certificate, reconstruction
// and Lie-algebra code.

#include <optional>
#include <string>

#include <Eigen/Dense>

namespace oslab::linalg {

double spectral_norm(const Eigen::MatrixXd& m);
double spectral_norm(const Eigen::MatrixXcd& m);

// max |M - M^H| / max(||M||_max, tiny)
double relative_asymmetry(const Eigen::MatrixXcd& m);

int numerical_rank(const Eigen::MatrixXd& m, double rel_tol);

// Basis of ker(m) in reduced row-echelon form: one vector per free column,
// that column set to 1, vector scaled so its first nonzero entry is +1.
// Columns whose pivot magnitude is below `tol` are treated as free.
Eigen::MatrixXd null_space_rref(const Eigen::MatrixXd& m, double tol);

struct NnlsResult {
  Eigen::VectorXd x;
  double residual = 0.0;  // ||A x - b||_2
  bool converged = false;
};

// Lawson-Hanson active-set solver for min ||A x - b|| subject to x >= 0.
NnlsResult nnls(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, int max_iter = 0);

// Principal square root by the scaled Denman-Beavers iteration. Empty when
// the iteration does not converge (e.g. eigenvalues on the closed negative axis).
std::optional<Eigen::MatrixXd> sqrtm_iterative(const Eigen::MatrixXd& a, int max_iter = 100);

// Principal logarithm by inverse scaling and squaring: repeated square roots
// until ||A - I|| < 1/4, then a Gregory series for log(I + E).
std::optional<Eigen::MatrixXd> logm_iterative(const Eigen::MatrixXd& a, int max_iter = 100);

// exp via scaling and squaring with a Taylor core; used where an
// independent route from the eigendecomposition is wanted.
Eigen::MatrixXcd expm(const Eigen::MatrixXcd& a);
Eigen::MatrixXd expm(const Eigen::MatrixXd& a);

}  // namespace oslab::linalg
