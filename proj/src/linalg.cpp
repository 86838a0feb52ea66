#include "oslab/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace oslab::linalg {

double spectral_norm(const Eigen::MatrixXd& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  return svd.singularValues()(0);
}

double spectral_norm(const Eigen::MatrixXcd& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  return svd.singularValues()(0);
}

double relative_asymmetry(const Eigen::MatrixXcd& m) {
  if (m.size() == 0) return 0.0;
  const double scale = std::max(m.cwiseAbs().maxCoeff(), std::numeric_limits<double>::min());
  return (m - m.adjoint()).cwiseAbs().maxCoeff() / scale;
}

int numerical_rank(const Eigen::MatrixXd& m, double rel_tol) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& s = svd.singularValues();
  if (s(0) == 0.0) return 0;
  int rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > rel_tol * s(0)) ++rank;
  return rank;
}

Eigen::MatrixXd null_space_rref(const Eigen::MatrixXd& m, double tol) {
  Eigen::MatrixXd r = m;
  const Eigen::Index rows = r.rows(), cols = r.cols();
  std::vector<Eigen::Index> pivot_cols;
  Eigen::Index row = 0;
  for (Eigen::Index c = 0; c < cols && row < rows; ++c) {
    Eigen::Index best = row;
    for (Eigen::Index i = row + 1; i < rows; ++i)
      if (std::abs(r(i, c)) > std::abs(r(best, c))) best = i;
    if (std::abs(r(best, c)) <= tol) continue;
    r.row(row).swap(r.row(best));
    r.row(row) /= r(row, c);
    for (Eigen::Index i = 0; i < rows; ++i)
      if (i != row && r(i, c) != 0.0) r.row(i) -= r(i, c) * r.row(row);
    pivot_cols.push_back(c);
    ++row;
  }
  std::vector<Eigen::Index> free_cols;
  for (Eigen::Index c = 0; c < cols; ++c)
    if (std::find(pivot_cols.begin(), pivot_cols.end(), c) == pivot_cols.end()) free_cols.push_back(c);

  Eigen::MatrixXd basis = Eigen::MatrixXd::Zero(cols, static_cast<Eigen::Index>(free_cols.size()));
  for (std::size_t k = 0; k < free_cols.size(); ++k) {
    const Eigen::Index f = free_cols[k];
    basis(f, k) = 1.0;
    for (std::size_t p = 0; p < pivot_cols.size(); ++p) basis(pivot_cols[p], k) = -r(p, f);
    for (Eigen::Index i = 0; i < cols; ++i) {
      if (std::abs(basis(i, k)) > tol) {
        basis.col(k) /= basis(i, k);
        break;
      }
    }
  }
  return basis;
}

NnlsResult nnls(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, int max_iter) {
  const Eigen::Index n = a.cols();
  if (max_iter <= 0) max_iter = static_cast<int>(3 * n + 10);
  NnlsResult out;
  out.x = Eigen::VectorXd::Zero(n);
  std::vector<bool> passive(static_cast<std::size_t>(n), false);
  const double tol = 10.0 * std::numeric_limits<double>::epsilon() *
                     std::max(1.0, a.cwiseAbs().maxCoeff()) * static_cast<double>(std::max<Eigen::Index>(n, 1));

  auto solve_passive = [&](Eigen::VectorXd& z) {
    std::vector<Eigen::Index> idx;
    for (Eigen::Index j = 0; j < n; ++j)
      if (passive[static_cast<std::size_t>(j)]) idx.push_back(j);
    z = Eigen::VectorXd::Zero(n);
    if (idx.empty()) return;
    Eigen::MatrixXd ap(a.rows(), static_cast<Eigen::Index>(idx.size()));
    for (std::size_t k = 0; k < idx.size(); ++k) ap.col(static_cast<Eigen::Index>(k)) = a.col(idx[k]);
    const Eigen::VectorXd zp = ap.completeOrthogonalDecomposition().solve(b);
    for (std::size_t k = 0; k < idx.size(); ++k) z(idx[k]) = zp(static_cast<Eigen::Index>(k));
  };

  int iter = 0;
  for (; iter < max_iter; ++iter) {
    const Eigen::VectorXd w = a.transpose() * (b - a * out.x);
    Eigen::Index best = -1;
    double best_w = tol;
    for (Eigen::Index j = 0; j < n; ++j)
      if (!passive[static_cast<std::size_t>(j)] && w(j) > best_w) {
        best_w = w(j);
        best = j;
      }
    if (best < 0) break;
    passive[static_cast<std::size_t>(best)] = true;

    Eigen::VectorXd z;
    for (int inner = 0; inner < max_iter; ++inner) {
      solve_passive(z);
      bool feasible = true;
      for (Eigen::Index j = 0; j < n; ++j)
        if (passive[static_cast<std::size_t>(j)] && z(j) <= 0.0) feasible = false;
      if (feasible) break;
      double alpha = 1.0;
      for (Eigen::Index j = 0; j < n; ++j)
        if (passive[static_cast<std::size_t>(j)] && z(j) <= 0.0)
          alpha = std::min(alpha, out.x(j) / (out.x(j) - z(j)));
      out.x += alpha * (z - out.x);
      for (Eigen::Index j = 0; j < n; ++j)
        if (passive[static_cast<std::size_t>(j)] && out.x(j) <= tol) {
          passive[static_cast<std::size_t>(j)] = false;
          out.x(j) = 0.0;
        }
    }
    out.x = z.cwiseMax(0.0);
  }
  out.converged = iter < max_iter;
  out.residual = (a * out.x - b).norm();
  return out;
}

std::optional<Eigen::MatrixXd> sqrtm_iterative(const Eigen::MatrixXd& a, int max_iter) {
  const Eigen::Index n = a.rows();
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd y = a, z = id;
  for (int k = 0; k < max_iter; ++k) {
    Eigen::FullPivLU<Eigen::MatrixXd> lu_y(y), lu_z(z);
    if (!lu_y.isInvertible() || !lu_z.isInvertible()) return std::nullopt;
    // Determinant scaling speeds up the early iterations.
    const double dy = std::abs(lu_y.determinant()), dz = std::abs(lu_z.determinant());
    const double g = std::pow(dy * dz, -1.0 / (2.0 * static_cast<double>(n)));
    const double scale = (k < 8 && std::isfinite(g) && g > 0.0) ? g : 1.0;
    const Eigen::MatrixXd y_next = 0.5 * (scale * y + lu_z.inverse() / scale);
    const Eigen::MatrixXd z_next = 0.5 * (scale * z + lu_y.inverse() / scale);
    const double change = (y_next - y).norm() / std::max(1.0, y_next.norm());
    y = y_next;
    z = z_next;
    if (!y.allFinite()) return std::nullopt;
    if (change < 1e-15) break;
  }
  if ((y * y - a).norm() > 1e-9 * std::max(1.0, a.norm())) return std::nullopt;
  return y;
}

std::optional<Eigen::MatrixXd> logm_iterative(const Eigen::MatrixXd& a, int max_iter) {
  const Eigen::Index n = a.rows();
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd x = a;
  int squarings = 0;
  while ((x - id).norm() >= 0.25) {
    if (squarings >= 60) return std::nullopt;
    auto root = sqrtm_iterative(x, max_iter);
    if (!root) return std::nullopt;
    x = *root;
    ++squarings;
  }
  // log(X) = 2 atanh((X - I)(X + I)^{-1}) = 2 sum_k Y^{2k+1} / (2k+1)
  const Eigen::MatrixXd y = (x - id) * (x + id).inverse();
  const Eigen::MatrixXd y2 = y * y;
  Eigen::MatrixXd term = y, sum = y;
  for (int k = 1; k < 200; ++k) {
    term = term * y2;
    const Eigen::MatrixXd add = term / static_cast<double>(2 * k + 1);
    sum += add;
    if (add.norm() < 1e-18 * std::max(1.0, sum.norm())) break;
  }
  return std::ldexp(2.0, squarings) * sum;
}

namespace {

template <class Matrix>
Matrix expm_impl(const Matrix& a) {
  const Eigen::Index n = a.rows();
  const double norm = a.cwiseAbs().rowwise().sum().maxCoeff();
  int s = 0;
  if (norm > 0.5) s = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
  const Matrix scaled = a / std::ldexp(1.0, s);
  Matrix term = Matrix::Identity(n, n), sum = Matrix::Identity(n, n);
  for (int k = 1; k < 40; ++k) {
    term = (term * scaled) / static_cast<double>(k);
    sum += term;
    if (term.norm() < 1e-18 * sum.norm()) break;
  }
  for (int i = 0; i < s; ++i) sum = sum * sum;
  return sum;
}

}  // namespace

Eigen::MatrixXcd expm(const Eigen::MatrixXcd& a) { return expm_impl(a); }
Eigen::MatrixXd expm(const Eigen::MatrixXd& a) { return expm_impl(a); }

}  // namespace oslab::linalg
