#include "oslab/lie.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>
#include <yaml-cpp/yaml.h>

#include "oslab/errors.hpp"
#include "oslab/linalg.hpp"

namespace oslab {

LieAlgebraData::LieAlgebraData(std::vector<std::string> labels, std::vector<double> structure)
    : labels_(std::move(labels)), c_(std::move(structure)) {
  const std::size_t n = labels_.size();
  if (c_.size() != n * n * n) {
    throw DimensionError(fmt::format("structure array has {} entries, expected {}", c_.size(), n * n * n));
  }
}

LieAlgebraData LieAlgebraData::from_brackets(std::vector<std::string> labels, const std::vector<Entry>& entries) {
  const std::size_t n = labels.size();
  std::vector<double> c(n * n * n, 0.0);
  for (const auto& e : entries) {
    if (e.i >= n || e.j >= n || e.k >= n) throw DimensionError("bracket index outside the basis");
    if (e.i == e.j && e.value != 0.0) throw PreconditionError("[X_i, X_i] must vanish");
    c[(e.i * n + e.j) * n + e.k] = e.value;
    c[(e.j * n + e.i) * n + e.k] = -e.value;
  }
  return LieAlgebraData(std::move(labels), std::move(c));
}

Eigen::VectorXd LieAlgebraData::bracket(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const {
  const std::size_t n = dim();
  Eigen::VectorXd out = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    if (x(static_cast<Eigen::Index>(i)) == 0.0) continue;
    for (std::size_t j = 0; j < n; ++j) {
      const double w = x(static_cast<Eigen::Index>(i)) * y(static_cast<Eigen::Index>(j));
      if (w == 0.0) continue;
      for (std::size_t k = 0; k < n; ++k) out(static_cast<Eigen::Index>(k)) += w * c(i, j, k);
    }
  }
  return out;
}

Eigen::MatrixXd LieAlgebraData::ad(const Eigen::VectorXd& x) const {
  const auto n = static_cast<Eigen::Index>(dim());
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index j = 0; j < n; ++j) m.col(j) = bracket(x, Eigen::VectorXd::Unit(n, j));
  return m;
}

AlgebraReport algebra_residuals(const LieAlgebraData& data, double jacobi_tol) {
  const std::size_t n = data.dim();
  AlgebraReport rep;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) {
        const double r = std::abs(data.c(i, j, k) + data.c(j, i, k));
        if (r > rep.antisymmetry_residual) {
          rep.antisymmetry_residual = r;
          rep.worst_triple = {i, j, k};
        }
      }
  const bool antisymmetric = rep.antisymmetry_residual == 0.0;
  std::array<std::size_t, 3> jacobi_worst{0, 0, 0};
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t l = 0; l < n; ++l) {
          double s = 0.0;
          for (std::size_t m = 0; m < n; ++m)
            s += data.c(i, j, m) * data.c(m, k, l) + data.c(j, k, m) * data.c(m, i, l) + data.c(k, i, m) * data.c(m, j, l);
          if (std::abs(s) > rep.jacobi_residual) {
            rep.jacobi_residual = std::abs(s);
            jacobi_worst = {i, j, k};
          }
        }
  if (antisymmetric) rep.worst_triple = jacobi_worst;
  rep.valid = antisymmetric && rep.jacobi_residual <= jacobi_tol;
  return rep;
}

AlgebraReport validate_algebra(const LieAlgebraData& data, double jacobi_tol) {
  AlgebraReport rep = algebra_residuals(data, jacobi_tol);
  if (!rep.valid) {
    const auto& t = rep.worst_triple;
    const auto& lab = data.labels();
    if (rep.antisymmetry_residual != 0.0) {
      throw InvalidAlgebra(fmt::format("antisymmetry fails at ({}, {}; {}) by {:.3e}", lab[t[0]], lab[t[1]], lab[t[2]],
                                       rep.antisymmetry_residual),
                           rep);
    }
    throw InvalidAlgebra(fmt::format("Jacobi identity fails for ({}, {}, {}) with residual {:.3e}", lab[t[0]], lab[t[1]],
                                     lab[t[2]], rep.jacobi_residual),
                         rep);
  }
  return rep;
}

LieAlgebraData change_basis(const LieAlgebraData& data, const Eigen::MatrixXd& p, std::vector<std::string> labels) {
  const auto n = static_cast<Eigen::Index>(data.dim());
  if (p.rows() != n || p.cols() != n) throw DimensionError("basis change must be square of the algebra dimension");
  Eigen::FullPivLU<Eigen::MatrixXd> lu(p);
  if (!lu.isInvertible()) throw PreconditionError("basis change is singular");
  const Eigen::MatrixXd p_inv = lu.inverse();
  std::vector<double> c(static_cast<std::size_t>(n * n * n), 0.0);
  for (Eigen::Index a = 0; a < n; ++a)
    for (Eigen::Index b = 0; b < n; ++b) {
      const Eigen::VectorXd coords = p_inv * data.bracket(p.col(a), p.col(b));
      for (Eigen::Index k = 0; k < n; ++k) {
        double v = coords(k);
        if (a == b) v = 0.0;
        c[static_cast<std::size_t>((a * n + b) * n + k)] = v;
      }
    }
  // Enforce exact antisymmetry; the two halves differ only by rounding.
  for (Eigen::Index a = 0; a < n; ++a)
    for (Eigen::Index b = a + 1; b < n; ++b)
      for (Eigen::Index k = 0; k < n; ++k) {
        const auto ab = static_cast<std::size_t>((a * n + b) * n + k), ba = static_cast<std::size_t>((b * n + a) * n + k);
        const double v = 0.5 * (c[ab] - c[ba]);
        c[ab] = v;
        c[ba] = -v;
      }
  if (labels.empty()) {
    for (Eigen::Index a = 0; a < n; ++a) labels.push_back(fmt::format("Y{}", a + 1));
  }
  return LieAlgebraData(std::move(labels), std::move(c));
}

InvolutionReport check_involution(const LieAlgebraData& data, const InvolutionData& tau) {
  const auto n = static_cast<Eigen::Index>(data.dim());
  if (tau.matrix.rows() != n || tau.matrix.cols() != n) throw DimensionError("involution matrix has the wrong shape");
  InvolutionReport rep;
  rep.square_residual = (tau.matrix * tau.matrix - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff();
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      const Eigen::VectorXd lhs = tau.matrix * data.bracket(Eigen::VectorXd::Unit(n, i), Eigen::VectorXd::Unit(n, j));
      const Eigen::VectorXd rhs = data.bracket(tau.matrix.col(i), tau.matrix.col(j));
      rep.automorphism_residual = std::max(rep.automorphism_residual, (lhs - rhs).cwiseAbs().maxCoeff());
    }
  return rep;
}

namespace {

std::string combination_label(const Eigen::VectorXd& v, const std::vector<std::string>& labels) {
  std::string s;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double c = v(i);
    if (c == 0.0) continue;
    const std::string& name = labels[static_cast<std::size_t>(i)];
    if (s.empty()) {
      if (c == 1.0) s = name;
      else if (c == -1.0) s = "-" + name;
      else s = fmt::format("{:g}{}", c, name);
    } else {
      if (c == 1.0) s += "+" + name;
      else if (c == -1.0) s += "-" + name;
      else s += fmt::format("{:+g}{}", c, name);
    }
  }
  return s.empty() ? "0" : s;
}

double max_component(const Eigen::MatrixXd& proj, const LieAlgebraData& data, const Eigen::MatrixXd& a,
                     const Eigen::MatrixXd& b) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < a.cols(); ++i)
    for (Eigen::Index j = 0; j < b.cols(); ++j)
      worst = std::max(worst, (proj * data.bracket(a.col(i), b.col(j))).cwiseAbs().maxCoeff());
  return worst;
}

}  // namespace

SplitAlgebra split_by_involution(const LieAlgebraData& data, const InvolutionData& tau, double tol) {
  const auto n = static_cast<Eigen::Index>(data.dim());
  const InvolutionReport inv = check_involution(data, tau);
  if (inv.square_residual > tol) {
    throw PreconditionError(fmt::format("tau^2 != id (residual {:.3e}); eigenvalues are not +-1", inv.square_residual));
  }
  if (inv.automorphism_residual > tol) {
    throw PreconditionError(fmt::format("tau is not an automorphism (residual {:.3e})", inv.automorphism_residual));
  }
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(n, n);
  SplitAlgebra s;
  s.h_basis = linalg::null_space_rref(tau.matrix - id, 1e-9);
  s.q_basis = linalg::null_space_rref(tau.matrix + id, 1e-9);
  if (s.h_basis.cols() + s.q_basis.cols() != n) {
    throw PreconditionError("tau eigenspaces for +1 and -1 do not span the algebra");
  }
  s.h_projection = 0.5 * (id + tau.matrix);
  s.q_projection = 0.5 * (id - tau.matrix);
  for (Eigen::Index i = 0; i < s.h_basis.cols(); ++i) s.h_labels.push_back(combination_label(s.h_basis.col(i), data.labels()));
  for (Eigen::Index i = 0; i < s.q_basis.cols(); ++i) s.q_labels.push_back(combination_label(s.q_basis.col(i), data.labels()));
  s.hh_residual = max_component(s.q_projection, data, s.h_basis, s.h_basis);
  s.hq_residual = max_component(s.h_projection, data, s.h_basis, s.q_basis);
  s.qq_residual = max_component(s.q_projection, data, s.q_basis, s.q_basis);
  return s;
}

LieAlgebraData c_dual(const LieAlgebraData& data, const SplitAlgebra& split) {
  const auto n = static_cast<Eigen::Index>(data.dim());
  const Eigen::Index dh = split.h_basis.cols();
  Eigen::MatrixXd p(n, n);
  p << split.h_basis, split.q_basis;
  std::vector<std::string> labels = split.h_labels;
  for (const auto& q : split.q_labels) labels.push_back("i(" + q + ")");
  const LieAlgebraData adapted = change_basis(data, p, labels);

  std::vector<double> c = adapted.structure();
  for (Eigen::Index a = dh; a < n; ++a)
    for (Eigen::Index b = dh; b < n; ++b)
      for (Eigen::Index k = 0; k < n; ++k) {
        auto& v = c[static_cast<std::size_t>((a * n + b) * n + k)];
        v = -v;
      }
  LieAlgebraData dual(std::move(labels), std::move(c));
  try {
    validate_algebra(dual);
  } catch (const InvalidAlgebra& e) {
    throw InvalidAlgebra(std::string("c-dual output is not a Lie algebra: ") + e.what(), e.report());
  }
  return dual;
}

InvolutionData c_dual_involution(const SplitAlgebra& split) {
  const Eigen::Index dh = split.h_basis.cols(), dq = split.q_basis.cols();
  Eigen::VectorXd d(dh + dq);
  d << Eigen::VectorXd::Ones(dh), -Eigen::VectorXd::Ones(dq);
  return {d.asDiagonal().toDenseMatrix()};
}

double su2_deviation(const LieAlgebraData& data) {
  if (data.dim() != 3) throw DimensionError("su(2) comparison needs a 3-dimensional algebra");
  auto eps = [](std::size_t i, std::size_t j, std::size_t k) -> double {
    if (i == j || j == k || i == k) return 0.0;
    return ((j + 3 - i) % 3 == 1) ? 1.0 : -1.0;  // (0,1,2) cyclic -> +1
  };
  double worst = 0.0;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      for (std::size_t k = 0; k < 3; ++k) worst = std::max(worst, std::abs(data.c(i, j, k) - eps(i, j, k)));
  return worst;
}

std::size_t commutant_dimension(const std::vector<Eigen::MatrixXd>& matrices, double rel_tol) {
  if (matrices.empty()) throw PreconditionError("commutant needs at least one matrix");
  const Eigen::Index d = matrices.front().rows();
  for (const auto& m : matrices)
    if (m.rows() != d || m.cols() != d) throw DimensionError("commutant matrices must share one square dimension");
  const Eigen::Index d2 = d * d;
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(d, d);
  Eigen::MatrixXd stacked(d2 * static_cast<Eigen::Index>(matrices.size()), d2);
  // Column-major vec: vec(A M - M A) = (M^T (x) I - I (x) M) vec(A).
  for (std::size_t s = 0; s < matrices.size(); ++s) {
    const Eigen::MatrixXd& m = matrices[s];
    Eigen::MatrixXd block(d2, d2);
    for (Eigen::Index r1 = 0; r1 < d; ++r1)
      for (Eigen::Index c1 = 0; c1 < d; ++c1)
        block.block(r1 * d, c1 * d, d, d) = m(c1, r1) * id - (r1 == c1 ? m : Eigen::MatrixXd::Zero(d, d));
    stacked.middleRows(static_cast<Eigen::Index>(s) * d2, d2) = block;
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(stacked);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) == 0.0) return static_cast<std::size_t>(d2);
  std::size_t rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > rel_tol * sv(0)) ++rank;
  return static_cast<std::size_t>(d2) - rank;
}

// ---------------------------------------------------------------------------

namespace {

Eigen::MatrixXd read_columns(const YAML::Node& node, Eigen::Index rows, const char* what) {
  if (!node.IsSequence()) throw PreconditionError(std::string(what) + " must be a list of vectors");
  Eigen::MatrixXd m(rows, static_cast<Eigen::Index>(node.size()));
  for (std::size_t c = 0; c < node.size(); ++c) {
    if (node[c].size() != static_cast<std::size_t>(rows))
      throw DimensionError(fmt::format("{} vector {} has the wrong length", what, c));
    for (Eigen::Index r = 0; r < rows; ++r) m(r, static_cast<Eigen::Index>(c)) = node[c][static_cast<std::size_t>(r)].as<double>();
  }
  return m;
}

}  // namespace

AlgebraDocument load_algebra(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw PreconditionError(std::string("algebra document is not valid YAML: ") + e.what());
  }
  if (!root["labels"]) throw PreconditionError("algebra document needs labels");
  auto labels = root["labels"].as<std::vector<std::string>>();
  const auto n = static_cast<Eigen::Index>(labels.size());
  std::vector<LieAlgebraData::Entry> entries;
  if (root["brackets"]) {
    for (const auto& b : root["brackets"]) {
      if (b.size() != 4) throw PreconditionError("bracket entries are [i, j, k, value]");
      entries.push_back({b[0].as<std::size_t>(), b[1].as<std::size_t>(), b[2].as<std::size_t>(), b[3].as<double>()});
    }
  }
  AlgebraDocument doc{LieAlgebraData::from_brackets(std::move(labels), entries), std::nullopt, std::nullopt};
  if (root["involution"]) {
    const auto rows = root["involution"];
    if (rows.size() != static_cast<std::size_t>(n)) throw DimensionError("involution needs one row per basis element");
    Eigen::MatrixXd t(n, n);
    for (Eigen::Index r = 0; r < n; ++r) {
      if (rows[static_cast<std::size_t>(r)].size() != static_cast<std::size_t>(n))
        throw DimensionError("involution rows must have the algebra dimension");
      for (Eigen::Index c = 0; c < n; ++c) t(r, c) = rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)].as<double>();
    }
    doc.involution = InvolutionData{t};
  }
  if (root["cone"]) {
    const auto cone = root["cone"];
    ConeSample s;
    s.generators = read_columns(cone["generators"], n, "cone generators");
    const auto w = cone["witness"];
    if (!w.IsSequence() || w.size() != static_cast<std::size_t>(n)) throw DimensionError("cone witness has the wrong length");
    s.interior_witness.resize(n);
    for (Eigen::Index r = 0; r < n; ++r) s.interior_witness(r) = w[static_cast<std::size_t>(r)].as<double>();
    s.sampled_points = cone["samples"] ? read_columns(cone["samples"], n, "cone samples") : Eigen::MatrixXd(n, 0);
    doc.cone = std::move(s);
  }
  return doc;
}

std::string algebra_to_text(const LieAlgebraData& data) {
  YAML::Emitter out;
  out << YAML::BeginMap;
  out << YAML::Key << "labels" << YAML::Value << YAML::Flow << data.labels();
  out << YAML::Key << "brackets" << YAML::Value << YAML::BeginSeq;
  const std::size_t n = data.dim();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) {
        const double v = data.c(i, j, k);
        if (v == 0.0) continue;
        out << YAML::Flow << YAML::BeginSeq << i << j << k << fmt::format("{:.17g}", v) << YAML::EndSeq;
      }
  out << YAML::EndSeq;
  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

}  // namespace oslab
