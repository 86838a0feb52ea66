#include <algorithm>
#include <cmath>
#include <string>

#include <fmt/format.h>

#include "oslab/errors.hpp"
#include "oslab/lie.hpp"
#include "oslab/linalg.hpp"
#include "oslab/rng.hpp"

namespace oslab {

namespace {

Eigen::MatrixXd mat2(double a, double b, double c, double d) {
  Eigen::MatrixXd m(2, 2);
  m << a, b, c, d;
  return m;
}

Eigen::MatrixXd columns(std::initializer_list<std::initializer_list<double>> cols) {
  const auto rows = static_cast<Eigen::Index>(cols.begin()->size());
  Eigen::MatrixXd m(rows, static_cast<Eigen::Index>(cols.size()));
  Eigen::Index c = 0;
  for (const auto& col : cols) {
    Eigen::Index r = 0;
    for (double v : col) m(r++, c) = v;
    ++c;
  }
  return m;
}

LieAlgebraData sl2_algebra() {
  return LieAlgebraData::from_brackets({"H", "E", "F"}, {{0, 1, 1, 2.0}, {0, 2, 2, -2.0}, {1, 2, 0, 1.0}});
}

std::vector<Eigen::MatrixXd> sl2_matrices() {
  return {mat2(1, 0, 0, -1), mat2(0, 1, 0, 0), mat2(0, 0, 1, 0)};
}

BuiltinExample sl2_cartan() {
  Eigen::MatrixXd tau(3, 3);
  tau << -1, 0, 0,  //
      0, 0, -1,     //
      0, -1, 0;
  ConeSample cone;
  cone.generators = columns({{1, 0, 0}, {-1, 0, 0}, {0, 1, 1}, {0, -1, -1}});
  cone.interior_witness = Eigen::Vector3d(1, 0, 0);
  cone.sampled_points = columns({{1, 0.5, 0.5}, {-0.3, 2, 2}, {0, 1, 1}, {2, -1, -1}, {0.7, 0.1, 0.1}});
  MatrixRealization rep{sl2_matrices(), [](const Eigen::MatrixXd& g) -> Eigen::MatrixXd {
                          return g.inverse().transpose();
                        }};
  return {"sl2R-cartan", sl2_algebra(), {tau}, cone, rep, Eigen::MatrixXd(-0.5 * Eigen::Matrix3d::Identity())};
}

BuiltinExample sl2_adh() {
  // tau = Ad(diag(1,-1)); C = {aE + bF : a, b >= 0} and S(C) is the
  // semigroup of SL(2,R) matrices with nonnegative entries.
  ConeSample cone;
  cone.generators = columns({{0, 1, 0}, {0, 0, 1}});
  cone.interior_witness = Eigen::Vector3d(0, 1, 1);
  cone.sampled_points = columns({{0, 1, 2}, {0, 3, 1}, {0, 0.5, 0.5}, {0, 0.1, 4}, {0, 2.5, 0.2}});
  MatrixRealization rep{sl2_matrices(), [](const Eigen::MatrixXd& g) -> Eigen::MatrixXd {
                          Eigen::MatrixXd s = g;
                          s(0, 1) = -s(0, 1);
                          s(1, 0) = -s(1, 0);
                          return s;
                        }};
  return {"sl2R-adH", sl2_algebra(), {Eigen::Vector3d(1, -1, -1).asDiagonal().toDenseMatrix()}, cone, rep, std::nullopt};
}

BuiltinExample heisenberg() {
  auto algebra = LieAlgebraData::from_brackets({"X", "Y", "Z"}, {{0, 1, 2, 1.0}});
  ConeSample cone;
  cone.generators = columns({{1, 0, 0}, {0, 1, 0}});
  cone.interior_witness = Eigen::Vector3d(1, 1, 0);
  cone.sampled_points = columns({{2, 1, 0}, {1, 3, 0}});
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(3, 3), y = x, z = x;
  x(0, 1) = 1;
  y(1, 2) = 1;
  z(0, 2) = 1;
  MatrixRealization rep{{x, y, z}, [](const Eigen::MatrixXd& g) -> Eigen::MatrixXd {
                          const Eigen::Vector3d d(1, -1, 1);
                          return d.asDiagonal() * g * d.asDiagonal();
                        }};
  return {"heisenberg", algebra, {Eigen::Vector3d(-1, -1, 1).asDiagonal().toDenseMatrix()}, cone, rep, std::nullopt};
}

BuiltinExample abelian(std::size_t n, const std::string& id) {
  std::vector<std::string> labels;
  std::vector<Eigen::MatrixXd> basis;
  const auto d = static_cast<Eigen::Index>(n);
  for (std::size_t i = 0; i < n; ++i) {
    labels.push_back(fmt::format("A{}", i + 1));
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(d, d);
    m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = 1.0;
    basis.push_back(m);
  }
  LieAlgebraData algebra(labels, std::vector<double>(n * n * n, 0.0));
  ConeSample cone;
  cone.generators = Eigen::MatrixXd::Identity(d, d);
  cone.interior_witness = Eigen::VectorXd::Ones(d);
  cone.sampled_points = Eigen::MatrixXd::Ones(d, 1) + Eigen::MatrixXd::Identity(d, d).col(0);
  MatrixRealization rep{basis, [](const Eigen::MatrixXd& g) -> Eigen::MatrixXd { return g.inverse(); }};
  return {id, algebra, {-Eigen::MatrixXd::Identity(d, d)}, cone, rep, std::nullopt};
}

Eigen::MatrixXd from_coords(const MatrixRealization& rep, const Eigen::VectorXd& x) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(rep.basis.front().rows(), rep.basis.front().cols());
  for (std::size_t i = 0; i < rep.basis.size(); ++i) m += x(static_cast<Eigen::Index>(i)) * rep.basis[i];
  return m;
}

}  // namespace

std::vector<std::string> builtin_example_ids() { return {"sl2R-cartan", "sl2R-adH", "heisenberg", "abelian-n"}; }

BuiltinExample builtin_example(const std::string& id) {
  if (id == "sl2R-cartan") return sl2_cartan();
  if (id == "sl2R-adH") return sl2_adh();
  if (id == "heisenberg") return heisenberg();
  if (id == "abelian-n") return abelian(3, id);
  if (id.rfind("abelian-", 0) == 0) {
    const std::string tail = id.substr(8);
    if (!tail.empty() && std::all_of(tail.begin(), tail.end(), [](char c) { return c >= '0' && c <= '9'; })) {
      const auto n = std::stoul(tail);
      if (n >= 1 && n <= 16) return abelian(n, id);
    }
  }
  throw PreconditionError(fmt::format("unknown built-in example '{}'", id));
}

Factorization factor_h_exp_q(const MatrixRealization& rep, const Eigen::MatrixXd& g) {
  Factorization out;
  const auto d = g.rows();
  if (rep.basis.empty() || rep.basis.front().rows() != d || g.cols() != d) {
    throw DimensionError("group element does not match the realization");
  }
  const Eigen::MatrixXd sg = rep.sigma(g);
  const Eigen::MatrixXd m = sg.inverse() * g;  // = exp(2X)
  const auto log_m = linalg::logm_iterative(m);
  if (!log_m) return out;
  const Eigen::MatrixXd x = 0.5 * *log_m;

  const auto n = static_cast<Eigen::Index>(rep.basis.size());
  Eigen::MatrixXd vecs(d * d, n);
  for (Eigen::Index i = 0; i < n; ++i)
    vecs.col(i) = Eigen::Map<const Eigen::VectorXd>(rep.basis[static_cast<std::size_t>(i)].data(), d * d);
  const Eigen::VectorXd target = Eigen::Map<const Eigen::VectorXd>(x.data(), d * d);
  out.x_coords = vecs.colPivHouseholderQr().solve(target);
  out.x_matrix = from_coords(rep, out.x_coords);
  out.h = g * linalg::expm(Eigen::MatrixXd(-out.x_matrix));

  const double gn = std::max(g.norm(), 1e-300);
  const double fit = (out.x_matrix - x).norm() / std::max(x.norm(), 1.0);
  const double recon = (out.h * linalg::expm(out.x_matrix) - g).norm() / gn;
  const double fixed = (rep.sigma(out.h) - out.h).norm() / std::max(out.h.norm(), 1e-300);
  out.residual = std::max({fit, recon, fixed});
  out.converged = std::isfinite(out.residual);
  return out;
}

MembershipReport semigroup_membership_sample(const BuiltinExample& example, std::size_t samples, std::uint64_t seed,
                                             const std::optional<ConeSample>& cone_override, double tolerance) {
  if (!example.realization) throw PreconditionError(fmt::format("example '{}' has no matrix realization", example.id));
  const MatrixRealization& rep = *example.realization;
  const ConeSample& cone = cone_override ? *cone_override : example.cone;
  const SplitAlgebra split = split_by_involution(example.algebra, example.involution);
  MembershipReport report;
  report.samples = samples;

  auto random_element = [&](PathStream& rng) {
    Eigen::VectorXd z = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(example.algebra.dim()));
    for (Eigen::Index k = 0; k < split.h_basis.cols(); ++k) z += 0.5 * rng.next_normal() * split.h_basis.col(k);
    Eigen::VectorXd x = Eigen::VectorXd::Zero(z.size());
    for (Eigen::Index k = 0; k < cone.generators.cols(); ++k) x += rng.next_uniform() * cone.generators.col(k);
    return Eigen::MatrixXd(linalg::expm(from_coords(rep, z)) * linalg::expm(from_coords(rep, x)));
  };

  for (std::size_t s = 0; s < samples; ++s) {
    PathStream rng(seed, s);
    const Eigen::MatrixXd s1 = random_element(rng);
    const Eigen::MatrixXd s2 = random_element(rng);
    const Factorization f = factor_h_exp_q(rep, s1 * s2);
    MembershipSample ms;
    ms.converged = f.converged;
    if (f.converged) {
      ms.factorization_residual = f.residual;
      const Eigen::VectorXd leak = split.h_projection * f.x_coords;
      const double xn = std::max(f.x_coords.norm(), 1e-300);
      ms.cone_residual = std::max(linalg::nnls(cone.generators, f.x_coords).residual, leak.norm()) / xn;
      if (f.x_coords.norm() == 0.0) ms.cone_residual = 0.0;
      ms.member = ms.factorization_residual <= tolerance && ms.cone_residual <= tolerance;
    } else {
      ++report.non_converged;
    }
    if (ms.member) {
      ++report.members;
      report.worst_residual = std::max({report.worst_residual, ms.factorization_residual, ms.cone_residual});
    }
    report.details.push_back(ms);
  }
  return report;
}

}  // namespace oslab
