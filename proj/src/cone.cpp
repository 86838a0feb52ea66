#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include <fmt/format.h>

#include "oslab/errors.hpp"
#include "oslab/lie.hpp"
#include "oslab/linalg.hpp"
#include "oslab/rng.hpp"

namespace oslab {

namespace {

int complex_rank(const Eigen::MatrixXcd& m, double abs_tol) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  const auto& s = svd.singularValues();
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > abs_tol) ++r;
  return r;
}

std::vector<std::complex<double>> sorted_spectrum(const Eigen::MatrixXd& m) {
  Eigen::EigenSolver<Eigen::MatrixXd> es(m, false);
  std::vector<std::complex<double>> ev(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  std::sort(ev.begin(), ev.end(), [](auto a, auto b) { return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag(); });
  return ev;
}

double relative_hull_residual(const Eigen::MatrixXd& generators, const Eigen::VectorXd& p) {
  const double scale = p.norm();
  if (scale == 0.0) return 0.0;
  return linalg::nnls(generators, p).residual / scale;
}

}  // namespace

DirectionCheck classify_direction(const LieAlgebraData& data, const Eigen::VectorXd& x, double imag_tol,
                                  double cluster_tol) {
  const Eigen::MatrixXd adx = data.ad(x);
  const auto n = adx.rows();
  DirectionCheck out;
  Eigen::EigenSolver<Eigen::MatrixXd> es(adx, false);
  out.eigenvalues = es.eigenvalues();
  const double norm = linalg::spectral_norm(adx);
  if (norm == 0.0) {
    out.real_spectrum = true;
    out.semisimple = true;
    return out;
  }
  for (Eigen::Index i = 0; i < n; ++i)
    out.max_imag_ratio = std::max(out.max_imag_ratio, std::abs(out.eigenvalues(i).imag()) / norm);
  out.real_spectrum = out.max_imag_ratio <= imag_tol;

  // Greedy clustering around the first unassigned eigenvalue.
  std::vector<bool> used(static_cast<std::size_t>(n), false);
  out.semisimple = true;
  const Eigen::MatrixXcd adc = adx.cast<std::complex<double>>();
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (used[static_cast<std::size_t>(i)]) continue;
    std::complex<double> sum = 0.0;
    int count = 0;
    for (Eigen::Index j = i; j < n; ++j) {
      if (!used[static_cast<std::size_t>(j)] && std::abs(out.eigenvalues(j) - out.eigenvalues(i)) <= cluster_tol * norm) {
        used[static_cast<std::size_t>(j)] = true;
        sum += out.eigenvalues(j);
        ++count;
      }
    }
    const std::complex<double> lambda = sum / static_cast<double>(count);
    const Eigen::MatrixXcd a = adc - lambda * id;
    const Eigen::MatrixXcd a2 = a * a;
    const int r1 = complex_rank(a, cluster_tol * norm);
    const int r2 = complex_rank(a2, cluster_tol * norm * norm);
    if (r1 != r2) out.semisimple = false;
  }
  return out;
}

std::string failure_name(ConeFailure f) {
  switch (f) {
    case ConeFailure::empty_interior: return "empty-interior";
    case ConeFailure::complex_spectrum: return "complex-spectrum";
    case ConeFailure::not_semisimple: return "not-semisimple";
    case ConeFailure::invariance_violated: return "invariance-violated";
  }
  return "unknown";
}

bool ConeReport::has(ConeFailure f) const {
  return std::any_of(failures.begin(), failures.end(), [f](const auto& p) { return p.first == f; });
}

ConeReport hyperbolic_cone_check(const LieAlgebraData& data, const SplitAlgebra& split, const ConeSample& cone,
                                 std::size_t h_samples, std::uint64_t seed) {
  const auto n = static_cast<Eigen::Index>(data.dim());
  if (cone.generators.rows() != n || cone.interior_witness.size() != n ||
      (cone.sampled_points.cols() > 0 && cone.sampled_points.rows() != n)) {
    throw DimensionError("cone vectors must have the algebra dimension");
  }
  auto require_in_q = [&](const Eigen::VectorXd& v, const std::string& what) {
    const double r = (split.q_projection * v - v).cwiseAbs().maxCoeff();
    if (r > 1e-12 * std::max(1.0, v.cwiseAbs().maxCoeff())) {
      throw PreconditionError(fmt::format("{} leaves q (projection residual {:.3e})", what, r));
    }
  };
  for (Eigen::Index c = 0; c < cone.generators.cols(); ++c) require_in_q(cone.generators.col(c), fmt::format("generator {}", c));
  require_in_q(cone.interior_witness, "interior witness");
  for (Eigen::Index c = 0; c < cone.sampled_points.cols(); ++c) require_in_q(cone.sampled_points.col(c), fmt::format("sample {}", c));

  ConeReport rep;

  // Nonempty interior: generators span q and the witness is a strictly
  // positive combination (it survives subtracting a small multiple of the
  // generator sum).
  const int span = cone.generators.cols() ? linalg::numerical_rank(cone.generators, 1e-10) : 0;
  bool interior_ok = span == static_cast<int>(split.dim_q()) && split.dim_q() > 0;
  if (interior_ok) {
    const Eigen::VectorXd gsum = cone.generators.rowwise().sum();
    const double wn = cone.interior_witness.norm();
    if (wn == 0.0) {
      interior_ok = gsum.norm() <= 1e-12 * cone.generators.norm();
    } else if (gsum.norm() > 1e-12 * cone.generators.norm()) {
      const double delta = 1e-3 * wn / gsum.norm();
      interior_ok = relative_hull_residual(cone.generators, cone.interior_witness - delta * gsum) < 1e-6;
    }
  }
  if (!interior_ok) {
    rep.failures.emplace_back(ConeFailure::empty_interior,
                              fmt::format("witness is not a strictly positive combination of generators spanning q "
                                          "(generator rank {}, dim q {})",
                                          span, split.dim_q()));
  }

  std::vector<Eigen::VectorXd> points{cone.interior_witness};
  for (Eigen::Index c = 0; c < cone.sampled_points.cols(); ++c) points.emplace_back(cone.sampled_points.col(c));

  bool complex_seen = false, nilpotent_seen = false;
  for (std::size_t p = 0; p < points.size(); ++p) {
    const DirectionCheck dc = classify_direction(data, points[p]);
    ++rep.points_checked;
    rep.max_imag_ratio = std::max(rep.max_imag_ratio, dc.max_imag_ratio);
    const std::string where = p == 0 ? std::string("interior witness") : fmt::format("sample {}", p - 1);
    if (!dc.real_spectrum && !complex_seen) {
      complex_seen = true;
      rep.failures.emplace_back(ConeFailure::complex_spectrum,
                                fmt::format("{}: ad X has |Im lambda|/||ad X|| = {:.3e}", where, dc.max_imag_ratio));
    }
    if (!dc.semisimple && !nilpotent_seen) {
      nilpotent_seen = true;
      rep.failures.emplace_back(ConeFailure::not_semisimple, fmt::format("{}: ad X has a nilpotent part", where));
    }
  }

  // Sampled H-invariance and conjugation invariance of the spectrum.
  if (split.dim_h() > 0 && h_samples > 0) {
    std::vector<Eigen::VectorXd> targets = points;
    for (Eigen::Index c = 0; c < cone.generators.cols(); ++c) targets.emplace_back(cone.generators.col(c));
    double worst_invariance = 0.0;
    for (std::size_t s = 0; s < h_samples; ++s) {
      PathStream rng(seed, s);
      Eigen::VectorXd z = Eigen::VectorXd::Zero(n);
      for (Eigen::Index k = 0; k < split.h_basis.cols(); ++k) z += rng.next_normal() * split.h_basis.col(k);
      const double zn = linalg::spectral_norm(data.ad(z));
      if (zn == 0.0) continue;
      const Eigen::MatrixXd ad_z = data.ad(z) / zn;  // unit-size conjugation
      const Eigen::MatrixXd conj = linalg::expm(ad_z);
      for (const auto& t : targets) {
        const Eigen::VectorXd moved = conj * t;
        worst_invariance = std::max(worst_invariance, relative_hull_residual(cone.generators, moved));
      }
      for (const auto& p : points) {
        const double scale = std::max(linalg::spectral_norm(data.ad(p)), 1e-300);
        const auto before = sorted_spectrum(data.ad(p));
        const auto after = sorted_spectrum(data.ad(conj * p));
        for (std::size_t i = 0; i < before.size(); ++i)
          rep.max_conjugation_drift = std::max(rep.max_conjugation_drift, std::abs(before[i] - after[i]) / scale);
      }
    }
    rep.max_invariance_residual = worst_invariance;
    if (worst_invariance >= 1e-6) {
      rep.failures.emplace_back(ConeFailure::invariance_violated,
                                fmt::format("exp(ad Z) moves cone points off the hull (NNLS residual {:.3e})", worst_invariance));
    }
  }
  return rep;
}

}  // namespace oslab
