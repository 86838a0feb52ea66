#include "oslab/positivity.hpp"

#include <cmath>

#include <fmt/format.h>
#include <yaml-cpp/yaml.h>

#include "oslab/errors.hpp"
#include "oslab/linalg.hpp"
#include "oslab/simd.hpp"

namespace oslab {

namespace {

constexpr double kHermitianTolerance = 1e-12;

void require_common_lattice(const std::vector<TestFunction>& fs) {
  if (fs.empty()) throw PreconditionError("certificate needs at least one test function");
  for (std::size_t k = 1; k < fs.size(); ++k)
    if (!(fs[k].lattice() == fs[0].lattice()))
      throw DimensionError(fmt::format("test function {} lives on a different lattice", k));
}

}  // namespace

PsdCertificate certify_gram(Eigen::MatrixXcd gram, double tolerance, std::string description) {
  if (gram.rows() == 0 || gram.rows() != gram.cols()) throw DimensionError("Gram matrix must be square and nonempty");
  PsdCertificate cert;
  cert.description = std::move(description);
  cert.asymmetry = linalg::relative_asymmetry(gram);
  if (cert.asymmetry > kHermitianTolerance) {
    throw NumericalError(fmt::format("Gram matrix is not Hermitian (relative asymmetry {:.3e})", cert.asymmetry));
  }
  cert.gram = 0.5 * (gram + gram.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(cert.gram);
  cert.min_eigenvalue = eig.eigenvalues()(0);
  cert.spectral_norm = eig.eigenvalues().cwiseAbs().maxCoeff();
  cert.tolerance = tolerance;
  cert.tolerance_kind = ToleranceKind::relative;
  const bool ok = cert.min_eigenvalue >= -tolerance * cert.spectral_norm;
  cert.verdict = ok ? Verdict::positive : Verdict::indefinite;
  if (!ok) {
    Eigen::VectorXcd v = eig.eigenvectors().col(0);
    const double rayleigh = (v.adjoint() * cert.gram * v)(0).real();
    if (std::abs(rayleigh - cert.min_eigenvalue) > 1e-8 * std::abs(cert.min_eigenvalue)) {
      throw NumericalError("witness does not reproduce the minimal eigenvalue");
    }
    cert.witness = std::move(v);
  }
  return cert;
}

TestFunction reflect(const TestFunction& f) {
  const auto& c = f.coeffs();
  std::vector<cdouble> r(c.rbegin(), c.rend());
  return TestFunction::complex(f.lattice(), std::move(r));
}

TestFunction project_dplus(const TestFunction& f) {
  std::vector<double> r = f.real_part();
  for (std::size_t j = 0; j < r.size(); ++j)
    if (!f.lattice().is_positive(j)) r[j] = 0.0;
  return TestFunction::real(f.lattice(), std::move(r));
}

PsdCertificate pd_gram_certificate(const Functional& s, const std::vector<TestFunction>& fs, double tolerance) {
  require_common_lattice(fs);
  const auto m = static_cast<Eigen::Index>(fs.size());
  Eigen::MatrixXcd gram(m, m);
  std::vector<TestFunction> conj;
  conj.reserve(fs.size());
  for (const auto& f : fs) conj.push_back(f.conj());
  for (Eigen::Index k = 0; k < m; ++k)
    for (Eigen::Index l = 0; l < m; ++l)
      gram(k, l) = s(fs[static_cast<std::size_t>(k)] - conj[static_cast<std::size_t>(l)]);
  return certify_gram(std::move(gram), tolerance,
                      fmt::format("positive-definiteness Gram S(f_k - conj f_l), {} functions", fs.size()));
}

PsdCertificate rp_gram_certificate(const Functional& s, const std::vector<TestFunction>& fs, double tolerance) {
  require_common_lattice(fs);
  for (std::size_t k = 0; k < fs.size(); ++k)
    if (!fs[k].in_dplus()) throw PreconditionError(fmt::format("test function {} is not in D+", k));
  const auto m = static_cast<Eigen::Index>(fs.size());
  std::vector<TestFunction> reflected;
  reflected.reserve(fs.size());
  for (const auto& f : fs) reflected.push_back(reflect(f));
  Eigen::MatrixXcd gram(m, m);
  for (Eigen::Index k = 0; k < m; ++k)
    for (Eigen::Index l = 0; l < m; ++l)
      gram(k, l) = s(reflected[static_cast<std::size_t>(k)] - fs[static_cast<std::size_t>(l)]);
  return certify_gram(std::move(gram), tolerance,
                      fmt::format("reflection-positivity Gram S(theta f_k - f_l), {} functions", fs.size()));
}

SampledGram sampled_pd_gram(const std::vector<PathSample>& paths, const std::vector<TestFunction>& fs) {
  if (paths.empty()) throw PreconditionError("sampled_pd_gram: no paths");
  require_common_lattice(fs);
  const auto m = static_cast<Eigen::Index>(fs.size());
  // Y_k = exp(-i q(conj f_k)) so that conj(Y_k) Y_l = exp(i q(f_k - conj f_l)).
  std::vector<TestFunction> neg_conj;
  for (const auto& f : fs) neg_conj.push_back(-f.conj());
  Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(m, m);
  Eigen::MatrixXd sq_re = Eigen::MatrixXd::Zero(m, m), sq_im = Eigen::MatrixXd::Zero(m, m);
  Eigen::VectorXcd y(m);
  for (const auto& path : paths) {
    for (Eigen::Index k = 0; k < m; ++k)
      y(k) = std::exp(cdouble(0.0, 1.0) * pairing(path, neg_conj[static_cast<std::size_t>(k)]));
    for (Eigen::Index k = 0; k < m; ++k)
      for (Eigen::Index l = 0; l < m; ++l) {
        const cdouble v = std::conj(y(k)) * y(l);
        sum(k, l) += v;
        sq_re(k, l) += v.real() * v.real();
        sq_im(k, l) += v.imag() * v.imag();
      }
  }
  const double n = static_cast<double>(paths.size());
  SampledGram out{sum / n, Eigen::MatrixXd(m, m), Eigen::MatrixXd(m, m)};
  for (Eigen::Index k = 0; k < m; ++k)
    for (Eigen::Index l = 0; l < m; ++l) {
      const double mr = out.mean(k, l).real(), mi = out.mean(k, l).imag();
      out.stderr_real(k, l) = std::sqrt(std::max(0.0, sq_re(k, l) / n - mr * mr) / n);
      out.stderr_imag(k, l) = std::sqrt(std::max(0.0, sq_im(k, l) / n - mi * mi) / n);
    }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

double apply(LocalFunction fn, double x) {
  switch (fn) {
    case LocalFunction::one: return 1.0;
    case LocalFunction::q: return x;
    case LocalFunction::q2: return x * x;
    case LocalFunction::q3: return x * x * x;
    case LocalFunction::q4: return (x * x) * (x * x);
    case LocalFunction::tanh: return std::tanh(x);
  }
  return 0.0;
}

int power_of(LocalFunction fn) {
  switch (fn) {
    case LocalFunction::one: return 0;
    case LocalFunction::q: return 1;
    case LocalFunction::q2: return 2;
    case LocalFunction::q3: return 3;
    case LocalFunction::q4: return 4;
    case LocalFunction::tanh: return -1;
  }
  return -1;
}

const char* name_of(LocalFunction fn) {
  switch (fn) {
    case LocalFunction::one: return "1";
    case LocalFunction::q: return "q";
    case LocalFunction::q2: return "q^2";
    case LocalFunction::q3: return "q^3";
    case LocalFunction::q4: return "q^4";
    case LocalFunction::tanh: return "tanh q";
  }
  return "?";
}

}  // namespace

double ObservableProduct::evaluate(const PathSample& path) const {
  double v = 1.0;
  for (const auto& f : factors) v *= apply(f.function, path.values[f.index]);
  return v;
}

double ObservableProduct::evaluate_reflected(const PathSample& path) const {
  double v = 1.0;
  for (const auto& f : factors) v *= apply(f.function, path.values[path.lattice.reflect(f.index)]);
  return v;
}

bool ObservableProduct::is_polynomial() const {
  for (const auto& f : factors)
    if (f.function == LocalFunction::tanh) return false;
  return true;
}

std::optional<GaussianFunctional> ObservableProduct::as_functional(bool reflected, const TimeLattice& lattice) const {
  if (!is_polynomial()) return std::nullopt;
  std::vector<std::pair<std::size_t, int>> powers;
  for (const auto& f : factors) powers.emplace_back(reflected ? lattice.reflect(f.index) : f.index, power_of(f.function));
  return GaussianFunctional::monomial(std::move(powers));
}

std::string describe(const ObservableProduct& obs, const TimeLattice& lattice) {
  if (obs.factors.empty()) return "1";
  std::string s;
  for (const auto& f : obs.factors) {
    if (!s.empty()) s += " * ";
    s += fmt::format("{}(t={:.6g})", name_of(f.function), lattice.time(f.index));
  }
  return s;
}

namespace {

void require_positive_support(const std::vector<ObservableProduct>& observables, const TimeLattice& lattice) {
  for (std::size_t k = 0; k < observables.size(); ++k)
    for (const auto& f : observables[k].factors) {
      if (f.index >= lattice.size()) throw DimensionError(fmt::format("observable {} leaves the lattice", k));
      if (!lattice.is_positive(f.index))
        throw PreconditionError(fmt::format("observable {} references a time t <= 0", k));
    }
}

}  // namespace

PsdCertificate rp_sampled_certificate(const std::vector<PathSample>& paths,
                                      const std::vector<ObservableProduct>& observables, double sigmas) {
  if (paths.empty()) throw PreconditionError("rp_sampled_certificate: empty path ensemble");
  if (observables.empty()) throw PreconditionError("rp_sampled_certificate: no observables");
  const TimeLattice& lattice = paths.front().lattice;
  require_positive_support(observables, lattice);
  const auto m = static_cast<Eigen::Index>(observables.size());

  // Sums are reduced in path order for reproducibility.
  Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(m, m), sum_sq = Eigen::MatrixXd::Zero(m, m);
  Eigen::VectorXd f(m), tf(m);
  for (const auto& path : paths) {
    for (Eigen::Index k = 0; k < m; ++k) {
      f(k) = observables[static_cast<std::size_t>(k)].evaluate(path);
      tf(k) = observables[static_cast<std::size_t>(k)].evaluate_reflected(path);
    }
    for (Eigen::Index k = 0; k < m; ++k)
      for (Eigen::Index l = k; l < m; ++l) {
        const double v = 0.5 * (tf(k) * f(l) + tf(l) * f(k));
        sum(k, l) += v;
        sum_sq(k, l) += v * v;
      }
  }
  const double n = static_cast<double>(paths.size());
  Eigen::MatrixXd mean(m, m), se(m, m);
  for (Eigen::Index k = 0; k < m; ++k)
    for (Eigen::Index l = k; l < m; ++l) {
      const double mu = sum(k, l) / n;
      mean(k, l) = mean(l, k) = mu;
      se(k, l) = se(l, k) = std::sqrt(std::max(0.0, sum_sq(k, l) / n - mu * mu) / n);
    }

  std::string desc = fmt::format("sampled reflection positivity E[Theta(F_k) F_l], {} paths:", paths.size());
  for (const auto& obs : observables) desc += " [" + describe(obs, lattice) + "]";
  PsdCertificate cert = certify_gram(mean.cast<cdouble>(), 0.0, std::move(desc));

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(mean);
  const Eigen::VectorXd v = eig.eigenvectors().col(0);
  double var = 0.0;
  for (Eigen::Index k = 0; k < m; ++k)
    for (Eigen::Index l = 0; l < m; ++l) var += (v(k) * v(l)) * (v(k) * v(l)) * se(k, l) * se(k, l);
  cert.tolerance = sigmas * std::sqrt(var);
  cert.tolerance_kind = ToleranceKind::statistical;
  const bool ok = cert.min_eigenvalue >= -cert.tolerance;
  cert.verdict = ok ? Verdict::positive : Verdict::indefinite;
  if (ok) {
    cert.witness.reset();
  } else if (!cert.witness) {
    cert.witness = v.cast<cdouble>();
  }
  return cert;
}

Eigen::MatrixXd rp_exact_gram(const GaussianEuclideanMeasure& measure, const std::vector<ObservableProduct>& observables) {
  const TimeLattice& lattice = measure.lattice();
  require_positive_support(observables, lattice);
  const auto m = static_cast<Eigen::Index>(observables.size());
  Eigen::MatrixXd gram(m, m);
  for (Eigen::Index k = 0; k < m; ++k)
    for (Eigen::Index l = 0; l < m; ++l) {
      const auto a = observables[static_cast<std::size_t>(k)].as_functional(true, lattice);
      const auto b = observables[static_cast<std::size_t>(l)].as_functional(false, lattice);
      if (!a || !b) throw PreconditionError("exact Gram needs polynomial observables");
      gram(k, l) = gaussian_expectation(measure.covariance(), *a * *b).real();
    }
  return gram;
}

// ---------------------------------------------------------------------------

namespace {

void emit_complex_matrix(YAML::Emitter& out, const Eigen::MatrixXcd& m) {
  out << YAML::BeginSeq;
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    std::string row;
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c > 0) row += ", ";
      row += fmt::format("{:.17g} {:+.17g}i", m(r, c).real(), m(r, c).imag());
    }
    out << row;
  }
  out << YAML::EndSeq;
}

}  // namespace

std::string certificate_to_text(const PsdCertificate& cert) {
  YAML::Emitter out;
  out << YAML::BeginMap;
  out << YAML::Key << "family" << YAML::Value << cert.description;
  out << YAML::Key << "dimension" << YAML::Value << cert.gram.rows();
  out << YAML::Key << "gram" << YAML::Value;
  emit_complex_matrix(out, cert.gram);
  out << YAML::Key << "min_eigenvalue" << YAML::Value << fmt::format("{:.17g}", cert.min_eigenvalue);
  out << YAML::Key << "spectral_norm" << YAML::Value << fmt::format("{:.17g}", cert.spectral_norm);
  out << YAML::Key << "tolerance" << YAML::Value << fmt::format("{:.17g}", cert.tolerance);
  out << YAML::Key << "tolerance_kind" << YAML::Value
      << (cert.tolerance_kind == ToleranceKind::relative ? "relative" : "statistical");
  out << YAML::Key << "verdict" << YAML::Value << (cert.positive() ? "positive" : "indefinite");
  if (cert.witness) {
    out << YAML::Key << "witness" << YAML::Value << YAML::BeginSeq;
    for (Eigen::Index k = 0; k < cert.witness->size(); ++k)
      out << fmt::format("{:.17g} {:+.17g}i", (*cert.witness)(k).real(), (*cert.witness)(k).imag());
    out << YAML::EndSeq;
  }
  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

}  // namespace oslab
