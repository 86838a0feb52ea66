#include "oslab/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <thread>

#include <fmt/format.h>
#include <yaml-cpp/yaml.h>

#include "oslab/errors.hpp"
#include "oslab/linalg.hpp"
#include "oslab/rng.hpp"
#include "oslab/simd.hpp"

namespace oslab {

TimeLattice::TimeLattice(std::size_t n_points, double spacing) : n_(n_points), spacing_(spacing) {
  if (n_points == 0 || n_points % 2 != 0) {
    throw DomainError(fmt::format("lattice needs a positive even number of points, got {}", n_points));
  }
  if (!(spacing > 0.0) || !std::isfinite(spacing)) {
    throw DomainError(fmt::format("lattice spacing must be positive, got {}", spacing));
  }
}

// ---------------------------------------------------------------------------
// TestFunction

TestFunction::TestFunction(const TimeLattice& lattice, std::vector<cdouble> coeffs)
    : lattice_(lattice), coeffs_(std::move(coeffs)) {
  if (coeffs_.size() != lattice_.size()) {
    throw DimensionError(fmt::format("test function has {} coefficients on a {}-point lattice",
                                     coeffs_.size(), lattice_.size()));
  }
  for (std::size_t j = 0; j < coeffs_.size(); ++j) {
    if (coeffs_[j].imag() != 0.0) is_real_ = false;
    if (!lattice_.is_positive(j) && coeffs_[j] != cdouble(0.0)) in_dplus_ = false;
  }
  in_dplus_ = in_dplus_ && is_real_;
}

TestFunction TestFunction::zero(const TimeLattice& lattice) {
  return TestFunction(lattice, std::vector<cdouble>(lattice.size(), 0.0));
}

TestFunction TestFunction::real(const TimeLattice& lattice, std::vector<double> coeffs) {
  return TestFunction(lattice, std::vector<cdouble>(coeffs.begin(), coeffs.end()));
}

TestFunction TestFunction::complex(const TimeLattice& lattice, std::vector<cdouble> coeffs) {
  return TestFunction(lattice, std::move(coeffs));
}

TestFunction TestFunction::spike(const TimeLattice& lattice, std::size_t j, double amplitude) {
  if (j >= lattice.size()) throw DimensionError("spike index outside the lattice");
  std::vector<cdouble> c(lattice.size(), 0.0);
  c[j] = amplitude;
  return TestFunction(lattice, std::move(c));
}

bool TestFunction::is_zero() const noexcept {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](cdouble c) { return c == cdouble(0.0); });
}

std::vector<double> TestFunction::real_part() const {
  std::vector<double> out(coeffs_.size());
  std::transform(coeffs_.begin(), coeffs_.end(), out.begin(), [](cdouble c) { return c.real(); });
  return out;
}

std::vector<double> TestFunction::imag_part() const {
  std::vector<double> out(coeffs_.size());
  std::transform(coeffs_.begin(), coeffs_.end(), out.begin(), [](cdouble c) { return c.imag(); });
  return out;
}

TestFunction TestFunction::conj() const {
  std::vector<cdouble> c(coeffs_.size());
  std::transform(coeffs_.begin(), coeffs_.end(), c.begin(), [](cdouble z) { return std::conj(z); });
  return TestFunction(lattice_, std::move(c));
}

TestFunction TestFunction::operator-() const { return cdouble(-1.0) * *this; }

TestFunction operator+(const TestFunction& a, const TestFunction& b) {
  if (!(a.lattice_ == b.lattice_)) throw DimensionError("test functions live on different lattices");
  std::vector<cdouble> c(a.coeffs_.size());
  for (std::size_t j = 0; j < c.size(); ++j) c[j] = a.coeffs_[j] + b.coeffs_[j];
  return TestFunction(a.lattice_, std::move(c));
}

TestFunction operator-(const TestFunction& a, const TestFunction& b) {
  if (!(a.lattice_ == b.lattice_)) throw DimensionError("test functions live on different lattices");
  std::vector<cdouble> c(a.coeffs_.size());
  for (std::size_t j = 0; j < c.size(); ++j) c[j] = a.coeffs_[j] - b.coeffs_[j];
  return TestFunction(a.lattice_, std::move(c));
}

TestFunction operator*(cdouble s, const TestFunction& f) {
  std::vector<cdouble> c(f.coeffs_.size());
  for (std::size_t j = 0; j < c.size(); ++j) c[j] = s * f.coeffs_[j];
  return TestFunction(f.lattice_, std::move(c));
}

// ---------------------------------------------------------------------------
// Measures

GaussianEuclideanMeasure::GaussianEuclideanMeasure(TimeLattice lattice, Eigen::MatrixXd covariance,
                                                   double mass, std::string kernel, double kernel_param)
    : lattice_(lattice),
      cov_(std::move(covariance)),
      mass_(mass),
      kernel_(std::move(kernel)),
      kernel_param_(kernel_param) {
  const auto n = static_cast<Eigen::Index>(lattice_.size());
  if (cov_.rows() != n || cov_.cols() != n) {
    throw DimensionError(fmt::format("covariance is {}x{} on a {}-point lattice", cov_.rows(),
                                     cov_.cols(), n));
  }
  if (!cov_.allFinite()) throw DomainError("covariance has non-finite entries");
  const double scale = std::max(cov_.cwiseAbs().maxCoeff(), 1e-300);
  if ((cov_ - cov_.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw DomainError("covariance is not symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov_, Eigen::EigenvaluesOnly);
  min_eig_ = eig.eigenvalues()(0);
  norm_ = eig.eigenvalues().cwiseAbs().maxCoeff();
}

namespace {

void require_positive_mass(double mass) {
  if (!(mass > 0.0) || !std::isfinite(mass)) {
    throw DomainError(fmt::format("mass must be positive, got {}", mass));
  }
}

}  // namespace

GaussianEuclideanMeasure stationary_kernel_covariance(const TimeLattice& lattice,
                                                      const std::function<double(double)>& kernel,
                                                      double mass, std::string name, double kernel_param) {
  const auto n = static_cast<Eigen::Index>(lattice.size());
  Eigen::MatrixXd c(n, n);
  // Lattice times differ by integer multiples of the spacing, so evaluating
  // on |j - k| makes the matrix exactly Toeplitz and exactly symmetric.
  std::vector<double> row(static_cast<std::size_t>(n));
  for (Eigen::Index d = 0; d < n; ++d) row[static_cast<std::size_t>(d)] = kernel(static_cast<double>(d) * lattice.spacing());
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index k = 0; k < n; ++k) c(j, k) = row[static_cast<std::size_t>(std::abs(j - k))];
  return GaussianEuclideanMeasure(lattice, std::move(c), mass, std::move(name), kernel_param);
}

GaussianEuclideanMeasure ou_covariance(double mass, const TimeLattice& lattice) {
  require_positive_mass(mass);
  return stationary_kernel_covariance(
      lattice, [mass](double tau) { return std::exp(-mass * tau) / (2.0 * mass); }, mass, "ou");
}

GaussianEuclideanMeasure lattice_free_field_covariance(double mass, const TimeLattice& lattice) {
  require_positive_mass(mass);
  const auto n = static_cast<Eigen::Index>(lattice.size());
  const double a = lattice.spacing();
  Eigen::MatrixXd op = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    op(j, j) = 2.0 / (a * a) + mass * mass;
    if (j > 0) op(j, j - 1) = -1.0 / (a * a);
    if (j + 1 < n) op(j, j + 1) = -1.0 / (a * a);
  }
  Eigen::LLT<Eigen::MatrixXd> llt(op);
  if (llt.info() != Eigen::Success) {
    throw FactorizationError("lattice Laplacian plus mass is not positive definite", 0.0);
  }
  Eigen::MatrixXd c = llt.solve(Eigen::MatrixXd::Identity(n, n)) / a;
  c = 0.5 * (c + c.transpose()).eval();
  return GaussianEuclideanMeasure(lattice, std::move(c), mass, "free-field");
}

GaussianEuclideanMeasure damped_cosine_covariance(double mass, double omega, const TimeLattice& lattice) {
  require_positive_mass(mass);
  return stationary_kernel_covariance(
      lattice, [mass, omega](double tau) { return std::cos(omega * tau) * std::exp(-mass * tau); }, mass,
      "damped-cosine", omega);
}

cdouble covariance_form(const GaussianEuclideanMeasure& measure, const TestFunction& f, const TestFunction& g) {
  if (!(f.lattice() == measure.lattice()) || !(g.lattice() == measure.lattice())) {
    throw DimensionError("test function and measure live on different lattices");
  }
  const std::size_t n = measure.lattice().size();
  const std::span<const double> cov(measure.covariance().data(), n * n);  // symmetric: layout irrelevant
  const auto gr = g.real_part();
  const auto gi = g.imag_part();
  std::vector<double> cgr(n), cgi(n);
  simd::gemv(cov, gr, cgr);
  const bool g_complex = !g.is_real();
  if (g_complex) simd::gemv(cov, gi, cgi);
  const auto fr = f.real_part();
  const auto fi = f.imag_part();
  double re = simd::dot(fr, cgr);
  double im = 0.0;
  if (!f.is_real()) im += simd::dot(fi, cgr);
  if (g_complex) {
    re -= simd::dot(fi, cgi);
    im += simd::dot(fr, cgi);
  }
  const double a2 = measure.lattice().spacing() * measure.lattice().spacing();
  return {a2 * re, a2 * im};
}

cdouble generating_functional(const GaussianEuclideanMeasure& measure, const TestFunction& f) {
  if (f.is_zero()) {
    if (!(f.lattice() == measure.lattice())) throw DimensionError("test function and measure live on different lattices");
    return 1.0;
  }
  return std::exp(-0.5 * covariance_form(measure, f, f));
}

Functional make_functional(const GaussianEuclideanMeasure& measure) {
  return [measure](const TestFunction& f) { return generating_functional(measure, f); };
}

cdouble pairing(const PathSample& path, const TestFunction& f) {
  if (!(path.lattice == f.lattice())) throw DimensionError("path and test function live on different lattices");
  const auto fr = f.real_part();
  const double a = path.lattice.spacing();
  double im = 0.0;
  if (!f.is_real()) im = simd::dot(f.imag_part(), path.values);
  return {a * simd::dot(fr, path.values), a * im};
}

std::vector<double> symmetric_factor(const GaussianEuclideanMeasure& measure) {
  const auto n = static_cast<Eigen::Index>(measure.lattice().size());
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> factor(n, n);
  Eigen::LLT<Eigen::MatrixXd> llt(measure.covariance());
  if (llt.info() == Eigen::Success) {
    factor = llt.matrixL();
  } else {
    if (!measure.is_psd()) {
      throw FactorizationError(
          fmt::format("covariance is indefinite (min eigenvalue {:.6e})", measure.min_eigenvalue()),
          measure.min_eigenvalue());
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(measure.covariance());
    const Eigen::VectorXd root = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    factor = eig.eigenvectors() * root.asDiagonal();
  }
  return std::vector<double>(factor.data(), factor.data() + n * n);
}

std::vector<PathSample> sample_paths(const GaussianEuclideanMeasure& measure, std::size_t count,
                                     std::uint64_t seed, unsigned threads) {
  if (count == 0) throw PreconditionError("sample_paths: count must be at least 1");
  const std::vector<double> factor = symmetric_factor(measure);
  const std::size_t n = measure.lattice().size();
  std::vector<PathSample> paths(count, PathSample{measure.lattice(), {}});

  auto fill = [&](std::size_t begin, std::size_t end) {
    std::vector<double> z(n);
    for (std::size_t k = begin; k < end; ++k) {
      PathStream stream(seed, k);
      for (auto& v : z) v = stream.next_normal();
      paths[k].values.assign(n, 0.0);
      simd::gemv(factor, z, paths[k].values);
    }
  };

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, (count + 1023) / 1024));
  if (threads <= 1) {
    fill(0, count);
  } else {
    std::vector<std::jthread> pool;
    const std::size_t chunk = (count + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
      const std::size_t b = t * chunk, e = std::min(count, b + chunk);
      if (b < e) pool.emplace_back(fill, b, e);
    }
  }
  return paths;
}

EmpiricalCovariance empirical_covariance(const std::vector<PathSample>& paths) {
  if (paths.empty()) throw PreconditionError("empirical_covariance: no paths");
  const std::size_t n = paths.front().values.size();
  std::vector<double> sum(n * n, 0.0), sum_sq(n * n, 0.0), row(n);
  for (const auto& p : paths) {
    for (std::size_t j = 0; j < n; ++j) {
      const std::span<double> srow(sum.data() + j * n, n);
      simd::axpy(p.values[j], p.values, srow);
      for (std::size_t k = 0; k < n; ++k) row[k] = p.values[k] * p.values[k];
      simd::axpy(p.values[j] * p.values[j], row, std::span<double>(sum_sq.data() + j * n, n));
    }
  }
  const double count = static_cast<double>(paths.size());
  EmpiricalCovariance out{Eigen::MatrixXd(n, n), Eigen::MatrixXd(n, n)};
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = 0; k < n; ++k) {
      const double m = sum[j * n + k] / count;
      const double var = std::max(0.0, sum_sq[j * n + k] / count - m * m);
      out.mean(j, k) = m;
      out.standard_error(j, k) = std::sqrt(var / count);
    }
  return out;
}

SymmetryCheck check_stationarity(const GaussianEuclideanMeasure& measure, double tol) {
  const auto& c = measure.covariance();
  SymmetryCheck out;
  for (Eigen::Index j = 0; j + 1 < c.rows(); ++j)
    for (Eigen::Index k = 0; k + 1 < c.cols(); ++k)
      out.max_deviation = std::max(out.max_deviation, std::abs(c(j, k) - c(j + 1, k + 1)));
  out.threshold = tol * measure.spectral_norm();
  out.holds = out.max_deviation <= out.threshold;
  return out;
}

SymmetryCheck check_time_reflection_symmetry(const GaussianEuclideanMeasure& measure, double tol) {
  const auto& c = measure.covariance();
  const auto& lat = measure.lattice();
  SymmetryCheck out;
  for (std::size_t j = 0; j < lat.size(); ++j)
    for (std::size_t k = 0; k < lat.size(); ++k) {
      const double d = std::abs(c(static_cast<Eigen::Index>(lat.reflect(j)), static_cast<Eigen::Index>(lat.reflect(k))) -
                                c(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)));
      out.max_deviation = std::max(out.max_deviation, d);
    }
  out.threshold = tol * measure.spectral_norm();
  out.holds = out.max_deviation <= out.threshold;
  return out;
}

// ---------------------------------------------------------------------------
// Text round trip

std::string export_measure(const GaussianEuclideanMeasure& measure, bool include_covariance) {
  YAML::Emitter out;
  out.SetDoublePrecision(17);
  out << YAML::BeginMap;
  out << YAML::Key << "kind" << YAML::Value << "gaussian-euclidean-measure";
  out << YAML::Key << "lattice" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "n_points" << YAML::Value << measure.lattice().size();
  out << YAML::Key << "spacing" << YAML::Value << fmt::format("{:.17g}", measure.lattice().spacing());
  out << YAML::EndMap;
  out << YAML::Key << "kernel" << YAML::Value << measure.kernel();
  out << YAML::Key << "mass" << YAML::Value << fmt::format("{:.17g}", measure.mass());
  out << YAML::Key << "kernel_param" << YAML::Value << fmt::format("{:.17g}", measure.kernel_param());
  if (include_covariance) {
    std::string text;
    const auto& c = measure.covariance();
    for (Eigen::Index j = 0; j < c.rows(); ++j) {
      for (Eigen::Index k = 0; k < c.cols(); ++k) {
        if (k > 0) text += ' ';
        text += fmt::format("{:.17g}", c(j, k));
      }
      text += '\n';
    }
    out << YAML::Key << "covariance" << YAML::Value << YAML::Literal << text;
  }
  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

GaussianEuclideanMeasure import_measure(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw PreconditionError(std::string("measure document is not valid YAML: ") + e.what());
  }
  if (!root["lattice"] || !root["kernel"] || !root["mass"]) {
    throw PreconditionError("measure document needs lattice, kernel and mass");
  }
  const TimeLattice lattice(root["lattice"]["n_points"].as<std::size_t>(),
                            std::stod(root["lattice"]["spacing"].as<std::string>()));
  const auto kernel = root["kernel"].as<std::string>();
  const double mass = std::stod(root["mass"].as<std::string>());
  const double param = root["kernel_param"] ? std::stod(root["kernel_param"].as<std::string>()) : 0.0;

  if (root["covariance"]) {
    const auto n = static_cast<Eigen::Index>(lattice.size());
    Eigen::MatrixXd c(n, n);
    std::istringstream in(root["covariance"].as<std::string>());
    for (Eigen::Index j = 0; j < n; ++j)
      for (Eigen::Index k = 0; k < n; ++k) {
        std::string token;
        if (!(in >> token)) throw DimensionError("covariance text has too few entries");
        c(j, k) = std::stod(token);
      }
    std::string extra;
    if (in >> extra) throw DimensionError("covariance text has too many entries");
    return GaussianEuclideanMeasure(lattice, std::move(c), mass, kernel, param);
  }
  if (kernel == "ou") return ou_covariance(mass, lattice);
  if (kernel == "free-field") return lattice_free_field_covariance(mass, lattice);
  if (kernel == "damped-cosine") return damped_cosine_covariance(mass, param, lattice);
  throw PreconditionError("unknown kernel '" + kernel + "' and no covariance given");
}

}  // namespace oslab
