#pragma once

// Finite time lattices, test functions on them, and centered Gaussian path
// measures with their generating functionals and samplers.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace oslab {

using cdouble = std::complex<double>;

// Grid t_j = (j + 1/2 - n/2) * spacing, j = 0..n-1. n is even, so the grid
// is mirror symmetric and never contains t = 0; reflection is the index
// permutation j -> n - 1 - j and the positive half is j >= n/2.
class TimeLattice {
 public:
  TimeLattice(std::size_t n_points, double spacing);

  std::size_t size() const noexcept { return n_; }
  double spacing() const noexcept { return spacing_; }
  double time(std::size_t j) const noexcept {
    return (static_cast<double>(j) + 0.5 - 0.5 * static_cast<double>(n_)) * spacing_;
  }
  std::size_t reflect(std::size_t j) const noexcept { return n_ - 1 - j; }
  bool is_positive(std::size_t j) const noexcept { return j >= n_ / 2; }
  std::size_t first_positive() const noexcept { return n_ / 2; }

  friend bool operator==(const TimeLattice&, const TimeLattice&) = default;

 private:
  std::size_t n_;
  double spacing_;
};

class TestFunction {
 public:
  static TestFunction zero(const TimeLattice& lattice);
  static TestFunction real(const TimeLattice& lattice, std::vector<double> coeffs);
  static TestFunction complex(const TimeLattice& lattice, std::vector<cdouble> coeffs);
  static TestFunction spike(const TimeLattice& lattice, std::size_t j, double amplitude = 1.0);

  const TimeLattice& lattice() const noexcept { return lattice_; }
  const std::vector<cdouble>& coeffs() const noexcept { return coeffs_; }
  cdouble operator[](std::size_t j) const { return coeffs_[j]; }
  std::size_t size() const noexcept { return coeffs_.size(); }

  // Exact: every imaginary part is 0.0.
  bool is_real() const noexcept { return is_real_; }
  // Real and zero at every t_j < 0.
  bool in_dplus() const noexcept { return in_dplus_; }
  bool is_zero() const noexcept;

  std::vector<double> real_part() const;
  std::vector<double> imag_part() const;

  TestFunction conj() const;
  TestFunction operator-() const;
  friend TestFunction operator+(const TestFunction& a, const TestFunction& b);
  friend TestFunction operator-(const TestFunction& a, const TestFunction& b);
  friend TestFunction operator*(cdouble s, const TestFunction& f);
  friend bool operator==(const TestFunction& a, const TestFunction& b) {
    return a.lattice_ == b.lattice_ && a.coeffs_ == b.coeffs_;
  }

 private:
  TestFunction(const TimeLattice& lattice, std::vector<cdouble> coeffs);

  TimeLattice lattice_;
  std::vector<cdouble> coeffs_;
  bool is_real_ = true;
  bool in_dplus_ = true;
};

struct PathSample {
  TimeLattice lattice;
  std::vector<double> values;  // q(t_j)
};

// Centered Gaussian measure on R^n given by its covariance. Immutable.
class GaussianEuclideanMeasure {
 public:
  // Validates shape and symmetry (relative 1e-12); positivity is queried,
  // not enforced, so indefinite candidates can still be inspected.
  GaussianEuclideanMeasure(TimeLattice lattice, Eigen::MatrixXd covariance, double mass,
                           std::string kernel, double kernel_param = 0.0);

  const TimeLattice& lattice() const noexcept { return lattice_; }
  const Eigen::MatrixXd& covariance() const noexcept { return cov_; }
  double mass() const noexcept { return mass_; }
  const std::string& kernel() const noexcept { return kernel_; }
  double kernel_param() const noexcept { return kernel_param_; }

  double min_eigenvalue() const noexcept { return min_eig_; }
  double spectral_norm() const noexcept { return norm_; }
  bool is_psd(double rel_tol = 1e-10) const noexcept { return min_eig_ >= -rel_tol * norm_; }

 private:
  TimeLattice lattice_;
  Eigen::MatrixXd cov_;
  double mass_;
  std::string kernel_;
  double kernel_param_;
  double min_eig_ = 0.0;
  double norm_ = 0.0;
};

// C(t, s) = exp(-m |t - s|) / (2m), the stationary Ornstein-Uhlenbeck kernel.
GaussianEuclideanMeasure ou_covariance(double mass, const TimeLattice& lattice);

// C = (1/a) (-Delta_a + m^2)^{-1} with Dirichlet ends, Delta_a the
// second-difference operator with 1/a^2 scaling. The 1/a normalises the
// lattice Green's function so it converges to the continuum kernel.
GaussianEuclideanMeasure lattice_free_field_covariance(double mass, const TimeLattice& lattice);

// Stationary kernel cos(omega |t - s|) exp(-mass |t - s|). Positive definite
// for every omega but not reflection positive once omega is large enough.
GaussianEuclideanMeasure damped_cosine_covariance(double mass, double omega,
                                                  const TimeLattice& lattice);

GaussianEuclideanMeasure stationary_kernel_covariance(const TimeLattice& lattice,
                                                      const std::function<double(double)>& kernel,
                                                      double mass, std::string name,
                                                      double kernel_param = 0.0);

// Complex bilinear form B(f, g) = a^2 sum_jk f_j C_jk g_k (no conjugation).
cdouble covariance_form(const GaussianEuclideanMeasure& measure, const TestFunction& f,
                        const TestFunction& g);

// S(f) = exp(-B(f, f) / 2), the characteristic functional of the measure
// with pairing q(f) = a sum_j f_j q(t_j).
cdouble generating_functional(const GaussianEuclideanMeasure& measure, const TestFunction& f);

using Functional = std::function<cdouble(const TestFunction&)>;
Functional make_functional(const GaussianEuclideanMeasure& measure);

// q(f) for a sampled path.
cdouble pairing(const PathSample& path, const TestFunction& f);

// Dense factor F with F F^T = C (Cholesky, falling back to a clipped
// eigen-factor for semidefinite C). Row-major, n x n.
std::vector<double> symmetric_factor(const GaussianEuclideanMeasure& measure);

// Draws `count` paths; path k uses PathStream(seed, k). Throws
// PreconditionError for count == 0 and FactorizationError when C is
// indefinite. `threads == 0` picks the hardware concurrency; the output does
// not depend on it.
std::vector<PathSample> sample_paths(const GaussianEuclideanMeasure& measure, std::size_t count,
                                     std::uint64_t seed, unsigned threads = 0);

struct EmpiricalCovariance {
  Eigen::MatrixXd mean;            // (1/N) sum q_j q_k
  Eigen::MatrixXd standard_error;  // sqrt(Var(q_j q_k) / N)
};
EmpiricalCovariance empirical_covariance(const std::vector<PathSample>& paths);

struct SymmetryCheck {
  bool holds = false;
  double max_deviation = 0.0;  // absolute
  double threshold = 0.0;      // tol * ||C||_2
};

// |C_{j,k} - C_{j+1,k+1}| <= tol ||C||_2 for every valid shift.
SymmetryCheck check_stationarity(const GaussianEuclideanMeasure& measure, double tol = 1e-10);

// |C_{n-1-j, n-1-k} - C_{j,k}| <= tol ||C||_2.
SymmetryCheck check_time_reflection_symmetry(const GaussianEuclideanMeasure& measure,
                                             double tol = 1e-10);

// Text round trip (YAML). With include_covariance, the dense matrix is
// written row-major with 17 significant digits and read back verbatim;
// otherwise the kernel is rebuilt from its name.
std::string export_measure(const GaussianEuclideanMeasure& measure, bool include_covariance = true);
GaussianEuclideanMeasure import_measure(const std::string& text);

}  // namespace oslab
