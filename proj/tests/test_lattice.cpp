#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "oslab/errors.hpp"
#include "oslab/lattice.hpp"
#include "oslab/rng.hpp"

using namespace oslab;

namespace {

// Thomas algorithm for a constant tridiagonal system (diag d, off-diagonal e).
std::vector<double> solve_tridiagonal(double d, double e, std::vector<double> rhs) {
  const std::size_t n = rhs.size();
  std::vector<double> c(n, 0.0);
  double denom = d;
  c[0] = e / denom;
  rhs[0] /= denom;
  for (std::size_t i = 1; i < n; ++i) {
    denom = d - e * c[i - 1];
    c[i] = e / denom;
    rhs[i] = (rhs[i] - e * rhs[i - 1]) / denom;
  }
  for (std::size_t i = n - 1; i-- > 0;) rhs[i] -= c[i] * rhs[i + 1];
  return rhs;
}

// Green's function of -d^2/dt^2 + m^2 at the origin: finite differences on
// [-L, L] with a discrete delta of mass one.
double green_at_origin(double mass, double h, double half_width) {
  const auto n = static_cast<std::size_t>(2.0 * half_width / h) | 1u;
  std::vector<double> rhs(n, 0.0);
  rhs[n / 2] = 1.0 / h;
  const auto g = solve_tridiagonal(2.0 / (h * h) + mass * mass, -1.0 / (h * h), rhs);
  return g[n / 2];
}

}  // namespace

TEST(TimeLattice, GridIsMirrorSymmetricWithoutOrigin) {
  const TimeLattice lat(10, 0.3);
  for (std::size_t j = 0; j < lat.size(); ++j) {
    EXPECT_DOUBLE_EQ(lat.time(lat.reflect(j)), -lat.time(j));
    EXPECT_NE(lat.time(j), 0.0);
    EXPECT_EQ(lat.is_positive(j), lat.time(j) > 0.0);
  }
  EXPECT_EQ(lat.first_positive(), 5u);
  EXPECT_DOUBLE_EQ(lat.time(5), 0.15);
}

TEST(TimeLattice, RejectsOddOrEmptyGridsAndBadSpacing) {
  EXPECT_THROW(TimeLattice(7, 0.1), DomainError);
  EXPECT_THROW(TimeLattice(0, 0.1), DomainError);
  EXPECT_THROW(TimeLattice(8, 0.0), DomainError);
  EXPECT_THROW(TimeLattice(8, -1.0), DomainError);
  EXPECT_THROW(TimeLattice(8, std::nan("")), DomainError);
}

TEST(TestFunction, FlagsFollowTheCoefficients) {
  const TimeLattice lat(6, 1.0);
  EXPECT_TRUE(TestFunction::spike(lat, 4).in_dplus());
  EXPECT_FALSE(TestFunction::spike(lat, 2).in_dplus());
  const auto z = TestFunction::complex(lat, {0, 0, 0, {1.0, 1e-300}, 0, 0});
  EXPECT_FALSE(z.is_real());
  EXPECT_FALSE(z.in_dplus());
  EXPECT_TRUE(z.conj().conj() == z);
  EXPECT_TRUE(TestFunction::zero(lat).is_zero());
  EXPECT_TRUE((z - z).is_zero());
  EXPECT_THROW(TestFunction::real(lat, {1.0, 2.0}), DimensionError);
  EXPECT_THROW(TestFunction::spike(lat, 1) + TestFunction::spike(TimeLattice(8, 1.0), 1), DimensionError);
}

TEST(OuCovariance, DiagonalMatchesGreensFunctionOracle) {
  const auto m = ou_covariance(1.0, TimeLattice(8, 0.25));
  const double oracle = green_at_origin(1.0, 1e-3, 20.0);
  EXPECT_NEAR(oracle, 0.5, 1e-6);
  for (Eigen::Index j = 0; j < 8; ++j) EXPECT_NEAR(m.covariance()(j, j), oracle, 1e-6);
}

TEST(OuCovariance, KnownEntryAndMonotoneDecay) {
  // |t - s| = 1 at spacing 0.25 is four steps.
  const auto m2 = ou_covariance(2.0, TimeLattice(12, 0.25));
  EXPECT_NEAR(m2.covariance()(0, 4), std::exp(-2.0) / 4.0, 1e-15);
  EXPECT_NEAR(m2.covariance()(0, 4), 0.03383, 1e-5);
  const auto m1 = ou_covariance(1.0, TimeLattice(64, 0.5));
  for (Eigen::Index k = 1; k < 64; ++k) EXPECT_LT(m1.covariance()(0, k), m1.covariance()(0, k - 1));
  EXPECT_LT(m1.covariance()(0, 63), 1e-13);
}

TEST(OuCovariance, RejectsNonPositiveMass) {
  EXPECT_THROW(ou_covariance(0.0, TimeLattice(4, 1.0)), DomainError);
  EXPECT_THROW(ou_covariance(-1.0, TimeLattice(4, 1.0)), DomainError);
  EXPECT_THROW(lattice_free_field_covariance(0.0, TimeLattice(4, 1.0)), DomainError);
}

TEST(FreeField, FourByFourMatchesTridiagonalInverse) {
  const TimeLattice lat(4, 1.0);
  const auto m = lattice_free_field_covariance(1.0, lat);
  for (std::size_t col = 0; col < 4; ++col) {
    std::vector<double> e(4, 0.0);
    e[col] = 1.0;
    const auto x = solve_tridiagonal(3.0, -1.0, e);
    for (std::size_t row = 0; row < 4; ++row)
      EXPECT_NEAR(m.covariance()(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)), x[row], 1e-14);
  }
  EXPECT_GT(m.min_eigenvalue(), 0.0);
  EXPECT_FALSE(check_stationarity(m).holds);
  EXPECT_GT(check_stationarity(m).max_deviation, 1e-3);
  EXPECT_TRUE(check_time_reflection_symmetry(m).holds);
}

TEST(FreeField, LargeMassLimitIsDiagonal) {
  // With the 1/a normalisation the limit is I / (a m^2).
  for (double a : {1.0, 0.5}) {
    const TimeLattice lat(6, a);
    for (double mass : {50.0, 200.0}) {
      const auto m = lattice_free_field_covariance(mass, lat);
      const double scale = 1.0 / (a * mass * mass);
      for (Eigen::Index j = 0; j < 6; ++j)
        for (Eigen::Index k = 0; k < 6; ++k) {
          const double expected = j == k ? scale : 0.0;
          EXPECT_NEAR(m.covariance()(j, k), expected, 10.0 / (std::pow(a, 3) * std::pow(mass, 4)));
        }
    }
  }
}

TEST(FreeField, ContinuumLimitApproachesOuKernel) {
  const double mass = 1.0;
  for (double a : {0.05, 0.02}) {
    const auto n = static_cast<std::size_t>(std::lround(12.0 / a)) & ~std::size_t{1};
    const TimeLattice lat(n, a);
    const auto ff = lattice_free_field_covariance(mass, lat);
    const auto ou = ou_covariance(mass, lat);
    const auto mid = static_cast<Eigen::Index>(n / 2);
    const auto span = static_cast<Eigen::Index>(std::lround(2.0 / a));
    for (Eigen::Index d = 0; d <= span; d += std::max<Eigen::Index>(1, span / 8)) {
      const double rel = std::abs(ff.covariance()(mid, mid + d) - ou.covariance()(mid, mid + d)) / ou.covariance()(mid, mid + d);
      EXPECT_LT(rel, 0.02) << "a=" << a << " d=" << d;
    }
  }
}

TEST(GeneratingFunctional, ZeroSpikeAndEvenness) {
  const TimeLattice lat(10, 0.1);
  const auto m = ou_covariance(1.0, lat);
  EXPECT_EQ(generating_functional(m, TestFunction::zero(lat)), cdouble(1.0));
  const cdouble s = generating_functional(m, TestFunction::spike(lat, 6));
  EXPECT_NEAR(s.real(), std::exp(-0.5 * 0.01 * 0.5), 1e-15);
  EXPECT_EQ(s.imag(), 0.0);

  std::mt19937_64 gen(3);
  std::normal_distribution<double> nd;
  for (int trial = 0; trial < 25; ++trial) {
    std::vector<double> c(lat.size());
    for (auto& v : c) v = 3.0 * nd(gen);
    const auto f = TestFunction::real(lat, c);
    const cdouble sf = generating_functional(m, f);
    EXPECT_GT(sf.real(), 0.0);
    EXPECT_LE(sf.real(), 1.0);
    EXPECT_EQ(sf.imag(), 0.0);
    EXPECT_DOUBLE_EQ(sf.real(), generating_functional(m, -f).real());
  }
  EXPECT_THROW(generating_functional(m, TestFunction::spike(TimeLattice(8, 0.1), 1)), DimensionError);
}

TEST(GeneratingFunctional, ComplexBilinearFormHasNoConjugation) {
  const TimeLattice lat(4, 0.5);
  const auto m = ou_covariance(1.0, lat);
  const auto f = TestFunction::complex(lat, {0, 0, {0.0, 1.0}, 0});
  // B(f, f) = a^2 (i)^2 C_22 = -0.25 * 0.5, so S(f) = exp(+0.0625) > 1.
  EXPECT_NEAR(generating_functional(m, f).real(), std::exp(0.0625), 1e-15);
}

TEST(GeneratingFunctional, MonteCarloSpikeWithinThreeStandardErrors) {
  const TimeLattice lat(10, 0.1);
  const auto m = ou_covariance(1.0, lat);
  const auto f = TestFunction::spike(lat, 6);
  const auto paths = sample_paths(m, 100000, 77);
  double sum = 0.0, sum_sq = 0.0;
  for (const auto& p : paths) {
    const double c = std::cos(pairing(p, f).real());
    sum += c;
    sum_sq += c * c;
  }
  const double n = static_cast<double>(paths.size());
  const double mean = sum / n;
  const double se = std::sqrt((sum_sq / n - mean * mean) / n);
  EXPECT_LE(std::abs(mean - generating_functional(m, f).real()), 3.0 * se);
}

TEST(SamplePaths, CountZeroIsAnError) {
  EXPECT_THROW(sample_paths(ou_covariance(1.0, TimeLattice(4, 1.0)), 0, 1), PreconditionError);
}

TEST(SamplePaths, DeterministicAndThreadIndependent) {
  const auto m = ou_covariance(0.7, TimeLattice(16, 0.2));
  const auto a = sample_paths(m, 5000, 9, 1);
  const auto b = sample_paths(m, 5000, 9, 1);
  const auto c = sample_paths(m, 5000, 9, 4);
  for (std::size_t k = 0; k < a.size(); ++k) {
    ASSERT_EQ(a[k].values, b[k].values);
    ASSERT_EQ(a[k].values, c[k].values);
  }
  const auto d = sample_paths(m, 5, 10, 1);
  EXPECT_NE(a[0].values, d[0].values);
}

TEST(SamplePaths, EmpiricalCovarianceConverges) {
  const auto m = ou_covariance(1.0, TimeLattice(8, 0.3));
  const auto paths = sample_paths(m, 100000, 123);
  const auto emp = empirical_covariance(paths);
  for (Eigen::Index j = 0; j < 8; ++j) {
    EXPECT_LE(std::abs(emp.mean(j, j) - 0.5), 3.0 * emp.standard_error(j, j)) << j;
    for (Eigen::Index k = 0; k < 8; ++k)
      EXPECT_LE(std::abs(emp.mean(j, k) - m.covariance()(j, k)), 4.0 * emp.standard_error(j, k));
  }
}

TEST(SamplePaths, IndefiniteCovarianceReportsMinEigenvalue) {
  const TimeLattice lat(4, 1.0);
  Eigen::MatrixXd c = Eigen::MatrixXd::Identity(4, 4);
  c(0, 1) = c(1, 0) = 2.0;
  const GaussianEuclideanMeasure m(lat, c, 1.0, "hand");
  EXPECT_FALSE(m.is_psd());
  try {
    sample_paths(m, 10, 1);
    FAIL() << "expected FactorizationError";
  } catch (const FactorizationError& e) {
    EXPECT_NEAR(e.min_eigenvalue(), -1.0, 1e-12);
  }
}

TEST(Symmetry, OuIsStationaryAndReflectionSymmetric) {
  const auto m = ou_covariance(1.5, TimeLattice(20, 0.1));
  EXPECT_TRUE(check_stationarity(m).holds);
  EXPECT_EQ(check_stationarity(m).max_deviation, 0.0);
  EXPECT_TRUE(check_time_reflection_symmetry(m).holds);
}

TEST(Symmetry, PerturbationsAreDetected) {
  const TimeLattice lat(6, 1.0);
  Eigen::MatrixXd c = ou_covariance(1.0, lat).covariance();
  c(0, 2) += 0.01;
  c(2, 0) += 0.01;
  const GaussianEuclideanMeasure m(lat, c, 1.0, "perturbed");
  EXPECT_TRUE(m.is_psd());
  EXPECT_FALSE(check_stationarity(m).holds);
  EXPECT_FALSE(check_time_reflection_symmetry(m).holds);
  EXPECT_NEAR(check_time_reflection_symmetry(m).max_deviation, 0.01, 1e-15);
}

TEST(Measure, EveryBuiltMeasureIsPsd) {
  for (double mass : {0.3, 1.0, 4.0})
    for (double a : {0.02, 0.1, 0.5}) {
      const TimeLattice lat(40, a);
      for (const auto& m : {ou_covariance(mass, lat), lattice_free_field_covariance(mass, lat),
                            damped_cosine_covariance(mass, 5.0, lat)})
        EXPECT_GE(m.min_eigenvalue(), -1e-10 * m.spectral_norm()) << m.kernel();
    }
}

TEST(Measure, RejectsAsymmetricCovariance) {
  Eigen::MatrixXd c = Eigen::MatrixXd::Identity(4, 4);
  c(0, 1) = 0.1;
  EXPECT_THROW(GaussianEuclideanMeasure(TimeLattice(4, 1.0), c, 1.0, "x"), DomainError);
  EXPECT_THROW(GaussianEuclideanMeasure(TimeLattice(4, 1.0), Eigen::MatrixXd::Identity(3, 3), 1.0, "x"),
               DimensionError);
}

TEST(MeasureText, RoundTripIsExact) {
  const auto m = lattice_free_field_covariance(1.3, TimeLattice(12, 0.07));
  const auto back = import_measure(export_measure(m));
  EXPECT_EQ(back.lattice(), m.lattice());
  EXPECT_EQ(back.kernel(), "free-field");
  EXPECT_EQ(back.mass(), 1.3);
  EXPECT_TRUE(back.covariance() == m.covariance());

  const auto d = damped_cosine_covariance(0.5, 2.5, TimeLattice(8, 0.1));
  const auto rebuilt = import_measure(export_measure(d, false));
  EXPECT_EQ(rebuilt.kernel_param(), 2.5);
  EXPECT_TRUE(rebuilt.covariance() == d.covariance());
  EXPECT_THROW(import_measure("kind: nothing"), PreconditionError);
}

TEST(PathStream, StreamsAreIndependentAndReproducible) {
  PathStream a(5, 0), b(5, 0), c(5, 1);
  for (int i = 0; i < 100; ++i) {
    const auto x = a.next_u64();
    EXPECT_EQ(x, b.next_u64());
    EXPECT_NE(x, c.next_u64());
  }
  PathStream u(1, 2);
  double sum = 0.0, sum_sq = 0.0;
  for (int i = 0; i < 200000; ++i) {
    const double z = u.next_normal();
    sum += z;
    sum_sq += z * z;
  }
  EXPECT_NEAR(sum / 200000, 0.0, 0.01);
  EXPECT_NEAR(sum_sq / 200000, 1.0, 0.01);
}
