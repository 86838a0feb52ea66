#include "oslab/reconstruction.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include <fmt/format.h>
#include <yaml-cpp/yaml.h>

#include "oslab/errors.hpp"
#include "oslab/linalg.hpp"

namespace oslab {

namespace {

using cd = std::complex<double>;

Eigen::MatrixXcd functional_gram(const Eigen::MatrixXd& cov, const std::vector<GaussianFunctional>& left,
                                 const std::vector<GaussianFunctional>& right) {
  Eigen::MatrixXcd g(static_cast<Eigen::Index>(left.size()), static_cast<Eigen::Index>(right.size()));
  for (std::size_t k = 0; k < left.size(); ++k)
    for (std::size_t l = 0; l < right.size(); ++l)
      g(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(l)) = gaussian_expectation(cov, left[k] * right[l]);
  return g;
}

std::vector<GaussianFunctional> reflected_conjugates(const std::vector<ObservableFunctional>& basis) {
  std::vector<GaussianFunctional> out;
  out.reserve(basis.size());
  for (const auto& b : basis) out.push_back(b.reflected_conjugate());
  return out;
}

std::vector<GaussianFunctional> shifted_functionals(const std::vector<ObservableFunctional>& basis, std::size_t step) {
  std::vector<GaussianFunctional> out;
  out.reserve(basis.size());
  for (const auto& b : basis) out.push_back(b.functional().shifted(static_cast<std::ptrdiff_t>(step)));
  return out;
}

void require_same_lattice(const ReconstructedSpace& space, const GaussianEuclideanMeasure& measure) {
  if (!(space.lattice == measure.lattice())) throw DimensionError("space and measure live on different lattices");
}

Eigen::MatrixXcd propagator(const HamiltonianSpectrum& h, double tau) {
  const Eigen::VectorXcd d = (-tau * h.raw.array()).exp().cast<cd>();
  return h.eigenvectors * d.asDiagonal() * h.eigenvectors.adjoint();
}

}  // namespace

// ---------------------------------------------------------------------------
// ObservableFunctional

ObservableFunctional ObservableFunctional::monomial(std::vector<std::pair<std::size_t, int>> powers,
                                                    const TimeLattice& lattice) {
  ObservableFunctional f(ObservableKind::field_monomial, lattice);
  for (const auto& [idx, p] : powers) {
    if (idx >= lattice.size()) throw DimensionError("monomial factor outside the lattice");
    if (!lattice.is_positive(idx)) throw PreconditionError(fmt::format("monomial factor at t = {} <= 0", lattice.time(idx)));
  }
  f.powers_ = GaussianFunctional::monomial(std::move(powers)).powers;
  return f;
}

ObservableFunctional ObservableFunctional::exponential(const TestFunction& test) {
  if (!test.in_dplus()) throw PreconditionError("exponential observable needs a test function in D+");
  ObservableFunctional f(ObservableKind::exponential, test.lattice());
  f.f_ = test;
  return f;
}

int ObservableFunctional::degree() const {
  int d = 0;
  for (const auto& p : powers_) d += p.second;
  return d;
}

std::size_t ObservableFunctional::max_index() const {
  std::size_t m = lattice_.first_positive();
  for (const auto& p : powers_) m = std::max(m, p.first);
  if (f_) {
    for (std::size_t j = 0; j < f_->size(); ++j)
      if ((*f_)[j] != cd(0.0)) m = std::max(m, j);
  }
  return m;
}

GaussianFunctional ObservableFunctional::functional() const {
  GaussianFunctional g = GaussianFunctional::monomial(powers_);
  if (f_) {
    g.phase.resize(f_->size());
    for (std::size_t j = 0; j < f_->size(); ++j) g.phase[j] = lattice_.spacing() * (*f_)[j];
  }
  return g;
}

GaussianFunctional ObservableFunctional::reflected_conjugate() const {
  std::vector<std::pair<std::size_t, int>> reflected;
  for (const auto& [idx, p] : powers_) reflected.emplace_back(lattice_.reflect(idx), p);
  GaussianFunctional g = GaussianFunctional::monomial(std::move(reflected));
  if (f_) {
    g.phase.resize(f_->size());
    for (std::size_t j = 0; j < f_->size(); ++j)
      g.phase[lattice_.reflect(j)] = -lattice_.spacing() * std::conj((*f_)[j]);
  }
  return g;
}

std::string ObservableFunctional::describe() const {
  if (kind_ == ObservableKind::exponential) {
    std::string s = "exp(i q(f)) f=[";
    for (std::size_t j = 0; j < f_->size(); ++j) {
      if ((*f_)[j] == cd(0.0)) continue;
      s += fmt::format(" {}:{:.17g}", j, (*f_)[j].real());
    }
    return s + " ]";
  }
  if (powers_.empty()) return "1";
  std::string s;
  for (const auto& [idx, p] : powers_) {
    if (!s.empty()) s += " ";
    s += p == 1 ? fmt::format("q[{}]", idx) : fmt::format("q[{}]^{}", idx, p);
  }
  return s;
}

std::vector<ObservableFunctional> monomial_basis(int max_degree, const std::vector<std::size_t>& time_indices,
                                                 const TimeLattice& lattice) {
  if (max_degree < 0) throw PreconditionError("basis degree must be nonnegative");
  std::vector<std::size_t> times = time_indices;
  std::sort(times.begin(), times.end());
  times.erase(std::unique(times.begin(), times.end()), times.end());

  std::vector<ObservableFunctional> out;
  // Exponent vectors of each total degree, in lexicographic order.
  std::vector<int> e(times.size(), 0);
  for (int d = 0; d <= max_degree; ++d) {
    std::vector<std::vector<int>> level;
    auto rec = [&](auto&& self, std::size_t pos, int left) -> void {
      if (pos + 1 == times.size() || times.empty()) {
        if (!times.empty()) e[pos] = left;
        if (times.empty() && left > 0) return;
        level.push_back(e);
        return;
      }
      for (int p = left; p >= 0; --p) {
        e[pos] = p;
        self(self, pos + 1, left - p);
      }
    };
    rec(rec, 0, d);
    for (const auto& exps : level) {
      std::vector<std::pair<std::size_t, int>> powers;
      for (std::size_t i = 0; i < times.size(); ++i)
        if (exps[i] > 0) powers.emplace_back(times[i], exps[i]);
      out.push_back(ObservableFunctional::monomial(std::move(powers), lattice));
    }
    if (times.empty()) break;
  }
  return out;
}

// ---------------------------------------------------------------------------
// K0 and K

Eigen::VectorXcd ReconstructedSpace::coordinates(const Eigen::MatrixXd& covariance, const GaussianFunctional& f) const {
  const auto left = reflected_conjugates(basis);
  Eigen::VectorXcd b(static_cast<Eigen::Index>(basis.size()));
  for (std::size_t k = 0; k < basis.size(); ++k) b(static_cast<Eigen::Index>(k)) = gaussian_expectation(covariance, left[k] * f);
  return metric_factor.adjoint() * b;
}

ReconstructedSpace build_k0(const GaussianEuclideanMeasure& measure, const BasisSpec& spec, double null_tolerance) {
  const TimeLattice& lattice = measure.lattice();
  for (auto idx : spec.time_indices) {
    if (idx >= lattice.size()) throw DimensionError(fmt::format("basis time index {} outside the lattice", idx));
    if (!lattice.is_positive(idx)) throw PreconditionError(fmt::format("basis time index {} is not a positive time", idx));
  }
  ReconstructedSpace space;
  space.lattice = lattice;
  space.spec = spec;
  space.null_tolerance = null_tolerance;
  space.basis = monomial_basis(spec.max_degree, spec.time_indices, lattice);
  for (const auto& f : spec.exponentials) {
    if (!(f.lattice() == lattice)) throw DimensionError("exponential test function on a different lattice");
    space.basis.push_back(ObservableFunctional::exponential(f));
  }
  if (space.basis.empty()) throw PreconditionError("reconstruction needs at least one basis element");

  std::vector<GaussianFunctional> right;
  for (const auto& b : space.basis) right.push_back(b.functional());
  Eigen::MatrixXcd gram = functional_gram(measure.covariance(), reflected_conjugates(space.basis), right);
  const double asym = linalg::relative_asymmetry(gram);
  if (asym > 1e-10) throw NumericalError(fmt::format("J-Gram is not Hermitian (relative asymmetry {:.3e})", asym));
  space.j_gram = 0.5 * (gram + gram.adjoint());

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(space.j_gram);
  space.j_gram_spectrum = eig.eigenvalues();
  const double lmax = eig.eigenvalues().maxCoeff();
  if (!(lmax > 0.0)) throw DegenerateSpace("J-Gram has no positive eigenvalue; K is trivial");
  const double lmin = eig.eigenvalues()(0);
  if (lmin < -null_tolerance * lmax) {
    throw ReflectionPositivityViolation(
        fmt::format("J-Gram is indefinite: min eigenvalue {:.6e} below -{:.1e} * {:.6e}", lmin, null_tolerance, lmax), lmin);
  }
  std::vector<Eigen::Index> kept;
  for (Eigen::Index i = 0; i < eig.eigenvalues().size(); ++i)
    if (eig.eigenvalues()(i) > null_tolerance * lmax) kept.push_back(i);
  space.physical_dim = kept.size();
  if (space.physical_dim == 0) throw DegenerateSpace("every J-Gram direction is null");

  space.metric_factor.resize(static_cast<Eigen::Index>(space.basis.size()), static_cast<Eigen::Index>(kept.size()));
  for (std::size_t a = 0; a < kept.size(); ++a) {
    const Eigen::Index i = kept[a];
    space.metric_factor.col(static_cast<Eigen::Index>(a)) = eig.eigenvectors().col(i) / std::sqrt(eig.eigenvalues()(i));
  }
  space.vacuum = space.coordinates(measure.covariance(), GaussianFunctional::constant());
  return space;
}

std::size_t max_representable_step(const ReconstructedSpace& space) {
  std::size_t last = space.lattice.first_positive();
  for (const auto& b : space.basis) last = std::max(last, b.max_index());
  return space.lattice.size() - 1 - last;
}

Eigen::MatrixXcd transfer_operator(const ReconstructedSpace& space, const GaussianEuclideanMeasure& measure,
                                   std::size_t step) {
  require_same_lattice(space, measure);
  const std::size_t max_step = max_representable_step(space);
  if (step > max_step) {
    throw RangeError(fmt::format("shift of {} steps leaves the lattice (max representable {})", step, max_step), max_step);
  }
  const Eigen::MatrixXcd g = functional_gram(measure.covariance(), reflected_conjugates(space.basis),
                                             shifted_functionals(space.basis, step));
  return space.metric_factor.adjoint() * g * space.metric_factor;
}

HamiltonianSpectrum extract_hamiltonian(const ReconstructedSpace& space, const Eigen::MatrixXcd& transfer,
                                        std::size_t step) {
  if (step == 0) throw PreconditionError("Hamiltonian needs a positive step");
  if (transfer.rows() != static_cast<Eigen::Index>(space.physical_dim) || transfer.cols() != transfer.rows())
    throw DimensionError("transfer matrix does not match the physical dimension");
  HamiltonianSpectrum h;
  h.step_time = static_cast<double>(step) * space.lattice.spacing();
  h.transfer_asymmetry = linalg::relative_asymmetry(transfer);
  const Eigen::MatrixXcd herm = 0.5 * (transfer + transfer.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(herm);
  const Eigen::VectorXd mu = eig.eigenvalues();
  if (mu(0) <= 0.0) {
    throw NumericalError(fmt::format("transfer operator has eigenvalue {:.6e} <= 0; log undefined", mu(0)));
  }
  // Ascending energy = descending transfer eigenvalue.
  const Eigen::Index d = mu.size();
  h.raw.resize(d);
  h.eigenvectors.resize(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    h.raw(i) = -std::log(mu(d - 1 - i)) / h.step_time;
    h.eigenvectors.col(i) = eig.eigenvectors().col(d - 1 - i);
  }
  h.shifted = h.raw.array() - h.raw(0);
  h.hamiltonian = h.eigenvectors * h.raw.cast<cd>().asDiagonal() * h.eigenvectors.adjoint();
  return h;
}

ReconstructedSpace reconstruct(const GaussianEuclideanMeasure& measure, const BasisSpec& spec, std::size_t step,
                               double null_tolerance) {
  ReconstructedSpace space = build_k0(measure, spec, null_tolerance);
  space.step = step;
  space.transfer = transfer_operator(space, measure, step);
  space.hamiltonian = extract_hamiltonian(space, *space.transfer, step);
  return space;
}

Eigen::MatrixXcd field_power_operator(const ReconstructedSpace& space, const GaussianEuclideanMeasure& measure, int power) {
  require_same_lattice(space, measure);
  if (!space.hamiltonian) throw PreconditionError("field operators need the reconstructed Hamiltonian");
  if (power < 0) throw PreconditionError("negative field power");
  if (max_representable_step(space) < 1) throw RangeError("basis leaves no room for the half-step sandwich", 0);
  const auto mid = GaussianFunctional::monomial({{space.lattice.first_positive(), power}});
  std::vector<GaussianFunctional> right;
  for (auto& s : shifted_functionals(space.basis, 1)) right.push_back(mid * s);
  const Eigen::MatrixXcd g = functional_gram(measure.covariance(), reflected_conjugates(space.basis), right);
  const Eigen::MatrixXcd sandwiched = space.metric_factor.adjoint() * g * space.metric_factor;
  const Eigen::MatrixXcd undo = propagator(*space.hamiltonian, -0.5 * space.lattice.spacing());
  return undo * sandwiched * undo;
}

NPointReport verify_npoint_identity(const ReconstructedSpace& space, const GaussianEuclideanMeasure& measure,
                                    const std::vector<NPointFactor>& observables, std::size_t mc_samples,
                                    std::uint64_t seed) {
  require_same_lattice(space, measure);
  if (!space.hamiltonian) throw PreconditionError("n-point identity needs the reconstructed Hamiltonian");
  if (observables.empty()) throw PreconditionError("n-point identity needs at least one observable");
  for (std::size_t k = 0; k < observables.size(); ++k) {
    if (observables[k].index >= space.lattice.size()) throw DimensionError("observable time outside the lattice");
    if (k > 0 && observables[k].index < observables[k - 1].index)
      throw PreconditionError("observable times must be ordered t_1 <= ... <= t_n");
  }
  NPointReport rep;
  for (const auto& o : observables) {
    if (!rep.description.empty()) rep.description += " ";
    rep.description += fmt::format("q^{}(t={:.6g})", o.power, space.lattice.time(o.index));
  }

  int tail_degree = 0;
  for (std::size_t k = 1; k < observables.size(); ++k) tail_degree += observables[k].power;
  rep.within_truncation = tail_degree <= space.spec.max_degree;

  std::map<int, Eigen::MatrixXcd> ops;
  auto op = [&](int p) -> const Eigen::MatrixXcd& {
    auto it = ops.find(p);
    if (it == ops.end()) it = ops.emplace(p, field_power_operator(space, measure, p)).first;
    return it->second;
  };
  Eigen::VectorXcd v = space.vacuum;
  for (std::size_t k = observables.size(); k-- > 0;) {
    v = op(observables[k].power) * v;
    if (k > 0) {
      const double tau = space.lattice.time(observables[k].index) - space.lattice.time(observables[k - 1].index);
      v = propagator(*space.hamiltonian, tau) * v;
    }
  }
  rep.lhs = space.vacuum.dot(v).real();  // dot() conjugates the left operand

  std::vector<std::pair<std::size_t, int>> powers;
  for (const auto& o : observables) powers.emplace_back(o.index, o.power);
  rep.rhs_exact = gaussian_expectation(measure.covariance(), GaussianFunctional::monomial(powers)).real();

  if (mc_samples > 0) {
    const auto paths = sample_paths(measure, mc_samples, seed);
    double sum = 0.0, sum_sq = 0.0;
    for (const auto& p : paths) {
      double x = 1.0;
      for (const auto& o : observables) x *= std::pow(p.values[o.index], o.power);
      sum += x;
      sum_sq += x * x;
    }
    const double n = static_cast<double>(paths.size());
    const double mean = sum / n;
    rep.rhs_mc = mean;
    rep.mc_stderr = std::sqrt(std::max(0.0, sum_sq / n - mean * mean) / n);
  }
  return rep;
}

R1R2Report check_r1_r2(const ReconstructedSpace& space, const GaussianEuclideanMeasure& measure, std::size_t shift,
                       std::optional<std::size_t> flip_index) {
  require_same_lattice(space, measure);
  const TimeLattice& lat = space.lattice;
  std::vector<std::size_t> points;
  for (auto i : space.spec.time_indices) {
    points.push_back(i);
    points.push_back(lat.reflect(i));
  }
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  if (points.empty()) throw PreconditionError("R1/R2 check needs basis times");
  if (points.front() < shift || points.back() + shift >= lat.size()) {
    const std::size_t max_shift = std::min(points.front(), lat.size() - 1 - points.back());
    throw RangeError(fmt::format("shift {} not representable in both directions (max {})", shift, max_shift), max_shift);
  }

  // Monomials over the mirror-symmetric point set; J permutes them.
  const int degree = std::min(space.spec.max_degree, 2);
  std::vector<std::vector<std::pair<std::size_t, int>>> mono;
  {
    std::vector<int> e(points.size(), 0);
    for (int d = 0; d <= degree; ++d) {
      auto rec = [&](auto&& self, std::size_t pos, int left) -> void {
        if (pos + 1 == points.size()) {
          e[pos] = left;
          std::vector<std::pair<std::size_t, int>> p;
          for (std::size_t i = 0; i < points.size(); ++i)
            if (e[i] > 0) p.emplace_back(points[i], e[i]);
          mono.push_back(std::move(p));
          return;
        }
        for (int q = left; q >= 0; --q) {
          e[pos] = q;
          self(self, pos + 1, left - q);
        }
      };
      rec(rec, 0, d);
    }
  }
  const std::size_t m = mono.size();
  std::map<std::vector<std::pair<std::size_t, int>>, std::size_t> lookup;
  for (std::size_t k = 0; k < m; ++k) lookup[mono[k]] = k;
  std::vector<std::size_t> perm(m);
  for (std::size_t k = 0; k < m; ++k) {
    std::vector<std::pair<std::size_t, int>> r;
    for (const auto& [i, p] : mono[k]) r.emplace_back(lat.reflect(i), p);
    std::sort(r.begin(), r.end());
    perm[k] = lookup.at(r);
  }

  R1R2Report rep;
  rep.shift = shift;
  rep.basis_dim = m;
  Eigen::MatrixXd pi = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
  for (std::size_t l = 0; l < m; ++l) pi(static_cast<Eigen::Index>(perm[l]), static_cast<Eigen::Index>(l)) = 1.0;
  if (flip_index) {
    if (*flip_index >= m) throw PreconditionError("flip index outside the R1/R2 basis");
    pi.col(static_cast<Eigen::Index>(*flip_index)) *= -1.0;
  }
  rep.j_squared_identity = (pi * pi == Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m)));

  const Eigen::MatrixXd& cov = measure.covariance();
  std::vector<GaussianFunctional> f, fwd, bwd;
  for (const auto& p : mono) {
    f.push_back(GaussianFunctional::monomial(p));
    fwd.push_back(f.back().shifted(static_cast<std::ptrdiff_t>(shift)));
    bwd.push_back(f.back().shifted(-static_cast<std::ptrdiff_t>(shift)));
  }
  const Eigen::MatrixXd gram = functional_gram(cov, f, f).real();
  const Eigen::MatrixXd e_fwd = functional_gram(cov, f, fwd).real();
  const Eigen::MatrixXd e_bwd = functional_gram(cov, f, bwd).real();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(0.5 * (gram + gram.transpose()));
  const double lmax = eig.eigenvalues().maxCoeff();
  Eigen::VectorXd root(eig.eigenvalues().size()), inv_root(eig.eigenvalues().size());
  for (Eigen::Index i = 0; i < root.size(); ++i) {
    const double l = eig.eigenvalues()(i);
    const bool keep = l > 1e-13 * lmax;
    root(i) = keep ? std::sqrt(l) : 0.0;
    inv_root(i) = keep ? 1.0 / std::sqrt(l) : 0.0;
  }
  const Eigen::MatrixXd& v = eig.eigenvectors();
  const Eigen::MatrixXd m_half = v * root.asDiagonal() * v.transpose();
  const Eigen::MatrixXd m_inv_half = v * inv_root.asDiagonal() * v.transpose();

  // Orthonormal-coordinate matrices: U(t) = M^{-1/2} E_t M^{-1/2}, J = M^{1/2} Pi M^{-1/2}.
  const Eigen::MatrixXd u_fwd = m_inv_half * e_fwd * m_inv_half;
  const Eigen::MatrixXd u_bwd = m_inv_half * e_bwd * m_inv_half;
  const Eigen::MatrixXd j = m_half * pi * m_inv_half;
  const Eigen::MatrixXd proj = m_half * m_inv_half;
  rep.j_squared_residual = linalg::spectral_norm(Eigen::MatrixXd(j * j - proj));
  rep.r2_residual = linalg::spectral_norm(Eigen::MatrixXd(j * u_fwd - u_bwd * j));
  return rep;
}

double unitarity_defect(const HamiltonianSpectrum& h, const std::vector<double>& times) {
  double worst = 0.0;
  const auto d = h.hamiltonian.rows();
  for (double t : times) {
    const Eigen::MatrixXcd v = linalg::expm(Eigen::MatrixXcd(cd(0.0, t) * h.hamiltonian));
    worst = std::max(worst, linalg::spectral_norm(Eigen::MatrixXcd(v.adjoint() * v - Eigen::MatrixXcd::Identity(d, d))));
  }
  return worst;
}

// ---------------------------------------------------------------------------

namespace {

std::string row_text(const Eigen::MatrixXcd& m, Eigen::Index r) {
  std::string s;
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    if (c > 0) s += ", ";
    s += fmt::format("{:.17g} {:+.17g}i", m(r, c).real(), m(r, c).imag());
  }
  return s;
}

void emit_vector(YAML::Emitter& out, const Eigen::VectorXd& v) {
  out << YAML::Flow << YAML::BeginSeq;
  for (Eigen::Index i = 0; i < v.size(); ++i) out << fmt::format("{:.17g}", v(i));
  out << YAML::EndSeq;
}

}  // namespace

std::string space_to_text(const ReconstructedSpace& space) {
  YAML::Emitter out;
  out << YAML::BeginMap;
  out << YAML::Key << "kind" << YAML::Value << "reconstructed-space";
  out << YAML::Key << "lattice" << YAML::Value << YAML::Flow << YAML::BeginMap << YAML::Key << "n_points"
      << YAML::Value << space.lattice.size() << YAML::Key << "spacing" << YAML::Value
      << fmt::format("{:.17g}", space.lattice.spacing()) << YAML::EndMap;
  out << YAML::Key << "basis_spec" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "max_degree" << YAML::Value << space.spec.max_degree;
  out << YAML::Key << "time_indices" << YAML::Value << YAML::Flow << space.spec.time_indices;
  out << YAML::Key << "exponentials" << YAML::Value << space.spec.exponentials.size();
  out << YAML::EndMap;
  out << YAML::Key << "basis" << YAML::Value << YAML::BeginSeq;
  for (const auto& b : space.basis) out << b.describe();
  out << YAML::EndSeq;
  out << YAML::Key << "null_tolerance" << YAML::Value << fmt::format("{:.17g}", space.null_tolerance);
  out << YAML::Key << "physical_dim" << YAML::Value << space.physical_dim;
  out << YAML::Key << "j_gram" << YAML::Value << YAML::BeginSeq;
  for (Eigen::Index r = 0; r < space.j_gram.rows(); ++r) out << row_text(space.j_gram, r);
  out << YAML::EndSeq;
  out << YAML::Key << "j_gram_spectrum" << YAML::Value;
  emit_vector(out, space.j_gram_spectrum);
  if (space.hamiltonian) {
    out << YAML::Key << "step" << YAML::Value << space.step;
    out << YAML::Key << "step_time" << YAML::Value << fmt::format("{:.17g}", space.hamiltonian->step_time);
    out << YAML::Key << "transfer_asymmetry" << YAML::Value
        << fmt::format("{:.17g}", space.hamiltonian->transfer_asymmetry);
    out << YAML::Key << "spectrum_raw" << YAML::Value;
    emit_vector(out, space.hamiltonian->raw);
    out << YAML::Key << "spectrum_shifted" << YAML::Value;
    emit_vector(out, space.hamiltonian->shifted);
  }
  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

}  // namespace oslab
