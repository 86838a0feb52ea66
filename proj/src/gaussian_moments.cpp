#include "oslab/gaussian_moments.hpp"

#include <algorithm>
#include <map>

#include "oslab/errors.hpp"

namespace oslab {

namespace {

using cd = std::complex<double>;

void normalise(std::vector<std::pair<std::size_t, int>>& powers) {
  std::sort(powers.begin(), powers.end());
  std::vector<std::pair<std::size_t, int>> merged;
  for (const auto& [idx, p] : powers) {
    if (p < 0) throw PreconditionError("negative power in Gaussian functional");
    if (p == 0) continue;
    if (!merged.empty() && merged.back().first == idx) {
      merged.back().second += p;
    } else {
      merged.emplace_back(idx, p);
    }
  }
  powers = std::move(merged);
}

class ShiftedMoment {
 public:
  ShiftedMoment(const Eigen::MatrixXd& cov, std::vector<std::size_t> vars, std::vector<cd> mean)
      : cov_(cov), vars_(std::move(vars)), mean_(std::move(mean)) {}

  cd operator()(std::vector<int>& k) {
    std::size_t a = 0;
    while (a < k.size() && k[a] == 0) ++a;
    if (a == k.size()) return 1.0;
    if (auto it = memo_.find(k); it != memo_.end()) return it->second;
    const std::vector<int> key = k;

    --k[a];
    cd value = mean_[a] == cd(0.0) ? cd(0.0) : mean_[a] * (*this)(k);
    for (std::size_t b = 0; b < k.size(); ++b) {
      if (k[b] == 0) continue;
      const double c = cov_(static_cast<Eigen::Index>(vars_[a]), static_cast<Eigen::Index>(vars_[b]));
      if (c == 0.0) continue;
      const int mult = k[b];
      --k[b];
      value += c * static_cast<double>(mult) * (*this)(k);
      ++k[b];
    }
    ++k[a];
    memo_.emplace(key, value);
    return value;
  }

 private:
  const Eigen::MatrixXd& cov_;
  std::vector<std::size_t> vars_;
  std::vector<cd> mean_;
  std::map<std::vector<int>, cd> memo_;
};

}  // namespace

GaussianFunctional GaussianFunctional::constant() { return {}; }

GaussianFunctional GaussianFunctional::monomial(std::vector<std::pair<std::size_t, int>> powers) {
  GaussianFunctional f;
  f.powers = std::move(powers);
  normalise(f.powers);
  return f;
}

int GaussianFunctional::degree() const {
  int d = 0;
  for (const auto& p : powers) d += p.second;
  return d;
}

GaussianFunctional GaussianFunctional::shifted(std::ptrdiff_t steps) const {
  GaussianFunctional out;
  for (const auto& [idx, p] : powers) {
    const auto moved = static_cast<std::ptrdiff_t>(idx) + steps;
    if (moved < 0) throw PreconditionError("shift moves a factor before the first lattice point");
    out.powers.emplace_back(static_cast<std::size_t>(moved), p);
  }
  if (!phase.empty()) {
    out.phase.assign(phase.size(), 0.0);
    for (std::size_t j = 0; j < phase.size(); ++j) {
      if (phase[j] == cd(0.0)) continue;
      const auto moved = static_cast<std::ptrdiff_t>(j) + steps;
      if (moved < 0 || moved >= static_cast<std::ptrdiff_t>(phase.size())) {
        throw PreconditionError("shift moves the exponential support off the lattice");
      }
      out.phase[static_cast<std::size_t>(moved)] = phase[j];
    }
  }
  return out;
}

GaussianFunctional operator*(const GaussianFunctional& a, const GaussianFunctional& b) {
  GaussianFunctional out;
  out.powers = a.powers;
  out.powers.insert(out.powers.end(), b.powers.begin(), b.powers.end());
  normalise(out.powers);
  if (a.phase.empty()) {
    out.phase = b.phase;
  } else if (b.phase.empty()) {
    out.phase = a.phase;
  } else {
    if (a.phase.size() != b.phase.size()) throw DimensionError("phase vectors differ in length");
    out.phase.resize(a.phase.size());
    for (std::size_t j = 0; j < a.phase.size(); ++j) out.phase[j] = a.phase[j] + b.phase[j];
  }
  return out;
}

std::complex<double> gaussian_expectation(const Eigen::MatrixXd& covariance, const GaussianFunctional& f) {
  const auto n = static_cast<std::size_t>(covariance.rows());
  for (const auto& p : f.powers)
    if (p.first >= n) throw DimensionError("functional references a point outside the lattice");

  std::vector<std::size_t> vars;
  std::vector<int> k;
  for (const auto& [idx, p] : f.powers) {
    vars.push_back(idx);
    k.push_back(p);
  }
  std::vector<cd> mean(vars.size(), 0.0);
  cd prefactor = 1.0;

  if (!f.phase.empty()) {
    if (f.phase.size() != n) throw DimensionError("phase vector does not match the covariance");
    Eigen::VectorXd gr(static_cast<Eigen::Index>(n)), gi(static_cast<Eigen::Index>(n));
    for (std::size_t j = 0; j < n; ++j) {
      gr(static_cast<Eigen::Index>(j)) = f.phase[j].real();
      gi(static_cast<Eigen::Index>(j)) = f.phase[j].imag();
    }
    const Eigen::VectorXd cgr = covariance * gr, cgi = covariance * gi;
    const cd quad(gr.dot(cgr) - gi.dot(cgi), gr.dot(cgi) + gi.dot(cgr));
    prefactor = std::exp(-0.5 * quad);
    for (std::size_t a = 0; a < vars.size(); ++a) {
      const auto v = static_cast<Eigen::Index>(vars[a]);
      mean[a] = cd(0.0, 1.0) * cd(cgr(v), cgi(v));
    }
  } else if (f.degree() % 2 != 0) {
    return 0.0;
  }
  ShiftedMoment moment(covariance, std::move(vars), std::move(mean));
  return prefactor * moment(k);
}

double gaussian_moment(const Eigen::MatrixXd& covariance, const std::vector<std::size_t>& indices) {
  std::vector<std::pair<std::size_t, int>> powers;
  for (auto i : indices) powers.emplace_back(i, 1);
  return gaussian_expectation(covariance, GaussianFunctional::monomial(std::move(powers))).real();
}

}  // namespace oslab
