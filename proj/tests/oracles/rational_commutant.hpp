#pragma once

// Exact commutant dimension for matrices with integer entries: Gaussian
// elimination over the rationals on the stacked system A M - M A = 0.

#include <cmath>
#include <cstddef>
#include <vector>

#include <boost/rational.hpp>
#include <Eigen/Dense>

namespace oracle {

inline std::size_t exact_commutant_dimension(const std::vector<Eigen::MatrixXd>& ms) {
  using Q = boost::rational<long long>;
  const auto d = static_cast<std::size_t>(ms.front().rows());
  const std::size_t unknowns = d * d;
  std::vector<std::vector<Q>> rows;
  // Unknown A(r, c) lives at r * d + c.
  for (const auto& m : ms) {
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) {
        std::vector<Q> row(unknowns, Q(0));
        for (std::size_t k = 0; k < d; ++k) {
          row[i * d + k] += Q(static_cast<long long>(std::llround(m(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j)))));
          row[k * d + j] -= Q(static_cast<long long>(std::llround(m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)))));
        }
        rows.push_back(row);
      }
  }
  std::size_t rank = 0;
  for (std::size_t col = 0; col < unknowns && rank < rows.size(); ++col) {
    std::size_t pivot = rank;
    while (pivot < rows.size() && rows[pivot][col].numerator() == 0) ++pivot;
    if (pivot == rows.size()) continue;
    std::swap(rows[rank], rows[pivot]);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (r == rank || rows[r][col].numerator() == 0) continue;
      const Q f = rows[r][col] / rows[rank][col];
      for (std::size_t c = col; c < unknowns; ++c) rows[r][c] -= f * rows[rank][c];
    }
    ++rank;
  }
  return unknowns - rank;
}

}  // namespace oracle
