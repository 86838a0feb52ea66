#pragma once

// Wick/Isserlis by explicit enumeration of perfect matchings. Exponential in
// the number of factors; meant for <= 10 of them.

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

inline double isserlis_sum(const Eigen::MatrixXd& cov, std::vector<std::size_t> idx) {
  if (idx.empty()) return 1.0;
  if (idx.size() % 2) return 0.0;
  const std::size_t first = idx.front();
  double total = 0.0;
  for (std::size_t p = 1; p < idx.size(); ++p) {
    std::vector<std::size_t> rest;
    for (std::size_t r = 1; r < idx.size(); ++r)
      if (r != p) rest.push_back(idx[r]);
    total += cov(static_cast<Eigen::Index>(first), static_cast<Eigen::Index>(idx[p])) * isserlis_sum(cov, rest);
  }
  return total;
}

}  // namespace oracle
