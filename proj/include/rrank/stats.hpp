#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "rrank/core.hpp"
#include "rrank/error.hpp"

namespace rrank {

/// Pearson correlation of every pair of criterion columns. Columns with zero
/// variance have no defined coefficient and are rejected.
inline CorrelationMatrix pearson_matrix(const DecisionMatrix& dm) {
  const std::size_t m = dm.m();
  const std::size_t n = dm.n();
  std::vector<double> mean(n, 0.0);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) mean[j] += dm.at(i, j);
  for (std::size_t j = 0; j < n; ++j) mean[j] /= static_cast<double>(m);

  // centered cross products, upper triangle
  std::vector<double> cov(n * n, 0.0);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const double dj = dm.at(i, j) - mean[j];
      for (std::size_t k = j; k < n; ++k) cov[j * n + k] += dj * (dm.at(i, k) - mean[k]);
    }
  for (std::size_t j = 0; j < n; ++j)
    if (cov[j * n + j] <= 0.0)
      fail(errc::zero_variance, "criterion '" + dm.criteria[j] + "' has zero variance");

  std::vector<double> rho(n * n, 1.0);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = j + 1; k < n; ++k) {
      double r = cov[j * n + k] / std::sqrt(cov[j * n + j] * cov[k * n + k]);
      r = std::clamp(r, -1.0, 1.0);
      rho[j * n + k] = r;
      rho[k * n + j] = r;
    }
  return CorrelationMatrix{n, std::move(rho)};
}

/// Normalized count of discordant pairs between two strict rankings given as
/// position arrays: 0 for identical orders, 1 for full reversal.
inline double kendall_tau_from_positions(std::span<const int> p1, std::span<const int> p2) {
  const std::size_t m = p1.size();
  if (m != p2.size() || m < 2) fail(errc::dimension_mismatch, "rankings differ in size");
  std::size_t discordant = 0;
  for (std::size_t q = 0; q < m; ++q)
    for (std::size_t u = q + 1; u < m; ++u) {
      const bool qu1 = p1[q] < p1[u];
      const bool qu2 = p2[q] < p2[u];
      if (qu1 != qu2) ++discordant;
    }
  return 2.0 * static_cast<double>(discordant) / (static_cast<double>(m) * static_cast<double>(m - 1));
}

inline double kendall_tau_distance(const Ranking& r1, const Ranking& r2) {
  return kendall_tau_from_positions(r1.position, r2.position);
}

}  // namespace rrank
