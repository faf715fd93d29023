#pragma once

// Shared generators and helpers for the test suites. Oracles that verify a
// specific module live next to that module's tests, not here.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "rrank/aggregate.hpp"
#include "rrank/core.hpp"
#include "rrank/rng.hpp"
#include "rrank/smaa.hpp"

namespace testsupport {

inline rrank::DecisionMatrix make_dm(std::size_t m, std::size_t n, std::vector<double> values) {
  std::vector<std::string> alts(m), crits(n);
  for (std::size_t i = 0; i < m; ++i) alts[i] = "a" + std::to_string(i + 1);
  for (std::size_t j = 0; j < n; ++j) crits[j] = "g" + std::to_string(j + 1);
  return rrank::validate_matrix(std::move(alts), std::move(crits), std::move(values));
}

inline rrank::DecisionMatrix random_dm(std::size_t m, std::size_t n, rrank::SplitMix64& rng) {
  std::vector<double> values(m * n);
  for (double& v : values) v = rng.next_double();
  return make_dm(m, n, std::move(values));
}

/// Random 2-additive capacity with a feasibility margin: raw interactions are
/// shrunk until every monotonicity constraint keeps at least (1 - margin) of
/// its slack.
inline rrank::Capacity2Additive random_capacity(std::size_t n, rrank::SplitMix64& rng,
                                                double margin = 0.9) {
  const rrank::WeightVector phi = rrank::sample_uniform_simplex(n, rng);
  std::vector<double> raw(n * n, 0.0);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = j + 1; k < n; ++k) {
      const double v = 2.0 * rng.next_double() - 1.0;
      raw[j * n + k] = v;
      raw[k * n + j] = v;
    }
  double beta = 1.0;
  for (std::size_t j = 0; j < n; ++j) {
    double rowabs = 0.0;
    for (std::size_t k = 0; k < n; ++k)
      if (k != j) rowabs += std::abs(raw[j * n + k]);
    if (rowabs > 0.0) beta = std::min(beta, margin * 2.0 * phi.w[j] / rowabs);
  }
  for (double& v : raw) v *= beta;
  return rrank::validate_capacity(phi.w, std::move(raw));
}

/// Random monotone normalized set function built from nonnegative Moebius
/// masses (covers capacities well beyond the 2-additive family).
inline rrank::CapacitySetFunction random_set_capacity(std::size_t n, rrank::SplitMix64& rng) {
  const std::size_t size = std::size_t{1} << n;
  std::vector<double> mass(size, 0.0);
  for (std::size_t mask = 1; mask < size; ++mask) mass[mask] = rng.next_double();
  // subset-sum (zeta) transform
  std::vector<double> mu = mass;
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t mask = 0; mask < size; ++mask)
      if (mask & (std::size_t{1} << j)) mu[mask] += mu[mask ^ (std::size_t{1} << j)];
  const double total = mu[size - 1];
  for (double& v : mu) v /= total;
  return rrank::CapacitySetFunction::validated(n, std::move(mu));
}

inline std::vector<int> random_permutation(std::size_t n, rrank::SplitMix64& rng) {
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 0);
  for (std::size_t i = n; i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng.next() % i);
    std::swap(p[i - 1], p[j]);
  }
  return p;
}

inline rrank::PairwiseWinningMatrix random_pairwise(std::size_t m, rrank::SplitMix64& rng) {
  std::vector<double> c(m * m, 0.0);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t k = i + 1; k < m; ++k) {
      const double v = rng.next_double();
      c[i * m + k] = v;
      c[k * m + i] = 1.0 - v;
    }
  return rrank::validate_pairwise(m, std::move(c));
}

}  // namespace testsupport
