#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "rrank/error.hpp"

namespace rrank {

inline constexpr double kSimplexTol = 1e-9;

/// Performance table of m alternatives evaluated on n criteria, stored
/// row-major. Immutable once built; construct through validate_matrix().
struct DecisionMatrix {
  std::vector<std::string> alternatives;
  std::vector<std::string> criteria;
  std::vector<double> values;

  std::size_t m() const { return alternatives.size(); }
  std::size_t n() const { return criteria.size(); }
  double at(std::size_t i, std::size_t j) const { return values[i * criteria.size() + j]; }
  std::span<const double> row(std::size_t i) const {
    return {values.data() + i * criteria.size(), criteria.size()};
  }
};

namespace detail {

inline void require_unique(const std::vector<std::string>& ids, const char* kind) {
  std::unordered_set<std::string> seen;
  for (const auto& id : ids) {
    if (!seen.insert(id).second)
      fail(errc::duplicate_identifier, std::string(kind) + " identifier repeated: '" + id + "'");
  }
}

}  // namespace detail

/// Checks dimensions, finiteness and identifier uniqueness of a raw table.
inline DecisionMatrix validate_matrix(std::vector<std::string> alternatives,
                                      std::vector<std::string> criteria,
                                      std::vector<double> values) {
  const std::size_t m = alternatives.size();
  const std::size_t n = criteria.size();
  if (m < 2 || n < 2)
    fail(errc::too_few_rows_or_cols,
         "decision matrix needs at least 2 alternatives and 2 criteria, got " +
             std::to_string(m) + "x" + std::to_string(n));
  if (values.size() != m * n)
    fail(errc::dimension_mismatch, "expected " + std::to_string(m * n) + " cells, got " +
                                       std::to_string(values.size()));
  detail::require_unique(alternatives, "alternative");
  detail::require_unique(criteria, "criterion");
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (!std::isfinite(values[i * n + j]))
        fail(errc::non_finite, "non-finite value at row '" + alternatives[i] + "', column '" +
                                   criteria[j] + "'");
  return DecisionMatrix{std::move(alternatives), std::move(criteria), std::move(values)};
}

/// Nonnegative criterion weights summing to one.
struct WeightVector {
  std::vector<double> w;
  std::size_t n() const { return w.size(); }
};

inline WeightVector validate_weights(std::vector<double> w) {
  if (w.empty()) fail(errc::dimension_mismatch, "empty weight vector");
  double sum = 0.0;
  for (std::size_t j = 0; j < w.size(); ++j) {
    if (!std::isfinite(w[j])) fail(errc::non_finite, "non-finite weight at index " + std::to_string(j));
    if (w[j] < -kSimplexTol)
      fail(errc::invalid_config, "negative weight at index " + std::to_string(j));
    sum += w[j];
  }
  if (std::abs(sum - 1.0) > kSimplexTol)
    fail(errc::invalid_config, "weights sum to " + std::to_string(sum) + ", expected 1");
  return WeightVector{std::move(w)};
}

struct ScoreVector {
  std::vector<double> s;
  std::size_t m() const { return s.size(); }
};

/// Strict total order over alternatives. order[r] is the alternative index
/// holding rank r (0-based, best first); position[i] is the rank of
/// alternative i. The two arrays are mutually inverse permutations.
struct Ranking {
  std::vector<int> order;
  std::vector<int> position;
  std::size_t m() const { return order.size(); }
};

inline Ranking ranking_from_order(std::vector<int> order) {
  const std::size_t m = order.size();
  std::vector<int> position(m, -1);
  for (std::size_t r = 0; r < m; ++r) {
    int i = order[r];
    if (i < 0 || static_cast<std::size_t>(i) >= m || position[i] != -1)
      fail(errc::invalid_config, "order is not a permutation of the alternatives");
    position[i] = static_cast<int>(r);
  }
  return Ranking{std::move(order), std::move(position)};
}

/// Sorts by strictly decreasing score; equal scores fall back to ascending
/// alternative index so the result is always deterministic.
inline Ranking ranking_from_scores(const ScoreVector& scores) {
  const std::size_t m = scores.m();
  for (std::size_t i = 0; i < m; ++i)
    if (!std::isfinite(scores.s[i]))
      fail(errc::non_finite, "non-finite score at index " + std::to_string(i));
  std::vector<int> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (scores.s[a] != scores.s[b]) return scores.s[a] > scores.s[b];
    return a < b;
  });
  return ranking_from_order(std::move(order));
}

/// Symmetric n×n matrix of pairwise criterion correlations, unit diagonal.
struct CorrelationMatrix {
  std::size_t n = 0;
  std::vector<double> rho;
  double at(std::size_t j, std::size_t k) const { return rho[j * n + k]; }
};

inline CorrelationMatrix validate_correlation(std::size_t n, std::vector<double> rho,
                                              double tol = 1e-9) {
  if (n < 2) fail(errc::too_few_rows_or_cols, "correlation matrix needs n >= 2");
  if (rho.size() != n * n) fail(errc::dimension_mismatch, "correlation matrix is not n x n");
  for (std::size_t j = 0; j < n; ++j) {
    if (std::abs(rho[j * n + j] - 1.0) > tol)
      fail(errc::invalid_config, "correlation diagonal must be 1");
    for (std::size_t k = 0; k < n; ++k) {
      const double v = rho[j * n + k];
      if (!std::isfinite(v)) fail(errc::non_finite, "non-finite correlation entry");
      if (std::abs(v) > 1.0 + tol) fail(errc::invalid_config, "correlation entry outside [-1, 1]");
      if (std::abs(v - rho[k * n + j]) > tol)
        fail(errc::invalid_config, "correlation matrix is not symmetric");
    }
  }
  return CorrelationMatrix{n, std::move(rho)};
}

}  // namespace rrank
