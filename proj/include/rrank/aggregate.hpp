#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "rrank/core.hpp"
#include "rrank/error.hpp"

namespace rrank {

inline constexpr double kCapacityTol = 1e-9;

/// A 2-additive capacity expressed through its Shapley values phi (summing to
/// one) and the symmetric pairwise interaction matrix with zero diagonal.
/// Monotonicity requires phi_j >= half the absolute interaction mass touching
/// criterion j.
struct Capacity2Additive {
  std::vector<double> phi;
  std::vector<double> interaction;  // n×n, symmetric, zero diagonal

  std::size_t n() const { return phi.size(); }
  double I(std::size_t j, std::size_t k) const { return interaction[j * phi.size() + k]; }

  /// Absolute interaction mass touching criterion j.
  double abs_row_sum(std::size_t j) const {
    double s = 0.0;
    for (std::size_t k = 0; k < phi.size(); ++k)
      if (k != j) s += std::abs(interaction[j * phi.size() + k]);
    return s;
  }
};

inline Capacity2Additive validate_capacity(std::vector<double> phi, std::vector<double> interaction,
                                           double tol = kCapacityTol) {
  const std::size_t n = phi.size();
  if (n < 2) fail(errc::too_few_rows_or_cols, "capacity needs n >= 2");
  if (interaction.size() != n * n)
    fail(errc::dimension_mismatch, "interaction matrix is not n x n");
  double sum = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    if (!std::isfinite(phi[j]) || phi[j] < -tol)
      fail(errc::invalid_capacity, "Shapley value " + std::to_string(j) + " negative or non-finite");
    sum += phi[j];
  }
  if (std::abs(sum - 1.0) > tol)
    fail(errc::invalid_capacity, "Shapley values sum to " + std::to_string(sum) + ", expected 1");
  for (std::size_t j = 0; j < n; ++j) {
    if (std::abs(interaction[j * n + j]) > tol)
      fail(errc::invalid_capacity, "interaction diagonal must be zero");
    interaction[j * n + j] = 0.0;
    for (std::size_t k = j + 1; k < n; ++k) {
      const double a = interaction[j * n + k];
      const double b = interaction[k * n + j];
      if (!std::isfinite(a) || !std::isfinite(b) || std::abs(a - b) > tol)
        fail(errc::invalid_capacity, "interaction matrix is not symmetric");
      if (std::abs(a) > 1.0 + tol)
        fail(errc::invalid_capacity, "interaction index outside [-1, 1]");
    }
  }
  Capacity2Additive cap{std::move(phi), std::move(interaction)};
  for (std::size_t j = 0; j < n; ++j)
    if (cap.phi[j] - 0.5 * cap.abs_row_sum(j) < -tol)
      fail(errc::invalid_capacity,
           "monotonicity violated at criterion " + std::to_string(j) +
               ": phi_j < half the absolute interaction mass");
  return cap;
}

/// A capacity given extensionally: one value per subset of criteria, indexed
/// by bitmask. Exists as a cross-validation oracle for the 2-additive path;
/// enumeration caps n at 20.
class CapacitySetFunction {
 public:
  static CapacitySetFunction validated(std::size_t n, std::vector<double> mu,
                                       double tol = kCapacityTol) {
    if (n < 1 || n > 20) fail(errc::invalid_capacity, "set-function capacity supports 1 <= n <= 20");
    const std::size_t size = std::size_t{1} << n;
    if (mu.size() != size) fail(errc::dimension_mismatch, "capacity table must have 2^n entries");
    if (std::abs(mu[0]) > tol) fail(errc::invalid_capacity, "mu(empty set) must be 0");
    if (std::abs(mu[size - 1] - 1.0) > tol) fail(errc::invalid_capacity, "mu(N) must be 1");
    // monotone along single-element covers implies monotone on all chains
    for (std::size_t mask = 0; mask < size; ++mask)
      for (std::size_t j = 0; j < n; ++j) {
        if (mask & (std::size_t{1} << j)) continue;
        if (mu[mask | (std::size_t{1} << j)] < mu[mask] - tol)
          fail(errc::invalid_capacity, "capacity not monotone");
      }
    return CapacitySetFunction(n, std::move(mu));
  }

  std::size_t n() const { return n_; }
  double operator()(std::uint32_t mask) const { return mu_[mask]; }
  const std::vector<double>& table() const { return mu_; }

 private:
  CapacitySetFunction(std::size_t n, std::vector<double> mu) : n_(n), mu_(std::move(mu)) {}
  std::size_t n_;
  std::vector<double> mu_;
};

inline double weighted_sum_row(std::span<const double> row, std::span<const double> w) {
  double s = 0.0;
  for (std::size_t j = 0; j < row.size(); ++j) s += w[j] * row[j];
  return s;
}

inline ScoreVector weighted_sum_score(const DecisionMatrix& dm, const WeightVector& w) {
  if (w.n() != dm.n()) fail(errc::dimension_mismatch, "weight vector length != criteria count");
  ScoreVector out;
  out.s.reserve(dm.m());
  for (std::size_t i = 0; i < dm.m(); ++i) out.s.push_back(weighted_sum_row(dm.row(i), w.w));
  return out;
}

/// One row of the 2-additive Choquet integral: positive interactions reward
/// the weaker of the pair, negative ones are charged on the stronger, and the
/// linear part carries phi reduced by half the absolute interaction mass.
/// The linear part accumulates first, in criterion order, so that a zero
/// interaction matrix reproduces weighted_sum_row bit for bit.
inline double choquet_2additive_row(std::span<const double> row, std::span<const double> phi,
                                    std::span<const double> interaction,
                                    std::span<const double> abs_row_sum) {
  const std::size_t n = row.size();
  double s = 0.0;
  for (std::size_t j = 0; j < n; ++j) s += (phi[j] - 0.5 * abs_row_sum[j]) * row[j];
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = j + 1; k < n; ++k) {
      const double I = interaction[j * n + k];
      if (I > 0.0)
        s += std::min(row[j], row[k]) * I;
      else if (I < 0.0)
        s += std::max(row[j], row[k]) * (-I);
    }
  return s;
}

inline ScoreVector choquet_2additive_score(const DecisionMatrix& dm, const Capacity2Additive& cap) {
  const std::size_t n = dm.n();
  if (cap.n() != n) fail(errc::dimension_mismatch, "capacity size != criteria count");
  std::vector<double> rowabs(n);
  for (std::size_t j = 0; j < n; ++j) rowabs[j] = cap.abs_row_sum(j);
  ScoreVector out;
  out.s.reserve(dm.m());
  for (std::size_t i = 0; i < dm.m(); ++i)
    out.s.push_back(choquet_2additive_row(dm.row(i), cap.phi, cap.interaction, rowabs));
  return out;
}

/// Discrete Choquet integral of one nonnegative row against an explicit
/// capacity: sort the row ascending and charge each increment to the capacity
/// of the criteria still at or above it. Ties in the sort are broken by
/// criterion index; equal consecutive increments contribute zero either way.
inline double choquet_general_score(std::span<const double> row, const CapacitySetFunction& mu) {
  const std::size_t n = mu.n();
  if (row.size() != n) fail(errc::dimension_mismatch, "row length != capacity size");
  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](int a, int b) {
    if (row[a] != row[b]) return row[a] < row[b];
    return a < b;
  });
  std::uint32_t mask = static_cast<std::uint32_t>((std::size_t{1} << n) - 1);
  double s = 0.0;
  double prev = 0.0;
  for (std::size_t r = 0; r < n; ++r) {
    const int j = idx[r];
    s += (row[j] - prev) * mu(mask);
    prev = row[j];
    mask &= ~(std::uint32_t{1} << j);
  }
  return s;
}

/// Expands a 2-additive capacity into its full set-function form via the
/// Moebius masses: singletons carry phi_j minus half the signed interaction
/// row, pairs carry the interaction index itself.
inline CapacitySetFunction capacity_from_2additive(const Capacity2Additive& cap,
                                                   double tol = 2e-9) {
  const std::size_t n = cap.n();
  if (n > 20) fail(errc::invalid_capacity, "set-function expansion supports n <= 20");
  std::vector<double> singleton(n);
  for (std::size_t j = 0; j < n; ++j) {
    double signed_row = 0.0;
    for (std::size_t k = 0; k < n; ++k)
      if (k != j) signed_row += cap.I(j, k);
    singleton[j] = cap.phi[j] - 0.5 * signed_row;
  }
  const std::size_t size = std::size_t{1} << n;
  std::vector<double> mu(size, 0.0);
  for (std::size_t mask = 1; mask < size; ++mask) {
    const std::size_t low = static_cast<std::size_t>(std::countr_zero(mask));
    const std::size_t rest = mask & (mask - 1);
    double v = mu[rest] + singleton[low];
    for (std::size_t k = 0; k < n; ++k)
      if (rest & (std::size_t{1} << k)) v += cap.I(low, k);
    mu[mask] = v;
  }
  return CapacitySetFunction::validated(n, std::move(mu), tol);
}

namespace detail {

// 1 / (n * C(n-1, a)); exact in double for n <= 20
inline double shapley_coeff(std::size_t n, std::size_t a) {
  double binom = 1.0;
  for (std::size_t i = 0; i < a; ++i)
    binom = binom * static_cast<double>(n - 1 - i) / static_cast<double>(i + 1);
  return 1.0 / (static_cast<double>(n) * binom);
}

// 1 / ((n-1) * C(n-2, a))
inline double interaction_coeff(std::size_t n, std::size_t a) {
  double binom = 1.0;
  for (std::size_t i = 0; i < a; ++i)
    binom = binom * static_cast<double>(n - 2 - i) / static_cast<double>(i + 1);
  return 1.0 / (static_cast<double>(n - 1) * binom);
}

}  // namespace detail

/// Shapley value of every criterion under an explicit capacity: the average
/// marginal contribution of j over all subsets not containing it.
inline std::vector<double> shapley_from_capacity(const CapacitySetFunction& mu) {
  const std::size_t n = mu.n();
  const std::size_t size = std::size_t{1} << n;
  std::vector<double> coeff(n);
  for (std::size_t a = 0; a < n; ++a) coeff[a] = detail::shapley_coeff(n, a);
  std::vector<double> phi(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t bit = std::size_t{1} << j;
    for (std::size_t mask = 0; mask < size; ++mask) {
      if (mask & bit) continue;
      const std::size_t a = static_cast<std::size_t>(std::popcount(mask));
      phi[j] += coeff[a] * (mu(static_cast<std::uint32_t>(mask | bit)) -
                            mu(static_cast<std::uint32_t>(mask)));
    }
  }
  return phi;
}

/// Shapley interaction index of every pair under an explicit capacity,
/// returned as a symmetric matrix with zero diagonal.
inline std::vector<double> interaction_from_capacity(const CapacitySetFunction& mu) {
  const std::size_t n = mu.n();
  if (n < 2) fail(errc::too_few_rows_or_cols, "interaction indices need n >= 2");
  const std::size_t size = std::size_t{1} << n;
  std::vector<double> coeff(n - 1);
  for (std::size_t a = 0; a + 2 <= n; ++a) coeff[a] = detail::interaction_coeff(n, a);
  std::vector<double> I(n * n, 0.0);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = j + 1; k < n; ++k) {
      const std::size_t bj = std::size_t{1} << j;
      const std::size_t bk = std::size_t{1} << k;
      double v = 0.0;
      for (std::size_t mask = 0; mask < size; ++mask) {
        if (mask & (bj | bk)) continue;
        const std::size_t a = static_cast<std::size_t>(std::popcount(mask));
        v += coeff[a] *
             (mu(static_cast<std::uint32_t>(mask | bj | bk)) -
              mu(static_cast<std::uint32_t>(mask | bj)) -
              mu(static_cast<std::uint32_t>(mask | bk)) + mu(static_cast<std::uint32_t>(mask)));
      }
      I[j * n + k] = v;
      I[k * n + j] = v;
    }
  return I;
}

}  // namespace rrank
