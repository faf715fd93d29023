#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "rrank/aggregate.hpp"
#include "rrank/core.hpp"
#include "rrank/error.hpp"

namespace rrank {

/// Correlations with magnitude below this yield an exactly zero interaction
/// index in both fitting methods.
inline constexpr double kNegligibleRho = 1e-12;

struct FitReport {
  Capacity2Additive capacity;
  /// u2 only: the single ratio t with I = -t * rho across all pairs.
  std::optional<double> ratio_t;
  /// u1 only: final value of the least-squares objective over unordered pairs.
  std::optional<double> objective;
  /// Criteria whose monotonicity constraint is tight at the solution.
  std::vector<int> active_constraints;
};

namespace detail {

inline std::vector<int> tight_constraints(const Capacity2Additive& cap, double tol) {
  std::vector<int> out;
  for (std::size_t j = 0; j < cap.n(); ++j)
    if (cap.phi[j] - 0.5 * cap.abs_row_sum(j) <= tol) out.push_back(static_cast<int>(j));
  return out;
}

}  // namespace detail

/// Consistent-ratio fit: every interaction index is the same multiple of the
/// negated correlation, I = -t * rho, with t as large as the monotonicity
/// constraints allow. The equality structure leaves t as the single free
/// variable, so the optimum is closed-form: the smallest of 2*phi_j over the
/// absolute correlation mass of each criterion row, capped at 1.
inline FitReport fit_u2(const CorrelationMatrix& rho, const WeightVector& phi,
                        double activity_tol = 1e-6) {
  const std::size_t n = rho.n;
  if (phi.n() != n) fail(errc::dimension_mismatch, "weight vector length != correlation size");

  double t = 1.0;
  for (std::size_t j = 0; j < n; ++j) {
    double denom = 0.0;
    for (std::size_t k = 0; k < n; ++k)
      if (k != j && std::abs(rho.at(j, k)) >= kNegligibleRho) denom += std::abs(rho.at(j, k));
    if (denom > 0.0) t = std::min(t, 2.0 * phi.w[j] / denom);
  }
  t = std::clamp(t, 0.0, 1.0);

  std::vector<double> interaction(n * n, 0.0);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = 0; k < n; ++k) {
      if (k == j || std::abs(rho.at(j, k)) < kNegligibleRho) continue;
      interaction[j * n + k] = -t * rho.at(j, k);
    }

  FitReport report{validate_capacity(phi.w, std::move(interaction)), t, std::nullopt, {}};
  report.active_constraints = detail::tight_constraints(report.capacity, activity_tol);
  return report;
}

namespace detail {

// Exact solve of the one-dimensional dual subproblem: the smallest lam >= 0
// with sum_d max(0, c_d - lam/2) <= target, where the c_d are the current
// residual levels of the pair variables touching one criterion. Piecewise
// linear and decreasing in lam, so a water-filling scan over the sorted
// levels finds it.
inline double solve_row_dual(std::vector<double>& levels, double target) {
  std::erase_if(levels, [](double c) { return c <= 0.0; });
  double h0 = 0.0;
  for (double c : levels) h0 += c;
  if (h0 <= target) return 0.0;
  std::sort(levels.begin(), levels.end(), std::greater<>());
  double prefix = 0.0;
  double lam = 0.0;
  for (std::size_t k = 0; k < levels.size(); ++k) {
    prefix += levels[k];
    const double cand = 2.0 * (prefix - target) / static_cast<double>(k + 1);
    if (levels[k] >= 0.5 * cand) lam = cand;  // last k with its level still active wins
  }
  return std::max(lam, 0.0);
}

}  // namespace detail

/// Least-squares fit of the interaction indices to the negated correlations,
/// subject to the 2-additive monotonicity constraints. With the sign of each
/// I fixed to oppose its correlation the problem becomes, in the magnitudes
/// x = |I|, the strictly convex QP
///
///     min sum_d (x_d - |rho_d|)^2   s.t.  x >= 0,  sum_{d owning j} x_d <= 2*phi_j.
///
/// Solved by exact cyclic ascent on the row multipliers of the dual (each
/// coordinate step is a closed-form water-filling solve); a fixed point of
/// all coordinate solves satisfies the full KKT system, which is checked and
/// certified against `tol` before returning.
inline FitReport fit_u1(const CorrelationMatrix& rho, const WeightVector& phi, double tol = 1e-8,
                        double activity_tol = 1e-6) {
  const std::size_t n = rho.n;
  if (phi.n() != n) fail(errc::dimension_mismatch, "weight vector length != correlation size");
  if (tol <= 0.0) fail(errc::invalid_config, "fit_u1 tolerance must be positive");

  struct Pair {
    std::size_t j, k;
    double r;  // |rho|
    double x = 0.0;
  };
  std::vector<Pair> pairs;
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = j + 1; k < n; ++k)
      if (std::abs(rho.at(j, k)) >= kNegligibleRho) pairs.push_back({j, k, std::abs(rho.at(j, k))});

  std::vector<std::vector<std::size_t>> owned(n);  // pair indices touching each criterion
  for (std::size_t d = 0; d < pairs.size(); ++d) {
    owned[pairs[d].j].push_back(d);
    owned[pairs[d].k].push_back(d);
  }

  std::vector<double> lam(n, 0.0);
  std::vector<double> levels;
  const std::size_t max_sweeps = 200000;
  std::size_t sweeps = 0;
  for (; sweeps < max_sweeps; ++sweeps) {
    double delta = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (owned[j].empty()) {
        lam[j] = 0.0;
        continue;
      }
      levels.clear();
      for (std::size_t d : owned[j]) {
        const Pair& p = pairs[d];
        const std::size_t other = (p.j == j) ? p.k : p.j;
        levels.push_back(p.r - 0.5 * lam[other]);
      }
      const double updated = detail::solve_row_dual(levels, 2.0 * phi.w[j]);
      delta = std::max(delta, std::abs(updated - lam[j]));
      lam[j] = updated;
    }
    if (delta <= 1e-15) break;
  }

  for (Pair& p : pairs) p.x = std::max(0.0, p.r - 0.5 * (lam[p.j] + lam[p.k]));

  // pull any residual constraint overshoot back inside the feasible set
  std::vector<double> scale(n, 1.0);
  for (std::size_t j = 0; j < n; ++j) {
    double used = 0.0;
    for (std::size_t d : owned[j]) used += pairs[d].x;
    if (used > 2.0 * phi.w[j] && used > 0.0) scale[j] = 2.0 * phi.w[j] / used;
  }
  for (Pair& p : pairs) p.x *= std::min(scale[p.j], scale[p.k]);

  // KKT certificate: primal feasibility, complementary slackness, and
  // stationarity of the zero-clamped variables
  double kkt = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    double used = 0.0;
    for (std::size_t d : owned[j]) used += pairs[d].x;
    kkt = std::max(kkt, used - 2.0 * phi.w[j]);
    kkt = std::max(kkt, lam[j] * std::max(0.0, 2.0 * phi.w[j] - used));
  }
  for (const Pair& p : pairs) {
    const double grad = 2.0 * (p.x - p.r) + lam[p.j] + lam[p.k];
    kkt = std::max(kkt, p.x > 0.0 ? std::abs(grad) : std::max(0.0, -grad));
  }
  if (kkt > tol)
    fail(errc::non_convergence, "fit_u1 stopped after " + std::to_string(sweeps) +
                                    " sweeps with KKT residual " + std::to_string(kkt));

  std::vector<double> interaction(n * n, 0.0);
  for (const Pair& p : pairs) {
    const double sign = rho.at(p.j, p.k) > 0.0 ? -1.0 : 1.0;
    interaction[p.j * n + p.k] = sign * p.x;
    interaction[p.k * n + p.j] = sign * p.x;
  }
  double objective = 0.0;
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = j + 1; k < n; ++k) {
      const double e = interaction[j * n + k] + rho.at(j, k);
      objective += e * e;
    }

  FitReport report{validate_capacity(phi.w, std::move(interaction)), std::nullopt, objective, {}};
  report.active_constraints = detail::tight_constraints(report.capacity, activity_tol);
  return report;
}

}  // namespace rrank
