#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <functional>
#include <mutex>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "rrank/aggregate.hpp"
#include "rrank/core.hpp"
#include "rrank/error.hpp"
#include "rrank/rng.hpp"

namespace rrank {

inline constexpr std::uint64_t kDefaultSeed = 42;

/// Samples are accumulated in fixed-size chunks that are merged in index
/// order, so floating-point results do not depend on the thread count.
inline constexpr std::uint64_t kSmaaChunk = 1024;

enum class WeightSampler { uniform, ordinal };
enum class SmaaAggregator { weighted_sum, choquet };

struct SmaaConfig {
  std::uint64_t samples = 10000;
  std::uint64_t seed = kDefaultSeed;
  WeightSampler sampler = WeightSampler::uniform;
  /// Ordinal sampler only: criterion indices from most to least preferred.
  std::vector<int> preference_order;
  SmaaAggregator aggregator = SmaaAggregator::weighted_sum;
  unsigned threads = 0;  // 0: hardware concurrency
  /// Keep the per-sample rank positions (needed for tau distributions).
  bool keep_sample_positions = false;
};

/// b[i][s]: probability of alternative i occupying rank s. Rows and columns
/// both sum to one, each simulation assigning every rank exactly once.
struct AcceptabilityMatrix {
  std::size_t m = 0;
  std::vector<double> b;
  double at(std::size_t i, std::size_t s) const { return b[i * m + s]; }
};

/// c[i][k]: probability that alternative i scores above k (ties split);
/// zero diagonal, c[i][k] + c[k][i] = 1.
struct PairwiseWinningMatrix {
  std::size_t m = 0;
  std::vector<double> c;
  double at(std::size_t i, std::size_t k) const { return c[i * m + k]; }
};

inline PairwiseWinningMatrix validate_pairwise(std::size_t m, std::vector<double> c,
                                               double tol = 1e-9) {
  if (m < 2) fail(errc::too_few_rows_or_cols, "pairwise matrix needs m >= 2");
  if (c.size() != m * m) fail(errc::dimension_mismatch, "pairwise matrix is not m x m");
  for (std::size_t i = 0; i < m; ++i) {
    if (std::abs(c[i * m + i]) > tol)
      fail(errc::invalid_config, "pairwise matrix diagonal must be zero");
    for (std::size_t k = i + 1; k < m; ++k) {
      const double a = c[i * m + k];
      const double b = c[k * m + i];
      if (!std::isfinite(a) || !std::isfinite(b) || a < -tol || a > 1.0 + tol || b < -tol ||
          b > 1.0 + tol)
        fail(errc::invalid_config, "pairwise entry outside [0, 1]");
      if (std::abs(a + b - 1.0) > tol)
        fail(errc::invalid_config, "pairwise entries do not sum to 1 across the diagonal");
    }
  }
  return PairwiseWinningMatrix{m, std::move(c)};
}

struct CentralWeightEntry {
  /// Mean of the weight draws under which the alternative ranked first;
  /// absent when it never did.
  std::optional<WeightVector> central_weight;
  /// With deterministic criteria the confidence factor degenerates to an
  /// indicator: 1 when the alternative ranks first under its own central
  /// weight, 0 otherwise (also 0 when no central weight exists).
  double confidence = 0.0;
};

struct SmaaResult {
  AcceptabilityMatrix acceptability;
  PairwiseWinningMatrix pairwise;
  std::vector<CentralWeightEntry> central;
  /// keep_sample_positions: S*m row-major array, entry [s*m + i] is the rank
  /// of alternative i in simulation s.
  std::vector<std::int32_t> sample_positions;
  std::uint64_t samples = 0;
};

namespace detail {

/// Flat simplex draw via sorted uniform spacings, written into `out`.
/// `cuts` is scratch for the n-1 cut points.
inline void uniform_simplex_draw(std::size_t n, SplitMix64& rng, std::vector<double>& cuts,
                                 std::span<double> out) {
  cuts.resize(n - 1);
  for (double& c : cuts) c = rng.next_double();
  std::sort(cuts.begin(), cuts.end());
  double prev = 0.0;
  for (std::size_t j = 0; j + 1 < n; ++j) {
    out[j] = cuts[j] - prev;
    prev = cuts[j];
  }
  out[n - 1] = 1.0 - prev;
}

/// Flat draw on the subsimplex where the components are ordered according to
/// `order` (most preferred criterion first): sort a flat draw descending and
/// assign the largest spacing to the most preferred criterion.
inline void ordinal_simplex_draw(std::size_t n, std::span<const int> order, SplitMix64& rng,
                                 std::vector<double>& cuts, std::vector<double>& sorted,
                                 std::span<double> out) {
  sorted.resize(n);
  uniform_simplex_draw(n, rng, cuts, sorted);
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  for (std::size_t r = 0; r < n; ++r) out[order[r]] = sorted[r];
}

inline void require_permutation(std::size_t n, std::span<const int> order, const char* what) {
  if (order.size() != n) fail(errc::invalid_config, std::string(what) + " has wrong length");
  std::vector<bool> seen(n, false);
  for (int v : order) {
    if (v < 0 || static_cast<std::size_t>(v) >= n || seen[v])
      fail(errc::invalid_config, std::string(what) + " is not a permutation of the criteria");
    seen[v] = true;
  }
}

/// Rank by descending score, ties by ascending index; positions out.
inline void rank_scores(std::span<const double> scores, std::vector<int>& order,
                        std::span<std::int32_t> positions) {
  const std::size_t m = scores.size();
  order.resize(m);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    return a < b;
  });
  for (std::size_t r = 0; r < m; ++r) positions[order[r]] = static_cast<std::int32_t>(r);
}

}  // namespace detail

/// One flat (Dirichlet-uniform) draw from the weight simplex.
inline WeightVector sample_uniform_simplex(std::size_t n, SplitMix64& rng) {
  if (n < 2) fail(errc::invalid_config, "simplex sampling needs n >= 2");
  std::vector<double> w(n), cuts;
  detail::uniform_simplex_draw(n, rng, cuts, w);
  return WeightVector{std::move(w)};
}

/// One flat draw from the subsimplex respecting an ordinal criterion
/// preference (order lists criterion indices, most preferred first).
inline WeightVector sample_ordinal(std::size_t n, std::span<const int> order, SplitMix64& rng) {
  if (n < 2) fail(errc::invalid_config, "simplex sampling needs n >= 2");
  detail::require_permutation(n, order, "preference order");
  std::vector<double> w(n), cuts, sorted;
  detail::ordinal_simplex_draw(n, order, rng, cuts, sorted, w);
  return WeightVector{std::move(w)};
}

/// Fixed interaction structure used when the Choquet integral runs inside the
/// simulation loop: the sampled weights act as the Shapley values, and the
/// interaction matrix is shrunk per draw by the largest factor keeping the
/// capacity monotone.
struct ChoquetTemplate {
  std::size_t n = 0;
  std::vector<double> interaction;  // n×n symmetric, zero diagonal
  std::vector<double> abs_row;      // absolute interaction mass per criterion

  static ChoquetTemplate make(std::size_t n, std::vector<double> interaction, double tol = 1e-9) {
    if (interaction.size() != n * n)
      fail(errc::dimension_mismatch, "interaction matrix is not n x n");
    for (std::size_t j = 0; j < n; ++j) {
      if (std::abs(interaction[j * n + j]) > tol)
        fail(errc::invalid_capacity, "interaction diagonal must be zero");
      for (std::size_t k = j + 1; k < n; ++k)
        if (!std::isfinite(interaction[j * n + k]) ||
            std::abs(interaction[j * n + k] - interaction[k * n + j]) > tol ||
            std::abs(interaction[j * n + k]) > 1.0 + tol)
          fail(errc::invalid_capacity, "interaction matrix invalid");
    }
    ChoquetTemplate t{n, std::move(interaction), std::vector<double>(n, 0.0)};
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        if (k != j) t.abs_row[j] += std::abs(t.interaction[j * n + k]);
    return t;
  }

  /// Largest shrink factor in [0, 1] making the template feasible for the
  /// given Shapley values.
  double shrink_factor(std::span<const double> phi) const {
    double beta = 1.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (abs_row[j] <= 0.0) continue;
      if (phi[j] < 0.0) fail(errc::infeasible_capacity, "negative Shapley value in simulation");
      beta = std::min(beta, 2.0 * phi[j] / abs_row[j]);
    }
    return beta;
  }

  /// Scores every row of the matrix with phi = w and interactions shrunk by
  /// `shrink_factor(w)`.
  void score(const DecisionMatrix& dm, std::span<const double> w, std::span<double> out) const {
    const double beta = shrink_factor(w);
    for (std::size_t i = 0; i < dm.m(); ++i) {
      const auto row = dm.row(i);
      double s = 0.0;
      for (std::size_t j = 0; j < n; ++j) s += (w[j] - 0.5 * beta * abs_row[j]) * row[j];
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = j + 1; k < n; ++k) {
          const double I = beta * interaction[j * n + k];
          if (I > 0.0)
            s += std::min(row[j], row[k]) * I;
          else if (I < 0.0)
            s += std::max(row[j], row[k]) * (-I);
        }
      out[i] = s;
    }
  }
};

/// Monte Carlo weight-space exploration over a pluggable aggregator.
/// `score_fn(w, scores_out)` must be safe to call concurrently. Identical
/// (seed, samples, config) reproduce identical results at any thread count.
template <class ScoreFn>
SmaaResult run_smaa_with(const DecisionMatrix& dm, const SmaaConfig& cfg, ScoreFn&& score_fn) {
  const std::size_t m = dm.m();
  const std::size_t n = dm.n();
  const std::uint64_t S = cfg.samples;
  if (S < 1) fail(errc::invalid_config, "sample count must be at least 1");
  if (cfg.sampler == WeightSampler::ordinal)
    detail::require_permutation(n, cfg.preference_order, "preference order");

  const std::uint64_t nchunks = (S + kSmaaChunk - 1) / kSmaaChunk;
  struct Chunk {
    std::vector<std::uint32_t> rank_count;      // m×m
    std::vector<std::uint32_t> pair_halfcred;   // m×m, 2 per win, 1 each per tie
    std::vector<double> weight_sum;             // m×n
    std::vector<std::uint32_t> first_count;     // m
  };
  std::vector<Chunk> chunks(nchunks);

  SmaaResult result;
  result.samples = S;
  if (cfg.keep_sample_positions) result.sample_positions.resize(S * m);

  std::atomic<std::uint64_t> next_chunk{0};
  std::mutex error_mutex;
  std::exception_ptr first_error;

  auto worker = [&]() {
    std::vector<double> w(n), scores(m), cuts, sorted;
    std::vector<int> order;
    std::vector<std::int32_t> positions(m);
    try {
      for (;;) {
        const std::uint64_t chunk = next_chunk.fetch_add(1);
        if (chunk >= nchunks) return;
        Chunk& acc = chunks[chunk];
        acc.rank_count.assign(m * m, 0);
        acc.pair_halfcred.assign(m * m, 0);
        acc.weight_sum.assign(m * n, 0.0);
        acc.first_count.assign(m, 0);
        const std::uint64_t begin = chunk * kSmaaChunk;
        const std::uint64_t end = std::min(S, begin + kSmaaChunk);
        for (std::uint64_t s = begin; s < end; ++s) {
          SplitMix64 rng = substream(cfg.seed, s);
          if (cfg.sampler == WeightSampler::uniform)
            detail::uniform_simplex_draw(n, rng, cuts, w);
          else
            detail::ordinal_simplex_draw(n, cfg.preference_order, rng, cuts, sorted, w);
          score_fn(std::span<const double>(w), std::span<double>(scores));
          detail::rank_scores(scores, order, positions);
          for (std::size_t i = 0; i < m; ++i)
            ++acc.rank_count[i * m + static_cast<std::size_t>(positions[i])];
          for (std::size_t i = 0; i < m; ++i)
            for (std::size_t k = i + 1; k < m; ++k) {
              if (scores[i] > scores[k])
                acc.pair_halfcred[i * m + k] += 2;
              else if (scores[k] > scores[i])
                acc.pair_halfcred[k * m + i] += 2;
              else {
                ++acc.pair_halfcred[i * m + k];
                ++acc.pair_halfcred[k * m + i];
              }
            }
          const std::size_t best = static_cast<std::size_t>(order[0]);
          ++acc.first_count[best];
          for (std::size_t j = 0; j < n; ++j) acc.weight_sum[best * n + j] += w[j];
          if (cfg.keep_sample_positions)
            std::copy(positions.begin(), positions.end(),
                      result.sample_positions.begin() + static_cast<std::ptrdiff_t>(s * m));
        }
      }
    } catch (...) {
      std::lock_guard<std::mutex> lock(error_mutex);
      if (!first_error) first_error = std::current_exception();
    }
  };

  unsigned nthreads = cfg.threads != 0 ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
  nthreads = static_cast<unsigned>(std::min<std::uint64_t>(nthreads, nchunks));
  if (nthreads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(nthreads);
    for (unsigned t = 0; t < nthreads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (first_error) std::rethrow_exception(first_error);

  // merge in chunk order: counters are exact, weight sums deterministic
  std::vector<std::uint64_t> rank_total(m * m, 0), half_total(m * m, 0);
  std::vector<std::uint64_t> first_total(m, 0);
  std::vector<double> weight_total(m * n, 0.0);
  for (const Chunk& acc : chunks) {
    for (std::size_t i = 0; i < m * m; ++i) {
      rank_total[i] += acc.rank_count[i];
      half_total[i] += acc.pair_halfcred[i];
    }
    for (std::size_t i = 0; i < m; ++i) first_total[i] += acc.first_count[i];
    for (std::size_t i = 0; i < m * n; ++i) weight_total[i] += acc.weight_sum[i];
  }

  result.acceptability.m = m;
  result.acceptability.b.assign(m * m, 0.0);
  for (std::size_t i = 0; i < m * m; ++i)
    result.acceptability.b[i] = static_cast<double>(rank_total[i]) / static_cast<double>(S);

  result.pairwise.m = m;
  result.pairwise.c.assign(m * m, 0.0);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t k = i + 1; k < m; ++k) {
      const double cik =
          static_cast<double>(half_total[i * m + k]) / (2.0 * static_cast<double>(S));
      result.pairwise.c[i * m + k] = cik;
      result.pairwise.c[k * m + i] = 1.0 - cik;  // exact complement by construction
    }

  result.central.resize(m);
  std::vector<double> scores(m);
  std::vector<int> order;
  std::vector<std::int32_t> positions(m);
  for (std::size_t i = 0; i < m; ++i) {
    CentralWeightEntry& entry = result.central[i];
    if (first_total[i] == 0) continue;
    std::vector<double> wc(n);
    for (std::size_t j = 0; j < n; ++j)
      wc[j] = weight_total[i * n + j] / static_cast<double>(first_total[i]);
    score_fn(std::span<const double>(wc), std::span<double>(scores));
    detail::rank_scores(scores, order, positions);
    entry.confidence = (static_cast<std::size_t>(order[0]) == i) ? 1.0 : 0.0;
    entry.central_weight = WeightVector{std::move(wc)};
  }
  return result;
}

/// Aggregator dispatch: weighted sum, or the 2-additive Choquet integral
/// with a fixed interaction template (required in that case).
inline SmaaResult run_smaa(const DecisionMatrix& dm, const SmaaConfig& cfg,
                           const std::vector<double>* interactions = nullptr) {
  if (cfg.aggregator == SmaaAggregator::weighted_sum) {
    return run_smaa_with(dm, cfg, [&dm](std::span<const double> w, std::span<double> out) {
      for (std::size_t i = 0; i < dm.m(); ++i) out[i] = weighted_sum_row(dm.row(i), w);
    });
  }
  if (interactions == nullptr)
    fail(errc::invalid_config, "choquet aggregator needs an interaction matrix");
  const ChoquetTemplate tpl = ChoquetTemplate::make(dm.n(), *interactions);
  return run_smaa_with(dm, cfg, [&dm, &tpl](std::span<const double> w, std::span<double> out) {
    tpl.score(dm, w, out);
  });
}

}  // namespace rrank
