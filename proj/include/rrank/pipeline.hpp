#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "rrank/aggregate.hpp"
#include "rrank/capfit.hpp"
#include "rrank/core.hpp"
#include "rrank/error.hpp"
#include "rrank/smaa.hpp"
#include "rrank/social.hpp"
#include "rrank/stats.hpp"

namespace rrank {

/// Shared configuration for the end-to-end runs. `weights` doubles as the
/// deterministic score weights and as the Shapley values handed to the
/// interaction fits.
struct PipelineConfig {
  WeightVector weights;
  std::uint64_t samples = 10000;
  std::uint64_t seed = kDefaultSeed;
  WeightSampler sampler = WeightSampler::uniform;
  std::vector<int> preference_order;
  unsigned threads = 0;
  double u1_tol = 1e-8;
};

/// Deterministic-weight comparison: weighted sum against the Choquet integral
/// under both fitted interaction structures.
struct Methodology1Result {
  CorrelationMatrix rho;
  FitReport u1{};
  FitReport u2{};
  ScoreVector ws_scores, ci_u1_scores, ci_u2_scores;
  Ranking ws_ranking, ci_u1_ranking, ci_u2_ranking;
  double tau_ws_ci_u1 = 0.0;
  double tau_ws_ci_u2 = 0.0;
};

inline Methodology1Result run_methodology_1(const DecisionMatrix& dm, const WeightVector& weights,
                                            double u1_tol = 1e-8) {
  Methodology1Result r;
  r.rho = pearson_matrix(dm);
  r.u1 = fit_u1(r.rho, weights, u1_tol);
  r.u2 = fit_u2(r.rho, weights);
  r.ws_scores = weighted_sum_score(dm, weights);
  r.ci_u1_scores = choquet_2additive_score(dm, r.u1.capacity);
  r.ci_u2_scores = choquet_2additive_score(dm, r.u2.capacity);
  r.ws_ranking = ranking_from_scores(r.ws_scores);
  r.ci_u1_ranking = ranking_from_scores(r.ci_u1_scores);
  r.ci_u2_ranking = ranking_from_scores(r.ci_u2_scores);
  r.tau_ws_ci_u1 = kendall_tau_distance(r.ws_ranking, r.ci_u1_ranking);
  r.tau_ws_ci_u2 = kendall_tau_distance(r.ws_ranking, r.ci_u2_ranking);
  return r;
}

/// Weight-sensitivity analysis: one SMAA run per aggregator family, all three
/// sharing the same weight draws (same seed and sampler) so differences come
/// from the aggregation alone. Interactions are fitted once, before the loop.
struct Methodology2Result {
  Methodology1Result base;
  SmaaResult smaa_ws;
  SmaaResult smaa_ci_u1;
  SmaaResult smaa_ci_u2;
};

inline Methodology2Result run_methodology_2(const DecisionMatrix& dm, const PipelineConfig& cfg,
                                            bool keep_sample_positions = false) {
  Methodology2Result out;
  out.base = run_methodology_1(dm, cfg.weights, cfg.u1_tol);
  SmaaConfig sc;
  sc.samples = cfg.samples;
  sc.seed = cfg.seed;
  sc.sampler = cfg.sampler;
  sc.preference_order = cfg.preference_order;
  sc.threads = cfg.threads;
  sc.keep_sample_positions = keep_sample_positions;

  sc.aggregator = SmaaAggregator::weighted_sum;
  out.smaa_ws = run_smaa(dm, sc);
  sc.aggregator = SmaaAggregator::choquet;
  out.smaa_ci_u1 = run_smaa(dm, sc, &out.base.u1.capacity.interaction);
  out.smaa_ci_u2 = run_smaa(dm, sc, &out.base.u2.capacity.interaction);
  return out;
}

struct FiveNumber {
  double min = 0.0, q1 = 0.0, median = 0.0, q3 = 0.0, max = 0.0;
};

/// Five-number summary with linearly interpolated quartiles.
inline FiveNumber five_number_summary(std::vector<double> v) {
  if (v.empty()) fail(errc::invalid_config, "summary of empty sample");
  std::sort(v.begin(), v.end());
  auto quantile = [&](double p) {
    const double h = p * static_cast<double>(v.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(h);
    const std::size_t hi = std::min(lo + 1, v.size() - 1);
    return v[lo] + (h - static_cast<double>(lo)) * (v[hi] - v[lo]);
  };
  return FiveNumber{v.front(), quantile(0.25), quantile(0.5), quantile(0.75), v.back()};
}

struct TauDistribution {
  std::string name;
  std::vector<double> taus;  // one entry per simulation
  FiveNumber summary;
};

/// Robust weight-free rankings: Condorcet/Schulze over the pairwise winning
/// matrices, plus the tau dispersion of every named ranking against the
/// per-sample rankings of its own aggregator family.
struct Methodology3Result {
  Methodology2Result runs;
  CondorcetResult ws_cond;
  CondorcetResult ci_u1_cond;
  CondorcetResult ci_u2_cond;
  std::vector<std::string> ranking_names;
  std::vector<const Ranking*> rankings() const;
  std::vector<double> tau_table;  // 6×6, indexed by ranking_names order
  std::vector<TauDistribution> distributions;
};

inline std::vector<const Ranking*> Methodology3Result::rankings() const {
  return {&runs.base.ws_ranking, &runs.base.ci_u2_ranking, &runs.base.ci_u1_ranking,
          &ws_cond.ranking,      &ci_u2_cond.ranking,      &ci_u1_cond.ranking};
}

namespace detail {

inline TauDistribution tau_distribution(const std::string& name, const Ranking& reference,
                                        const SmaaResult& run) {
  const std::size_t m = reference.m();
  if (run.sample_positions.size() != run.samples * m)
    fail(errc::invalid_config, "SMAA run was executed without per-sample positions");
  TauDistribution dist;
  dist.name = name;
  dist.taus.reserve(run.samples);
  for (std::uint64_t s = 0; s < run.samples; ++s) {
    std::span<const std::int32_t> pos(run.sample_positions.data() + s * m, m);
    std::size_t discordant = 0;
    for (std::size_t q = 0; q < m; ++q)
      for (std::size_t u = q + 1; u < m; ++u) {
        const bool a = reference.position[q] < reference.position[u];
        const bool b = pos[q] < pos[u];
        if (a != b) ++discordant;
      }
    dist.taus.push_back(2.0 * static_cast<double>(discordant) /
                        (static_cast<double>(m) * static_cast<double>(m - 1)));
  }
  dist.summary = five_number_summary(dist.taus);
  return dist;
}

}  // namespace detail

inline Methodology3Result run_methodology_3(const DecisionMatrix& dm, const PipelineConfig& cfg) {
  Methodology3Result out;
  out.runs = run_methodology_2(dm, cfg, /*keep_sample_positions=*/true);
  out.ws_cond = condorcet_ranking(out.runs.smaa_ws.pairwise);
  out.ci_u1_cond = condorcet_ranking(out.runs.smaa_ci_u1.pairwise);
  out.ci_u2_cond = condorcet_ranking(out.runs.smaa_ci_u2.pairwise);
  out.ranking_names = {"ws", "ci-u2", "ci-u1", "ws-cond", "ci-u2-cond", "ci-u1-cond"};

  const auto ranks = out.rankings();
  const std::size_t k = ranks.size();
  out.tau_table.assign(k * k, 0.0);
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = a + 1; b < k; ++b) {
      const double tau = kendall_tau_distance(*ranks[a], *ranks[b]);
      out.tau_table[a * k + b] = tau;
      out.tau_table[b * k + a] = tau;
    }

  const std::array<const SmaaResult*, 6> family = {
      &out.runs.smaa_ws,    &out.runs.smaa_ci_u2,    &out.runs.smaa_ci_u1,
      &out.runs.smaa_ws,    &out.runs.smaa_ci_u2,    &out.runs.smaa_ci_u1};
  for (std::size_t a = 0; a < k; ++a)
    out.distributions.push_back(
        detail::tau_distribution(out.ranking_names[a], *ranks[a], *family[a]));
  return out;
}

}  // namespace rrank
