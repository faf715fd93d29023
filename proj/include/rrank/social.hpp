#pragma once

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <optional>
#include <vector>

#include "rrank/core.hpp"
#include "rrank/error.hpp"
#include "rrank/smaa.hpp"

namespace rrank {

/// Directed majority relation: an edge i -> k exists when c[i][k] > 0.5,
/// carrying that probability as its strength. Two-cycles are impossible
/// because opposing entries sum to one.
struct MajorityGraph {
  std::size_t m = 0;
  struct Edge {
    int from, to;
    double strength;
  };
  std::vector<Edge> edges;
  std::vector<int> wins;  // out-degree per alternative (Copeland score)
};

inline MajorityGraph majority_graph(const PairwiseWinningMatrix& c) {
  MajorityGraph g;
  g.m = c.m;
  g.wins.assign(c.m, 0);
  for (std::size_t i = 0; i < c.m; ++i)
    for (std::size_t k = 0; k < c.m; ++k) {
      if (k == i || !(c.at(i, k) > 0.5)) continue;
      g.edges.push_back({static_cast<int>(i), static_cast<int>(k), c.at(i, k)});
      ++g.wins[i];
    }
  return g;
}

struct CondorcetDiagnostics {
  /// The majority relation (c > 0.5) is a strict total order.
  bool transitive = false;
  /// A directed cycle exists among majority edges.
  bool majority_cycle = false;
  std::optional<int> condorcet_winner;
  /// Majority wins per alternative.
  std::vector<int> copeland;
  /// Widest-path strengths (m×m), filled when the Schulze stage ran.
  std::vector<double> schulze_strength;
  /// Schulze wins per alternative, filled when the Schulze stage ran.
  std::vector<int> schulze_wins;
};

struct CondorcetResult {
  Ranking ranking;
  CondorcetDiagnostics diagnostics;
};

/// Widest-path strengths over the full probability matrix: the strength of a
/// path is its weakest edge, maximized over all paths (Floyd–Warshall).
inline std::vector<double> schulze_strengths(const PairwiseWinningMatrix& c) {
  const std::size_t m = c.m;
  std::vector<double> p(m * m, 0.0);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t k = 0; k < m; ++k)
      if (i != k) p[i * m + k] = c.at(i, k);
  for (std::size_t via = 0; via < m; ++via)
    for (std::size_t i = 0; i < m; ++i) {
      if (i == via) continue;
      const double head = p[i * m + via];
      for (std::size_t k = 0; k < m; ++k) {
        if (k == i || k == via) continue;
        const double through = std::min(head, p[via * m + k]);
        if (through > p[i * m + k]) p[i * m + k] = through;
      }
    }
  return p;
}

namespace detail {

inline bool has_cycle(const MajorityGraph& g) {
  std::vector<std::vector<int>> adj(g.m);
  for (const auto& e : g.edges) adj[e.from].push_back(e.to);
  // iterative DFS, colors: 0 unseen, 1 on stack, 2 done
  std::vector<int> color(g.m, 0);
  std::vector<std::pair<int, std::size_t>> stack;
  for (std::size_t root = 0; root < g.m; ++root) {
    if (color[root] != 0) continue;
    stack.push_back({static_cast<int>(root), 0});
    color[root] = 1;
    while (!stack.empty()) {
      const auto [node, next] = stack.back();
      bool advanced = false;
      for (std::size_t e = next; e < adj[node].size(); ++e) {
        const int to = adj[node][e];
        if (color[to] == 1) return true;
        if (color[to] == 0) {
          stack.back().second = e + 1;
          stack.push_back({to, 0});
          color[to] = 1;
          advanced = true;
          break;
        }
      }
      if (!advanced) {
        color[node] = 2;
        stack.pop_back();
      }
    }
  }
  return false;
}

}  // namespace detail

/// Ranking from pairwise winning probabilities. When the majority relation is
/// already a strict total order the ranking is that order; otherwise Schulze
/// widest-path strengths decide, with residual ties broken by Copeland score
/// and then by alternative index. A Condorcet winner, when one exists, always
/// ranks first.
inline CondorcetResult condorcet_ranking(const PairwiseWinningMatrix& c) {
  const std::size_t m = c.m;
  if (m < 2 || c.c.size() != m * m) fail(errc::dimension_mismatch, "pairwise matrix invalid");

  const MajorityGraph graph = majority_graph(c);
  CondorcetDiagnostics diag;
  diag.copeland = graph.wins;
  // a 0.5 tie leaves a pair with no edge in either direction
  const bool decided_everywhere = graph.edges.size() == m * (m - 1) / 2;

  for (std::size_t i = 0; i < m; ++i)
    if (diag.copeland[i] == static_cast<int>(m) - 1) diag.condorcet_winner = static_cast<int>(i);

  // A complete majority relation is transitive exactly when the win counts
  // are all distinct, i.e. {m-1, ..., 1, 0}.
  if (decided_everywhere) {
    std::vector<bool> seen(m, false);
    diag.transitive = true;
    for (int wins : diag.copeland) {
      if (seen[wins]) {
        diag.transitive = false;
        break;
      }
      seen[wins] = true;
    }
  }

  std::vector<int> order(m);
  std::iota(order.begin(), order.end(), 0);
  if (diag.transitive) {
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      if (diag.copeland[a] != diag.copeland[b]) return diag.copeland[a] > diag.copeland[b];
      return a < b;
    });
    return CondorcetResult{ranking_from_order(std::move(order)), std::move(diag)};
  }

  diag.majority_cycle = detail::has_cycle(graph);
  diag.schulze_strength = schulze_strengths(c);
  diag.schulze_wins.assign(m, 0);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t k = 0; k < m; ++k)
      if (k != i && diag.schulze_strength[i * m + k] > diag.schulze_strength[k * m + i])
        ++diag.schulze_wins[i];
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (diag.schulze_wins[a] != diag.schulze_wins[b]) return diag.schulze_wins[a] > diag.schulze_wins[b];
    if (diag.copeland[a] != diag.copeland[b]) return diag.copeland[a] > diag.copeland[b];
    return a < b;
  });
  return CondorcetResult{ranking_from_order(std::move(order)), std::move(diag)};
}

}  // namespace rrank
