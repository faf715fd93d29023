#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "rrank/capfit.hpp"
#include "rrank/core.hpp"
#include "rrank/error.hpp"
#include "rrank/pipeline.hpp"
#include "rrank/smaa.hpp"
#include "rrank/social.hpp"

namespace rrank::io {

using ordered_json = nlohmann::ordered_json;

/// Fixed numeric formatting used in every emitted file: 6 significant digits,
/// shortest form. Keeps output bytes stable across runs and platforms.
inline std::string format_g6(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

/// Same rounding for JSON payloads: the value is passed through its 6-digit
/// decimal form so serialization prints the short decimal, not 17 digits.
inline double num6(double v) { return std::strtod(format_g6(v).c_str(), nullptr); }

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------

inline std::string csv_quote(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char ch : field) {
    if (ch == '"') out += '"';
    out += ch;
  }
  out += '"';
  return out;
}

/// Minimal CSV reader: comma separator, double quotes with doubling, no
/// multi-line fields. Returns one vector of fields per non-empty line.
inline std::vector<std::vector<std::string>> parse_csv(std::istream& in) {
  std::vector<std::vector<std::string>> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::string field;
    bool quoted = false;
    for (std::size_t pos = 0; pos < line.size(); ++pos) {
      const char ch = line[pos];
      if (quoted) {
        if (ch == '"') {
          if (pos + 1 < line.size() && line[pos + 1] == '"') {
            field += '"';
            ++pos;
          } else {
            quoted = false;
          }
        } else {
          field += ch;
        }
      } else if (ch == '"') {
        quoted = true;
      } else if (ch == ',') {
        fields.push_back(std::move(field));
        field.clear();
      } else {
        field += ch;
      }
    }
    if (quoted)
      fail(errc::parse_error, "unterminated quote on line " + std::to_string(lineno));
    fields.push_back(std::move(field));
    rows.push_back(std::move(fields));
  }
  return rows;
}

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

// empty cells become NaN (caught by matrix validation as NonFinite), anything
// unparseable is a parse error
inline double parse_cell(const std::string& raw, std::size_t lineno) {
  const std::string s = trim(raw);
  if (s.empty()) return std::numeric_limits<double>::quiet_NaN();
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size())
    fail(errc::parse_error, "unparseable number '" + s + "' on line " + std::to_string(lineno));
  return v;
}

inline std::vector<std::string> trimmed_tail(const std::vector<std::string>& row) {
  std::vector<std::string> out;
  out.reserve(row.size() - 1);
  for (std::size_t c = 1; c < row.size(); ++c) out.push_back(trim(row[c]));
  return out;
}

inline std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(errc::io_error, "cannot open '" + path + "' for writing");
  return out;
}

inline std::ifstream open_in(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(errc::io_error, "cannot open '" + path + "' for reading");
  return in;
}

}  // namespace detail

/// Rescales every criterion column onto [0, 1]; constant columns have no
/// usable range and are rejected.
inline DecisionMatrix min_max_normalize(const DecisionMatrix& dm) {
  const std::size_t m = dm.m();
  const std::size_t n = dm.n();
  std::vector<double> values = dm.values;
  for (std::size_t j = 0; j < n; ++j) {
    double lo = dm.at(0, j), hi = dm.at(0, j);
    for (std::size_t i = 1; i < m; ++i) {
      lo = std::min(lo, dm.at(i, j));
      hi = std::max(hi, dm.at(i, j));
    }
    if (hi <= lo)
      fail(errc::zero_variance, "criterion '" + dm.criteria[j] + "' is constant, cannot normalize");
    for (std::size_t i = 0; i < m; ++i) values[i * n + j] = (dm.at(i, j) - lo) / (hi - lo);
  }
  return validate_matrix(dm.alternatives, dm.criteria, std::move(values));
}

/// Decision matrix CSV: header row of criterion names (first cell is the
/// label of the identifier column), one row per alternative.
inline DecisionMatrix read_decision_matrix(std::istream& in, bool normalize = false) {
  const auto rows = parse_csv(in);
  if (rows.empty()) fail(errc::too_few_rows_or_cols, "empty input");
  const std::size_t ncols = rows[0].size();
  if (ncols < 2) fail(errc::parse_error, "header needs an identifier column plus criteria");
  std::vector<std::string> criteria = detail::trimmed_tail(rows[0]);
  std::vector<std::string> alternatives;
  std::vector<double> values;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    if (rows[r].size() != ncols)
      fail(errc::parse_error, "line " + std::to_string(r + 1) + " has " +
                                  std::to_string(rows[r].size()) + " fields, expected " +
                                  std::to_string(ncols));
    alternatives.push_back(detail::trim(rows[r][0]));
    for (std::size_t c = 1; c < ncols; ++c)
      values.push_back(detail::parse_cell(rows[r][c], r + 1));
  }
  DecisionMatrix dm = validate_matrix(std::move(alternatives), std::move(criteria), std::move(values));
  return normalize ? min_max_normalize(dm) : dm;
}

inline DecisionMatrix read_decision_matrix(const std::string& path, bool normalize = false) {
  auto in = detail::open_in(path);
  return read_decision_matrix(in, normalize);
}

inline void write_decision_matrix(std::ostream& out, const DecisionMatrix& dm) {
  out << "alternative";
  for (const auto& c : dm.criteria) out << ',' << csv_quote(c);
  out << '\n';
  for (std::size_t i = 0; i < dm.m(); ++i) {
    out << csv_quote(dm.alternatives[i]);
    for (std::size_t j = 0; j < dm.n(); ++j) out << ',' << format_g6(dm.at(i, j));
    out << '\n';
  }
}

inline void write_decision_matrix(const std::string& path, const DecisionMatrix& dm) {
  auto out = detail::open_out(path);
  write_decision_matrix(out, dm);
}

/// Square labeled matrix (correlation, pairwise winning, acceptability).
inline void write_labeled_matrix(std::ostream& out, const std::string& corner,
                                 const std::vector<std::string>& row_labels,
                                 const std::vector<std::string>& col_labels,
                                 const std::vector<double>& values) {
  out << csv_quote(corner);
  for (const auto& c : col_labels) out << ',' << csv_quote(c);
  out << '\n';
  for (std::size_t i = 0; i < row_labels.size(); ++i) {
    out << csv_quote(row_labels[i]);
    for (std::size_t j = 0; j < col_labels.size(); ++j)
      out << ',' << format_g6(values[i * col_labels.size() + j]);
    out << '\n';
  }
}

inline void write_correlation(const std::string& path, const std::vector<std::string>& criteria,
                              const CorrelationMatrix& rho) {
  auto out = detail::open_out(path);
  write_labeled_matrix(out, "criterion", criteria, criteria, rho.rho);
}

inline CorrelationMatrix read_correlation(const std::string& path,
                                          std::vector<std::string>* labels_out = nullptr) {
  auto in = detail::open_in(path);
  const auto rows = parse_csv(in);
  if (rows.size() < 2) fail(errc::parse_error, "correlation file too short");
  const std::size_t n = rows[0].size() - 1;
  if (rows.size() != n + 1) fail(errc::parse_error, "correlation matrix is not square");
  std::vector<std::string> labels = detail::trimmed_tail(rows[0]);
  std::vector<double> values;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    if (rows[r].size() != n + 1) fail(errc::parse_error, "ragged correlation row");
    if (detail::trim(rows[r][0]) != labels[r - 1])
      fail(errc::parse_error, "correlation row labels must match column labels");
    for (std::size_t c = 1; c <= n; ++c) values.push_back(detail::parse_cell(rows[r][c], r + 1));
  }
  if (labels_out) *labels_out = labels;
  return validate_correlation(n, std::move(values));
}

inline void write_scores(const std::string& path, const std::vector<std::string>& alternatives,
                         const ScoreVector& scores) {
  auto out = detail::open_out(path);
  out << "alternative,score\n";
  for (std::size_t i = 0; i < alternatives.size(); ++i)
    out << csv_quote(alternatives[i]) << ',' << format_g6(scores.s[i]) << '\n';
}

inline void write_ranking(const std::string& path, const std::vector<std::string>& alternatives,
                          const Ranking& ranking, const ScoreVector* scores = nullptr) {
  auto out = detail::open_out(path);
  out << (scores ? "rank,alternative,score\n" : "rank,alternative\n");
  for (std::size_t r = 0; r < ranking.m(); ++r) {
    const int i = ranking.order[r];
    out << (r + 1) << ',' << csv_quote(alternatives[i]);
    if (scores) out << ',' << format_g6(scores->s[i]);
    out << '\n';
  }
}

/// Alternatives in rank order (best first) from a ranking CSV.
inline std::vector<std::string> read_ranking_names(const std::string& path) {
  auto in = detail::open_in(path);
  const auto rows = parse_csv(in);
  if (rows.size() < 2) fail(errc::parse_error, "ranking file too short");
  std::vector<std::string> names;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    if (rows[r].size() < 2) fail(errc::parse_error, "ranking row needs rank and alternative");
    names.push_back(detail::trim(rows[r][1]));
  }
  return names;
}

inline void write_acceptability(const std::string& path,
                                const std::vector<std::string>& alternatives,
                                const AcceptabilityMatrix& b) {
  std::vector<std::string> rank_labels(b.m);
  for (std::size_t s = 0; s < b.m; ++s) rank_labels[s] = "rank" + std::to_string(s + 1);
  auto out = detail::open_out(path);
  write_labeled_matrix(out, "alternative", alternatives, rank_labels, b.b);
}

inline void write_pairwise(const std::string& path, const std::vector<std::string>& alternatives,
                           const PairwiseWinningMatrix& c) {
  auto out = detail::open_out(path);
  write_labeled_matrix(out, "alternative", alternatives, alternatives, c.c);
}

inline PairwiseWinningMatrix read_pairwise(const std::string& path,
                                           std::vector<std::string>* labels_out = nullptr) {
  auto in = detail::open_in(path);
  const auto rows = parse_csv(in);
  if (rows.size() < 3) fail(errc::parse_error, "pairwise file too short");
  const std::size_t m = rows[0].size() - 1;
  if (rows.size() != m + 1) fail(errc::parse_error, "pairwise matrix is not square");
  std::vector<std::string> labels = detail::trimmed_tail(rows[0]);
  std::vector<double> values;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    if (rows[r].size() != m + 1) fail(errc::parse_error, "ragged pairwise row");
    if (detail::trim(rows[r][0]) != labels[r - 1])
      fail(errc::parse_error, "pairwise row labels must match column labels");
    for (std::size_t c = 1; c <= m; ++c) values.push_back(detail::parse_cell(rows[r][c], r + 1));
  }
  if (labels_out) *labels_out = labels;
  // tie credits are halves of 1/S; emitted values are rounded to 6 digits
  return validate_pairwise(m, std::move(values), 1e-5);
}

// ---------------------------------------------------------------------------
// JSON reports
// ---------------------------------------------------------------------------

inline void write_json(const std::string& path, const ordered_json& j) {
  auto out = detail::open_out(path);
  out << j.dump(2) << '\n';
}

inline ordered_json capacity_json(const std::vector<std::string>& criteria, const FitReport& fit,
                                  const std::string& method) {
  ordered_json j;
  j["method"] = method;
  j["criteria"] = criteria;
  ordered_json shapley = ordered_json::array();
  for (double v : fit.capacity.phi) shapley.push_back(num6(v));
  j["shapley"] = std::move(shapley);
  ordered_json inter = ordered_json::array();
  const std::size_t n = fit.capacity.n();
  for (std::size_t r = 0; r < n; ++r) {
    ordered_json row = ordered_json::array();
    for (std::size_t c = 0; c < n; ++c) row.push_back(num6(fit.capacity.interaction[r * n + c]));
    inter.push_back(std::move(row));
  }
  j["interaction"] = std::move(inter);
  if (fit.ratio_t) j["ratio_t"] = num6(*fit.ratio_t);
  if (fit.objective) j["objective"] = num6(*fit.objective);
  ordered_json active = ordered_json::array();
  for (int idx : fit.active_constraints) active.push_back(criteria[idx]);
  j["active_constraints"] = std::move(active);
  return j;
}

inline ordered_json central_weights_json(const std::vector<std::string>& alternatives,
                                         const std::vector<std::string>& criteria,
                                         const SmaaResult& result) {
  ordered_json j;
  j["confidence_definition"] =
      "indicator: 1 when the alternative ranks first under its own central weight "
      "(criteria are deterministic, so the factor degenerates to 0/1)";
  j["criteria"] = criteria;
  ordered_json entries = ordered_json::array();
  for (std::size_t i = 0; i < alternatives.size(); ++i) {
    ordered_json e;
    e["alternative"] = alternatives[i];
    e["confidence"] = num6(result.central[i].confidence);
    if (result.central[i].central_weight) {
      ordered_json w = ordered_json::array();
      for (double v : result.central[i].central_weight->w) w.push_back(num6(v));
      e["central_weight"] = std::move(w);
    } else {
      e["central_weight"] = nullptr;
    }
    entries.push_back(std::move(e));
  }
  j["alternatives"] = std::move(entries);
  return j;
}

inline ordered_json condorcet_json(const std::vector<std::string>& alternatives,
                                   const CondorcetResult& result) {
  ordered_json j;
  j["transitive"] = result.diagnostics.transitive;
  j["majority_cycle"] = result.diagnostics.majority_cycle;
  if (result.diagnostics.condorcet_winner)
    j["condorcet_winner"] = alternatives[*result.diagnostics.condorcet_winner];
  else
    j["condorcet_winner"] = nullptr;
  ordered_json order = ordered_json::array();
  for (int i : result.ranking.order) order.push_back(alternatives[i]);
  j["ranking"] = std::move(order);
  ordered_json copeland = ordered_json::array();
  for (int v : result.diagnostics.copeland) copeland.push_back(v);
  j["copeland"] = std::move(copeland);
  if (!result.diagnostics.schulze_wins.empty()) {
    ordered_json wins = ordered_json::array();
    for (int v : result.diagnostics.schulze_wins) wins.push_back(v);
    j["schulze_wins"] = std::move(wins);
  }
  return j;
}

inline ordered_json five_number_json(const FiveNumber& f) {
  ordered_json j;
  j["min"] = num6(f.min);
  j["q1"] = num6(f.q1);
  j["median"] = num6(f.median);
  j["q3"] = num6(f.q3);
  j["max"] = num6(f.max);
  return j;
}

inline ordered_json tau_distribution_json(const TauDistribution& dist, bool include_raw) {
  ordered_json j;
  j["name"] = dist.name;
  j["samples"] = dist.taus.size();
  j["summary"] = five_number_json(dist.summary);
  if (include_raw) {
    ordered_json raw = ordered_json::array();
    for (double v : dist.taus) raw.push_back(num6(v));
    j["values"] = std::move(raw);
  }
  return j;
}

inline void write_tau_table(const std::string& path, const std::vector<std::string>& names,
                            const std::vector<double>& table) {
  auto out = detail::open_out(path);
  write_labeled_matrix(out, "ranking", names, names, table);
}

}  // namespace rrank::io
