// rrank: robust composite-index rankings from a decision matrix.
//
// Subcommands cover the individual stages (correlate, learn, score, smaa,
// condorcet, compare) and the three end-to-end pipelines (reproduce). All
// randomness is seeded; identical invocations write identical bytes.

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rrank/error.hpp"
#include "rrank/io.hpp"
#include "rrank/pipeline.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Settings {
  std::string data;
  std::string out = "out";
  bool normalize = false;
  std::string wvec;    // comma-separated weights
  std::string order;   // comma-separated criterion names or 1-based indices
  std::uint64_t samples = 10000;
  std::uint64_t seed = rrank::kDefaultSeed;
  unsigned threads = 0;
  bool raw = false;
};

int exit_code_for(rrank::errc code) {
  switch (code) {
    case rrank::errc::invalid_config:
      return 1;
    case rrank::errc::non_convergence:
    case rrank::errc::invalid_capacity:
    case rrank::errc::infeasible_capacity:
    case rrank::errc::degenerate_input:
      return 3;
    default:
      return 2;  // data or file problem
  }
}

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::string token;
  std::stringstream stream(s);
  while (std::getline(stream, token, ',')) out.push_back(token);
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

// Relative inputs are looked up in the working directory first, then under
// $RR_DATA_DIR when it is set.
std::string resolve_input(const std::string& path) {
  if (path.empty() || fs::exists(path) || fs::path(path).is_absolute()) return path;
  if (const char* dir = std::getenv("RR_DATA_DIR")) {
    const fs::path candidate = fs::path(dir) / path;
    if (fs::exists(candidate)) return candidate.string();
  }
  return path;
}

rrank::WeightVector parse_weights(const std::string& text) {
  if (text.empty())
    rrank::fail(rrank::errc::invalid_config, "this command needs --wvec (or \"weights\" in the config file)");
  std::vector<double> w;
  for (const auto& token : split_commas(text)) {
    const std::string t = trim(token);
    char* end = nullptr;
    const double v = std::strtod(t.c_str(), &end);
    if (t.empty() || end != t.c_str() + t.size())
      rrank::fail(rrank::errc::invalid_config, "unparseable weight '" + t + "'");
    w.push_back(v);
  }
  return rrank::validate_weights(std::move(w));
}

std::vector<int> parse_order(const std::string& text, const std::vector<std::string>& criteria) {
  if (text.empty())
    rrank::fail(rrank::errc::invalid_config, "ordinal sampling needs --order (or \"preference_order\" in the config file)");
  std::vector<int> order;
  for (const auto& token : split_commas(text)) {
    const std::string t = trim(token);
    char* end = nullptr;
    const long idx = std::strtol(t.c_str(), &end, 10);
    if (!t.empty() && end == t.c_str() + t.size()) {
      if (idx < 1 || static_cast<std::size_t>(idx) > criteria.size())
        rrank::fail(rrank::errc::invalid_config, "criterion index " + t + " out of range");
      order.push_back(static_cast<int>(idx - 1));
      continue;
    }
    const auto it = std::find(criteria.begin(), criteria.end(), t);
    if (it == criteria.end())
      rrank::fail(rrank::errc::invalid_config, "unknown criterion '" + t + "' in --order");
    order.push_back(static_cast<int>(it - criteria.begin()));
  }
  return order;
}

rrank::DecisionMatrix load_matrix(const Settings& s) {
  if (s.data.empty())
    rrank::fail(rrank::errc::invalid_config, "this command needs --data (or \"data\" in the config file)");
  return rrank::io::read_decision_matrix(resolve_input(s.data), s.normalize);
}

fs::path ensure_outdir(const Settings& s) {
  fs::path dir(s.out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) rrank::fail(rrank::errc::io_error, "cannot create output directory '" + s.out + "'");
  return dir;
}

// Pre-scan for --config and fold the file into the defaults; command-line
// flags parsed afterwards win.
void apply_config(int argc, char** argv, Settings& s) {
  std::string path;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--config" && i + 1 < argc)
      path = argv[i + 1];
    else if (arg.rfind("--config=", 0) == 0)
      path = arg.substr(9);
  }
  if (path.empty()) return;
  std::ifstream in(path);
  if (!in) rrank::fail(rrank::errc::io_error, "cannot open config file '" + path + "'");
  json cfg;
  try {
    in >> cfg;
  } catch (const json::parse_error& e) {
    rrank::fail(rrank::errc::parse_error, std::string("config file: ") + e.what());
  }
  if (cfg.contains("data")) s.data = cfg["data"].get<std::string>();
  if (cfg.contains("out")) s.out = cfg["out"].get<std::string>();
  if (cfg.contains("normalize")) s.normalize = cfg["normalize"].get<bool>();
  if (cfg.contains("samples")) s.samples = cfg["samples"].get<std::uint64_t>();
  if (cfg.contains("seed")) s.seed = cfg["seed"].get<std::uint64_t>();
  if (cfg.contains("threads")) s.threads = cfg["threads"].get<unsigned>();
  if (cfg.contains("raw")) s.raw = cfg["raw"].get<bool>();
  if (cfg.contains("weights")) {
    std::string joined;
    for (const auto& v : cfg["weights"]) {
      if (!joined.empty()) joined += ',';
      joined += rrank::io::format_g6(v.get<double>());
    }
    s.wvec = joined;
  }
  if (cfg.contains("preference_order")) {
    std::string joined;
    for (const auto& v : cfg["preference_order"]) {
      if (!joined.empty()) joined += ',';
      joined += v.is_string() ? v.get<std::string>() : std::to_string(v.get<int>());
    }
    s.order = joined;
  }
}

}  // namespace

int main(int argc, char** argv) {
  Settings s;
  std::string config_path_sink;

  CLI::App app{"robust composite-index ranking engine"};
  app.require_subcommand(1);

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--data", s.data, "decision matrix CSV");
    cmd->add_option("--config", config_path_sink, "JSON config file; flags override its values");
    cmd->add_option("--out", s.out, "output directory");
    cmd->add_flag("--normalize", s.normalize, "min-max normalize criterion columns on ingest");
    cmd->add_option("--wvec", s.wvec, "comma-separated deterministic weights");
    cmd->add_option("--seed", s.seed, "RNG seed (default 42, never wall clock)");
    cmd->add_option("--samples", s.samples, "Monte Carlo sample count");
    cmd->add_option("--threads", s.threads, "worker threads (0 = hardware)");
    cmd->add_option("--order", s.order,
                    "comma-separated criterion preference, names or 1-based indices");
    cmd->add_flag("--raw", s.raw, "include raw tau arrays in JSON output");
  };

  auto* cmd_ingest = app.add_subcommand("ingest-check", "validate a decision matrix CSV");
  auto* cmd_correlate = app.add_subcommand("correlate", "Pearson correlation of criterion columns");
  auto* cmd_learn = app.add_subcommand("learn", "fit interaction indices from correlations");
  std::string method;
  cmd_learn->add_option("--method", method, "u1 | u2")->required();
  std::string rho_path;
  cmd_learn->add_option("--rho", rho_path, "correlation CSV to fit from (instead of --data)");
  auto* cmd_score = app.add_subcommand("score", "score and rank with a fixed weight vector");
  std::string agg = "ws";
  cmd_score->add_option("--agg", agg, "ws | ci-u1 | ci-u2");
  auto* cmd_smaa = app.add_subcommand("smaa", "Monte Carlo weight-space exploration");
  std::string sampler = "uniform";
  cmd_smaa->add_option("--weights", sampler, "uniform | ordinal");
  std::string smaa_agg = "ws";
  cmd_smaa->add_option("--agg", smaa_agg, "ws | ci-u1 | ci-u2");
  auto* cmd_condorcet = app.add_subcommand("condorcet", "ranking from a pairwise winning matrix");
  std::string from_path;
  cmd_condorcet->add_option("--from", from_path, "pairwise winning matrix CSV")->required();
  auto* cmd_compare = app.add_subcommand("compare", "Kendall tau distance of two ranking files");
  std::string rank_a, rank_b;
  cmd_compare->add_option("--a", rank_a, "first ranking CSV")->required();
  cmd_compare->add_option("--b", rank_b, "second ranking CSV")->required();
  auto* cmd_reproduce = app.add_subcommand("reproduce", "run one of the analysis pipelines end to end");
  int methodology = 0;
  cmd_reproduce->add_option("--methodology", methodology, "1 | 2 | 3")->required();

  for (CLI::App* cmd : {cmd_ingest, cmd_correlate, cmd_learn, cmd_score, cmd_smaa, cmd_condorcet,
                        cmd_compare, cmd_reproduce})
    add_common(cmd);

  try {
    apply_config(argc, argv, s);
    app.parse(argc, argv);

    if (cmd_ingest->parsed()) {
      const auto dm = load_matrix(s);
      std::cout << "ok: " << dm.m() << " alternatives x " << dm.n() << " criteria\n";
      return 0;
    }

    if (cmd_correlate->parsed()) {
      const auto dm = load_matrix(s);
      const auto rho = rrank::pearson_matrix(dm);
      const auto dir = ensure_outdir(s);
      rrank::io::write_correlation((dir / "correlation.csv").string(), dm.criteria, rho);
      std::cout << "wrote " << (dir / "correlation.csv").string() << "\n";
      return 0;
    }

    if (cmd_learn->parsed()) {
      if (method != "u1" && method != "u2")
        rrank::fail(rrank::errc::invalid_config, "--method must be u1 or u2");
      std::vector<std::string> criteria;
      rrank::CorrelationMatrix rho;
      if (!rho_path.empty()) {
        rho = rrank::io::read_correlation(resolve_input(rho_path), &criteria);
      } else {
        const auto dm = load_matrix(s);
        criteria = dm.criteria;
        rho = rrank::pearson_matrix(dm);
      }
      const auto phi = parse_weights(s.wvec);
      const auto fit = method == "u1" ? rrank::fit_u1(rho, phi) : rrank::fit_u2(rho, phi);
      const auto dir = ensure_outdir(s);
      const auto path = dir / ("capacity_" + method + ".json");
      rrank::io::write_json(path.string(), rrank::io::capacity_json(criteria, fit, method));
      if (fit.ratio_t)
        std::cout << "ratio_t = " << rrank::io::format_g6(*fit.ratio_t) << "\n";
      if (fit.objective)
        std::cout << "objective = " << rrank::io::format_g6(*fit.objective) << "\n";
      std::cout << "wrote " << path.string() << "\n";
      return 0;
    }

    if (cmd_score->parsed()) {
      const auto dm = load_matrix(s);
      const auto w = parse_weights(s.wvec);
      rrank::ScoreVector scores;
      if (agg == "ws") {
        scores = rrank::weighted_sum_score(dm, w);
      } else if (agg == "ci-u1" || agg == "ci-u2") {
        const auto rho = rrank::pearson_matrix(dm);
        const auto fit = agg == "ci-u1" ? rrank::fit_u1(rho, w) : rrank::fit_u2(rho, w);
        scores = rrank::choquet_2additive_score(dm, fit.capacity);
      } else {
        rrank::fail(rrank::errc::invalid_config, "--agg must be ws, ci-u1 or ci-u2");
      }
      const auto ranking = rrank::ranking_from_scores(scores);
      const auto dir = ensure_outdir(s);
      rrank::io::write_scores((dir / ("scores_" + agg + ".csv")).string(), dm.alternatives, scores);
      rrank::io::write_ranking((dir / ("ranking_" + agg + ".csv")).string(), dm.alternatives,
                               ranking, &scores);
      std::cout << "top: " << dm.alternatives[ranking.order[0]] << "\n";
      std::cout << "wrote " << (dir / ("ranking_" + agg + ".csv")).string() << "\n";
      return 0;
    }

    if (cmd_smaa->parsed()) {
      const auto dm = load_matrix(s);
      rrank::SmaaConfig cfg;
      cfg.samples = s.samples;
      cfg.seed = s.seed;
      cfg.threads = s.threads;
      if (sampler == "ordinal") {
        cfg.sampler = rrank::WeightSampler::ordinal;
        cfg.preference_order = parse_order(s.order, dm.criteria);
      } else if (sampler != "uniform") {
        rrank::fail(rrank::errc::invalid_config, "--weights must be uniform or ordinal");
      }
      rrank::SmaaResult result;
      if (smaa_agg == "ws") {
        result = rrank::run_smaa(dm, cfg);
      } else if (smaa_agg == "ci-u1" || smaa_agg == "ci-u2") {
        const auto phi = parse_weights(s.wvec);
        const auto rho = rrank::pearson_matrix(dm);
        const auto fit = smaa_agg == "ci-u1" ? rrank::fit_u1(rho, phi) : rrank::fit_u2(rho, phi);
        cfg.aggregator = rrank::SmaaAggregator::choquet;
        result = rrank::run_smaa(dm, cfg, &fit.capacity.interaction);
      } else {
        rrank::fail(rrank::errc::invalid_config, "--agg must be ws, ci-u1 or ci-u2");
      }
      const auto dir = ensure_outdir(s);
      rrank::io::write_acceptability((dir / ("acceptability_" + smaa_agg + ".csv")).string(),
                                     dm.alternatives, result.acceptability);
      rrank::io::write_pairwise((dir / ("pairwise_" + smaa_agg + ".csv")).string(),
                                dm.alternatives, result.pairwise);
      rrank::io::write_json(
          (dir / ("central_weights_" + smaa_agg + ".json")).string(),
          rrank::io::central_weights_json(dm.alternatives, dm.criteria, result));
      std::cout << "wrote " << (dir / ("acceptability_" + smaa_agg + ".csv")).string() << " (+2 more)\n";
      return 0;
    }

    if (cmd_condorcet->parsed()) {
      std::vector<std::string> labels;
      const auto c = rrank::io::read_pairwise(resolve_input(from_path), &labels);
      const auto result = rrank::condorcet_ranking(c);
      const auto dir = ensure_outdir(s);
      rrank::io::write_ranking((dir / "ranking_condorcet.csv").string(), labels, result.ranking);
      rrank::io::write_json((dir / "condorcet.json").string(),
                            rrank::io::condorcet_json(labels, result));
      std::cout << "top: " << labels[result.ranking.order[0]]
                << (result.diagnostics.majority_cycle ? " (majority cycle resolved by Schulze)" : "")
                << "\n";
      return 0;
    }

    if (cmd_compare->parsed()) {
      const auto names_a = rrank::io::read_ranking_names(resolve_input(rank_a));
      const auto names_b = rrank::io::read_ranking_names(resolve_input(rank_b));
      if (names_a.size() != names_b.size())
        rrank::fail(rrank::errc::dimension_mismatch, "rankings cover different numbers of alternatives");
      std::map<std::string, int> pos_b;
      for (std::size_t r = 0; r < names_b.size(); ++r) pos_b[names_b[r]] = static_cast<int>(r);
      std::vector<int> p1(names_a.size()), p2(names_a.size());
      for (std::size_t r = 0; r < names_a.size(); ++r) {
        const auto it = pos_b.find(names_a[r]);
        if (it == pos_b.end())
          rrank::fail(rrank::errc::dimension_mismatch,
                      "alternative '" + names_a[r] + "' missing from second ranking");
        p1[r] = static_cast<int>(r);
        p2[r] = it->second;
      }
      std::cout << "kendall_tau = "
                << rrank::io::format_g6(rrank::kendall_tau_from_positions(p1, p2)) << "\n";
      return 0;
    }

    if (cmd_reproduce->parsed()) {
      const auto dm = load_matrix(s);
      rrank::PipelineConfig cfg;
      cfg.weights = parse_weights(s.wvec);
      cfg.samples = s.samples;
      cfg.seed = s.seed;
      cfg.threads = s.threads;
      // presence of --order selects the ordinal sampler for methodologies 2/3
      if (!s.order.empty()) {
        cfg.sampler = rrank::WeightSampler::ordinal;
        cfg.preference_order = parse_order(s.order, dm.criteria);
      }
      const auto dir = ensure_outdir(s);
      auto emit_m1 = [&](const rrank::Methodology1Result& m1) {
        rrank::io::write_correlation((dir / "correlation.csv").string(), dm.criteria, m1.rho);
        rrank::io::write_json((dir / "capacity_u1.json").string(),
                              rrank::io::capacity_json(dm.criteria, m1.u1, "u1"));
        rrank::io::write_json((dir / "capacity_u2.json").string(),
                              rrank::io::capacity_json(dm.criteria, m1.u2, "u2"));
        rrank::io::write_scores((dir / "scores_ws.csv").string(), dm.alternatives, m1.ws_scores);
        rrank::io::write_scores((dir / "scores_ci-u1.csv").string(), dm.alternatives, m1.ci_u1_scores);
        rrank::io::write_scores((dir / "scores_ci-u2.csv").string(), dm.alternatives, m1.ci_u2_scores);
        rrank::io::write_ranking((dir / "ranking_ws.csv").string(), dm.alternatives, m1.ws_ranking,
                                 &m1.ws_scores);
        rrank::io::write_ranking((dir / "ranking_ci-u1.csv").string(), dm.alternatives,
                                 m1.ci_u1_ranking, &m1.ci_u1_scores);
        rrank::io::write_ranking((dir / "ranking_ci-u2.csv").string(), dm.alternatives,
                                 m1.ci_u2_ranking, &m1.ci_u2_scores);
        rrank::io::ordered_json taus;
        taus["tau_ws_ci_u1"] = rrank::io::num6(m1.tau_ws_ci_u1);
        taus["tau_ws_ci_u2"] = rrank::io::num6(m1.tau_ws_ci_u2);
        rrank::io::write_json((dir / "tau_methodology1.json").string(), taus);
      };
      auto emit_smaa = [&](const rrank::SmaaResult& r, const std::string& tag) {
        rrank::io::write_acceptability((dir / ("acceptability_" + tag + ".csv")).string(),
                                       dm.alternatives, r.acceptability);
        rrank::io::write_pairwise((dir / ("pairwise_" + tag + ".csv")).string(), dm.alternatives,
                                  r.pairwise);
        rrank::io::write_json((dir / ("central_weights_" + tag + ".json")).string(),
                              rrank::io::central_weights_json(dm.alternatives, dm.criteria, r));
      };
      if (methodology == 1) {
        emit_m1(rrank::run_methodology_1(dm, cfg.weights, cfg.u1_tol));
      } else if (methodology == 2) {
        const auto m2 = rrank::run_methodology_2(dm, cfg);
        emit_m1(m2.base);
        emit_smaa(m2.smaa_ws, "ws");
        emit_smaa(m2.smaa_ci_u1, "ci-u1");
        emit_smaa(m2.smaa_ci_u2, "ci-u2");
      } else if (methodology == 3) {
        const auto m3 = rrank::run_methodology_3(dm, cfg);
        emit_m1(m3.runs.base);
        emit_smaa(m3.runs.smaa_ws, "ws");
        emit_smaa(m3.runs.smaa_ci_u1, "ci-u1");
        emit_smaa(m3.runs.smaa_ci_u2, "ci-u2");
        rrank::io::write_ranking((dir / "ranking_ws-cond.csv").string(), dm.alternatives,
                                 m3.ws_cond.ranking);
        rrank::io::write_ranking((dir / "ranking_ci-u1-cond.csv").string(), dm.alternatives,
                                 m3.ci_u1_cond.ranking);
        rrank::io::write_ranking((dir / "ranking_ci-u2-cond.csv").string(), dm.alternatives,
                                 m3.ci_u2_cond.ranking);
        rrank::io::write_json((dir / "condorcet_ws.json").string(),
                              rrank::io::condorcet_json(dm.alternatives, m3.ws_cond));
        rrank::io::write_json((dir / "condorcet_ci-u1.json").string(),
                              rrank::io::condorcet_json(dm.alternatives, m3.ci_u1_cond));
        rrank::io::write_json((dir / "condorcet_ci-u2.json").string(),
                              rrank::io::condorcet_json(dm.alternatives, m3.ci_u2_cond));
        rrank::io::write_tau_table((dir / "tau_table.csv").string(), m3.ranking_names, m3.tau_table);
        for (const auto& dist : m3.distributions)
          rrank::io::write_json((dir / ("tau_dist_" + dist.name + ".json")).string(),
                                rrank::io::tau_distribution_json(dist, s.raw));
      } else {
        rrank::fail(rrank::errc::invalid_config, "--methodology must be 1, 2 or 3");
      }
      std::cout << "wrote methodology " << methodology << " bundle to " << dir.string() << "\n";
      return 0;
    }
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const rrank::Error& e) {
    std::cerr << "error (" << rrank::errc_name(e.code()) << "): " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
