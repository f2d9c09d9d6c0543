#include "limavg/approximate.hpp"
#include "limavg/chain.hpp"
#include "limavg/formula_io.hpp"
#include "limavg/game_io.hpp"
#include "limavg/sentence.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

namespace {

using namespace limavg;
using nlohmann::ordered_json;

Rational arg_rational(const std::string& text, const std::string& name) {
  try {
    return parse_rational(text);
  } catch (const std::exception&) {
    throw std::runtime_error("option " + name + ": not a rational: " + text);
  }
}

ordered_json rat(const Rational& q) { return to_string(q); }

// options shared by the oracle-driven commands
struct OracleOptions {
  std::string schedule;
  std::string discount_tol;
  std::string margin;
  int window = 0;
  std::string solver;
  long max_iterations = 0;
};

void add_oracle_options(CLI::App* cmd, OracleOptions& o) {
  cmd->add_option("--beta-schedule", o.schedule,
                  "comma-separated decreasing discounts, e.g. 1/2,1/4,1/8");
  cmd->add_option("--discount-tol", o.discount_tol, "stabilization tolerance (default 1/1000000)");
  cmd->add_option("--margin", o.margin, "extra uncertainty margin around thresholds");
  cmd->add_option("--window", o.window, "stabilization window length (default 3)");
  cmd->add_option("--solver", o.solver, "discounted solver mode: auto|exact|numeric")
      ->check(CLI::IsMember({"auto", "exact", "numeric"}));
  cmd->add_option("--max-iterations", o.max_iterations, "cap on operator applications per solve");
}

OracleConfig build_config(const OracleOptions& o) {
  OracleConfig cfg;
  if (!o.schedule.empty()) {
    cfg.beta_schedule.clear();
    std::stringstream ss(o.schedule);
    std::string item;
    while (std::getline(ss, item, ','))
      cfg.beta_schedule.push_back(arg_rational(item, "--beta-schedule"));
  }
  if (!o.discount_tol.empty()) cfg.discount_tol = arg_rational(o.discount_tol, "--discount-tol");
  if (!o.margin.empty()) cfg.margin = arg_rational(o.margin, "--margin");
  if (o.window > 0) cfg.stabilization_window = o.window;
  if (o.solver == "exact") cfg.discounted.mode = SolverMode::Exact;
  if (o.solver == "numeric") cfg.discounted.mode = SolverMode::Numeric;
  if (o.max_iterations > 0) cfg.discounted.max_iterations = o.max_iterations;
  return cfg;
}

ordered_json estimate_diagnostics(const VanishingEstimate& est) {
  ordered_json table = ordered_json::array();
  for (const auto& [beta, value] : est.table)
    table.push_back({{"beta", rat(beta)}, {"value", rat(value)}});
  return {{"estimate", rat(est.estimate)},
          {"stabilized", est.stabilized},
          {"all_converged", est.all_converged},
          {"non_monotone_tail", est.non_monotone_tail},
          {"discount_table", table}};
}

void emit(const ordered_json& j) { std::cout << j.dump(2) << "\n"; }

int run_value(const std::string& game_path, int state, const std::string& epsilon_text,
              const std::string& backend, const OracleOptions& oracle_opts, bool json) {
  StochasticGame g = load_game_file(game_path);
  Rational epsilon = arg_rational(epsilon_text, "--epsilon");
  OracleConfig cfg = build_config(oracle_opts);

  if (backend == "export") {
    cfg.backend = OracleBackend::ExportOnly;
    QueryPlan plan = make_query_plan(g, state, epsilon, cfg);
    if (json) {
      ordered_json out{{"backend", "export"},
                       {"iterations", plan.iterations},
                       {"first_midpoint", rat(plan.first_midpoint)},
                       {"scale", rat(plan.scale)},
                       {"degenerate", plan.degenerate},
                       {"instructions", plan.instructions},
                       {"normalized_game", plan.degenerate
                                               ? ordered_json()
                                               : ordered_json::parse(plan.normalized_game_json)},
                       {"sentence_smt2", plan.sentence_smt2}};
      emit(out);
    } else {
      std::cout << plan.instructions;
      if (!plan.degenerate) {
        std::cout << "--- normalized game ---\n"
                  << plan.normalized_game_json << "--- first sentence (SMT-LIB 2) ---\n"
                  << plan.sentence_smt2;
      }
    }
    return 0;
  }

  UnnormalizedResult res = approximate_value_unnormalized(g, state, epsilon, cfg);
  if (json) {
    ordered_json transcript = ordered_json::array();
    for (const auto& [m, verdict] : res.normalized.oracle_transcript)
      transcript.push_back({{"midpoint", rat(m)}, {"verdict", verdict}});
    ordered_json diagnostics{
        {"heuristic", res.normalized.heuristic},
        {"safe_interval", {rat(res.safe_lower), rat(res.safe_upper)}},
        {"normalized_interval", {rat(res.normalized.lower), rat(res.normalized.upper)}},
        {"scale", rat(res.record.m_scale)},
        {"degenerate", res.record.degenerate},
    };
    if (res.normalized.oracle_diagnostics)
      diagnostics["oracle"] = estimate_diagnostics(*res.normalized.oracle_diagnostics);
    emit({{"interval", {rat(res.lower), rat(res.upper)}},
          {"iterations", res.normalized.iterations},
          {"transcript", transcript},
          {"diagnostics", diagnostics}});
  } else {
    std::cout << "interval [" << to_string(res.lower) << ", " << to_string(res.upper) << "]\n"
              << "iterations " << res.normalized.iterations << "\n";
    for (const auto& [m, verdict] : res.normalized.oracle_transcript)
      std::cout << "  midpoint " << to_string(m) << " -> " << (verdict ? "true" : "false") << "\n";
    if (res.normalized.heuristic)
      std::cout << "heuristic verdicts involved; safe interval [" << to_string(res.safe_lower)
                << ", " << to_string(res.safe_upper) << "]\n";
  }
  return 0;
}

int run_decide(const std::string& game_path, int state, const std::string& alpha_text,
               const OracleOptions& oracle_opts, bool json) {
  StochasticGame g = load_game_file(game_path);
  Rational alpha = arg_rational(alpha_text, "--alpha");
  OracleConfig cfg = build_config(oracle_opts);

  auto [gn, record] = normalize(g);
  bool verdict, uncertain;
  ordered_json diagnostics;
  Rational estimate(0);
  if (record.degenerate) {
    verdict = Rational(0) > alpha;
    uncertain = false;
    diagnostics = {{"degenerate", true}};
  } else {
    // map the threshold into the normalized reward scale
    Rational alpha_n = (alpha + record.m_scale) / (2 * record.m_scale);
    ThresholdDecision d = decide_threshold(gn, state, alpha_n, cfg);
    verdict = d.verdict;
    uncertain = d.uncertain;
    estimate = record.m_scale * (2 * d.oracle.estimate - 1);
    diagnostics = estimate_diagnostics(d.oracle);
    diagnostics["degenerate"] = false;
    diagnostics["scale"] = rat(record.m_scale);
    diagnostics["normalized_alpha"] = rat(alpha_n);
  }
  if (json) {
    emit({{"verdict", verdict},
          {"uncertain", uncertain},
          {"alpha", rat(alpha)},
          {"estimate", rat(estimate)},
          {"diagnostics", diagnostics}});
  } else {
    std::cout << "value > " << to_string(alpha) << ": " << (verdict ? "true" : "false")
              << (uncertain ? " (uncertain)" : "") << "\n"
              << "estimate " << to_string(estimate) << "\n";
  }
  return uncertain ? 3 : 0;
}

FormulaPtr build_requested_sentence(const std::string& game_path, int state,
                                    const std::string& alpha_text, bool normalized,
                                    bool do_rationalize) {
  StochasticGame g = load_game_file(game_path);
  Rational alpha = arg_rational(alpha_text, "--alpha");
  if (normalized) {
    auto [gn, record] = normalize(g);
    if (record.degenerate)
      throw std::runtime_error("cannot normalize an all-zero-reward game");
    g = gn;
  }
  FormulaPtr f = build_value_sentence(g, state, alpha);
  if (do_rationalize) f = rationalize(f);
  return f;
}

int run_sentence(const std::string& game_path, int state, const std::string& alpha_text,
                 const std::string& out_path, const std::string& format, bool normalized,
                 bool do_rationalize) {
  FormulaPtr f = build_requested_sentence(game_path, state, alpha_text, normalized, do_rationalize);
  SentenceFormat fmt = format == "json" ? SentenceFormat::JsonAst : SentenceFormat::Smtlib2;
  std::string text = export_sentence(f, fmt);
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + out_path);
  out << text;
  if (!out) throw std::runtime_error("write failed: " + out_path);
  return 0;
}

int run_census(const std::string& game_path, int state, const std::string& alpha_text,
               bool normalized, bool do_rationalize, bool discounted, bool json) {
  StochasticGame g = load_game_file(game_path);
  Rational alpha = arg_rational(alpha_text, "--alpha");
  if (normalized) {
    auto [gn, record] = normalize(g);
    if (record.degenerate) throw std::runtime_error("cannot normalize an all-zero-reward game");
    g = gn;
  }
  FormulaPtr f = discounted ? build_discounted_sentence(g, state, alpha)
                            : build_value_sentence(g, state, alpha);
  if (do_rationalize) f = rationalize(f);
  FormulaCensus c = census(*f);

  const char* ring = c.ring == CoefficientRing::Integer
                         ? "integer"
                         : (c.ring == CoefficientRing::Rational ? "rational" : "symbolic");
  if (json) {
    ordered_json blocks = ordered_json::array();
    for (const auto& b : c.blocks)
      blocks.push_back({{"kind", b.universal ? "forall" : "exists"}, {"width", b.width}});
    ordered_json out{{"sentence", discounted ? "discounted" : "value"},
                     {"atoms", c.atoms},
                     {"quantified_variables", c.quantified_variables},
                     {"blocks", blocks},
                     {"degree", c.degree},
                     {"length", c.length},
                     {"size_bits", c.bits ? ordered_json(c.bits->get_str()) : ordered_json()},
                     {"coefficient_ring", ring}};
    emit(out);
  } else {
    std::cout << "atoms " << c.atoms << "\n"
              << "quantified_variables " << c.quantified_variables << "\n"
              << "blocks";
    for (const auto& b : c.blocks) std::cout << " " << (b.universal ? "forall" : "exists") << ":" << b.width;
    std::cout << "\ndegree " << c.degree << "\n"
              << "length " << c.length << "\n"
              << "size_bits " << (c.bits ? c.bits->get_str() : std::string("n/a")) << "\n"
              << "coefficient_ring " << ring << "\n";
  }
  return 0;
}

int run_eval(const std::string& game_path, const std::string& s1_path, const std::string& s2_path,
             int state, long simulate, std::uint64_t seed, bool json) {
  StochasticGame g = load_game_file(game_path);
  StationaryStrategy s1 = load_strategy_file(s1_path, g, 1);
  StationaryStrategy s2 = load_strategy_file(s2_path, g, 2);

  if (simulate > 0) {
    SimulationResult sim = simulate_play(g, s1, s2, state, simulate, seed);
    std::cout << "step,state,action1,action2,reward,running_average\n";
    long step = 1;
    for (const auto& row : sim.steps) {
      const int s = row.state - 1;
      std::cout << step++ << "," << row.state << ","
                << g.actions[static_cast<size_t>(g.moves1[s][static_cast<size_t>(row.move1)])] << ","
                << g.actions[static_cast<size_t>(g.moves2[s][static_cast<size_t>(row.move2)])] << ","
                << to_string(row.reward) << "," << to_string(row.running_average) << "\n";
    }
    return 0;
  }

  RewardChain chain = induced_chain(g, s1, s2);
  std::vector<Rational> all = long_run_average_all(chain);
  if (state < 1 || state > g.num_states)
    throw std::runtime_error("state out of range: " + std::to_string(state));
  if (json) {
    ordered_json per_state = ordered_json::array();
    for (const auto& v : all) per_state.push_back(rat(v));
    emit({{"state", state},
          {"long_run_average", rat(all[static_cast<size_t>(state - 1)])},
          {"all_states", per_state}});
  } else {
    std::cout << "long-run average at state " << state << ": "
              << to_string(all[static_cast<size_t>(state - 1)]) << "\n";
  }
  return 0;
}

int run_perturb(const std::string& game_path, const std::string& game2_path, bool json) {
  StochasticGame g = load_game_file(game_path);
  StochasticGame g2 = load_game_file(game2_path);
  PerturbationBound b = perturbation_bound(g, g2);
  if (json) {
    emit({{"eta", b.eta ? rat(*b.eta) : ordered_json()},
          {"gamma", rat(b.gamma)},
          {"rho", b.rho ? rat(*b.rho) : ordered_json()}});
  } else {
    std::cout << "eta " << (b.eta ? to_string(*b.eta) : std::string("none")) << "\n"
              << "gamma " << to_string(b.gamma) << "\n"
              << "rho " << (b.rho ? to_string(*b.rho) : std::string("none")) << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"solver toolkit for limit-average stochastic games"};
  app.require_subcommand(1);

  std::string game_path, game2_path, out_path, alpha_text, epsilon_text;
  std::string backend = "numeric", format = "smt2", s1_path, s2_path;
  int state = 1;
  bool json = false, normalized = false, do_rationalize = false, discounted = false;
  long simulate = 0;
  std::uint64_t seed = 1;
  OracleOptions oracle_opts;

  auto* value = app.add_subcommand("value", "approximate the limit-average value of a state");
  value->add_option("--game", game_path, "game file (JSON)")->required();
  value->add_option("--state", state, "1-based state id")->required();
  value->add_option("--epsilon", epsilon_text, "target interval half-width (rational)")->required();
  value->add_option("--backend", backend, "numeric|export")
      ->check(CLI::IsMember({"numeric", "export"}));
  value->add_flag("--json", json, "emit JSON");
  add_oracle_options(value, oracle_opts);

  auto* decide = app.add_subcommand("decide", "decide whether the value exceeds a threshold");
  decide->add_option("--game", game_path, "game file (JSON)")->required();
  decide->add_option("--state", state, "1-based state id")->required();
  decide->add_option("--alpha", alpha_text, "threshold (rational)")->required();
  decide->add_flag("--json", json, "emit JSON");
  add_oracle_options(decide, oracle_opts);

  auto* sentence = app.add_subcommand("sentence", "export the threshold sentence for a solver");
  sentence->add_option("--game", game_path, "game file (JSON)")->required();
  sentence->add_option("--state", state, "1-based state id")->required();
  sentence->add_option("--alpha", alpha_text, "threshold (rational)")->required();
  sentence->add_option("--out", out_path, "output file")->required();
  sentence->add_option("--format", format, "smt2|json")->check(CLI::IsMember({"smt2", "json"}));
  sentence->add_flag("--normalized", normalized, "build from the [0,1]-normalized game");
  sentence->add_flag("--rationalize", do_rationalize, "integer coefficients via z variables");

  auto* census_cmd = app.add_subcommand("census", "complexity parameters of the sentence");
  census_cmd->add_option("--game", game_path, "game file (JSON)")->required();
  census_cmd->add_option("--state", state, "1-based state id")->required();
  census_cmd->add_option("--alpha", alpha_text, "threshold (rational)")->required();
  census_cmd->add_flag("--normalized", normalized, "build from the [0,1]-normalized game");
  census_cmd->add_flag("--rationalize", do_rationalize, "census after rationalization");
  census_cmd->add_flag("--discounted", discounted, "census the discounted sentence instead");
  census_cmd->add_flag("--json", json, "emit JSON");

  auto* eval = app.add_subcommand("eval", "evaluate a fixed stationary strategy pair");
  eval->add_option("--game", game_path, "game file (JSON)")->required();
  eval->add_option("--strategy1", s1_path, "player 1 strategy file")->required();
  eval->add_option("--strategy2", s2_path, "player 2 strategy file")->required();
  eval->add_option("--state", state, "1-based start state")->required();
  eval->add_option("--simulate", simulate, "emit a CSV trace of this many sampled rounds");
  eval->add_option("--seed", seed, "simulation seed (default 1)");
  eval->add_flag("--json", json, "emit JSON");

  auto* perturb = app.add_subcommand("perturb", "reward/transition distance and value bound");
  perturb->add_option("--game", game_path, "first game file")->required();
  perturb->add_option("--game2", game2_path, "second game file")->required();
  perturb->add_flag("--json", json, "emit JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (app.got_subcommand(value))
      return run_value(game_path, state, epsilon_text, backend, oracle_opts, json);
    if (app.got_subcommand(decide))
      return run_decide(game_path, state, alpha_text, oracle_opts, json);
    if (app.got_subcommand(sentence))
      return run_sentence(game_path, state, alpha_text, out_path, format, normalized,
                          do_rationalize);
    if (app.got_subcommand(census_cmd))
      return run_census(game_path, state, alpha_text, normalized, do_rationalize, discounted,
                        json);
    if (app.got_subcommand(eval))
      return run_eval(game_path, s1_path, s2_path, state, simulate, seed, json);
    if (app.got_subcommand(perturb)) return run_perturb(game_path, game2_path, json);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
