#include "limavg/approximate.hpp"

#include "limavg/formula_io.hpp"
#include "limavg/game_io.hpp"
#include "limavg/sentence.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace limavg {

OracleConfig::OracleConfig() {
  for (long k = 1; k <= 20; ++k) beta_schedule.push_back(pow2(-k));
}

namespace {

void require_config(const OracleConfig& cfg) {
  if (cfg.beta_schedule.empty()) throw std::invalid_argument("beta schedule is empty");
  for (size_t i = 0; i < cfg.beta_schedule.size(); ++i) {
    const Rational& b = cfg.beta_schedule[i];
    if (b <= 0 || b >= 1) throw std::invalid_argument("beta schedule entries must lie in (0,1)");
    if (i > 0 && b >= cfg.beta_schedule[i - 1])
      throw std::invalid_argument("beta schedule must be strictly decreasing");
  }
  if (cfg.discount_tol <= 0) throw std::invalid_argument("discount_tol must be positive");
  if (cfg.stabilization_window < 1)
    throw std::invalid_argument("stabilization_window must be at least 1");
  if (cfg.margin < 0) throw std::invalid_argument("margin must be nonnegative");
}

void require_normalized(const StochasticGame& g) {
  auto rep = validate_game(g);
  if (!rep.ok()) throw std::invalid_argument("invalid game: " + rep.violations.front());
  for (const auto& sc : g.cells)
    for (const auto& c : sc)
      if (c.defined && (c.reward < 0 || c.reward > 1))
        throw std::invalid_argument("rewards must lie in [0,1]; normalize the game first");
}

void require_state(const StochasticGame& g, int state) {
  if (state < 1 || state > g.num_states)
    throw std::out_of_range("state out of range: " + std::to_string(state));
}

}  // namespace

VanishingEstimate vanishing_discount_estimate(const StochasticGame& g, int state,
                                              const OracleConfig& cfg) {
  require_normalized(g);
  require_state(g, state);
  require_config(cfg);

  VanishingEstimate out;
  const size_t window = static_cast<size_t>(cfg.stabilization_window);
  for (const Rational& beta : cfg.beta_schedule) {
    DiscountedSolution sol = discounted_value(g, beta, cfg.discount_tol, cfg.discounted);
    out.table.emplace_back(beta, sol.values[state - 1]);
    out.all_converged = out.all_converged && sol.converged;
    if (out.table.size() >= window) {
      Rational lo = out.table.back().second, hi = lo;
      for (size_t i = out.table.size() - window; i < out.table.size(); ++i) {
        lo = std::min(lo, out.table[i].second);
        hi = std::max(hi, out.table[i].second);
      }
      if (hi - lo <= cfg.discount_tol) {
        out.stabilized = true;
        break;
      }
    }
  }
  out.estimate = out.table.back().second;

  const size_t tail = std::min(out.table.size(), window + 1);
  bool up = true, down = true;
  for (size_t i = out.table.size() - tail + 1; i < out.table.size(); ++i) {
    if (out.table[i].second < out.table[i - 1].second) up = false;
    if (out.table[i].second > out.table[i - 1].second) down = false;
  }
  out.non_monotone_tail = !(up || down);
  return out;
}

ThresholdDecision decide_threshold(const StochasticGame& g, int state, const Rational& alpha,
                                   const OracleConfig& cfg) {
  if (cfg.backend != OracleBackend::Numeric)
    throw std::invalid_argument("export-only backend cannot produce a verdict");
  ThresholdDecision out;
  out.oracle = vanishing_discount_estimate(g, state, cfg);
  out.verdict = out.oracle.estimate > alpha;
  out.uncertain = !out.oracle.stabilized || !out.oracle.all_converged ||
                  abs(out.oracle.estimate - alpha) <= cfg.discount_tol + cfg.margin;
  return out;
}

IntervalResult bisect_value(const ThresholdOracle& oracle, int iterations) {
  if (iterations < 0) throw std::invalid_argument("iteration count must be nonnegative");
  IntervalResult res;
  res.iterations = iterations;
  for (int it = 0; it < iterations; ++it) {
    Rational m = (res.lower + res.upper) / 2;
    OracleAnswer a = oracle(m);
    res.oracle_transcript.emplace_back(m, a.verdict);
    if (a.uncertain) res.heuristic = true;
    const Rational slack = a.uncertain ? a.slack : Rational(0);
    if (a.verdict) {
      res.lower = m;
      Rational floor = m - slack;
      res.safe_lower = std::max(res.safe_lower, floor);
    } else {
      res.upper = m;
      Rational ceiling = m + slack;
      res.safe_upper = std::min(res.safe_upper, ceiling);
    }
  }
  Integer denom;
  mpz_ui_pow_ui(denom.get_mpz_t(), 2, static_cast<unsigned long>(iterations));
  res.dyadic_denominator = denom;
  return res;
}

IntervalResult approximate_value(const StochasticGame& g, int state, const Rational& epsilon,
                                 const OracleConfig& cfg) {
  if (cfg.backend != OracleBackend::Numeric)
    throw std::invalid_argument("export-only backend cannot produce a verdict");
  require_normalized(g);
  require_state(g, state);
  require_config(cfg);
  if (epsilon <= 0 || epsilon >= 1) throw std::invalid_argument("epsilon must lie in (0,1)");
  long iterations = ceil_log2_inverse(epsilon);
  if (iterations > 1000000) throw std::invalid_argument("epsilon is too small");

  // the estimate does not depend on the threshold, so one schedule run
  // answers every query
  VanishingEstimate est = vanishing_discount_estimate(g, state, cfg);
  const Rational slack = cfg.discount_tol + cfg.margin;
  const bool shaky = !est.stabilized || !est.all_converged;
  ThresholdOracle oracle = [&](const Rational& m) -> OracleAnswer {
    OracleAnswer a;
    a.verdict = est.estimate > m;
    a.uncertain = shaky || abs(est.estimate - m) <= slack;
    a.slack = slack;
    return a;
  };
  IntervalResult res = bisect_value(oracle, static_cast<int>(iterations));
  res.oracle_diagnostics = std::move(est);
  return res;
}

UnnormalizedResult approximate_value_unnormalized(const StochasticGame& g, int state,
                                                  const Rational& epsilon,
                                                  const OracleConfig& cfg) {
  auto rep = validate_game(g);
  if (!rep.ok()) throw std::invalid_argument("invalid game: " + rep.violations.front());
  require_state(g, state);
  if (epsilon <= 0) throw std::invalid_argument("epsilon must be positive");

  UnnormalizedResult out;
  auto [gn, record] = normalize(g);
  out.record = record;
  if (record.degenerate) return out;  // value is identically zero

  Rational eps = epsilon / (2 * record.m_scale);
  if (eps >= 1) eps = Rational(1, 2);
  out.normalized = approximate_value(gn, state, eps, cfg);
  auto iv = denormalize_interval({out.normalized.lower, out.normalized.upper}, record);
  out.lower = iv.first;
  out.upper = iv.second;
  auto safe = denormalize_interval({out.normalized.safe_lower, out.normalized.safe_upper}, record);
  out.safe_lower = safe.first;
  out.safe_upper = safe.second;
  return out;
}

QueryPlan make_query_plan(const StochasticGame& g, int state, const Rational& epsilon,
                          const OracleConfig& cfg) {
  auto rep = validate_game(g);
  if (!rep.ok()) throw std::invalid_argument("invalid game: " + rep.violations.front());
  require_state(g, state);
  require_config(cfg);
  if (epsilon <= 0) throw std::invalid_argument("epsilon must be positive");

  QueryPlan plan;
  auto [gn, record] = normalize(g);
  plan.scale = record.m_scale;
  if (record.degenerate) {
    plan.degenerate = true;
    plan.instructions = "All rewards are zero, so the value is 0 at every state; nothing to query.\n";
    return plan;
  }
  Rational eps = epsilon / (2 * record.m_scale);
  if (eps >= 1) eps = Rational(1, 2);
  plan.iterations = static_cast<int>(ceil_log2_inverse(eps));
  plan.first_midpoint = Rational(1, 2);
  plan.normalized_game_json = game_to_json(gn);
  plan.sentence_smt2 =
      export_sentence(build_value_sentence(gn, state, plan.first_midpoint), SentenceFormat::Smtlib2);

  std::ostringstream os;
  os << "Binary search for the limit-average value of state " << state
     << " of the normalized game (rewards mapped by r -> (r + M) / (2M), M = "
     << to_string(plan.scale) << ").\n"
     << "Maintain [l, u], starting from [0, 1]; the midpoint is m = (l + u) / 2.\n"
     << "Round 1 of " << plan.iterations
     << ": decide the attached sentence (threshold m = 1/2) with a solver for quantified\n"
     << "nonlinear real arithmetic. sat means value > m: set l = m; unsat: set u = m.\n"
     << "For each later round, rebuild the sentence for the new midpoint with\n"
     << "  limavg sentence --game <normalized game file> --state " << state
     << " --alpha <m> --out <file>\n"
     << "using the normalized game embedded in this plan. After " << plan.iterations
     << " rounds, u - l = 2^-" << plan.iterations << ".\n"
     << "Map the bracket back to the original reward scale via [M(2l - 1), M(2u - 1)].\n";
  plan.instructions = os.str();
  return plan;
}

}  // namespace limavg
