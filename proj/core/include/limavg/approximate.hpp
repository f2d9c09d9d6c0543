#pragma once

#include "limavg/discounted.hpp"
#include "limavg/game.hpp"

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace limavg {

// The threshold oracle "is the limit-average value of state s above alpha"
// comes in two backends: Numeric probes the discounted values along a
// vanishing beta schedule; ExportOnly emits the threshold sentence for an
// external quantified-arithmetic solver and never answers itself.
enum class OracleBackend { Numeric, ExportOnly };

struct OracleConfig {
  OracleBackend backend = OracleBackend::Numeric;
  std::vector<Rational> beta_schedule;  // strictly decreasing, inside (0,1)
  Rational discount_tol{1, 1000000};
  int stabilization_window = 3;
  Rational margin{0};
  DiscountedConfig discounted;  // forwarded to every discounted solve

  OracleConfig();  // fills beta_schedule with 2^-1 .. 2^-20
};

// Probes v^beta(state) down the schedule, stopping once the last
// `stabilization_window` values pairwise agree within discount_tol. The
// estimate is the last computed value; the full (beta, value) table is kept.
// `non_monotone_tail` flags a tail (last window+1 entries) that is neither
// nondecreasing nor nonincreasing: the limit is approached monotonically only
// eventually, and a wobbling tail means the schedule may not be deep enough.
struct VanishingEstimate {
  Rational estimate{0};
  std::vector<std::pair<Rational, Rational>> table;
  bool stabilized = false;
  bool all_converged = true;
  bool non_monotone_tail = false;
};

// Requires a valid game with all rewards already inside [0,1].
VanishingEstimate vanishing_discount_estimate(const StochasticGame& g, int state,
                                              const OracleConfig& cfg);

// verdict = (estimate > alpha). The verdict is trustworthy only when the
// estimate landed strictly further than discount_tol + margin from alpha and
// the schedule stabilized with every solve converged; otherwise `uncertain`.
struct ThresholdDecision {
  bool verdict = false;
  bool uncertain = false;
  VanishingEstimate oracle;
};

ThresholdDecision decide_threshold(const StochasticGame& g, int state, const Rational& alpha,
                                   const OracleConfig& cfg);

// One oracle answer inside the binary search: the verdict for "value > m",
// whether it is certain, and (for uncertain answers) the slack by which the
// true value may sit on the other side of m.
struct OracleAnswer {
  bool verdict = false;
  bool uncertain = false;
  Rational slack{0};
};

using ThresholdOracle = std::function<OracleAnswer(const Rational&)>;

// Binary-search output. lower/upper is the exact dyadic bracket: after i
// iterations from [0,1] both are integer multiples of 2^-i and the width is
// exactly 2^-i. safe_lower/safe_upper additionally debit the slack of every
// uncertain verdict the bracket rests on (safe_lower <= lower,
// safe_upper >= upper); they coincide with the bracket when every verdict was
// certain. `heuristic` is set as soon as any verdict was uncertain.
struct IntervalResult {
  Rational lower{0};
  Rational upper{1};
  int iterations = 0;
  std::vector<std::pair<Rational, bool>> oracle_transcript;  // (midpoint, verdict)
  Integer dyadic_denominator{1};                             // 2^iterations
  bool heuristic = false;
  Rational safe_lower{0};
  Rational safe_upper{1};
  std::optional<VanishingEstimate> oracle_diagnostics;
};

// Halves [0,1] `iterations` times, keeping the half the oracle points to:
// verdict true at midpoint m moves the lower bound to m, false moves the
// upper bound.
IntervalResult bisect_value(const ThresholdOracle& oracle, int iterations);

// Runs bisect_value for ceil(log2(1/epsilon)) iterations against the numeric
// threshold oracle. The vanishing-discount estimate does not depend on the
// midpoint, so it is computed once and every verdict is a comparison against
// it. Requires rewards in [0,1], 0 < epsilon < 1, and the numeric backend.
IntervalResult approximate_value(const StochasticGame& g, int state, const Rational& epsilon,
                                 const OracleConfig& cfg);

// normalize -> approximate_value at epsilon/(2M) -> map the interval back to
// the original reward scale. The all-zero-reward game short-circuits to
// [0,0]. A tolerance ratio >= 1 is clamped to 1/2 so at least one iteration
// runs.
struct UnnormalizedResult {
  Rational lower{0};
  Rational upper{0};
  Rational safe_lower{0};
  Rational safe_upper{0};
  NormalizationRecord record;
  IntervalResult normalized;
};

UnnormalizedResult approximate_value_unnormalized(const StochasticGame& g, int state,
                                                  const Rational& epsilon, const OracleConfig& cfg);

// The export backend's product: the number of rounds, the first midpoint,
// the normalized game, the threshold sentence for that midpoint, and the
// recipe for driving the remaining rounds with an external solver. The search
// tree is not pre-expanded; each later sentence is regenerated on demand.
struct QueryPlan {
  int iterations = 0;
  Rational first_midpoint{1, 2};
  Rational scale{0};  // M in the reward map r -> (r + M) / (2M)
  bool degenerate = false;
  std::string normalized_game_json;
  std::string sentence_smt2;
  std::string instructions;
};

QueryPlan make_query_plan(const StochasticGame& g, int state, const Rational& epsilon,
                          const OracleConfig& cfg);

}  // namespace limavg
