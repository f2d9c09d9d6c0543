#pragma once

#include "limavg/game.hpp"
#include "limavg/rational.hpp"

#include <vector>

namespace limavg {

using Valuation = std::vector<Rational>;

enum class SolverMode { Exact, Numeric, Auto };

struct ShapleyResult {
  Valuation values;
  StationaryStrategy strategy1;
  StationaryStrategy strategy2;
};

// One exact application of the discounted operator: per state, the value and
// optimal mixed strategies of the matrix game with entries
//   beta * r(s,a,b) + (1 - beta) * sum_t delta(s,a,b)(t) * v(t).
// A (1-beta)-contraction in the sup norm.
ShapleyResult shapley_operator(const StochasticGame& g, const Rational& beta, const Valuation& v);

struct DiscountedConfig {
  SolverMode mode = SolverMode::Auto;
  // safety cap on operator applications; hitting it clears `converged`
  long max_iterations = 2000000;
};

struct DiscountedSolution {
  Valuation values;
  StationaryStrategy strategy1;
  StationaryStrategy strategy2;
  long iterations = 0;
  Rational residual;     // last sup-norm change
  Rational error_bound;  // residual * (1 - beta) / beta
  bool converged = true;
  SolverMode mode_used = SolverMode::Exact;
};

// Iterates the operator from the zero valuation until the sup-norm change
// drops to tol * beta / (1 - beta), which pins the true discounted value
// within tol of the result. Auto mode runs exact rationals when the game is
// small and the a-priori iteration count stays modest (n * |delta| <= 64 and
// <= 256 iterations), double precision otherwise; numeric results are
// converted back to (dyadic) rationals, so the a-posteriori bound always
// refers to the returned numbers.
DiscountedSolution discounted_value(const StochasticGame& g, const Rational& beta,
                                    const Rational& tol, const DiscountedConfig& cfg = {});

// Least k with reward_span * (1-beta)^k <= tol * beta / (1-beta): the a-priori
// iteration count for value iteration started at zero. Refuses counts beyond
// 10^7, where the exact predicate would be astronomically large.
long iteration_bound(const Rational& beta, const Rational& tol, const Rational& reward_span);

}  // namespace limavg
