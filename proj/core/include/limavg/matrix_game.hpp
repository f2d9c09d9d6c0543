#pragma once

#include "limavg/rational.hpp"

#include <vector>

namespace limavg {

// entries[i][j] is the payoff the row player receives; rows maximize, columns
// minimize.
using Matrix = std::vector<std::vector<Rational>>;

struct MatrixGameSolution {
  Rational value;
  std::vector<Rational> row_strategy;
  std::vector<Rational> col_strategy;
};

// Exact maximin value and one optimal mixed strategy per player. Entries are
// shifted to be >= 1 internally and solved by simplex with Bland's smallest
// index pivot rule, so ties resolve deterministically; the shift is undone on
// the value. The returned strategies are exact equilibrium certificates:
// row_strategy guarantees >= value against every column and col_strategy
// caps every row at <= value.
MatrixGameSolution solve_matrix_game(const Matrix& entries);

// Worst-case payoff of one fixed mixed strategy: for player 1 the minimum over
// columns of the mixed row payoff, for player 2 the maximum over rows.
Rational best_response_value(const Matrix& entries, int player, const std::vector<Rational>& mixed);

// Double-precision variant used on solver hot paths; same pivot rule with a
// small tolerance. Closed forms handle 1xN, Nx1 and 2x2.
struct MatrixGameSolutionD {
  double value = 0;
  std::vector<double> row_strategy;
  std::vector<double> col_strategy;
  bool reliable = true;  // false when the float simplex gave up
};
MatrixGameSolutionD solve_matrix_game_numeric(const std::vector<std::vector<double>>& entries);

}  // namespace limavg
