#pragma once

#include "limavg/formula.hpp"
#include "limavg/game.hpp"

namespace limavg {

// Sentence builders for the threshold problem "does state s have limit-average
// value > alpha". All constraints are desugared into the atom grammar
// (p < 0, p = 0, negation of atoms, and/or, quantifier blocks) as follows:
//
//   p >= 0   ~~>  not (p < 0)                          1 atom
//   p >  0   ~~>  -p < 0                               1 atom
//   p <= 0   ~~>  (p < 0) or (p = 0)                   2 atoms
//   p' >= 0  ~~>  (-p' < 0) or (-p' = 0)               2 atoms  (payoff rows only)
//
// The two-atom form is used exactly for the payoff constraints u >= 0 and
// u <= 0; plain nonnegativity of strategy weights uses the one-atom negation
// form. With that split each player-1 action contributes 3 atoms
// (x[s][a] >= 0 plus the two-atom u_{(s,a,2)} <= 0), each player-2 action
// contributes 3 atoms (y[s][b] >= 0 plus the two-atom u_{(s,b,1)} >= 0), and
// each state contributes its two weight-sum equations, so the discounted
// sentence has exactly 1 + sum_s (3*|moves1(s)| + 3*|moves2(s)| + 2) atom
// occurrences and the limit sentence exactly 4 more.
//
// Variables: x[s][a] and y[s][b] are strategy weights (s the 1-based state,
// a/b the 1-based position within the state's move set), v[s] the candidate
// discounted values, "beta" the discount, "beta1" the neighborhood radius,
// z[i] the names introduced by rationalize. The z namespace is reserved.

// Strategy-validity constraints: for every state, weights sum to one and are
// nonnegative, for both players. Conjunction ordered state by state, x-sum,
// x-nonneg, y-sum, y-nonneg.
FormulaPtr build_psi(const StochasticGame& g);

// The discounted threshold sentence: there are weights x, y and values v
// satisfying build_psi, such that x guarantees payoff at least v in every
// state against every pure reply (u_{(s,b,1)} >= 0), y guarantees at most v
// (u_{(s,a,2)} <= 0), and v[state] - alpha > 0. The payoff polynomials are
//   u_{(s,b,1)} = beta * sum_a x[s][a] r(s,a,b)
//               + (1-beta) * sum_a x[s][a] sum_t delta(s,a,b)(t) v[t] - v[s]
// expanded into monomials of degree <= 3. One existential block holding all
// x, then all y, then all v; the discount "beta" occurs free.
FormulaPtr build_discounted_sentence(const StochasticGame& g, int state, const Rational& alpha);

// The limit-average threshold sentence: some beta1 works for every discount
// in (0, beta1). Closed, with prefix exists(beta1) forall(beta) exists(x,y,v)
// and matrix
//   beta1 > 0  and  [ beta1 - beta <= 0  or  beta <= 0
//                     or (beta1 - beta > 0 and <discounted matrix>) ].
// The guard beta1 > 0 sits inside the matrix so the quantifier prefix stays
// three alternating blocks.
FormulaPtr build_value_sentence(const StochasticGame& g, int state, const Rational& alpha);

// Replaces every non-integer rational coefficient by a fresh variable z[i]
// (one per distinct value, numbered by ascending value) with coefficient 1,
// and conjoins the defining equation den*z[i] - num = 0. The z block is
// appended to the innermost existential block of the leading quantifier
// prefix; if the prefix has none, a new existential block is inserted at the
// innermost position. Integer-coefficient input is returned unchanged.
// Raises degrees by at most one.
FormulaPtr rationalize(const FormulaPtr& f);

}  // namespace limavg
