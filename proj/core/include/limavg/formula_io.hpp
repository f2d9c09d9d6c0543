#pragma once

#include "limavg/formula.hpp"

#include <string>

namespace limavg {

// Two interchange formats for closed sentences:
//
// Smtlib2 is a three-line SMT-LIB 2 script
//   (set-logic NRA)
//   (assert <formula>)
//   (check-sat)
// with the formula on a single line. Variables are quoted symbols
// (|x[1][1]|), every monomial spells its coefficient explicitly as an
// integer, (- k), (/ p q) or (- (/ p q)), and exponents are written as
// repeated factors, so (1/4)*x^2*y is (* (/ 1 4) |x| |x| |y|). Atoms are
// (< p 0) and (= p 0) with the polynomial as (+ m1 m2 ...), a bare monomial,
// or 0.
//
// JsonAst is an indented JSON tree with node tags atom_lt, atom_eq, not,
// and, or, exists, forall. Atoms carry "poly": a list of
// {"coeff": "num/den", "powers": [[variable, exponent], ...]} monomials in
// canonical order; connectives carry "parts"; quantifiers carry "vars" and
// "body".
//
// Both exports are byte-deterministic, and parsing an export yields a
// structurally equal formula.
enum class SentenceFormat { Smtlib2, JsonAst };

// Requires a closed formula with rational coefficients.
std::string export_sentence(const FormulaPtr& f, SentenceFormat format);

// Strict parser for exactly the exported subset; malformed input raises
// invalid_argument with a position or context note.
FormulaPtr parse_sentence(const std::string& text, SentenceFormat format);

}  // namespace limavg
