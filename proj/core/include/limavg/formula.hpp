#pragma once

#include "limavg/rational.hpp"

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace limavg {

// Polynomial coefficients are exact rationals or opaque symbolic names.
// Symbolic coefficients only support structural operations (census, length,
// equality); arithmetic, rationalization and export reject them.
using Coefficient = std::variant<Rational, std::string>;

bool is_symbolic(const Coefficient& c);

struct Monomial {
  Coefficient coeff{Rational(1)};
  // sorted by variable name, exponents > 0; empty means a constant
  std::vector<std::pair<std::string, int>> powers;

  int degree() const;
  // degree + number of distinct variables + 1
  long length() const;
};

// Canonical form: like terms combined, zero coefficients dropped, monomials
// ordered by (total degree desc, power vector asc). The zero polynomial has
// no terms and counts as a single constant monomial for length purposes.
class Polynomial {
 public:
  Polynomial() = default;
  static Polynomial constant(const Rational& c);
  static Polynomial variable(const std::string& name);
  static Polynomial monomial(Coefficient c, std::vector<std::pair<std::string, int>> powers);

  // construction without combining; throws if two terms share a power vector
  static Polynomial from_terms(std::vector<Monomial> terms);

  const std::vector<Monomial>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  int degree() const;
  long length() const;
  bool has_symbolic() const;

  Polynomial operator+(const Polynomial& o) const;
  Polynomial operator-() const;
  Polynomial operator-(const Polynomial& o) const;
  Polynomial operator*(const Polynomial& o) const;

  bool operator==(const Polynomial& o) const;

 private:
  std::vector<Monomial> terms_;
  void normalize();
};

class Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

// First-order formulas over polynomial atoms p < 0 and p = 0. Negation is
// only applied to atoms; derived relations are stored desugared. Quantifier
// nodes bind a whole block of variables at once.
class Formula {
 public:
  enum class Kind { AtomLt, AtomEq, Not, And, Or, Exists, Forall };

  Kind kind() const { return kind_; }
  const Polynomial& poly() const { return poly_; }              // atoms
  const std::vector<FormulaPtr>& children() const { return children_; }
  const std::vector<std::string>& bound() const { return bound_; }  // blocks

  static FormulaPtr atom_lt(Polynomial p);
  static FormulaPtr atom_eq(Polynomial p);
  static FormulaPtr negate(FormulaPtr atom);                 // argument must be an atom
  static FormulaPtr conj(std::vector<FormulaPtr> parts);     // n >= 1; passthrough for n == 1
  static FormulaPtr disj(std::vector<FormulaPtr> parts);
  static FormulaPtr exists(std::vector<std::string> vars, FormulaPtr body);
  static FormulaPtr forall(std::vector<std::string> vars, FormulaPtr body);

 private:
  Kind kind_;
  Polynomial poly_;
  std::vector<FormulaPtr> children_;
  std::vector<std::string> bound_;
  Formula(Kind k) : kind_(k) {}
  friend FormulaPtr merge_adjacent_blocks(const FormulaPtr&);
};

bool structurally_equal(const Formula& a, const Formula& b);

// variables not bound by any enclosing quantifier, sorted
std::vector<std::string> free_variables(const Formula& f);
bool is_closed(const Formula& f);

// collapses directly nested quantifier blocks of the same kind into one block
FormulaPtr merge_adjacent_blocks(const FormulaPtr& f);

enum class CoefficientRing { Integer, Rational, Symbolic };

struct QuantifierBlock {
  bool universal = false;
  int width = 0;
};

// The complexity parameters of a sentence: atom occurrences, bound variable
// count, the leading quantifier prefix, maximum polynomial degree, and the
// structural length
//   len(monomial)  = degree + #vars + 1
//   len(polynomial)= sum of monomial lengths + #monomials
//   len(p ~ 0)     = len(p) + 2         len(not a)  = len(a) + 1
//   len(f1 op f2)  = len(f1) + len(f2) + 1
//   len(Qx. f)     = len(f) + 2 per quantified variable.
// bits additionally charges every coefficient its binary size; absent when
// any coefficient is symbolic.
struct FormulaCensus {
  long atoms = 0;
  long quantified_variables = 0;
  std::vector<QuantifierBlock> blocks;
  int degree = 0;
  long length = 0;
  std::optional<Integer> bits;
  CoefficientRing ring = CoefficientRing::Integer;
};

FormulaCensus census(const Formula& f);

// canonical variable names used by the sentence builders
std::string var_x(int state, int action);  // "x[s][a]", 1-based indices
std::string var_y(int state, int action);
std::string var_v(int state);
std::string var_z(int index);
extern const char* const kVarBeta;
extern const char* const kVarBeta1;

}  // namespace limavg
