#include "limavg/sentence.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

namespace limavg {

namespace {

void require_valid(const StochasticGame& g) {
  ValidationReport rep = validate_game(g);
  if (!rep.ok()) throw std::invalid_argument("invalid game: " + rep.violations.front());
}

void require_state(const StochasticGame& g, int state) {
  if (state < 1 || state > g.num_states)
    throw std::out_of_range("state out of range: " + std::to_string(state));
}

Monomial make_term(Rational c, std::vector<std::pair<std::string, int>> powers) {
  std::sort(powers.begin(), powers.end());
  return Monomial{std::move(c), std::move(powers)};
}

void push_term(std::vector<Monomial>& acc, Rational c,
               std::vector<std::pair<std::string, int>> powers) {
  if (c == 0) return;
  acc.push_back(make_term(std::move(c), std::move(powers)));
}

// not (w < 0)
FormulaPtr nonneg(const std::string& name) {
  return Formula::negate(Formula::atom_lt(Polynomial::variable(name)));
}

Polynomial weight_sum_minus_one(int state, size_t count, std::string (*var)(int, int)) {
  std::vector<Monomial> terms;
  for (size_t k = 0; k < count; ++k) push_term(terms, Rational(1), {{var(state, static_cast<int>(k) + 1), 1}});
  push_term(terms, Rational(-1), {});
  return Polynomial::from_terms(std::move(terms));
}

// u_{(s,b,1)}: payoff of weights x[s][.] against player 2's j-th move,
// relative to v[s]. s and j are 0-based here.
Polynomial payoff_vs_column(const StochasticGame& g, int s, int j) {
  std::vector<Monomial> terms;
  for (size_t i = 0; i < g.moves1[s].size(); ++i) {
    const auto& c = g.cell(s, static_cast<int>(i), j);
    std::string x = var_x(s + 1, static_cast<int>(i) + 1);
    push_term(terms, c.reward, {{kVarBeta, 1}, {x, 1}});
    for (int t = 0; t < g.num_states; ++t) {
      push_term(terms, c.dist[t], {{x, 1}, {var_v(t + 1), 1}});
      push_term(terms, -c.dist[t], {{kVarBeta, 1}, {x, 1}, {var_v(t + 1), 1}});
    }
  }
  push_term(terms, Rational(-1), {{var_v(s + 1), 1}});
  return Polynomial::from_terms(std::move(terms));
}

// u_{(s,a,2)}: payoff of weights y[s][.] against player 1's i-th move.
Polynomial payoff_vs_row(const StochasticGame& g, int s, int i) {
  std::vector<Monomial> terms;
  for (size_t j = 0; j < g.moves2[s].size(); ++j) {
    const auto& c = g.cell(s, i, static_cast<int>(j));
    std::string y = var_y(s + 1, static_cast<int>(j) + 1);
    push_term(terms, c.reward, {{kVarBeta, 1}, {y, 1}});
    for (int t = 0; t < g.num_states; ++t) {
      push_term(terms, c.dist[t], {{y, 1}, {var_v(t + 1), 1}});
      push_term(terms, -c.dist[t], {{kVarBeta, 1}, {y, 1}, {var_v(t + 1), 1}});
    }
  }
  push_term(terms, Rational(-1), {{var_v(s + 1), 1}});
  return Polynomial::from_terms(std::move(terms));
}

// p >= 0 as (-p < 0) or (-p = 0); p <= 0 as (p < 0) or (p = 0)
FormulaPtr at_least_zero(const Polynomial& p) {
  return Formula::disj({Formula::atom_lt(-p), Formula::atom_eq(-p)});
}

FormulaPtr at_most_zero(const Polynomial& p) {
  return Formula::disj({Formula::atom_lt(p), Formula::atom_eq(p)});
}

std::vector<std::string> strategy_and_value_variables(const StochasticGame& g) {
  std::vector<std::string> vars;
  for (int s = 0; s < g.num_states; ++s)
    for (size_t i = 0; i < g.moves1[s].size(); ++i) vars.push_back(var_x(s + 1, static_cast<int>(i) + 1));
  for (int s = 0; s < g.num_states; ++s)
    for (size_t j = 0; j < g.moves2[s].size(); ++j) vars.push_back(var_y(s + 1, static_cast<int>(j) + 1));
  for (int s = 0; s < g.num_states; ++s) vars.push_back(var_v(s + 1));
  return vars;
}

// the quantifier-free part shared by both sentences: build_psi's constraints,
// both payoff families, and the threshold atom
FormulaPtr discounted_matrix(const StochasticGame& g, int state, const Rational& alpha) {
  std::vector<FormulaPtr> parts;
  parts.push_back(build_psi(g));
  for (int s = 0; s < g.num_states; ++s)
    for (size_t j = 0; j < g.moves2[s].size(); ++j)
      parts.push_back(at_least_zero(payoff_vs_column(g, s, static_cast<int>(j))));
  for (int s = 0; s < g.num_states; ++s)
    for (size_t i = 0; i < g.moves1[s].size(); ++i)
      parts.push_back(at_most_zero(payoff_vs_row(g, s, static_cast<int>(i))));
  // v[state] - alpha > 0, i.e. alpha - v[state] < 0
  parts.push_back(Formula::atom_lt(Polynomial::constant(alpha) - Polynomial::variable(var_v(state))));
  return Formula::conj(std::move(parts));
}

}  // namespace

FormulaPtr build_psi(const StochasticGame& g) {
  require_valid(g);
  std::vector<FormulaPtr> parts;
  for (int s = 0; s < g.num_states; ++s) {
    parts.push_back(Formula::atom_eq(weight_sum_minus_one(s + 1, g.moves1[s].size(), var_x)));
    for (size_t i = 0; i < g.moves1[s].size(); ++i)
      parts.push_back(nonneg(var_x(s + 1, static_cast<int>(i) + 1)));
    parts.push_back(Formula::atom_eq(weight_sum_minus_one(s + 1, g.moves2[s].size(), var_y)));
    for (size_t j = 0; j < g.moves2[s].size(); ++j)
      parts.push_back(nonneg(var_y(s + 1, static_cast<int>(j) + 1)));
  }
  return Formula::conj(std::move(parts));
}

FormulaPtr build_discounted_sentence(const StochasticGame& g, int state, const Rational& alpha) {
  require_valid(g);
  require_state(g, state);
  return Formula::exists(strategy_and_value_variables(g), discounted_matrix(g, state, alpha));
}

FormulaPtr build_value_sentence(const StochasticGame& g, int state, const Rational& alpha) {
  require_valid(g);
  require_state(g, state);
  Polynomial beta = Polynomial::variable(kVarBeta);
  Polynomial beta1 = Polynomial::variable(kVarBeta1);
  FormulaPtr matrix = Formula::conj({
      Formula::atom_lt(-beta1),                          // beta1 > 0
      Formula::disj({
          Formula::negate(Formula::atom_lt(beta - beta1)),  // beta1 - beta <= 0
          Formula::negate(Formula::atom_lt(-beta)),         // beta <= 0
          Formula::conj({
              Formula::atom_lt(beta - beta1),               // beta1 - beta > 0
              discounted_matrix(g, state, alpha),
          }),
      }),
  });
  return Formula::exists({kVarBeta1},
                         Formula::forall({kVarBeta},
                                         Formula::exists(strategy_and_value_variables(g),
                                                         std::move(matrix))));
}

namespace {

void collect_fractions(const Formula& f, std::set<Rational>& values) {
  switch (f.kind()) {
    case Formula::Kind::AtomLt:
    case Formula::Kind::AtomEq:
      for (const auto& m : f.poly().terms()) {
        if (is_symbolic(m.coeff))
          throw std::domain_error("cannot rationalize symbolic coefficients");
        const Rational& c = std::get<Rational>(m.coeff);
        if (!is_integer(c)) values.insert(c);
      }
      return;
    default:
      for (const auto& c : f.children()) collect_fractions(*c, values);
  }
}

Polynomial replace_fractions(const Polynomial& p, const std::map<Rational, std::string>& names) {
  std::vector<Monomial> terms;
  for (const auto& m : p.terms()) {
    const Rational& c = std::get<Rational>(m.coeff);
    if (is_integer(c)) {
      terms.push_back(m);
      continue;
    }
    std::map<std::string, int> powers(m.powers.begin(), m.powers.end());
    powers[names.at(c)] += 1;
    terms.push_back(Monomial{Rational(1), {powers.begin(), powers.end()}});
  }
  return Polynomial::from_terms(std::move(terms));
}

FormulaPtr replace_in_formula(const FormulaPtr& f, const std::map<Rational, std::string>& names) {
  switch (f->kind()) {
    case Formula::Kind::AtomLt:
      return Formula::atom_lt(replace_fractions(f->poly(), names));
    case Formula::Kind::AtomEq:
      return Formula::atom_eq(replace_fractions(f->poly(), names));
    case Formula::Kind::Not:
      return Formula::negate(replace_in_formula(f->children().front(), names));
    case Formula::Kind::And:
    case Formula::Kind::Or: {
      std::vector<FormulaPtr> parts;
      for (const auto& c : f->children()) parts.push_back(replace_in_formula(c, names));
      return f->kind() == Formula::Kind::And ? Formula::conj(std::move(parts))
                                             : Formula::disj(std::move(parts));
    }
    case Formula::Kind::Exists:
      return Formula::exists(f->bound(), replace_in_formula(f->children().front(), names));
    case Formula::Kind::Forall:
      return Formula::forall(f->bound(), replace_in_formula(f->children().front(), names));
  }
  throw std::logic_error("unreachable");
}

}  // namespace

FormulaPtr rationalize(const FormulaPtr& f) {
  if (!f) throw std::invalid_argument("rationalize: null formula");
  std::set<Rational> values;
  collect_fractions(*f, values);
  if (values.empty()) return f;

  std::map<Rational, std::string> names;
  std::vector<std::string> zvars;
  std::vector<FormulaPtr> defining;
  int index = 0;
  for (const Rational& c : values) {  // ascending
    std::string z = var_z(++index);
    names.emplace(c, z);
    zvars.push_back(z);
    // den * z - num = 0
    std::vector<Monomial> terms;
    terms.push_back(make_term(Rational(c.get_den()), {{z, 1}}));
    push_term(terms, Rational(-c.get_num()), {});
    defining.push_back(Formula::atom_eq(Polynomial::from_terms(std::move(terms))));
  }

  // split off the leading quantifier chain; the matrix below gets rewritten
  // and the defining equations are conjoined there
  std::vector<const Formula*> chain;
  const Formula* cur = f.get();
  while (cur->kind() == Formula::Kind::Exists || cur->kind() == Formula::Kind::Forall) {
    chain.push_back(cur);
    cur = cur->children().front().get();
  }
  int last_exists = -1;
  for (size_t i = 0; i < chain.size(); ++i)
    if (chain[i]->kind() == Formula::Kind::Exists) last_exists = static_cast<int>(i);

  std::vector<FormulaPtr> matrix_parts;
  matrix_parts.push_back(replace_in_formula(
      chain.empty() ? f : chain.back()->children().front(), names));
  for (auto& eq : defining) matrix_parts.push_back(std::move(eq));
  FormulaPtr body = Formula::conj(std::move(matrix_parts));

  if (last_exists < 0) body = Formula::exists(zvars, std::move(body));
  for (int i = static_cast<int>(chain.size()) - 1; i >= 0; --i) {
    std::vector<std::string> vars = chain[i]->bound();
    if (i == last_exists) vars.insert(vars.end(), zvars.begin(), zvars.end());
    body = chain[i]->kind() == Formula::Kind::Exists
               ? Formula::exists(std::move(vars), std::move(body))
               : Formula::forall(std::move(vars), std::move(body));
  }
  return body;
}

}  // namespace limavg
