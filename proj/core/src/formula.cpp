#include "limavg/formula.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

namespace limavg {

bool is_symbolic(const Coefficient& c) { return std::holds_alternative<std::string>(c); }

namespace {

bool coeff_equal(const Coefficient& a, const Coefficient& b) {
  if (a.index() != b.index()) return false;
  if (is_symbolic(a)) return std::get<std::string>(a) == std::get<std::string>(b);
  return std::get<Rational>(a) == std::get<Rational>(b);
}

bool monomial_before(const Monomial& a, const Monomial& b) {
  int da = a.degree(), db = b.degree();
  if (da != db) return da > db;
  return a.powers < b.powers;
}

}  // namespace

int Monomial::degree() const {
  int d = 0;
  for (const auto& [name, e] : powers) d += e;
  return d;
}

long Monomial::length() const { return degree() + static_cast<long>(powers.size()) + 1; }

Polynomial Polynomial::constant(const Rational& c) {
  Polynomial p;
  if (c != 0) p.terms_.push_back(Monomial{c, {}});
  return p;
}

Polynomial Polynomial::variable(const std::string& name) {
  Polynomial p;
  p.terms_.push_back(Monomial{Rational(1), {{name, 1}}});
  return p;
}

Polynomial Polynomial::monomial(Coefficient c, std::vector<std::pair<std::string, int>> powers) {
  for (const auto& [name, e] : powers)
    if (e <= 0 || name.empty()) throw std::invalid_argument("monomial: bad power");
  std::sort(powers.begin(), powers.end());
  for (size_t i = 0; i + 1 < powers.size(); ++i)
    if (powers[i].first == powers[i + 1].first)
      throw std::invalid_argument("monomial: repeated variable");
  Polynomial p;
  if (!is_symbolic(c) && std::get<Rational>(c) == 0) return p;
  p.terms_.push_back(Monomial{std::move(c), std::move(powers)});
  return p;
}

Polynomial Polynomial::from_terms(std::vector<Monomial> terms) {
  Polynomial p;
  p.terms_ = std::move(terms);
  std::sort(p.terms_.begin(), p.terms_.end(), monomial_before);
  for (size_t i = 0; i + 1 < p.terms_.size(); ++i)
    if (p.terms_[i].powers == p.terms_[i + 1].powers)
      throw std::invalid_argument("from_terms: duplicate power vector");
  std::erase_if(p.terms_, [](const Monomial& m) {
    return !is_symbolic(m.coeff) && std::get<Rational>(m.coeff) == 0;
  });
  return p;
}

void Polynomial::normalize() {
  std::sort(terms_.begin(), terms_.end(), monomial_before);
}

int Polynomial::degree() const {
  int d = 0;
  for (const auto& m : terms_) d = std::max(d, m.degree());
  return d;
}

long Polynomial::length() const {
  if (terms_.empty()) return 2;  // the zero polynomial, read as one constant monomial
  long len = 0;
  for (const auto& m : terms_) len += m.length();
  return len + static_cast<long>(terms_.size());
}

bool Polynomial::has_symbolic() const {
  return std::any_of(terms_.begin(), terms_.end(),
                     [](const Monomial& m) { return is_symbolic(m.coeff); });
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
  if (has_symbolic() || o.has_symbolic())
    throw std::domain_error("polynomial arithmetic over symbolic coefficients");
  std::map<std::vector<std::pair<std::string, int>>, Rational> acc;
  for (const auto& m : terms_) acc[m.powers] += std::get<Rational>(m.coeff);
  for (const auto& m : o.terms_) acc[m.powers] += std::get<Rational>(m.coeff);
  Polynomial out;
  for (auto& [powers, c] : acc)
    if (c != 0) out.terms_.push_back(Monomial{c, powers});
  out.normalize();
  return out;
}

Polynomial Polynomial::operator-() const {
  Polynomial out = *this;
  for (auto& m : out.terms_) {
    if (is_symbolic(m.coeff)) throw std::domain_error("polynomial arithmetic over symbolic coefficients");
    m.coeff = -std::get<Rational>(m.coeff);
  }
  return out;
}

Polynomial Polynomial::operator-(const Polynomial& o) const { return *this + (-o); }

Polynomial Polynomial::operator*(const Polynomial& o) const {
  if (has_symbolic() || o.has_symbolic())
    throw std::domain_error("polynomial arithmetic over symbolic coefficients");
  std::map<std::vector<std::pair<std::string, int>>, Rational> acc;
  for (const auto& m : terms_) {
    for (const auto& m2 : o.terms_) {
      std::map<std::string, int> merged;
      for (const auto& [name, e] : m.powers) merged[name] += e;
      for (const auto& [name, e] : m2.powers) merged[name] += e;
      std::vector<std::pair<std::string, int>> powers(merged.begin(), merged.end());
      acc[powers] += std::get<Rational>(m.coeff) * std::get<Rational>(m2.coeff);
    }
  }
  Polynomial out;
  for (auto& [powers, c] : acc)
    if (c != 0) out.terms_.push_back(Monomial{c, powers});
  out.normalize();
  return out;
}

bool Polynomial::operator==(const Polynomial& o) const {
  if (terms_.size() != o.terms_.size()) return false;
  for (size_t i = 0; i < terms_.size(); ++i)
    if (terms_[i].powers != o.terms_[i].powers || !coeff_equal(terms_[i].coeff, o.terms_[i].coeff))
      return false;
  return true;
}

FormulaPtr Formula::atom_lt(Polynomial p) {
  auto f = std::shared_ptr<Formula>(new Formula(Kind::AtomLt));
  f->poly_ = std::move(p);
  return f;
}

FormulaPtr Formula::atom_eq(Polynomial p) {
  auto f = std::shared_ptr<Formula>(new Formula(Kind::AtomEq));
  f->poly_ = std::move(p);
  return f;
}

FormulaPtr Formula::negate(FormulaPtr atom) {
  if (!atom || (atom->kind() != Kind::AtomLt && atom->kind() != Kind::AtomEq))
    throw std::invalid_argument("negate: only atoms can be negated");
  auto f = std::shared_ptr<Formula>(new Formula(Kind::Not));
  f->children_.push_back(std::move(atom));
  return f;
}

FormulaPtr Formula::conj(std::vector<FormulaPtr> parts) {
  if (parts.empty()) throw std::invalid_argument("conj: empty");
  for (const auto& p : parts)
    if (!p) throw std::invalid_argument("conj: null subformula");
  if (parts.size() == 1) return parts.front();
  auto f = std::shared_ptr<Formula>(new Formula(Kind::And));
  f->children_ = std::move(parts);
  return f;
}

FormulaPtr Formula::disj(std::vector<FormulaPtr> parts) {
  if (parts.empty()) throw std::invalid_argument("disj: empty");
  for (const auto& p : parts)
    if (!p) throw std::invalid_argument("disj: null subformula");
  if (parts.size() == 1) return parts.front();
  auto f = std::shared_ptr<Formula>(new Formula(Kind::Or));
  f->children_ = std::move(parts);
  return f;
}

FormulaPtr Formula::exists(std::vector<std::string> vars, FormulaPtr body) {
  if (vars.empty()) throw std::invalid_argument("exists: empty block");
  if (!body) throw std::invalid_argument("exists: null body");
  auto f = std::shared_ptr<Formula>(new Formula(Kind::Exists));
  f->bound_ = std::move(vars);
  f->children_.push_back(std::move(body));
  return f;
}

FormulaPtr Formula::forall(std::vector<std::string> vars, FormulaPtr body) {
  if (vars.empty()) throw std::invalid_argument("forall: empty block");
  if (!body) throw std::invalid_argument("forall: null body");
  auto f = std::shared_ptr<Formula>(new Formula(Kind::Forall));
  f->bound_ = std::move(vars);
  f->children_.push_back(std::move(body));
  return f;
}

bool structurally_equal(const Formula& a, const Formula& b) {
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case Formula::Kind::AtomLt:
    case Formula::Kind::AtomEq:
      return a.poly() == b.poly();
    default:
      break;
  }
  if (a.bound() != b.bound()) return false;
  if (a.children().size() != b.children().size()) return false;
  for (size_t i = 0; i < a.children().size(); ++i)
    if (!structurally_equal(*a.children()[i], *b.children()[i])) return false;
  return true;
}

namespace {

void collect_free(const Formula& f, std::set<std::string>& bound, std::set<std::string>& free) {
  switch (f.kind()) {
    case Formula::Kind::AtomLt:
    case Formula::Kind::AtomEq:
      for (const auto& m : f.poly().terms())
        for (const auto& [name, e] : m.powers)
          if (!bound.count(name)) free.insert(name);
      return;
    case Formula::Kind::Exists:
    case Formula::Kind::Forall: {
      std::vector<std::string> added;
      for (const auto& v : f.bound())
        if (bound.insert(v).second) added.push_back(v);
      collect_free(*f.children().front(), bound, free);
      for (const auto& v : added) bound.erase(v);
      return;
    }
    default:
      for (const auto& c : f.children()) collect_free(*c, bound, free);
  }
}

}  // namespace

std::vector<std::string> free_variables(const Formula& f) {
  std::set<std::string> bound, free;
  collect_free(f, bound, free);
  return {free.begin(), free.end()};
}

bool is_closed(const Formula& f) { return free_variables(f).empty(); }

FormulaPtr merge_adjacent_blocks(const FormulaPtr& f) {
  if (!f) throw std::invalid_argument("merge_adjacent_blocks: null");
  switch (f->kind()) {
    case Formula::Kind::AtomLt:
    case Formula::Kind::AtomEq:
      return f;
    case Formula::Kind::Exists:
    case Formula::Kind::Forall: {
      FormulaPtr body = merge_adjacent_blocks(f->children().front());
      std::vector<std::string> vars = f->bound();
      if (body->kind() == f->kind()) {
        vars.insert(vars.end(), body->bound().begin(), body->bound().end());
        body = body->children().front();
      }
      if (body == f->children().front() && vars == f->bound()) return f;
      return f->kind() == Formula::Kind::Exists ? Formula::exists(std::move(vars), std::move(body))
                                                : Formula::forall(std::move(vars), std::move(body));
    }
    case Formula::Kind::Not:
      return f;
    default: {
      std::vector<FormulaPtr> parts;
      bool changed = false;
      for (const auto& c : f->children()) {
        parts.push_back(merge_adjacent_blocks(c));
        if (parts.back() != c) changed = true;
      }
      if (!changed) return f;
      return f->kind() == Formula::Kind::And ? Formula::conj(std::move(parts))
                                             : Formula::disj(std::move(parts));
    }
  }
}

namespace {

struct CensusAcc {
  long atoms = 0;
  long qvars = 0;
  int degree = 0;
  long length = 0;
  Integer coeff_bits = 0;
  bool any_rational = false;
  bool any_symbolic = false;
};

void walk(const Formula& f, CensusAcc& acc) {
  switch (f.kind()) {
    case Formula::Kind::AtomLt:
    case Formula::Kind::AtomEq: {
      ++acc.atoms;
      acc.degree = std::max(acc.degree, f.poly().degree());
      acc.length += f.poly().length() + 2;
      for (const auto& m : f.poly().terms()) {
        if (is_symbolic(m.coeff)) {
          acc.any_symbolic = true;
        } else {
          const Rational& c = std::get<Rational>(m.coeff);
          if (!is_integer(c)) acc.any_rational = true;
          acc.coeff_bits += bit_size(c);
        }
      }
      return;
    }
    case Formula::Kind::Not:
      walk(*f.children().front(), acc);
      acc.length += 1;
      return;
    case Formula::Kind::And:
    case Formula::Kind::Or: {
      for (const auto& c : f.children()) walk(*c, acc);
      acc.length += static_cast<long>(f.children().size()) - 1;
      return;
    }
    case Formula::Kind::Exists:
    case Formula::Kind::Forall:
      acc.qvars += static_cast<long>(f.bound().size());
      walk(*f.children().front(), acc);
      acc.length += 2 * static_cast<long>(f.bound().size());
      return;
  }
}

}  // namespace

FormulaCensus census(const Formula& f) {
  CensusAcc acc;
  walk(f, acc);
  FormulaCensus out;
  out.atoms = acc.atoms;
  out.quantified_variables = acc.qvars;
  out.degree = acc.degree;
  out.length = acc.length;
  const Formula* cur = &f;
  while (cur->kind() == Formula::Kind::Exists || cur->kind() == Formula::Kind::Forall) {
    out.blocks.push_back(
        {cur->kind() == Formula::Kind::Forall, static_cast<int>(cur->bound().size())});
    cur = cur->children().front().get();
  }
  if (acc.any_symbolic) {
    out.ring = CoefficientRing::Symbolic;
  } else {
    out.ring = acc.any_rational ? CoefficientRing::Rational : CoefficientRing::Integer;
    out.bits = acc.coeff_bits + acc.length;
  }
  return out;
}

std::string var_x(int state, int action) {
  return "x[" + std::to_string(state) + "][" + std::to_string(action) + "]";
}
std::string var_y(int state, int action) {
  return "y[" + std::to_string(state) + "][" + std::to_string(action) + "]";
}
std::string var_v(int state) { return "v[" + std::to_string(state) + "]"; }
std::string var_z(int index) { return "z[" + std::to_string(index) + "]"; }
const char* const kVarBeta = "beta";
const char* const kVarBeta1 = "beta1";

}  // namespace limavg
