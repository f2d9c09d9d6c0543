#include "limavg/formula_io.hpp"

#include "limavg/rational.hpp"

#include <json.hpp>

#include <cctype>
#include <map>
#include <sstream>
#include <stdexcept>

namespace limavg {

namespace {

using nlohmann::ordered_json;

void require_exportable(const FormulaPtr& f) {
  if (!f) throw std::invalid_argument("export: null formula");
  auto free = free_variables(*f);
  if (!free.empty()) {
    std::string msg = "cannot export an open formula; free:";
    for (const auto& v : free) msg += " " + v;
    throw std::invalid_argument(msg);
  }
}

const Rational& rational_coeff(const Monomial& m) {
  if (is_symbolic(m.coeff)) throw std::domain_error("cannot export symbolic coefficients");
  return std::get<Rational>(m.coeff);
}

// ---- SMT-LIB 2 emission ----

void emit_coeff(std::ostream& os, const Rational& c) {
  Rational a = abs(c);
  std::string lit = is_integer(a) ? a.get_str()
                                  : "(/ " + a.get_num().get_str() + " " + a.get_den().get_str() + ")";
  if (c < 0)
    os << "(- " << lit << ")";
  else
    os << lit;
}

void emit_monomial(std::ostream& os, const Monomial& m) {
  const Rational& c = rational_coeff(m);
  if (m.powers.empty()) {
    emit_coeff(os, c);
    return;
  }
  os << "(* ";
  emit_coeff(os, c);
  for (const auto& [name, e] : m.powers)
    for (int k = 0; k < e; ++k) os << " |" << name << "|";
  os << ")";
}

void emit_poly(std::ostream& os, const Polynomial& p) {
  if (p.is_zero()) {
    os << "0";
    return;
  }
  if (p.terms().size() == 1) {
    emit_monomial(os, p.terms().front());
    return;
  }
  os << "(+";
  for (const auto& m : p.terms()) {
    os << " ";
    emit_monomial(os, m);
  }
  os << ")";
}

void emit_formula(std::ostream& os, const Formula& f) {
  switch (f.kind()) {
    case Formula::Kind::AtomLt:
    case Formula::Kind::AtomEq:
      os << (f.kind() == Formula::Kind::AtomLt ? "(< " : "(= ");
      emit_poly(os, f.poly());
      os << " 0)";
      return;
    case Formula::Kind::Not:
      os << "(not ";
      emit_formula(os, *f.children().front());
      os << ")";
      return;
    case Formula::Kind::And:
    case Formula::Kind::Or:
      os << (f.kind() == Formula::Kind::And ? "(and" : "(or");
      for (const auto& c : f.children()) {
        os << " ";
        emit_formula(os, *c);
      }
      os << ")";
      return;
    case Formula::Kind::Exists:
    case Formula::Kind::Forall:
      os << (f.kind() == Formula::Kind::Exists ? "(exists (" : "(forall (");
      for (size_t i = 0; i < f.bound().size(); ++i) {
        if (i) os << " ";
        os << "(|" << f.bound()[i] << "| Real)";
      }
      os << ") ";
      emit_formula(os, *f.children().front());
      os << ")";
      return;
  }
}

// ---- SMT-LIB 2 parsing ----

struct Token {
  enum Kind { LParen, RParen, Symbol, End } kind = End;
  std::string text;
};

class Lexer {
 public:
  explicit Lexer(const std::string& text) : text_(text) {}

  Token next() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (pos_ >= text_.size()) return {Token::End, ""};
    char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      return {Token::LParen, "("};
    }
    if (c == ')') {
      ++pos_;
      return {Token::RParen, ")"};
    }
    if (c == '|') {
      size_t end = text_.find('|', pos_ + 1);
      if (end == std::string::npos) fail("unterminated quoted symbol");
      Token t{Token::Symbol, text_.substr(pos_ + 1, end - pos_ - 1)};
      pos_ = end + 1;
      return t;
    }
    size_t start = pos_;
    while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_])) &&
           text_[pos_] != '(' && text_[pos_] != ')' && text_[pos_] != '|')
      ++pos_;
    return {Token::Symbol, text_.substr(start, pos_ - start)};
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw std::invalid_argument("smt2 parse error near offset " + std::to_string(pos_) + ": " + what);
  }

 private:
  const std::string& text_;
  size_t pos_ = 0;
};

class Smt2Parser {
 public:
  explicit Smt2Parser(const std::string& text) : lex_(text) { advance(); }

  FormulaPtr parse_script() {
    expect_lparen();
    expect_symbol("set-logic");
    expect_symbol("NRA");
    expect_rparen();
    expect_lparen();
    expect_symbol("assert");
    FormulaPtr f = parse_formula();
    expect_rparen();
    expect_lparen();
    expect_symbol("check-sat");
    expect_rparen();
    if (cur_.kind != Token::End) lex_.fail("trailing input after (check-sat)");
    return f;
  }

 private:
  Lexer lex_;
  Token cur_;

  void advance() { cur_ = lex_.next(); }
  void expect_lparen() {
    if (cur_.kind != Token::LParen) lex_.fail("expected (");
    advance();
  }
  void expect_rparen() {
    if (cur_.kind != Token::RParen) lex_.fail("expected )");
    advance();
  }
  std::string take_symbol() {
    if (cur_.kind != Token::Symbol) lex_.fail("expected symbol");
    std::string s = cur_.text;
    advance();
    return s;
  }
  void expect_symbol(const std::string& s) {
    if (take_symbol() != s) lex_.fail("expected " + s);
  }

  Integer parse_integer_literal() {
    std::string s = take_symbol();
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
      lex_.fail("expected unsigned integer, got " + s);
    return Integer(s);
  }

  // INT | (- INT) | (/ INT INT) | (- (/ INT INT))
  Rational parse_coeff() {
    if (cur_.kind == Token::Symbol) return Rational(parse_integer_literal());
    expect_lparen();
    std::string head = take_symbol();
    if (head == "-") {
      Rational inner = parse_coeff();
      expect_rparen();
      return -inner;
    }
    if (head == "/") {
      Integer num = parse_integer_literal();
      Integer den = parse_integer_literal();
      expect_rparen();
      if (den == 0) lex_.fail("zero denominator");
      Rational q(num, den);
      q.canonicalize();
      return q;
    }
    lex_.fail("expected coefficient, got " + head);
  }

  Monomial parse_product() {
    // after "(*"
    Monomial m;
    m.coeff = parse_coeff();
    std::map<std::string, int> powers;
    while (cur_.kind == Token::Symbol) {
      powers[take_symbol()] += 1;
    }
    expect_rparen();
    if (powers.empty()) lex_.fail("product without variables");
    m.powers.assign(powers.begin(), powers.end());
    return m;
  }

  Polynomial parse_poly() {
    if (cur_.kind == Token::Symbol) {
      // bare integer constant; "0" yields the zero polynomial
      Rational c(parse_integer_literal());
      return Polynomial::constant(c);
    }
    expect_lparen();
    std::string head = take_symbol();
    std::vector<Monomial> terms;
    if (head == "+") {
      while (cur_.kind != Token::RParen) terms.push_back(parse_summand());
      expect_rparen();
      if (terms.size() < 2) lex_.fail("sum with fewer than two terms");
    } else if (head == "*") {
      terms.push_back(parse_product());
    } else if (head == "-" || head == "/") {
      terms.push_back(parse_negative_or_fraction(head));
    } else {
      lex_.fail("expected polynomial, got " + head);
    }
    return Polynomial::from_terms(std::move(terms));
  }

  Monomial parse_summand() {
    if (cur_.kind == Token::Symbol) return Monomial{Rational(parse_integer_literal()), {}};
    expect_lparen();
    std::string head = take_symbol();
    if (head == "*") return parse_product();
    if (head == "-" || head == "/") return parse_negative_or_fraction(head);
    lex_.fail("expected monomial, got " + head);
  }

  // constant monomial continuing after "(-" or "(/"
  Monomial parse_negative_or_fraction(const std::string& head) {
    if (head == "-") {
      Rational inner = parse_coeff();
      expect_rparen();
      return Monomial{-inner, {}};
    }
    Integer num = parse_integer_literal();
    Integer den = parse_integer_literal();
    expect_rparen();
    if (den == 0) lex_.fail("zero denominator");
    Rational q(num, den);
    q.canonicalize();
    return Monomial{q, {}};
  }

  std::vector<std::string> parse_binders() {
    expect_lparen();
    std::vector<std::string> vars;
    while (cur_.kind == Token::LParen) {
      advance();
      vars.push_back(take_symbol());
      expect_symbol("Real");
      expect_rparen();
    }
    expect_rparen();
    if (vars.empty()) lex_.fail("empty binder list");
    return vars;
  }

  FormulaPtr parse_formula() {
    expect_lparen();
    std::string head = take_symbol();
    if (head == "<" || head == "=") {
      Polynomial p = parse_poly();
      expect_symbol("0");
      expect_rparen();
      return head == "<" ? Formula::atom_lt(std::move(p)) : Formula::atom_eq(std::move(p));
    }
    if (head == "not") {
      FormulaPtr inner = parse_formula();
      expect_rparen();
      return Formula::negate(std::move(inner));
    }
    if (head == "and" || head == "or") {
      std::vector<FormulaPtr> parts;
      while (cur_.kind != Token::RParen) parts.push_back(parse_formula());
      expect_rparen();
      if (parts.size() < 2) lex_.fail("connective with fewer than two parts");
      return head == "and" ? Formula::conj(std::move(parts)) : Formula::disj(std::move(parts));
    }
    if (head == "exists" || head == "forall") {
      std::vector<std::string> vars = parse_binders();
      FormulaPtr body = parse_formula();
      expect_rparen();
      return head == "exists" ? Formula::exists(std::move(vars), std::move(body))
                              : Formula::forall(std::move(vars), std::move(body));
    }
    lex_.fail("unknown head " + head);
  }
};

// ---- JSON AST ----

ordered_json poly_to_json(const Polynomial& p) {
  ordered_json terms = ordered_json::array();
  for (const auto& m : p.terms()) {
    ordered_json powers = ordered_json::array();
    for (const auto& [name, e] : m.powers) powers.push_back(ordered_json::array({name, e}));
    terms.push_back({{"coeff", to_string(rational_coeff(m))}, {"powers", powers}});
  }
  return terms;
}

ordered_json formula_to_json(const Formula& f) {
  switch (f.kind()) {
    case Formula::Kind::AtomLt:
    case Formula::Kind::AtomEq:
      return {{"node", f.kind() == Formula::Kind::AtomLt ? "atom_lt" : "atom_eq"},
              {"poly", poly_to_json(f.poly())}};
    case Formula::Kind::Not:
      return {{"node", "not"}, {"body", formula_to_json(*f.children().front())}};
    case Formula::Kind::And:
    case Formula::Kind::Or: {
      ordered_json parts = ordered_json::array();
      for (const auto& c : f.children()) parts.push_back(formula_to_json(*c));
      return {{"node", f.kind() == Formula::Kind::And ? "and" : "or"}, {"parts", parts}};
    }
    case Formula::Kind::Exists:
    case Formula::Kind::Forall: {
      ordered_json vars = ordered_json::array();
      for (const auto& v : f.bound()) vars.push_back(v);
      return {{"node", f.kind() == Formula::Kind::Exists ? "exists" : "forall"},
              {"vars", vars},
              {"body", formula_to_json(*f.children().front())}};
    }
  }
  throw std::logic_error("unreachable");
}

[[noreturn]] void bad_json(const std::string& what) {
  throw std::invalid_argument("sentence json: " + what);
}

void reject_unknown(const ordered_json& obj, std::initializer_list<const char*> keys) {
  for (const auto& [key, value] : obj.items()) {
    bool known = false;
    for (const char* k : keys)
      if (key == k) known = true;
    if (!known) bad_json("unknown key \"" + key + "\"");
  }
}

const ordered_json& field(const ordered_json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) bad_json(std::string("missing key \"") + key + "\"");
  return *it;
}

Polynomial poly_from_json(const ordered_json& j) {
  if (!j.is_array()) bad_json("\"poly\" must be an array");
  std::vector<Monomial> terms;
  for (const auto& t : j) {
    if (!t.is_object()) bad_json("monomial must be an object");
    reject_unknown(t, {"coeff", "powers"});
    const auto& coeff = field(t, "coeff");
    if (!coeff.is_string()) bad_json("\"coeff\" must be a string");
    Monomial m;
    m.coeff = parse_rational(coeff.get<std::string>());
    const auto& powers = field(t, "powers");
    if (!powers.is_array()) bad_json("\"powers\" must be an array");
    std::map<std::string, int> acc;
    for (const auto& p : powers) {
      if (!p.is_array() || p.size() != 2 || !p[0].is_string() || !p[1].is_number_integer())
        bad_json("power entry must be [name, exponent]");
      int e = p[1].get<int>();
      if (e <= 0) bad_json("exponent must be positive");
      acc[p[0].get<std::string>()] += e;
    }
    m.powers.assign(acc.begin(), acc.end());
    terms.push_back(std::move(m));
  }
  return Polynomial::from_terms(std::move(terms));
}

FormulaPtr formula_from_json(const ordered_json& j) {
  if (!j.is_object()) bad_json("node must be an object");
  const auto& node = field(j, "node");
  if (!node.is_string()) bad_json("\"node\" must be a string");
  std::string kind = node.get<std::string>();
  if (kind == "atom_lt" || kind == "atom_eq") {
    reject_unknown(j, {"node", "poly"});
    Polynomial p = poly_from_json(field(j, "poly"));
    return kind == "atom_lt" ? Formula::atom_lt(std::move(p)) : Formula::atom_eq(std::move(p));
  }
  if (kind == "not") {
    reject_unknown(j, {"node", "body"});
    return Formula::negate(formula_from_json(field(j, "body")));
  }
  if (kind == "and" || kind == "or") {
    reject_unknown(j, {"node", "parts"});
    const auto& parts = field(j, "parts");
    if (!parts.is_array() || parts.size() < 2) bad_json("\"parts\" must list at least two nodes");
    std::vector<FormulaPtr> sub;
    for (const auto& p : parts) sub.push_back(formula_from_json(p));
    return kind == "and" ? Formula::conj(std::move(sub)) : Formula::disj(std::move(sub));
  }
  if (kind == "exists" || kind == "forall") {
    reject_unknown(j, {"node", "vars", "body"});
    const auto& vars = field(j, "vars");
    if (!vars.is_array() || vars.empty()) bad_json("\"vars\" must be a nonempty array");
    std::vector<std::string> names;
    for (const auto& v : vars) {
      if (!v.is_string()) bad_json("variable names must be strings");
      names.push_back(v.get<std::string>());
    }
    FormulaPtr body = formula_from_json(field(j, "body"));
    return kind == "exists" ? Formula::exists(std::move(names), std::move(body))
                            : Formula::forall(std::move(names), std::move(body));
  }
  bad_json("unknown node tag \"" + kind + "\"");
}

}  // namespace

std::string export_sentence(const FormulaPtr& f, SentenceFormat format) {
  require_exportable(f);
  if (format == SentenceFormat::Smtlib2) {
    std::ostringstream os;
    os << "(set-logic NRA)\n(assert ";
    emit_formula(os, *f);
    os << ")\n(check-sat)\n";
    return os.str();
  }
  return formula_to_json(*f).dump(2) + "\n";
}

FormulaPtr parse_sentence(const std::string& text, SentenceFormat format) {
  if (format == SentenceFormat::Smtlib2) {
    Smt2Parser parser(text);
    return parser.parse_script();
  }
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const std::exception& e) {
    throw std::invalid_argument(std::string("sentence json: ") + e.what());
  }
  return formula_from_json(j);
}

}  // namespace limavg
