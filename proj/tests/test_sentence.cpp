#include <doctest.h>
#include <limavg/formula.hpp>
#include <limavg/sentence.hpp>

#include "test_games.hpp"

#include <functional>
#include <random>
#include <stdexcept>
#include <vector>

using namespace limavg;

namespace {

// atoms of the strategy/value block: per state one sum equation and one
// nonnegativity guard per move, for each player
long psi_atoms(const StochasticGame& g) {
  long n = 0;
  for (int s = 0; s < g.num_states; ++s)
    n += 2 + static_cast<long>(g.moves1[s].size() + g.moves2[s].size());
  return n;
}

long expected_discounted_atoms(const StochasticGame& g) {
  long n = 1;  // threshold
  for (int s = 0; s < g.num_states; ++s)
    n += 3 * static_cast<long>(g.moves1[s].size()) + 3 * static_cast<long>(g.moves2[s].size()) + 2;
  return n;
}

StochasticGame permute_states(const StochasticGame& g, const std::vector<int>& perm) {
  StochasticGame out;
  out.num_states = g.num_states;
  out.actions = g.actions;
  out.moves1.resize(g.num_states);
  out.moves2.resize(g.num_states);
  out.cells.resize(g.num_states);
  for (int s = 0; s < g.num_states; ++s) {
    out.moves1[perm[s]] = g.moves1[s];
    out.moves2[perm[s]] = g.moves2[s];
    out.cells[perm[s]] = g.cells[s];
    for (auto& c : out.cells[perm[s]]) {
      std::vector<Rational> d(g.num_states);
      for (int t = 0; t < g.num_states; ++t) d[perm[t]] = c.dist[t];
      c.dist = d;
    }
  }
  return out;
}

}  // namespace

TEST_SUITE("sentence") {

TEST_CASE("strategy block shape") {
  auto f1 = build_psi(testg::g_const(Rational(1, 2)));
  CHECK(census(*f1).atoms == 4);
  auto fw = build_psi(testg::g_const_wide(Rational(1, 2)));
  CHECK(census(*fw).atoms == 6);
  auto fb = build_psi(testg::big_match());
  CHECK(census(*fb).atoms == 14);
  CHECK(free_variables(*fb).size() == 8);  // all x and y weights occur free here
}

TEST_CASE("discounted sentence atom count and variable block") {
  auto g = testg::big_match();
  auto f = build_discounted_sentence(g, 1, Rational(1, 2));
  auto c = census(*f);
  CHECK(c.atoms == 31);
  CHECK(c.atoms == expected_discounted_atoms(g));
  CHECK(c.quantified_variables == 11);
  REQUIRE(c.blocks.size() == 1);
  CHECK(!c.blocks[0].universal);
  CHECK(c.blocks[0].width == 11);
  CHECK(c.degree == 3);
  CHECK(c.length == 676);
  REQUIRE(c.bits.has_value());
  CHECK(*c.bits == 977);
  CHECK(c.ring == CoefficientRing::Rational);
  // the discount is the only free variable
  CHECK(free_variables(*f) == std::vector<std::string>{"beta"});
  // one existential block: x weights state by state, then y, then the values
  CHECK(f->kind() == Formula::Kind::Exists);
  CHECK(f->bound() ==
        std::vector<std::string>{"x[1][1]", "x[1][2]", "x[2][1]", "x[3][1]", "y[1][1]", "y[1][2]",
                                 "y[2][1]", "y[3][1]", "v[1]", "v[2]", "v[3]"});
}

TEST_CASE("discounted sentence payoff polynomials") {
  Rational c(3, 4);
  auto g = testg::g_const(c);
  auto f = build_discounted_sentence(g, 1, c);
  REQUIRE(f->kind() == Formula::Kind::Exists);
  auto matrix = f->children()[0];
  REQUIRE(matrix->kind() == Formula::Kind::And);
  // order: strategy block, player-1 payoff rows, player-2 payoff rows, threshold
  REQUIRE(matrix->children().size() == 4);

  Polynomial beta = Polynomial::variable(kVarBeta);
  Polynomial xx = Polynomial::variable(var_x(1, 1));
  Polynomial yy = Polynomial::variable(var_y(1, 1));
  Polynomial vv = Polynomial::variable(var_v(1));
  Polynomial one = Polynomial::constant(Rational(1));

  // u = beta*r*x + (1-beta)*x*v - v, expanded
  Polynomial u1 = beta * Polynomial::constant(c) * xx + xx * vv - beta * xx * vv - vv;
  auto row1 = matrix->children()[1];
  REQUIRE(row1->kind() == Formula::Kind::Or);
  CHECK(row1->children()[0]->kind() == Formula::Kind::AtomLt);
  CHECK(row1->children()[0]->poly() == -u1);
  CHECK(row1->children()[1]->kind() == Formula::Kind::AtomEq);
  CHECK(row1->children()[1]->poly() == -u1);

  Polynomial u2 = beta * Polynomial::constant(c) * yy + yy * vv - beta * yy * vv - vv;
  auto row2 = matrix->children()[2];
  CHECK(row2->children()[0]->poly() == u2);

  auto threshold = matrix->children()[3];
  CHECK(threshold->kind() == Formula::Kind::AtomLt);
  CHECK(threshold->poly() == Polynomial::constant(c) - vv);
}

TEST_CASE("value sentence prefix is exists-forall-exists") {
  auto g = testg::big_match();
  auto f = build_value_sentence(g, 1, Rational(1, 2));
  CHECK(is_closed(*f));
  auto c = census(*f);
  CHECK(c.atoms == 35);
  CHECK(c.atoms == expected_discounted_atoms(g) + 4);
  CHECK(c.quantified_variables == 13);
  REQUIRE(c.blocks.size() == 3);
  CHECK(!c.blocks[0].universal);
  CHECK(c.blocks[0].width == 1);
  CHECK(c.blocks[1].universal);
  CHECK(c.blocks[1].width == 1);
  CHECK(!c.blocks[2].universal);
  CHECK(c.blocks[2].width == 11);
  CHECK(c.degree == 3);
  CHECK(c.length == 718);
  CHECK(*c.bits == 1037);

  CHECK(f->kind() == Formula::Kind::Exists);
  CHECK(f->bound() == std::vector<std::string>{kVarBeta1});
  auto fa = f->children()[0];
  CHECK(fa->kind() == Formula::Kind::Forall);
  CHECK(fa->bound() == std::vector<std::string>{kVarBeta});
}

TEST_CASE("state argument selects the threshold variable") {
  auto g = testg::two_cycle();
  auto f2 = build_discounted_sentence(g, 2, Rational(0));
  auto matrix = f2->children()[0];
  auto threshold = matrix->children()[matrix->children().size() - 1];
  CHECK(threshold->poly() == -Polynomial::variable(var_v(2)));
  CHECK_THROWS_AS(build_discounted_sentence(g, 0, Rational(0)), std::out_of_range);
  CHECK_THROWS_AS(build_discounted_sentence(g, 3, Rational(0)), std::out_of_range);
  CHECK_THROWS_AS(build_value_sentence(g, -1, Rational(0)), std::out_of_range);
}

TEST_CASE("atom counts track the move structure on random games") {
  std::mt19937 rng(17);
  for (int i = 0; i < 20; ++i) {
    auto g = testg::random_game(rng, 3, 3);
    CAPTURE(i);
    auto fb = build_discounted_sentence(g, 1, Rational(1, 3));
    auto fv = build_value_sentence(g, 1, Rational(1, 3));
    auto cb = census(*fb);
    auto cv = census(*fv);
    CHECK(cb.atoms == expected_discounted_atoms(g));
    CHECK(cv.atoms == cb.atoms + 4);
    CHECK(cb.degree == 3);
    CHECK(cv.degree == 3);
    long moves = 0;
    for (int s = 0; s < g.num_states; ++s)
      moves += static_cast<long>(g.moves1[s].size() + g.moves2[s].size());
    CHECK(cb.quantified_variables == moves + g.num_states);
    CHECK(cv.quantified_variables == moves + g.num_states + 2);
    // affine bounds in the number of delta entries
    long de = size_metrics(g).delta_entries;
    CHECK(cb.atoms <= 8 * de + 1);
    CHECK(cv.quantified_variables <= 3 * de + 2 + 2);
  }
}

TEST_CASE("census is invariant under state relabeling") {
  auto g = testg::big_match();
  auto p = permute_states(g, {1, 2, 0});
  REQUIRE(validate_game(p).ok());
  auto a = census(*build_value_sentence(g, 1, Rational(1, 2)));
  auto b = census(*build_value_sentence(p, 2, Rational(1, 2)));
  CHECK(a.atoms == b.atoms);
  CHECK(a.quantified_variables == b.quantified_variables);
  CHECK(a.degree == b.degree);
  CHECK(a.length == b.length);
  CHECK(*a.bits == *b.bits);
}

TEST_CASE("rationalize on the one-atom example") {
  // (1/2) x - 1 < 0 becomes exists z . (x z - 1 < 0 and 2 z - 1 = 0)
  auto x = Polynomial::variable("x");
  auto f = Formula::atom_lt(Polynomial::monomial(Rational(1, 2), {{"x", 1}}) -
                            Polynomial::constant(Rational(1)));
  auto r = rationalize(f);
  auto z = Polynomial::variable(var_z(1));
  auto expected = Formula::exists(
      {var_z(1)},
      Formula::conj({Formula::atom_lt(x * z - Polynomial::constant(Rational(1))),
                     Formula::atom_eq(Polynomial::constant(Rational(2)) * z -
                                      Polynomial::constant(Rational(1)))}));
  CHECK(structurally_equal(*r, *expected));
}

TEST_CASE("rationalize is the identity on integer input") {
  auto f = Formula::exists({"x"}, Formula::atom_lt(Polynomial::variable("x") -
                                                   Polynomial::constant(Rational(2))));
  CHECK(rationalize(f) == f);  // same node, not just equal
}

TEST_CASE("rationalize is idempotent and lands in the integer ring") {
  auto g = testg::frac_two_state();
  auto f = build_value_sentence(g, 1, Rational(1, 2));
  CHECK(census(*f).ring == CoefficientRing::Rational);
  auto r = rationalize(f);
  auto c = census(*r);
  CHECK(c.ring == CoefficientRing::Integer);
  CHECK(is_closed(*r));
  CHECK(rationalize(r) == r);
  // fractional transition entries sit on cubic monomials, so the degree bumps
  CHECK(census(*f).degree == 3);
  CHECK(c.degree == 4);
  // the z block joins the innermost existential block: still three blocks
  REQUIRE(c.blocks.size() == 3);
  CHECK(c.blocks[2].width > census(*f).blocks[2].width);
}

TEST_CASE("rationalize keeps degree 3 when only the threshold is fractional") {
  // integer rewards and transitions; the lone fraction alpha = 1/2 has degree 1
  auto g = testg::big_match();
  auto f = build_value_sentence(g, 1, Rational(1, 2));
  auto r = rationalize(f);
  auto c = census(*r);
  CHECK(c.ring == CoefficientRing::Integer);
  CHECK(c.degree == 3);
  CHECK(c.atoms == 36);                  // one defining equation for 1/2
  CHECK(c.quantified_variables == 14);
}

TEST_CASE("rationalize numbers the z variables by ascending value") {
  // two distinct fractions 3/4 and -3/4 from the constant game at its own level
  Rational c(3, 4);
  auto f = build_value_sentence(testg::g_const(c), 1, c);
  auto r = rationalize(f);
  auto cen = census(*r);
  CHECK(cen.atoms == 15);
  CHECK(cen.quantified_variables == 7);
  CHECK(cen.ring == CoefficientRing::Integer);
  CHECK(cen.degree == 3);
  // z[1] carries -3/4, z[2] carries 3/4: find the defining equations
  // 4 z[1] + 3 = 0 and 4 z[2] - 3 = 0 somewhere in the matrix
  auto z1 = Polynomial::monomial(Rational(4), {{var_z(1), 1}}) + Polynomial::constant(Rational(3));
  auto z2 = Polynomial::monomial(Rational(4), {{var_z(2), 1}}) - Polynomial::constant(Rational(3));
  std::function<int(const Formula&, const Polynomial&)> count =
      [&](const Formula& node, const Polynomial& want) -> int {
    int hits = 0;
    if (node.kind() == Formula::Kind::AtomEq && node.poly() == want) ++hits;
    for (const auto& ch : node.children()) hits += count(*ch, want);
    return hits;
  };
  CHECK(count(*r, z1) == 1);
  CHECK(count(*r, z2) == 1);
}

TEST_CASE("rationalize refuses symbolic coefficients") {
  auto sym = Formula::atom_lt(Polynomial::from_terms(
      {Monomial{Coefficient{std::string("c")}, {{"x", 1}}}, Monomial{Rational(1, 2), {}}}));
  CHECK_THROWS_WITH_AS(rationalize(sym), "cannot rationalize symbolic coefficients",
                       std::domain_error);
}

}  // TEST_SUITE
