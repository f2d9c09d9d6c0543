#include <doctest.h>
#include <limavg/game.hpp>

#include "test_games.hpp"

#include <random>
#include <stdexcept>

using namespace limavg;

namespace {

bool mentions(const ValidationReport& rep, const std::string& needle) {
  for (const auto& v : rep.violations)
    if (v.find(needle) != std::string::npos) return true;
  return false;
}

}  // namespace

TEST_SUITE("game") {

TEST_CASE("hand-built fixtures are valid") {
  CHECK(validate_game(testg::big_match()).ok());
  CHECK(validate_game(testg::matching_pennies()).ok());
  CHECK(validate_game(testg::two_cycle()).ok());
  CHECK(validate_game(testg::frac_two_state()).ok());
  CHECK(validate_game(testg::g_const(Rational(3, 4))).ok());
}

TEST_CASE("random games are valid") {
  std::mt19937 rng(7);
  for (int i = 0; i < 50; ++i) {
    auto g = testg::random_game(rng, 4, 3);
    CAPTURE(i);
    CHECK(validate_game(g).ok());
  }
}

TEST_CASE("validate_game reports structural violations") {
  auto g = testg::two_cycle();
  SUBCASE("empty move set") {
    g.moves1[0].clear();
    g.cells[0].clear();
    CHECK(mentions(validate_game(g), "empty move set for player 1 at s=1"));
  }
  SUBCASE("move outside alphabet") {
    g.moves2[1] = {9};
    CHECK(mentions(validate_game(g), "player 2 move outside the alphabet at s=2"));
  }
  SUBCASE("missing cell") {
    g.cells[1][0].defined = false;
    CHECK(mentions(validate_game(g), "missing transition/reward"));
  }
  SUBCASE("negative probability") {
    g.cells[0][0].dist = {Rational(-1, 2), Rational(3, 2)};
    auto rep = validate_game(g);
    CHECK(mentions(rep, "negative transition probability"));
  }
  SUBCASE("sum not one") {
    g.cells[0][0].dist = {Rational(1, 2), Rational(1, 4)};
    CHECK(mentions(validate_game(g), "distribution sum != 1"));
  }
  SUBCASE("state count mismatch") {
    g.num_states = 3;
    CHECK(mentions(validate_game(g), "per-state tables do not match the state count"));
  }
}

TEST_CASE("validate_strategy") {
  auto g = testg::big_match();
  auto u1 = testg::uniform_strategy(g, 1);
  auto u2 = testg::uniform_strategy(g, 2);
  CHECK(validate_strategy(g, u1, 1).ok());
  CHECK(validate_strategy(g, u2, 2).ok());

  SUBCASE("shape mismatch") {
    u1.probs[0].push_back(Rational(0));
    CHECK(mentions(validate_strategy(g, u1, 1), "strategy support mismatch at s=1"));
  }
  SUBCASE("bad weights") {
    u1.probs[0] = {Rational(3, 2), Rational(-1, 2)};
    auto rep = validate_strategy(g, u1, 1);
    CHECK(mentions(rep, "negative strategy weight at s=1"));
  }
  SUBCASE("sum not one") {
    u1.probs[0] = {Rational(1, 2), Rational(1, 4)};
    CHECK(mentions(validate_strategy(g, u1, 1), "strategy weights sum != 1 at s=1"));
  }
  SUBCASE("player out of range") {
    CHECK_THROWS_AS(validate_strategy(g, u1, 0), std::invalid_argument);
    CHECK_THROWS_AS(validate_strategy(g, u1, 3), std::invalid_argument);
  }
}

TEST_CASE("size_metrics counts move pairs and bits") {
  auto bm = testg::big_match();
  auto m = size_metrics(bm);
  CHECK(m.states == 3);
  CHECK(m.delta_entries == 2 * 2 + 1 + 1);
  CHECK(m.transition_bits > 0);
  CHECK(m.total_bits == m.transition_bits + m.reward_bits);

  auto one = size_metrics(testg::g_const(Rational(1)));
  CHECK(one.states == 1);
  CHECK(one.delta_entries == 1);
  // reward 1 and the single transition entry 1 both cost 3 bits
  CHECK(one.reward_bits == 3);
  CHECK(one.transition_bits == 3);
}

TEST_CASE("normalize maps rewards onto [0,1]") {
  auto [bm, rec] = normalize(testg::big_match());
  CHECK(rec.m_scale == 1);
  CHECK(!rec.degenerate);
  // rewards 0 and 1 become 1/2 and 1
  CHECK(bm.cell(0, 0, 0).reward == Rational(1, 2));
  CHECK(bm.cell(0, 0, 1).reward == Rational(1));
  // transitions untouched
  CHECK(bm.cell(0, 1, 0).dist == testg::big_match().cell(0, 1, 0).dist);

  auto [mp, rec2] = normalize(testg::matching_pennies());
  CHECK(rec2.m_scale == 1);
  CHECK(mp.cell(0, 0, 0).reward == Rational(1));
  CHECK(mp.cell(0, 0, 1).reward == Rational(0));

  std::mt19937 rng(11);
  for (int i = 0; i < 30; ++i) {
    auto g = testg::random_game(rng, 3, 3);
    auto [ng, r] = normalize(g);
    if (r.degenerate) continue;
    for (const auto& sc : ng.cells)
      for (const auto& c : sc) {
        CHECK(c.reward >= 0);
        CHECK(c.reward <= 1);
      }
  }
}

TEST_CASE("degenerate normalization is flagged and left unchanged") {
  auto z = testg::g_const(Rational(0));
  auto [nz, rec] = normalize(z);
  CHECK(rec.degenerate);
  CHECK(rec.m_scale == 0);
  CHECK(nz.cell(0, 0, 0).reward == Rational(0));
  CHECK_THROWS_AS(denormalize_interval({Rational(0), Rational(1)}, rec), std::domain_error);
}

TEST_CASE("denormalize_interval inverts the reward map") {
  NormalizationRecord rec{Rational(5, 2), false};
  // r -> (r + M)/(2M); the interval map sends a normalized point back to r
  Rational r(-7, 4);
  Rational rn = (r + rec.m_scale) / (2 * rec.m_scale);
  auto back = denormalize_interval({rn, rn}, rec);
  CHECK(back.first == r);
  CHECK(back.second == r);
  auto wide = denormalize_interval({Rational(0), Rational(1)}, rec);
  CHECK(wide.first == Rational(-5, 2));
  CHECK(wide.second == Rational(5, 2));
  CHECK_THROWS_AS(denormalize_interval({Rational(1), Rational(0)}, rec), std::invalid_argument);
}

TEST_CASE("perturbation_bound of a game against itself is zero") {
  for (const auto& g : {testg::big_match(), testg::two_cycle(), testg::frac_two_state()}) {
    auto b = perturbation_bound(g, g);
    REQUIRE(b.eta.has_value());
    CHECK(*b.eta == 0);
    CHECK(b.gamma == 0);
    REQUIRE(b.rho.has_value());
    CHECK(*b.rho == 0);
  }
}

TEST_CASE("perturbation_bound worked example") {
  // one state, one move pair, reward 1 in both games; the single transition
  // entry moves from 1/2 to 11/20, a multiplicative distortion of 1/10.
  // Distributions need not sum to 1 here; only ratios enter the bound.
  auto a = testg::g_const(Rational(1));
  auto b = a;
  a.cells[0][0].dist = {Rational(1, 2)};
  b.cells[0][0].dist = {Rational(11, 20)};
  auto bound = perturbation_bound(a, b);
  REQUIRE(bound.eta.has_value());
  CHECK(*bound.eta == Rational(1, 10));
  CHECK(bound.gamma == 0);
  REQUIRE(bound.rho.has_value());
  // 2*eta*n / (1 - 2*eta*n) * max|r| + gamma = (1/5)/(4/5) * 1 = 1/4
  CHECK(*bound.rho == Rational(1, 4));
}

TEST_CASE("perturbation_bound on a valid two-state pair") {
  // state 1 rows [1/3, 2/3] vs [10/27, 17/27]: ratios 10/9 and 18/17, so
  // eta = 1/9; with n = 2 and max|r| = 1 the bound is (4/9)/(5/9) = 4/5.
  StochasticGame a;
  a.num_states = 2;
  a.actions = {"go"};
  a.moves1 = {{0}, {0}};
  a.moves2 = {{0}, {0}};
  a.cells.resize(2);
  a.set_moves(0, {0}, {0});
  a.set_moves(1, {0}, {0});
  a.set_cell(0, 0, 0, Rational(1), {Rational(1, 3), Rational(2, 3)});
  a.set_cell(1, 0, 0, Rational(0), {Rational(0), Rational(1)});
  StochasticGame b = a;
  b.cells[0][0].dist = {Rational(10, 27), Rational(17, 27)};
  CHECK(validate_game(a).ok());
  CHECK(validate_game(b).ok());

  auto bound = perturbation_bound(a, b);
  REQUIRE(bound.eta.has_value());
  CHECK(*bound.eta == Rational(1, 9));
  CHECK(bound.gamma == 0);
  REQUIRE(bound.rho.has_value());
  CHECK(*bound.rho == Rational(4, 5));
  // the distortion measure is symmetric
  auto rev = perturbation_bound(b, a);
  CHECK(*rev.eta == Rational(1, 9));
}

TEST_CASE("perturbation_bound edge cases") {
  auto a = testg::g_const(Rational(1));
  SUBCASE("zero entry facing a nonzero one kills eta") {
    StochasticGame x = testg::two_cycle();
    StochasticGame y = x;
    y.cells[0][0].dist = {Rational(1, 2), Rational(1, 2)};
    auto bound = perturbation_bound(x, y);
    CHECK(!bound.eta.has_value());
    CHECK(!bound.rho.has_value());
  }
  SUBCASE("reward difference shows up in gamma") {
    auto b = testg::g_const(Rational(1, 4));
    auto bound = perturbation_bound(a, b);
    CHECK(bound.gamma == Rational(3, 4));
    CHECK(*bound.rho == Rational(3, 4));  // eta = 0
  }
  SUBCASE("large distortion leaves rho unbounded") {
    auto b = a;
    b.cells[0][0].dist = {Rational(3)};  // ratio 3, eta = 2 >= 1/(2n)
    auto bound = perturbation_bound(a, b);
    REQUIRE(bound.eta.has_value());
    CHECK(*bound.eta == Rational(2));
    CHECK(!bound.rho.has_value());
  }
  SUBCASE("structure mismatch throws") {
    CHECK_THROWS_AS(perturbation_bound(a, testg::two_cycle()), std::invalid_argument);
    auto c = testg::g_const(Rational(1));
    c.actions = {"other"};
    CHECK_THROWS_AS(perturbation_bound(a, c), std::invalid_argument);
  }
}

}  // TEST_SUITE
