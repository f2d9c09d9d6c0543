#include <doctest.h>
#include <limavg/matrix_game.hpp>

#include <cmath>
#include <random>
#include <stdexcept>

using namespace limavg;

namespace {

Matrix from_ints(std::vector<std::vector<long>> rows) {
  Matrix m(rows.size());
  for (size_t i = 0; i < rows.size(); ++i)
    for (long v : rows[i]) m[i].push_back(Rational(v));
  return m;
}

// both strategies certify the value exactly: the row mix gets >= value
// against every column and the column mix concedes <= value on every row
void check_certificates(const Matrix& m, const MatrixGameSolution& sol) {
  CHECK(best_response_value(m, 1, sol.row_strategy) == sol.value);
  CHECK(best_response_value(m, 2, sol.col_strategy) == sol.value);
}

Matrix random_matrix(std::mt19937& rng, int max_dim) {
  std::uniform_int_distribution<int> dim(1, max_dim);
  std::uniform_int_distribution<int> num(-9, 9);
  std::uniform_int_distribution<int> den(1, 9);
  Matrix m(dim(rng));
  int cols = dim(rng);
  for (auto& row : m)
    for (int j = 0; j < cols; ++j) {
      Rational q(num(rng), den(rng));
      q.canonicalize();
      row.push_back(q);
    }
  return m;
}

}  // namespace

TEST_SUITE("matrix_game") {

TEST_CASE("one by one") {
  auto sol = solve_matrix_game(from_ints({{5}}));
  CHECK(sol.value == 5);
  CHECK(sol.row_strategy == std::vector<Rational>{Rational(1)});
  CHECK(sol.col_strategy == std::vector<Rational>{Rational(1)});
}

TEST_CASE("two by two without a saddle point") {
  auto m = from_ints({{3, 0}, {1, 2}});
  auto sol = solve_matrix_game(m);
  CHECK(sol.value == Rational(3, 2));
  CHECK(sol.row_strategy == std::vector<Rational>{Rational(1, 4), Rational(3, 4)});
  CHECK(sol.col_strategy == std::vector<Rational>{Rational(1, 2), Rational(1, 2)});
  check_certificates(m, sol);
}

TEST_CASE("negative entries") {
  // no saddle: value (ad - bc)/(a + d - b - c) = -7/5
  auto m = from_ints({{-1, -2}, {-3, 1}});
  auto sol = solve_matrix_game(m);
  CHECK(sol.value == Rational(-7, 5));
  check_certificates(m, sol);
}

TEST_CASE("saddle point goes pure") {
  auto m = from_ints({{2, 3}, {0, 1}});
  auto sol = solve_matrix_game(m);
  CHECK(sol.value == 2);
  CHECK(sol.row_strategy == std::vector<Rational>{Rational(1), Rational(0)});
  CHECK(sol.col_strategy == std::vector<Rational>{Rational(1), Rational(0)});
  check_certificates(m, sol);
}

TEST_CASE("duplicate rows and columns") {
  auto m = from_ints({{1, 1}, {1, 1}});
  auto sol = solve_matrix_game(m);
  CHECK(sol.value == 1);
  check_certificates(m, sol);
}

TEST_CASE("rectangular games") {
  auto wide = from_ints({{0, 2, -1}});
  auto sol = solve_matrix_game(wide);
  CHECK(sol.value == -1);  // single row, column player picks the worst entry
  check_certificates(wide, sol);

  auto tall = from_ints({{0}, {2}, {-1}});
  sol = solve_matrix_game(tall);
  CHECK(sol.value == 2);
  check_certificates(tall, sol);

  // matching pennies embedded in a 2x3 with a dominated column
  auto m = from_ints({{1, -1, 5}, {-1, 1, 5}});
  sol = solve_matrix_game(m);
  CHECK(sol.value == 0);
  check_certificates(m, sol);
}

TEST_CASE("random matrices produce exact certificates") {
  std::mt19937 rng(42);
  for (int i = 0; i < 60; ++i) {
    auto m = random_matrix(rng, 5);
    CAPTURE(i);
    auto sol = solve_matrix_game(m);
    check_certificates(m, sol);
    Rational sum(0);
    for (const auto& p : sol.row_strategy) {
      CHECK(p >= 0);
      sum += p;
    }
    CHECK(sum == 1);
  }
}

TEST_CASE("best_response_value is a one-sided bound for any mix") {
  auto m = from_ints({{3, 0}, {1, 2}});
  auto any = std::vector<Rational>{Rational(1, 2), Rational(1, 2)};
  // a suboptimal row mix guarantees less than the value
  CHECK(best_response_value(m, 1, any) == Rational(1));
  CHECK(best_response_value(m, 2, any) == Rational(3, 2));
}

TEST_CASE("input validation") {
  CHECK_THROWS_AS(solve_matrix_game({}), std::invalid_argument);
  CHECK_THROWS_AS(solve_matrix_game({{Rational(1)}, {}}), std::invalid_argument);
  Matrix ragged = {{Rational(1), Rational(2)}, {Rational(3)}};
  CHECK_THROWS_AS(solve_matrix_game(ragged), std::invalid_argument);

  auto m = from_ints({{3, 0}, {1, 2}});
  CHECK_THROWS_AS(best_response_value(m, 3, {Rational(1), Rational(0)}), std::invalid_argument);
  CHECK_THROWS_AS(best_response_value(m, 1, {Rational(1)}), std::invalid_argument);
  CHECK_THROWS_AS(best_response_value(m, 1, {Rational(2), Rational(-1)}), std::invalid_argument);
  CHECK_THROWS_AS(best_response_value(m, 1, {Rational(1, 2), Rational(1, 4)}), std::invalid_argument);
}

TEST_CASE("numeric variant tracks the exact solver") {
  std::mt19937 rng(99);
  for (int i = 0; i < 40; ++i) {
    auto m = random_matrix(rng, 4);
    CAPTURE(i);
    auto exact = solve_matrix_game(m);
    std::vector<std::vector<double>> md(m.size());
    for (size_t r = 0; r < m.size(); ++r)
      for (const auto& q : m[r]) md[r].push_back(to_double(q));
    auto num = solve_matrix_game_numeric(md);
    CHECK(num.reliable);
    CHECK(std::abs(num.value - to_double(exact.value)) < 1e-9);
  }
}

}  // TEST_SUITE
