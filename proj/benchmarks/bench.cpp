#include <benchmark/benchmark.h>

#include <limavg/approximate.hpp>
#include <limavg/chain.hpp>
#include <limavg/discounted.hpp>
#include <limavg/formula_io.hpp>
#include <limavg/matrix_game.hpp>
#include <limavg/sentence.hpp>

#include <test_games.hpp>

#include <random>

using namespace limavg;

namespace {

Matrix random_matrix(int dim, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_int_distribution<int> num(-9, 9), den(1, 9);
  Matrix m(dim);
  for (auto& row : m)
    for (int j = 0; j < dim; ++j) row.push_back(Rational(num(rng), den(rng)));
  return m;
}

void BM_MatrixGameExact(benchmark::State& state) {
  auto m = random_matrix(static_cast<int>(state.range(0)), 77);
  for (auto _ : state) benchmark::DoNotOptimize(solve_matrix_game(m));
}
BENCHMARK(BM_MatrixGameExact)->Arg(2)->Arg(3)->Arg(5)->Arg(8);

void BM_MatrixGameNumeric(benchmark::State& state) {
  auto m = random_matrix(static_cast<int>(state.range(0)), 77);
  std::vector<std::vector<double>> md(m.size());
  for (size_t i = 0; i < m.size(); ++i)
    for (const auto& q : m[i]) md[i].push_back(to_double(q));
  for (auto _ : state) benchmark::DoNotOptimize(solve_matrix_game_numeric(md));
}
BENCHMARK(BM_MatrixGameNumeric)->Arg(2)->Arg(3)->Arg(5)->Arg(8);

void BM_ShapleyOperator(benchmark::State& state) {
  auto g = testg::big_match();
  Valuation v = {Rational(1, 3), Rational(0), Rational(1)};
  for (auto _ : state) benchmark::DoNotOptimize(shapley_operator(g, Rational(1, 10), v));
}
BENCHMARK(BM_ShapleyOperator);

void BM_DiscountedExact(benchmark::State& state) {
  auto g = testg::big_match();
  DiscountedConfig cfg;
  cfg.mode = SolverMode::Exact;
  for (auto _ : state)
    benchmark::DoNotOptimize(discounted_value(g, Rational(1, 10), Rational(1, 1000000), cfg));
}
BENCHMARK(BM_DiscountedExact);

void BM_DiscountedNumericDeep(benchmark::State& state) {
  auto g = testg::big_match();
  Rational beta = pow2(-static_cast<long>(state.range(0)));
  DiscountedConfig cfg;
  cfg.mode = SolverMode::Numeric;
  for (auto _ : state)
    benchmark::DoNotOptimize(discounted_value(g, beta, Rational(1, 1000000), cfg));
}
BENCHMARK(BM_DiscountedNumericDeep)->Arg(6)->Arg(12)->Arg(20);

void BM_LongRunAverage(benchmark::State& state) {
  auto g = testg::big_match();
  auto c = induced_chain(g, testg::uniform_strategy(g, 1), testg::uniform_strategy(g, 2));
  for (auto _ : state) benchmark::DoNotOptimize(long_run_average_all(c));
}
BENCHMARK(BM_LongRunAverage);

void BM_SimulatePlay(benchmark::State& state) {
  auto g = testg::big_match();
  auto s1 = testg::uniform_strategy(g, 1);
  auto s2 = testg::uniform_strategy(g, 2);
  for (auto _ : state)
    benchmark::DoNotOptimize(simulate_play(g, s1, s2, 1, state.range(0), 42));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SimulatePlay)->Arg(1000)->Arg(10000);

void BM_BuildValueSentence(benchmark::State& state) {
  auto g = testg::big_match();
  for (auto _ : state) benchmark::DoNotOptimize(build_value_sentence(g, 1, Rational(1, 2)));
}
BENCHMARK(BM_BuildValueSentence);

void BM_CensusValueSentence(benchmark::State& state) {
  auto f = build_value_sentence(testg::big_match(), 1, Rational(1, 2));
  for (auto _ : state) benchmark::DoNotOptimize(census(*f));
}
BENCHMARK(BM_CensusValueSentence);

void BM_Rationalize(benchmark::State& state) {
  auto f = build_value_sentence(testg::frac_two_state(), 1, Rational(1, 2));
  for (auto _ : state) benchmark::DoNotOptimize(rationalize(f));
}
BENCHMARK(BM_Rationalize);

void BM_ExportSmt2(benchmark::State& state) {
  auto f = build_value_sentence(testg::big_match(), 1, Rational(1, 2));
  for (auto _ : state) benchmark::DoNotOptimize(export_sentence(f, SentenceFormat::Smtlib2));
}
BENCHMARK(BM_ExportSmt2);

void BM_ApproximateValue(benchmark::State& state) {
  auto g = testg::big_match();
  for (auto _ : state)
    benchmark::DoNotOptimize(approximate_value(g, 1, Rational(1, 16), OracleConfig{}));
}
BENCHMARK(BM_ApproximateValue);

}  // namespace

BENCHMARK_MAIN();
