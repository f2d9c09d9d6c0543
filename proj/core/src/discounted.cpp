#include "limavg/discounted.hpp"

#include "limavg/matrix_game.hpp"

#include <cmath>
#include <optional>
#include <stdexcept>

namespace limavg {

namespace {

void require_valid(const StochasticGame& g) {
  auto rep = validate_game(g);
  if (!rep.ok()) throw std::invalid_argument("invalid game: " + rep.violations.front());
}

void require_beta(const Rational& beta) {
  if (beta <= 0 || beta >= 1) throw std::invalid_argument("beta must lie in (0,1)");
}

void require_state_count(const StochasticGame& g, const Valuation& v) {
  if (static_cast<int>(v.size()) != g.num_states)
    throw std::invalid_argument("valuation length does not match the state count");
}

Rational max_abs_reward(const StochasticGame& g) {
  Rational m(0);
  for (const auto& sc : g.cells)
    for (const auto& c : sc)
      if (c.defined && abs(c.reward) > m) m = abs(c.reward);
  return m;
}

// exact a-priori count, capped; used by the auto-mode heuristic only
long bounded_iteration_count(const Rational& beta, const Rational& tol, const Rational& span,
                             long cap) {
  Rational threshold = tol * beta / (1 - beta);
  Rational cur = span;
  Rational shrink = 1 - beta;
  for (long k = 0; k <= cap; ++k) {
    if (cur <= threshold) return k;
    cur *= shrink;
  }
  return cap + 1;
}

struct NumericStep {
  std::vector<double> values;
  std::vector<std::vector<double>> strat1;
  std::vector<std::vector<double>> strat2;
};

// double-precision operator application with an exact fallback per state when
// the float simplex is unreliable
NumericStep numeric_shapley(const StochasticGame& g,
                            const std::vector<std::vector<std::vector<double>>>& dist_d,
                            const std::vector<std::vector<double>>& reward_d, double beta,
                            const std::vector<double>& v) {
  NumericStep out;
  out.values.resize(g.num_states);
  out.strat1.resize(g.num_states);
  out.strat2.resize(g.num_states);
  for (int s = 0; s < g.num_states; ++s) {
    const size_t p = g.moves1[s].size();
    const size_t q = g.moves2[s].size();
    std::vector<std::vector<double>> m(p, std::vector<double>(q));
    for (size_t i = 0; i < p; ++i) {
      for (size_t j = 0; j < q; ++j) {
        const size_t flat = i * q + j;
        double cont = 0;
        const auto& d = dist_d[s][flat];
        for (int t = 0; t < g.num_states; ++t) cont += d[t] * v[t];
        m[i][j] = beta * reward_d[s][flat] + (1 - beta) * cont;
      }
    }
    auto sol = solve_matrix_game_numeric(m);
    if (!sol.reliable) {
      Matrix exact(p, std::vector<Rational>(q));
      for (size_t i = 0; i < p; ++i)
        for (size_t j = 0; j < q; ++j) exact[i][j] = rational_from_double(m[i][j]);
      auto es = solve_matrix_game(exact);
      sol.value = to_double(es.value);
      for (size_t i = 0; i < p; ++i) sol.row_strategy[i] = to_double(es.row_strategy[i]);
      for (size_t j = 0; j < q; ++j) sol.col_strategy[j] = to_double(es.col_strategy[j]);
    }
    out.values[s] = sol.value;
    out.strat1[s] = std::move(sol.row_strategy);
    out.strat2[s] = std::move(sol.col_strategy);
  }
  return out;
}

// Discounted value of one fixed stationary pair: solves
// (I - (1-beta) P) w = beta * rho by Gaussian elimination. The system is
// diagonally dominant when the strategy weights are proper distributions, so
// a vanishing pivot only appears on degenerate float input.
std::optional<std::vector<double>> pair_value(const StochasticGame& g,
                                              const std::vector<std::vector<std::vector<double>>>& dist_d,
                                              const std::vector<std::vector<double>>& reward_d,
                                              double beta,
                                              const std::vector<std::vector<double>>& strat1,
                                              const std::vector<std::vector<double>>& strat2) {
  const int n = g.num_states;
  auto clean = [](std::vector<double> w) -> std::optional<std::vector<double>> {
    double sum = 0;
    for (auto& x : w) {
      if (x < 0) x = 0;
      sum += x;
    }
    if (!(sum > 0)) return std::nullopt;
    for (auto& x : w) x /= sum;
    return w;
  };

  std::vector<std::vector<double>> a(n, std::vector<double>(n + 1, 0.0));
  for (int s = 0; s < n; ++s) {
    auto xs = clean(strat1[s]);
    auto ys = clean(strat2[s]);
    if (!xs || !ys) return std::nullopt;
    const size_t q = g.moves2[s].size();
    double rho = 0;
    std::vector<double> row(n, 0.0);
    for (size_t i = 0; i < xs->size(); ++i) {
      if ((*xs)[i] == 0) continue;
      for (size_t j = 0; j < q; ++j) {
        const double w = (*xs)[i] * (*ys)[j];
        if (w == 0) continue;
        const size_t flat = i * q + j;
        rho += w * reward_d[s][flat];
        for (int t = 0; t < n; ++t) row[t] += w * dist_d[s][flat][t];
      }
    }
    for (int t = 0; t < n; ++t) a[s][t] = (s == t ? 1.0 : 0.0) - (1 - beta) * row[t];
    a[s][n] = beta * rho;
  }

  // Gaussian elimination with partial pivoting
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
    if (std::abs(a[pivot][col]) < 1e-12) return std::nullopt;
    std::swap(a[col], a[pivot]);
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      const double f = a[r][col] / a[col][col];
      if (f == 0) continue;
      for (int c = col; c <= n; ++c) a[r][c] -= f * a[col][c];
    }
  }
  std::vector<double> w(n);
  for (int s = 0; s < n; ++s) w[s] = a[s][n] / a[s][s];
  return w;
}

// exact renormalization of a sampled float distribution
std::vector<Rational> to_distribution(const std::vector<double>& w) {
  std::vector<Rational> out(w.size());
  Rational sum(0);
  for (size_t i = 0; i < w.size(); ++i) {
    out[i] = (w[i] > 0) ? rational_from_double(w[i]) : Rational(0);
    sum += out[i];
  }
  if (sum == 0) {
    Rational uniform(1, static_cast<unsigned long>(w.size()));
    for (auto& x : out) x = uniform;
  } else {
    for (auto& x : out) x /= sum;
  }
  return out;
}

}  // namespace

ShapleyResult shapley_operator(const StochasticGame& g, const Rational& beta, const Valuation& v) {
  require_valid(g);
  require_beta(beta);
  require_state_count(g, v);

  ShapleyResult out;
  out.values.resize(g.num_states);
  out.strategy1.probs.resize(g.num_states);
  out.strategy2.probs.resize(g.num_states);
  for (int s = 0; s < g.num_states; ++s) {
    const size_t p = g.moves1[s].size();
    const size_t q = g.moves2[s].size();
    Matrix m(p, std::vector<Rational>(q));
    for (size_t i = 0; i < p; ++i) {
      for (size_t j = 0; j < q; ++j) {
        const auto& c = g.cell(s, static_cast<int>(i), static_cast<int>(j));
        Rational cont(0);
        for (int t = 0; t < g.num_states; ++t)
          if (c.dist[t] != 0) cont += c.dist[t] * v[t];
        m[i][j] = beta * c.reward + (1 - beta) * cont;
      }
    }
    auto sol = solve_matrix_game(m);
    out.values[s] = std::move(sol.value);
    out.strategy1.probs[s] = std::move(sol.row_strategy);
    out.strategy2.probs[s] = std::move(sol.col_strategy);
  }
  return out;
}

DiscountedSolution discounted_value(const StochasticGame& g, const Rational& beta,
                                    const Rational& tol, const DiscountedConfig& cfg) {
  require_valid(g);
  require_beta(beta);
  if (tol <= 0) throw std::invalid_argument("tol must be positive");

  const Rational threshold = tol * beta / (1 - beta);
  SolverMode mode = cfg.mode;
  if (mode == SolverMode::Auto) {
    auto sm = size_metrics(g);
    bool small = static_cast<long>(sm.states) * sm.delta_entries <= 64;
    bool short_run = small && bounded_iteration_count(beta, tol, max_abs_reward(g), 256) <= 256;
    mode = (small && short_run) ? SolverMode::Exact : SolverMode::Numeric;
  }

  DiscountedSolution sol;
  sol.mode_used = mode;

  if (mode == SolverMode::Exact) {
    Valuation v(g.num_states, Rational(0));
    ShapleyResult step;
    for (;;) {
      step = shapley_operator(g, beta, v);
      ++sol.iterations;
      Rational residual(0);
      for (int s = 0; s < g.num_states; ++s) {
        Rational d = abs(step.values[s] - v[s]);
        if (d > residual) residual = d;
      }
      v = step.values;
      sol.residual = residual;
      if (residual <= threshold) break;
      if (sol.iterations >= cfg.max_iterations) {
        sol.converged = false;
        break;
      }
    }
    sol.values = std::move(step.values);
    sol.strategy1 = std::move(step.strategy1);
    sol.strategy2 = std::move(step.strategy2);
  } else {
    // precompute double tables once
    std::vector<std::vector<std::vector<double>>> dist_d(g.num_states);
    std::vector<std::vector<double>> reward_d(g.num_states);
    for (int s = 0; s < g.num_states; ++s) {
      dist_d[s].resize(g.cells[s].size());
      reward_d[s].resize(g.cells[s].size());
      for (size_t k = 0; k < g.cells[s].size(); ++k) {
        reward_d[s][k] = to_double(g.cells[s][k].reward);
        dist_d[s][k].resize(g.num_states);
        for (int t = 0; t < g.num_states; ++t) dist_d[s][k][t] = to_double(g.cells[s][k].dist[t]);
      }
    }
    const double beta_d = to_double(beta);
    const double threshold_d = to_double(threshold);
    std::vector<double> v(g.num_states, 0.0);
    NumericStep step;
    double stalled_residual = -1;
    auto sup_gap = [&](const std::vector<double>& x, const std::vector<double>& y) {
      double r = 0;
      for (int s = 0; s < g.num_states; ++s) r = std::max(r, std::abs(x[s] - y[s]));
      return r;
    };
    for (;;) {
      step = numeric_shapley(g, dist_d, reward_d, beta_d, v);
      ++sol.iterations;
      double residual = sup_gap(step.values, v);
      // Acceleration: plain iteration contracts only by (1-beta) per step,
      // hopeless for tiny beta. Evaluating the current strategy pair exactly
      // jumps across that; the jump is kept only when the operator residual
      // at the jumped point is strictly smaller, so the loop never regresses.
      if (residual > threshold_d) {
        auto w = pair_value(g, dist_d, reward_d, beta_d, step.strat1, step.strat2);
        if (w) {
          NumericStep jump = numeric_shapley(g, dist_d, reward_d, beta_d, *w);
          ++sol.iterations;
          double jump_residual = sup_gap(jump.values, *w);
          if (jump_residual < residual) {
            step = std::move(jump);
            residual = jump_residual;
          }
        }
      }
      v = step.values;
      if (residual <= threshold_d) {
        sol.residual = rational_from_double(residual);
        break;
      }
      // detect a rounding floor: residual no longer shrinking at all
      if (residual == stalled_residual) {
        sol.residual = rational_from_double(residual);
        sol.converged = false;
        break;
      }
      stalled_residual = residual;
      if (sol.iterations >= cfg.max_iterations) {
        sol.residual = rational_from_double(residual);
        sol.converged = false;
        break;
      }
    }
    sol.values.resize(g.num_states);
    sol.strategy1.probs.resize(g.num_states);
    sol.strategy2.probs.resize(g.num_states);
    for (int s = 0; s < g.num_states; ++s) {
      sol.values[s] = rational_from_double(step.values[s]);
      sol.strategy1.probs[s] = to_distribution(step.strat1[s]);
      sol.strategy2.probs[s] = to_distribution(step.strat2[s]);
    }
  }

  sol.error_bound = sol.residual * (1 - beta) / beta;
  return sol;
}

long iteration_bound(const Rational& beta, const Rational& tol, const Rational& reward_span) {
  require_beta(beta);
  if (tol <= 0) throw std::invalid_argument("tol must be positive");
  if (reward_span < 0) throw std::invalid_argument("reward_span must be nonnegative");

  const Rational threshold = tol * beta / (1 - beta);
  if (reward_span <= threshold) return 0;

  // predicate P(k): span * (1-beta)^k <= threshold, checked in integers as
  //   span_num * num^k * thr_den <= thr_num * span_den * den^k
  const Rational shrink = 1 - beta;
  const Integer num = shrink.get_num();
  const Integer den = shrink.get_den();
  auto holds = [&](long k) {
    Integer nk, dk;
    mpz_pow_ui(nk.get_mpz_t(), num.get_mpz_t(), static_cast<unsigned long>(k));
    mpz_pow_ui(dk.get_mpz_t(), den.get_mpz_t(), static_cast<unsigned long>(k));
    Integer lhs = reward_span.get_num() * nk * threshold.get_den();
    Integer rhs = threshold.get_num() * reward_span.get_den() * dk;
    return lhs <= rhs;
  };

  // float guess, then exact adjustment by +-1 steps
  const double lg = std::log(to_double(threshold) / to_double(reward_span)) /
                    std::log(to_double(shrink));
  if (!(lg < 1e7)) throw std::overflow_error("iteration_bound: count exceeds 10^7");
  long k = std::max<long>(0, static_cast<long>(std::ceil(lg)) - 2);
  while (!holds(k)) ++k;
  while (k > 0 && holds(k - 1)) --k;
  return k;
}

}  // namespace limavg
