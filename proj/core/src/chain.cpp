#include "limavg/chain.hpp"

#include "linalg.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>

namespace limavg {

namespace {

void require_chain(const RewardChain& chain) {
  const size_t n = chain.transition.size();
  if (n == 0 || chain.reward.size() != n)
    throw std::invalid_argument("chain: shape mismatch");
  for (const auto& row : chain.transition) {
    if (row.size() != n) throw std::invalid_argument("chain: ragged transition matrix");
    Rational sum(0);
    for (const auto& p : row) {
      if (p < 0) throw std::invalid_argument("chain: negative probability");
      sum += p;
    }
    if (sum != 1) throw std::invalid_argument("chain: row does not sum to 1");
  }
}

// Tarjan strongly connected components on the support graph; returns the
// component id per state, ids in reverse topological order.
struct SccResult {
  std::vector<int> comp;
  int count = 0;
};

SccResult tarjan(const std::vector<std::vector<Rational>>& p) {
  const int n = static_cast<int>(p.size());
  SccResult res;
  res.comp.assign(n, -1);
  std::vector<int> index(n, -1), low(n, 0), stack;
  std::vector<bool> on_stack(n, false);
  int next_index = 0;

  // iterative DFS to dodge recursion limits
  struct Frame {
    int v;
    int next_succ;
  };
  for (int root = 0; root < n; ++root) {
    if (index[root] != -1) continue;
    std::vector<Frame> frames{{root, 0}};
    index[root] = low[root] = next_index++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!frames.empty()) {
      Frame& f = frames.back();
      int v = f.v;
      bool descended = false;
      while (f.next_succ < n) {
        int w = f.next_succ++;
        if (p[v][w] == 0) continue;
        if (index[w] == -1) {
          index[w] = low[w] = next_index++;
          stack.push_back(w);
          on_stack[w] = true;
          frames.push_back({w, 0});
          descended = true;
          break;
        }
        if (on_stack[w]) low[v] = std::min(low[v], index[w]);
      }
      if (descended) continue;
      if (low[v] == index[v]) {
        for (;;) {
          int w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          res.comp[w] = res.count;
          if (w == v) break;
        }
        ++res.count;
      }
      frames.pop_back();
      if (!frames.empty()) {
        int parent = frames.back().v;
        low[parent] = std::min(low[parent], low[v]);
      }
    }
  }
  return res;
}

std::uint64_t draw_bits(std::mt19937_64& rng) { return rng() >> 11; }

double uniform53(std::mt19937_64& rng) {
  return static_cast<double>(draw_bits(rng)) * 0x1.0p-53;
}

size_t sample_index(const std::vector<long double>& cum, double u) {
  for (size_t k = 0; k + 1 < cum.size(); ++k)
    if (static_cast<long double>(u) < cum[k]) return k;
  return cum.size() - 1;
}

std::vector<long double> cumulative(const std::vector<Rational>& probs) {
  std::vector<long double> cum(probs.size());
  long double acc = 0;
  for (size_t k = 0; k < probs.size(); ++k) {
    acc += static_cast<long double>(to_double(probs[k]));
    cum[k] = acc;
  }
  if (!cum.empty()) cum.back() = 1.0L;
  return cum;
}

}  // namespace

RewardChain induced_chain(const StochasticGame& g, const StationaryStrategy& s1,
                          const StationaryStrategy& s2) {
  auto grep = validate_game(g);
  if (!grep.ok()) throw std::invalid_argument("invalid game: " + grep.violations.front());
  auto r1 = validate_strategy(g, s1, 1);
  if (!r1.ok()) throw std::invalid_argument("invalid strategy1: " + r1.violations.front());
  auto r2 = validate_strategy(g, s2, 2);
  if (!r2.ok()) throw std::invalid_argument("invalid strategy2: " + r2.violations.front());

  RewardChain chain;
  chain.transition.assign(g.num_states, std::vector<Rational>(g.num_states, Rational(0)));
  chain.reward.assign(g.num_states, Rational(0));
  for (int s = 0; s < g.num_states; ++s) {
    for (size_t i = 0; i < g.moves1[s].size(); ++i) {
      if (s1.probs[s][i] == 0) continue;
      for (size_t j = 0; j < g.moves2[s].size(); ++j) {
        if (s2.probs[s][j] == 0) continue;
        Rational w = s1.probs[s][i] * s2.probs[s][j];
        const auto& c = g.cell(s, static_cast<int>(i), static_cast<int>(j));
        chain.reward[s] += w * c.reward;
        for (int t = 0; t < g.num_states; ++t)
          if (c.dist[t] != 0) chain.transition[s][t] += w * c.dist[t];
      }
    }
  }
  return chain;
}

std::vector<Rational> long_run_average_all(const RewardChain& chain) {
  require_chain(chain);
  const int n = static_cast<int>(chain.transition.size());
  const auto& p = chain.transition;

  auto scc = tarjan(p);
  // a component is recurrent iff no edge leaves it
  std::vector<bool> closed(scc.count, true);
  for (int s = 0; s < n; ++s)
    for (int t = 0; t < n; ++t)
      if (p[s][t] != 0 && scc.comp[t] != scc.comp[s]) closed[scc.comp[s]] = false;

  std::vector<Rational> value(n);
  std::vector<bool> recurrent(n, false);

  for (int cid = 0; cid < scc.count; ++cid) {
    if (!closed[cid]) continue;
    std::vector<int> members;
    for (int s = 0; s < n; ++s)
      if (scc.comp[s] == cid) members.push_back(s);
    const size_t m = members.size();
    // stationary distribution: mu (P_C - I) = 0 with sum(mu) = 1, solved as
    // the transposed system with the last equation replaced by sum = 1
    std::vector<std::vector<Rational>> a(m, std::vector<Rational>(m, Rational(0)));
    std::vector<Rational> b(m, Rational(0));
    for (size_t row = 0; row + 1 < m; ++row) {
      for (size_t col = 0; col < m; ++col) {
        a[row][col] = p[members[col]][members[row]];
        if (row == col) a[row][col] -= 1;
      }
    }
    for (size_t col = 0; col < m; ++col) a[m - 1][col] = 1;
    b[m - 1] = 1;
    auto mu = detail::solve_linear(std::move(a), std::move(b));
    if (!mu) throw std::logic_error("chain: singular stationary system");
    Rational gain(0);
    for (size_t k = 0; k < m; ++k) gain += (*mu)[k] * chain.reward[members[k]];
    for (int s : members) {
      value[s] = gain;
      recurrent[s] = true;
    }
  }

  std::vector<int> transient;
  for (int s = 0; s < n; ++s)
    if (!recurrent[s]) transient.push_back(s);
  if (!transient.empty()) {
    // value(s) = sum_t P(s,t) value(t) on transient states
    const size_t m = transient.size();
    std::vector<int> pos(n, -1);
    for (size_t k = 0; k < m; ++k) pos[transient[k]] = static_cast<int>(k);
    std::vector<std::vector<Rational>> a(m, std::vector<Rational>(m, Rational(0)));
    std::vector<Rational> b(m, Rational(0));
    for (size_t row = 0; row < m; ++row) {
      int s = transient[row];
      a[row][row] = 1;
      for (int t = 0; t < n; ++t) {
        if (p[s][t] == 0) continue;
        if (recurrent[t])
          b[row] += p[s][t] * value[t];
        else
          a[row][pos[t]] -= p[s][t];
      }
    }
    auto w = detail::solve_linear(std::move(a), std::move(b));
    if (!w) throw std::logic_error("chain: singular absorption system");
    for (size_t k = 0; k < m; ++k) value[transient[k]] = (*w)[k];
  }
  return value;
}

Rational long_run_average(const RewardChain& chain, int state) {
  auto all = long_run_average_all(chain);
  if (state < 1 || state > static_cast<int>(all.size()))
    throw std::invalid_argument("state out of range");
  return all[state - 1];
}

std::vector<Rational> discounted_payoff(const RewardChain& chain, const Rational& beta) {
  require_chain(chain);
  if (beta <= 0 || beta >= 1) throw std::invalid_argument("beta must lie in (0,1)");
  const size_t n = chain.transition.size();
  std::vector<std::vector<Rational>> a(n, std::vector<Rational>(n));
  std::vector<Rational> b(n);
  for (size_t s = 0; s < n; ++s) {
    for (size_t t = 0; t < n; ++t) {
      a[s][t] = -(1 - beta) * chain.transition[s][t];
      if (s == t) a[s][t] += 1;
    }
    b[s] = beta * chain.reward[s];
  }
  auto w = detail::solve_linear(std::move(a), std::move(b));
  if (!w) throw std::logic_error("chain: singular discounted system");
  return *w;
}

SimulationResult simulate_play(const StochasticGame& g, const StationaryStrategy& s1,
                               const StationaryStrategy& s2, int start_state, long horizon,
                               std::uint64_t seed) {
  auto grep = validate_game(g);
  if (!grep.ok()) throw std::invalid_argument("invalid game: " + grep.violations.front());
  auto r1 = validate_strategy(g, s1, 1);
  if (!r1.ok()) throw std::invalid_argument("invalid strategy1: " + r1.violations.front());
  auto r2 = validate_strategy(g, s2, 2);
  if (!r2.ok()) throw std::invalid_argument("invalid strategy2: " + r2.violations.front());
  if (start_state < 1 || start_state > g.num_states)
    throw std::invalid_argument("start state out of range");
  if (horizon < 1) throw std::invalid_argument("horizon must be positive");

  // fixed-threshold tables, converted once
  std::vector<std::vector<long double>> cum1(g.num_states), cum2(g.num_states);
  std::vector<std::vector<std::vector<long double>>> cumt(g.num_states);
  for (int s = 0; s < g.num_states; ++s) {
    cum1[s] = cumulative(s1.probs[s]);
    cum2[s] = cumulative(s2.probs[s]);
    cumt[s].resize(g.cells[s].size());
    for (size_t k = 0; k < g.cells[s].size(); ++k) cumt[s][k] = cumulative(g.cells[s][k].dist);
  }

  std::mt19937_64 rng(seed);
  SimulationResult res;
  res.steps.reserve(horizon);
  Rational total(0);
  int s = start_state - 1;
  for (long step = 1; step <= horizon; ++step) {
    const int i = static_cast<int>(sample_index(cum1[s], uniform53(rng)));
    const int j = static_cast<int>(sample_index(cum2[s], uniform53(rng)));
    const auto& c = g.cell(s, i, j);
    total += c.reward;
    SimulationStep rec;
    rec.state = s + 1;
    rec.move1 = i;
    rec.move2 = j;
    rec.reward = c.reward;
    rec.running_average = total / step;
    res.steps.push_back(std::move(rec));
    s = static_cast<int>(sample_index(cumt[s][static_cast<size_t>(i) * g.moves2[s].size() + j],
                                      uniform53(rng)));
  }
  return res;
}

}  // namespace limavg
