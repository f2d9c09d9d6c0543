#include "limavg/game.hpp"

#include <cstdlib>
#include <stdexcept>

namespace limavg {

namespace {

// move ids may be outside the alphabet in games under validation
std::string move_name(const StochasticGame& g, int id) {
  if (id >= 0 && id < static_cast<int>(g.actions.size())) return g.actions[id];
  return "#" + std::to_string(id);
}

std::string cell_tag(const StochasticGame& g, int s, int i, int j) {
  return "(s=" + std::to_string(s + 1) + ",a=" + move_name(g, g.moves1[s][i]) +
         ",b=" + move_name(g, g.moves2[s][j]) + ")";
}

}  // namespace

void StochasticGame::set_moves(int s, std::vector<int> m1, std::vector<int> m2) {
  moves1[s] = std::move(m1);
  moves2[s] = std::move(m2);
  cells[s].assign(moves1[s].size() * moves2[s].size(), Cell{});
}

void StochasticGame::set_cell(int s, int i, int j, Rational reward, std::vector<Rational> dist) {
  Cell& c = cell(s, i, j);
  c.defined = true;
  c.reward = std::move(reward);
  c.dist = std::move(dist);
  c.dist.resize(num_states, Rational(0));
}

ValidationReport validate_game(const StochasticGame& g) {
  ValidationReport rep;
  auto bad = [&rep](std::string msg) { rep.violations.push_back(std::move(msg)); };

  if (g.num_states < 1) bad("game has no states");
  int shape_n = static_cast<int>(g.moves1.size());
  if (static_cast<int>(g.moves1.size()) != g.num_states ||
      static_cast<int>(g.moves2.size()) != g.num_states ||
      static_cast<int>(g.cells.size()) != g.num_states) {
    bad("per-state tables do not match the state count");
    return rep;
  }
  for (int s = 0; s < shape_n; ++s) {
    if (g.moves1[s].empty()) bad("empty move set for player 1 at s=" + std::to_string(s + 1));
    if (g.moves2[s].empty()) bad("empty move set for player 2 at s=" + std::to_string(s + 1));
    for (int a : g.moves1[s])
      if (a < 0 || a >= static_cast<int>(g.actions.size()))
        bad("player 1 move outside the alphabet at s=" + std::to_string(s + 1));
    for (int b : g.moves2[s])
      if (b < 0 || b >= static_cast<int>(g.actions.size()))
        bad("player 2 move outside the alphabet at s=" + std::to_string(s + 1));
    if (g.cells[s].size() != g.moves1[s].size() * g.moves2[s].size()) {
      bad("cell table shape mismatch at s=" + std::to_string(s + 1));
      continue;
    }
    for (size_t i = 0; i < g.moves1[s].size(); ++i) {
      for (size_t j = 0; j < g.moves2[s].size(); ++j) {
        const auto& c = g.cell(s, static_cast<int>(i), static_cast<int>(j));
        std::string tag = cell_tag(g, s, static_cast<int>(i), static_cast<int>(j));
        if (!c.defined) {
          bad("missing transition/reward at " + tag);
          continue;
        }
        if (static_cast<int>(c.dist.size()) != g.num_states) {
          bad("distribution length mismatch at " + tag);
          continue;
        }
        Rational sum(0);
        bool neg = false;
        for (const auto& p : c.dist) {
          if (p < 0) neg = true;
          sum += p;
        }
        if (neg) bad("negative transition probability at " + tag);
        if (sum != 1) bad("distribution sum != 1 at " + tag);
      }
    }
  }
  return rep;
}

ValidationReport validate_strategy(const StochasticGame& g, const StationaryStrategy& st, int player) {
  if (player != 1 && player != 2) throw std::invalid_argument("player must be 1 or 2");
  ValidationReport rep;
  auto bad = [&rep](std::string msg) { rep.violations.push_back(std::move(msg)); };
  const auto& moves = (player == 1) ? g.moves1 : g.moves2;
  if (st.probs.size() != moves.size()) {
    bad("strategy state count mismatch");
    return rep;
  }
  for (size_t s = 0; s < moves.size(); ++s) {
    if (st.probs[s].size() != moves[s].size()) {
      bad("strategy support mismatch at s=" + std::to_string(s + 1));
      continue;
    }
    Rational sum(0);
    for (const auto& p : st.probs[s]) {
      if (p < 0) bad("negative strategy weight at s=" + std::to_string(s + 1));
      sum += p;
    }
    if (sum != 1) bad("strategy weights sum != 1 at s=" + std::to_string(s + 1));
  }
  return rep;
}

SizeMetrics size_metrics(const StochasticGame& g) {
  SizeMetrics m;
  m.states = g.num_states;
  m.transition_bits = 0;
  m.reward_bits = 0;
  for (int s = 0; s < g.num_states; ++s) {
    m.delta_entries += static_cast<long>(g.moves1[s].size() * g.moves2[s].size());
    for (const auto& c : g.cells[s]) {
      if (!c.defined) continue;
      m.reward_bits += bit_size(c.reward);
      for (const auto& p : c.dist) m.transition_bits += bit_size(p);
    }
  }
  m.total_bits = m.transition_bits + m.reward_bits;
  return m;
}

std::pair<StochasticGame, NormalizationRecord> normalize(const StochasticGame& g) {
  Rational big(0);
  for (const auto& state_cells : g.cells)
    for (const auto& c : state_cells)
      if (c.defined && abs(c.reward) > big) big = abs(c.reward);

  NormalizationRecord rec{big, big == 0};
  if (rec.degenerate) return {g, rec};

  StochasticGame out = g;
  Rational twice = 2 * big;
  for (auto& state_cells : out.cells)
    for (auto& c : state_cells)
      if (c.defined) c.reward = (c.reward + big) / twice;
  return {std::move(out), rec};
}

std::pair<Rational, Rational> denormalize_interval(const std::pair<Rational, Rational>& interval,
                                                   const NormalizationRecord& record) {
  if (record.degenerate)
    throw std::domain_error("denormalize_interval: degenerate normalization (all rewards zero)");
  if (interval.first > interval.second)
    throw std::invalid_argument("denormalize_interval: empty interval");
  const Rational& m = record.m_scale;
  return {m * (2 * interval.first - 1), m * (2 * interval.second - 1)};
}

PerturbationBound perturbation_bound(const StochasticGame& g, const StochasticGame& g2) {
  if (g.num_states != g2.num_states || g.actions != g2.actions || g.moves1 != g2.moves1 ||
      g.moves2 != g2.moves2)
    throw std::invalid_argument("perturbation_bound: games do not share structure");

  PerturbationBound out;
  out.gamma = 0;
  Rational max_ratio(1);  // 1 + eta
  bool eta_ok = true;
  Rational reward_norm(0);

  for (int s = 0; s < g.num_states; ++s) {
    if (g.cells[s].size() != g2.cells[s].size())
      throw std::invalid_argument("perturbation_bound: cell layout mismatch");
    for (size_t k = 0; k < g.cells[s].size(); ++k) {
      const auto& c = g.cells[s][k];
      const auto& c2 = g2.cells[s][k];
      if (c.defined != c2.defined)
        throw std::invalid_argument("perturbation_bound: cell definedness mismatch");
      if (!c.defined) continue;
      Rational dr = abs(c.reward - c2.reward);
      if (dr > out.gamma) out.gamma = dr;
      if (abs(c.reward) > reward_norm) reward_norm = abs(c.reward);
      size_t len = std::min(c.dist.size(), c2.dist.size());
      for (size_t t = 0; t < len; ++t) {
        const Rational& p = c.dist[t];
        const Rational& p2 = c2.dist[t];
        if (p == 0 && p2 == 0) continue;
        if (p == 0 || p2 == 0) {
          eta_ok = false;
          continue;
        }
        Rational r1 = p / p2;
        Rational r2 = p2 / p;
        if (r1 > max_ratio) max_ratio = r1;
        if (r2 > max_ratio) max_ratio = r2;
      }
    }
  }

  if (eta_ok) {
    out.eta = max_ratio - 1;
    // rho is finite only below the 1/(2n) distortion threshold
    Rational twice_n = Rational(2 * g.num_states) * *out.eta;
    if (twice_n < 1) out.rho = twice_n / (1 - twice_n) * reward_norm + out.gamma;
  }
  return out;
}

}  // namespace limavg
