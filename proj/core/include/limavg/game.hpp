#pragma once

#include "limavg/rational.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace limavg {

// Finite two-player zero-sum stochastic game. Player 1 maximizes the
// limit-average reward, player 2 minimizes it. States are 1-based in every
// public interface and stored 0-based internally; move sets are per-state
// subsets of a shared action alphabet.
struct StochasticGame {
  int num_states = 0;
  std::vector<std::string> actions;       // shared alphabet
  std::vector<std::vector<int>> moves1;   // per state, indices into actions
  std::vector<std::vector<int>> moves2;

  // One entry per move pair at a state: the stage reward and the full
  // transition distribution (length num_states, zeros included).
  struct Cell {
    bool defined = false;
    Rational reward;
    std::vector<Rational> dist;
  };
  // cells[s][i * moves2[s].size() + j] for the i-th move of player 1 and the
  // j-th move of player 2
  std::vector<std::vector<Cell>> cells;

  Cell& cell(int s, int i, int j) { return cells[s][static_cast<size_t>(i) * moves2[s].size() + j]; }
  const Cell& cell(int s, int i, int j) const {
    return cells[s][static_cast<size_t>(i) * moves2[s].size() + j];
  }

  // Allocates move sets and undefined cells for one state (0-based).
  void set_moves(int s, std::vector<int> m1, std::vector<int> m2);

  void set_cell(int s, int i, int j, Rational reward, std::vector<Rational> dist);
};

// Mixed stationary strategy of one player: probs[s][k] is the weight on the
// k-th move of that player's move set at state s.
struct StationaryStrategy {
  std::vector<std::vector<Rational>> probs;
};

struct ValidationReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

// Checks every structural invariant: nonempty move sets, moves inside the
// alphabet, every move pair carrying a reward and a transition distribution
// with nonnegative entries summing to exactly 1. An empty report means valid.
ValidationReport validate_game(const StochasticGame& g);

// player is 1 or 2; checks shape against the move sets plus the distribution
// invariants per state.
ValidationReport validate_strategy(const StochasticGame& g, const StationaryStrategy& st, int player);

struct SizeMetrics {
  int states = 0;            // n
  long delta_entries = 0;    // total number of move pairs over all states
  Integer transition_bits;   // binary space of every transition entry
  Integer reward_bits;       // binary space of every reward
  Integer total_bits;        // transition_bits + reward_bits
};

SizeMetrics size_metrics(const StochasticGame& g);

struct NormalizationRecord {
  Rational m_scale;         // M = max |reward|
  bool degenerate = false;  // all rewards zero
};

// Affine reward rescale r -> (r + M) / (2M) onto [0, 1]; transitions are
// untouched. The degenerate all-zero game is returned unchanged with the flag
// set (its value is identically 0).
std::pair<StochasticGame, NormalizationRecord> normalize(const StochasticGame& g);

// Maps a value interval of the normalized game back to the original reward
// scale: [l, u] -> [M(2l - 1), M(2u - 1)]. Errors on a degenerate record.
std::pair<Rational, Rational> denormalize_interval(const std::pair<Rational, Rational>& interval,
                                                   const NormalizationRecord& record);

// eta: least multiplicative distortion with d <= (1+eta) d' and d' <= (1+eta) d
// for every transition entry (absent when a zero entry faces a nonzero one).
// gamma: max absolute reward difference. rho: the value-difference bound
// (2 eta n / (1 - 2 eta n)) * max|r| + gamma, absent when eta is absent or
// eta >= 1/(2n).
struct PerturbationBound {
  std::optional<Rational> eta;
  Rational gamma;
  std::optional<Rational> rho;
};

// Requires both games to share states, alphabet, move sets and cell layout
// (distributions need not sum to 1 here; only entry ratios and rewards are
// compared). max|r| is taken from the first argument.
PerturbationBound perturbation_bound(const StochasticGame& g, const StochasticGame& g2);

}  // namespace limavg
