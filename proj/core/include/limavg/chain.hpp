#pragma once

#include "limavg/game.hpp"
#include "limavg/rational.hpp"

#include <cstdint>
#include <vector>

namespace limavg {

// Finite Markov chain with a per-state expected reward, as induced by fixing
// one stationary strategy per player in a game.
struct RewardChain {
  std::vector<std::vector<Rational>> transition;  // row-stochastic, exact
  std::vector<Rational> reward;
};

RewardChain induced_chain(const StochasticGame& g, const StationaryStrategy& s1,
                          const StationaryStrategy& s2);

// Exact limit average reward from every start state: stationary distributions
// of the closed recurrent classes give per-class gains, transient states mix
// them by absorption probability.
std::vector<Rational> long_run_average_all(const RewardChain& chain);
Rational long_run_average(const RewardChain& chain, int state);  // 1-based

// Discounted payoff of the fixed pair: solves (I - (1-beta) P) w = beta * rho
// exactly. Converges to the limit average as beta -> 0.
std::vector<Rational> discounted_payoff(const RewardChain& chain, const Rational& beta);

struct SimulationStep {
  int state;   // 1-based, the state occupied during the round
  int move1;   // positions in the players' move sets at that state
  int move2;
  Rational reward;
  Rational running_average;  // exact mean of the rewards so far
};

struct SimulationResult {
  std::vector<SimulationStep> steps;
};

// Samples one play of `horizon` rounds. Deterministic for a fixed seed: a
// mt19937_64 stream drives 53-bit uniform draws, consumed in the order
// player-1 move, player-2 move, successor state; rational probabilities are
// converted once to long double cumulative thresholds.
SimulationResult simulate_play(const StochasticGame& g, const StationaryStrategy& s1,
                               const StationaryStrategy& s2, int start_state, long horizon,
                               std::uint64_t seed);

}  // namespace limavg
