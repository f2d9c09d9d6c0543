#pragma once

#include "limavg/game.hpp"

#include <string>

namespace limavg {

// Game file schema (all rationals are strings "num/den" or integer strings,
// states are 1-based, actions are referenced by name):
//
//   {
//     "states": 2,
//     "actions": ["a", "b"],
//     "moves1": [["a", "b"], ["a"]],
//     "moves2": [["a"], ["a"]],
//     "transitions": [{"s": 1, "a": "a", "b": "a", "dist": [{"t": 2, "p": "1"}]}, ...],
//     "rewards":     [{"s": 1, "a": "a", "b": "a", "r": "-1/2"}, ...]
//   }
//
// Omitted dist targets carry probability zero. Unknown fields anywhere are
// rejected, as are duplicate records, out-of-range states and unknown action
// names. Structural errors throw std::runtime_error; semantic problems
// (distribution sums etc.) are left to validate_game.
StochasticGame parse_game_json(const std::string& text);
StochasticGame load_game_file(const std::string& path);

std::string game_to_json(const StochasticGame& g);

// Strategy file schema, for the player the caller names:
//
//   {"strategy": [[{"a": "a", "p": "1/2"}, {"a": "b", "p": "1/2"}], [...]]}
//
// One inner list per state (1-based order); moves of that state not listed
// get weight zero.
StationaryStrategy parse_strategy_json(const std::string& text, const StochasticGame& g, int player);
StationaryStrategy load_strategy_file(const std::string& path, const StochasticGame& g, int player);

}  // namespace limavg
