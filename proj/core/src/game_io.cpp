#include "limavg/game_io.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace limavg {

namespace {

using nlohmann::json;
using ordered = nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& msg) { throw std::runtime_error("game file: " + msg); }

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!allowed.count(it.key())) fail("unknown field '" + it.key() + "' in " + where);
}

Rational get_rational(const json& v, const std::string& where) {
  if (!v.is_string()) fail(where + " must be a rational string");
  try {
    return parse_rational(v.get<std::string>());
  } catch (const std::exception& e) {
    fail(where + ": " + e.what());
  }
}

int get_state(const json& v, int n, const std::string& where) {
  if (!v.is_number_integer()) fail(where + " must be an integer state index");
  int s = v.get<int>();
  if (s < 1 || s > n) fail(where + " out of range: " + std::to_string(s));
  return s - 1;
}

int action_index(const std::vector<std::string>& actions, const json& v, const std::string& where) {
  if (!v.is_string()) fail(where + " must be an action name");
  auto name = v.get<std::string>();
  auto it = std::find(actions.begin(), actions.end(), name);
  if (it == actions.end()) fail(where + ": unknown action '" + name + "'");
  return static_cast<int>(it - actions.begin());
}

// position of an action inside a state's move set
int move_position(const std::vector<int>& moves, int action, const std::string& where,
                  const std::vector<std::string>& actions) {
  auto it = std::find(moves.begin(), moves.end(), action);
  if (it == moves.end()) fail(where + ": action '" + actions[action] + "' not in the move set");
  return static_cast<int>(it - moves.begin());
}

std::vector<std::vector<int>> parse_moves(const json& arr, const std::vector<std::string>& actions,
                                          int n, const std::string& field) {
  if (!arr.is_array() || static_cast<int>(arr.size()) != n)
    fail("'" + field + "' must list one move set per state");
  std::vector<std::vector<int>> out(n);
  for (int s = 0; s < n; ++s) {
    if (!arr[s].is_array()) fail("'" + field + "' entries must be arrays of action names");
    for (const auto& a : arr[s]) {
      int idx = action_index(actions, a, field + "[" + std::to_string(s + 1) + "]");
      if (std::find(out[s].begin(), out[s].end(), idx) != out[s].end())
        fail("duplicate action in " + field + " at state " + std::to_string(s + 1));
      out[s].push_back(idx);
    }
  }
  return out;
}

}  // namespace

StochasticGame parse_game_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const std::exception& e) {
    fail(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) fail("top level must be an object");
  reject_unknown(doc, {"states", "actions", "moves1", "moves2", "transitions", "rewards"},
                 "the top-level object");
  for (const char* f : {"states", "actions", "moves1", "moves2", "transitions", "rewards"})
    if (!doc.contains(f)) fail(std::string("missing field '") + f + "'");

  StochasticGame g;
  if (!doc["states"].is_number_integer() || doc["states"].get<int>() < 1)
    fail("'states' must be a positive integer");
  g.num_states = doc["states"].get<int>();

  if (!doc["actions"].is_array()) fail("'actions' must be an array of names");
  for (const auto& a : doc["actions"]) {
    if (!a.is_string() || a.get<std::string>().empty()) fail("action names must be nonempty strings");
    auto name = a.get<std::string>();
    if (std::find(g.actions.begin(), g.actions.end(), name) != g.actions.end())
      fail("duplicate action name '" + name + "'");
    g.actions.push_back(name);
  }

  g.moves1 = parse_moves(doc["moves1"], g.actions, g.num_states, "moves1");
  g.moves2 = parse_moves(doc["moves2"], g.actions, g.num_states, "moves2");
  g.cells.resize(g.num_states);
  for (int s = 0; s < g.num_states; ++s)
    g.cells[s].assign(g.moves1[s].size() * g.moves2[s].size(), StochasticGame::Cell{});

  if (!doc["transitions"].is_array()) fail("'transitions' must be an array");
  for (const auto& rec : doc["transitions"]) {
    if (!rec.is_object()) fail("transition records must be objects");
    reject_unknown(rec, {"s", "a", "b", "dist"}, "a transition record");
    for (const char* f : {"s", "a", "b", "dist"})
      if (!rec.contains(f)) fail(std::string("transition record missing '") + f + "'");
    int s = get_state(rec["s"], g.num_states, "transition 's'");
    int i = move_position(g.moves1[s], action_index(g.actions, rec["a"], "transition 'a'"),
                          "transition at state " + std::to_string(s + 1), g.actions);
    int j = move_position(g.moves2[s], action_index(g.actions, rec["b"], "transition 'b'"),
                          "transition at state " + std::to_string(s + 1), g.actions);
    auto& c = g.cell(s, i, j);
    if (!c.dist.empty()) fail("duplicate transition record at state " + std::to_string(s + 1));
    c.dist.assign(g.num_states, Rational(0));
    if (!rec["dist"].is_array()) fail("'dist' must be an array");
    std::set<int> seen;
    for (const auto& entry : rec["dist"]) {
      if (!entry.is_object()) fail("'dist' entries must be objects");
      reject_unknown(entry, {"t", "p"}, "a dist entry");
      if (!entry.contains("t") || !entry.contains("p")) fail("dist entry missing 't' or 'p'");
      int t = get_state(entry["t"], g.num_states, "dist 't'");
      if (!seen.insert(t).second) fail("duplicate dist target at state " + std::to_string(s + 1));
      c.dist[t] = get_rational(entry["p"], "dist 'p'");
    }
  }

  if (!doc["rewards"].is_array()) fail("'rewards' must be an array");
  std::vector<std::vector<bool>> has_reward(g.num_states);
  for (int s = 0; s < g.num_states; ++s) has_reward[s].assign(g.cells[s].size(), false);
  for (const auto& rec : doc["rewards"]) {
    if (!rec.is_object()) fail("reward records must be objects");
    reject_unknown(rec, {"s", "a", "b", "r"}, "a reward record");
    for (const char* f : {"s", "a", "b", "r"})
      if (!rec.contains(f)) fail(std::string("reward record missing '") + f + "'");
    int s = get_state(rec["s"], g.num_states, "reward 's'");
    int i = move_position(g.moves1[s], action_index(g.actions, rec["a"], "reward 'a'"),
                          "reward at state " + std::to_string(s + 1), g.actions);
    int j = move_position(g.moves2[s], action_index(g.actions, rec["b"], "reward 'b'"),
                          "reward at state " + std::to_string(s + 1), g.actions);
    size_t flat = static_cast<size_t>(i) * g.moves2[s].size() + j;
    if (has_reward[s][flat]) fail("duplicate reward record at state " + std::to_string(s + 1));
    has_reward[s][flat] = true;
    g.cells[s][flat].reward = get_rational(rec["r"], "reward 'r'");
  }

  // a cell is defined once both halves arrived; validate_game reports the rest
  for (int s = 0; s < g.num_states; ++s)
    for (size_t k = 0; k < g.cells[s].size(); ++k)
      g.cells[s][k].defined = has_reward[s][k] && !g.cells[s][k].dist.empty();
  return g;
}

StochasticGame load_game_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open game file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_game_json(buf.str());
}

std::string game_to_json(const StochasticGame& g) {
  ordered doc;
  doc["states"] = g.num_states;
  doc["actions"] = g.actions;
  auto moves_out = [&g](const std::vector<std::vector<int>>& moves) {
    ordered arr = ordered::array();
    for (const auto& ms : moves) {
      ordered inner = ordered::array();
      for (int a : ms) inner.push_back(g.actions[a]);
      arr.push_back(inner);
    }
    return arr;
  };
  doc["moves1"] = moves_out(g.moves1);
  doc["moves2"] = moves_out(g.moves2);
  ordered trans = ordered::array();
  ordered rew = ordered::array();
  for (int s = 0; s < g.num_states; ++s) {
    for (size_t i = 0; i < g.moves1[s].size(); ++i) {
      for (size_t j = 0; j < g.moves2[s].size(); ++j) {
        const auto& c = g.cell(s, static_cast<int>(i), static_cast<int>(j));
        if (!c.defined) continue;
        ordered t;
        t["s"] = s + 1;
        t["a"] = g.actions[g.moves1[s][i]];
        t["b"] = g.actions[g.moves2[s][j]];
        ordered dist = ordered::array();
        for (int target = 0; target < static_cast<int>(c.dist.size()); ++target) {
          if (c.dist[target] == 0) continue;
          ordered e;
          e["t"] = target + 1;
          e["p"] = to_string(c.dist[target]);
          dist.push_back(e);
        }
        t["dist"] = dist;
        trans.push_back(t);
        ordered r;
        r["s"] = s + 1;
        r["a"] = g.actions[g.moves1[s][i]];
        r["b"] = g.actions[g.moves2[s][j]];
        r["r"] = to_string(c.reward);
        rew.push_back(r);
      }
    }
  }
  doc["transitions"] = trans;
  doc["rewards"] = rew;
  return doc.dump(2) + "\n";
}

StationaryStrategy parse_strategy_json(const std::string& text, const StochasticGame& g, int player) {
  if (player != 1 && player != 2) throw std::invalid_argument("player must be 1 or 2");
  json doc;
  try {
    doc = json::parse(text);
  } catch (const std::exception& e) {
    throw std::runtime_error(std::string("strategy file: invalid JSON: ") + e.what());
  }
  auto sfail = [](const std::string& msg) -> void {
    throw std::runtime_error("strategy file: " + msg);
  };
  if (!doc.is_object()) sfail("top level must be an object");
  reject_unknown(doc, {"strategy"}, "the top-level object");
  if (!doc.contains("strategy") || !doc["strategy"].is_array()) sfail("missing 'strategy' array");
  const auto& arr = doc["strategy"];
  if (static_cast<int>(arr.size()) != g.num_states) sfail("one entry per state required");

  const auto& moves = (player == 1) ? g.moves1 : g.moves2;
  StationaryStrategy st;
  st.probs.resize(g.num_states);
  for (int s = 0; s < g.num_states; ++s) {
    st.probs[s].assign(moves[s].size(), Rational(0));
    if (!arr[s].is_array()) sfail("per-state entries must be arrays");
    for (const auto& e : arr[s]) {
      if (!e.is_object()) sfail("strategy entries must be objects");
      reject_unknown(e, {"a", "p"}, "a strategy entry");
      if (!e.contains("a") || !e.contains("p")) sfail("strategy entry missing 'a' or 'p'");
      int action = action_index(g.actions, e["a"], "strategy action");
      int pos = move_position(moves[s], action, "strategy at state " + std::to_string(s + 1),
                              g.actions);
      st.probs[s][pos] = get_rational(e["p"], "strategy 'p'");
    }
  }
  return st;
}

StationaryStrategy load_strategy_file(const std::string& path, const StochasticGame& g, int player) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open strategy file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_strategy_json(buf.str(), g, player);
}

}  // namespace limavg
