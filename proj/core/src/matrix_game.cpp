#include "limavg/matrix_game.hpp"

#include <algorithm>
#include <stdexcept>

namespace limavg {

namespace {

// maximize sum(w) subject to A w <= 1, w >= 0, for A with entries >= 1.
// Returns the optimum, the primal w and the dual prices u on the row
// constraints. Bland's rule everywhere: smallest entering index, ties in the
// ratio test broken by smallest basic variable, so the pivot sequence is
// reproducible and finite.
template <class T>
struct LpResult {
  bool ok = false;
  T objective{};
  std::vector<T> w;
  std::vector<T> u;
};

template <class T>
LpResult<T> bounded_game_lp(const std::vector<std::vector<T>>& a, const T& eps, long pivot_cap) {
  const int p = static_cast<int>(a.size());
  const int q = static_cast<int>(a[0].size());
  const int cols = q + p;

  std::vector<std::vector<T>> tab(p, std::vector<T>(cols + 1, T(0)));
  std::vector<int> basis(p);
  for (int i = 0; i < p; ++i) {
    for (int j = 0; j < q; ++j) tab[i][j] = a[i][j];
    tab[i][q + i] = T(1);
    tab[i][cols] = T(1);
    basis[i] = q + i;
  }
  // reduced costs; z[cols] tracks the objective value
  std::vector<T> z(cols + 1, T(0));
  for (int j = 0; j < q; ++j) z[j] = T(-1);

  LpResult<T> res;
  for (long pivots = 0;; ++pivots) {
    if (pivots > pivot_cap) return res;
    int enter = -1;
    for (int j = 0; j < cols; ++j) {
      if (z[j] < -eps) {
        enter = j;
        break;
      }
    }
    if (enter < 0) break;

    int leave = -1;
    T best{};
    for (int i = 0; i < p; ++i) {
      if (tab[i][enter] > eps) {
        T ratio = tab[i][cols] / tab[i][enter];
        if (leave < 0 || ratio < best || (ratio == best && basis[i] < basis[leave])) {
          leave = i;
          best = ratio;
        }
      }
    }
    if (leave < 0) return res;  // unbounded; cannot happen for entries >= 1

    T piv = tab[leave][enter];
    for (int j = 0; j <= cols; ++j) tab[leave][j] /= piv;
    for (int i = 0; i < p; ++i) {
      if (i == leave) continue;
      T f = tab[i][enter];
      if (f == T(0)) continue;
      for (int j = 0; j <= cols; ++j) tab[i][j] -= f * tab[leave][j];
    }
    T fz = z[enter];
    if (fz != T(0))
      for (int j = 0; j <= cols; ++j) z[j] -= fz * tab[leave][j];
    basis[leave] = enter;
  }

  res.ok = true;
  res.objective = z[cols];
  res.w.assign(q, T(0));
  for (int i = 0; i < p; ++i)
    if (basis[i] < q) res.w[basis[i]] = tab[i][cols];
  res.u.assign(p, T(0));
  for (int i = 0; i < p; ++i) res.u[i] = z[q + i];
  return res;
}

void check_rect(size_t rows, size_t cols) {
  if (rows == 0 || cols == 0) throw std::invalid_argument("matrix game: empty matrix");
}

}  // namespace

MatrixGameSolution solve_matrix_game(const Matrix& entries) {
  check_rect(entries.size(), entries.empty() ? 0 : entries[0].size());
  const size_t q = entries[0].size();
  Rational lo = entries[0][0];
  for (const auto& row : entries) {
    if (row.size() != q) throw std::invalid_argument("matrix game: ragged matrix");
    for (const auto& e : row)
      if (e < lo) lo = e;
  }
  Rational shift = (lo < 1) ? 1 - lo : Rational(0);

  std::vector<std::vector<Rational>> a(entries.size(), std::vector<Rational>(q));
  for (size_t i = 0; i < entries.size(); ++i)
    for (size_t j = 0; j < q; ++j) a[i][j] = entries[i][j] + shift;

  auto lp = bounded_game_lp<Rational>(a, Rational(0), 100000);
  if (!lp.ok) throw std::runtime_error("matrix game: simplex did not terminate");

  MatrixGameSolution sol;
  Rational shifted_value = 1 / lp.objective;
  sol.value = shifted_value - shift;
  sol.col_strategy.resize(q);
  for (size_t j = 0; j < q; ++j) sol.col_strategy[j] = lp.w[j] * shifted_value;
  sol.row_strategy.resize(entries.size());
  for (size_t i = 0; i < entries.size(); ++i) sol.row_strategy[i] = lp.u[i] * shifted_value;
  return sol;
}

Rational best_response_value(const Matrix& entries, int player, const std::vector<Rational>& mixed) {
  check_rect(entries.size(), entries.empty() ? 0 : entries[0].size());
  if (player != 1 && player != 2) throw std::invalid_argument("player must be 1 or 2");
  const size_t p = entries.size();
  const size_t q = entries[0].size();
  const size_t expect = (player == 1) ? p : q;
  if (mixed.size() != expect) throw std::invalid_argument("best_response_value: strategy length");
  Rational sum(0);
  for (const auto& w : mixed) {
    if (w < 0) throw std::invalid_argument("best_response_value: negative weight");
    sum += w;
  }
  if (sum != 1) throw std::invalid_argument("best_response_value: weights must sum to 1");

  if (player == 1) {
    Rational best;
    for (size_t j = 0; j < q; ++j) {
      Rational v(0);
      for (size_t i = 0; i < p; ++i) v += mixed[i] * entries[i][j];
      if (j == 0 || v < best) best = v;
    }
    return best;
  }
  Rational best;
  for (size_t i = 0; i < p; ++i) {
    Rational v(0);
    for (size_t j = 0; j < q; ++j) v += entries[i][j] * mixed[j];
    if (i == 0 || v > best) best = v;
  }
  return best;
}

MatrixGameSolutionD solve_matrix_game_numeric(const std::vector<std::vector<double>>& entries) {
  check_rect(entries.size(), entries.empty() ? 0 : entries[0].size());
  const size_t p = entries.size();
  const size_t q = entries[0].size();
  MatrixGameSolutionD sol;
  sol.row_strategy.assign(p, 0.0);
  sol.col_strategy.assign(q, 0.0);

  if (p == 1 && q == 1) {
    sol.value = entries[0][0];
    sol.row_strategy[0] = sol.col_strategy[0] = 1.0;
    return sol;
  }
  if (p == 1) {
    size_t jmin = 0;
    for (size_t j = 1; j < q; ++j)
      if (entries[0][j] < entries[0][jmin]) jmin = j;
    sol.value = entries[0][jmin];
    sol.row_strategy[0] = 1.0;
    sol.col_strategy[jmin] = 1.0;
    return sol;
  }
  if (q == 1) {
    size_t imax = 0;
    for (size_t i = 1; i < p; ++i)
      if (entries[i][0] > entries[imax][0]) imax = i;
    sol.value = entries[imax][0];
    sol.row_strategy[imax] = 1.0;
    sol.col_strategy[0] = 1.0;
    return sol;
  }
  if (p == 2 && q == 2) {
    const double a = entries[0][0], b = entries[0][1], c = entries[1][0], d = entries[1][1];
    // pure saddle first
    const double rmin0 = std::min(a, b), rmin1 = std::min(c, d);
    const double cmax0 = std::max(a, c), cmax1 = std::max(b, d);
    const double maximin = std::max(rmin0, rmin1);
    const double minimax = std::min(cmax0, cmax1);
    if (maximin >= minimax) {
      sol.value = maximin;
      sol.row_strategy[rmin0 >= rmin1 ? 0 : 1] = 1.0;
      sol.col_strategy[cmax0 <= cmax1 ? 0 : 1] = 1.0;
      return sol;
    }
    const double den = (a + d) - (b + c);
    const double scale = std::max({std::abs(a), std::abs(b), std::abs(c), std::abs(d), 1.0});
    if (std::abs(den) > 1e-13 * scale) {
      sol.value = (a * d - b * c) / den;
      sol.row_strategy[0] = (d - c) / den;
      sol.row_strategy[1] = (a - b) / den;
      sol.col_strategy[0] = (d - b) / den;
      sol.col_strategy[1] = (a - c) / den;
      return sol;
    }
    // fall through to simplex on near-degenerate instances
  }

  double lo = entries[0][0];
  for (const auto& row : entries)
    for (double e : row) lo = std::min(lo, e);
  const double shift = (lo < 1.0) ? 1.0 - lo : 0.0;
  std::vector<std::vector<double>> a(p, std::vector<double>(q));
  for (size_t i = 0; i < p; ++i)
    for (size_t j = 0; j < q; ++j) a[i][j] = entries[i][j] + shift;

  auto lp = bounded_game_lp<double>(a, 1e-11, 500);
  if (!lp.ok || lp.objective <= 0) {
    sol.reliable = false;
    return sol;
  }
  const double v = 1.0 / lp.objective;
  sol.value = v - shift;
  for (size_t j = 0; j < q; ++j) sol.col_strategy[j] = lp.w[j] * v;
  for (size_t i = 0; i < p; ++i) sol.row_strategy[i] = lp.u[i] * v;
  return sol;
}

}  // namespace limavg
