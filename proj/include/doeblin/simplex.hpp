#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include <gmpxx.h>

namespace doeblin {

enum class Sense { Min, Max };
enum class LpStatus { Optimal, Infeasible, Unbounded };

/// Equality-form LP: optimize c^T x subject to A x = b, x >= 0.
/// A is dense row-major with `rows` rows and `cols` columns.
template <class T>
struct LpProblem {
  std::size_t rows = 0, cols = 0;
  std::vector<T> a, b, c;
  Sense sense = Sense::Min;
};

template <class T>
struct LpSolution {
  LpStatus status = LpStatus::Infeasible;
  T value{};             // objective in the requested sense
  std::vector<T> x;      // primal
  std::vector<T> y;      // duals, one per original row, in the requested sense
  T dual_value{};        // b^T y
  std::size_t pivots = 0;
};

namespace detail {
inline bool lp_positive(double v) { return v > 1e-11; }
inline bool lp_negative(double v) { return v < -1e-11; }
inline bool lp_nonzero(double v) { return std::abs(v) > 1e-11; }
inline bool lp_less(double a, double b) { return a < b - 1e-12; }
inline bool lp_positive(const mpq_class& v) { return sgn(v) > 0; }
inline bool lp_negative(const mpq_class& v) { return sgn(v) < 0; }
inline bool lp_nonzero(const mpq_class& v) { return sgn(v) != 0; }
inline bool lp_less(const mpq_class& a, const mpq_class& b) { return a < b; }
}  // namespace detail

/// Dense two-phase tableau simplex with Bland's rule. Works for double
/// (fixed tolerance 1e-11) and for exact rationals (mpq_class).
template <class T>
LpSolution<T> solve_lp(const LpProblem<T>& p) {
  using detail::lp_negative;
  using detail::lp_nonzero;
  using detail::lp_positive;
  const std::size_t r = p.rows, n = p.cols, w = n + r + 1;  // last column is the RHS
  if (p.a.size() != r * n || p.b.size() != r || p.c.size() != n)
    throw std::invalid_argument("solve_lp: inconsistent problem dimensions");

  std::vector<T> t(r * w, T(0));
  std::vector<int> flip(r, 1);
  for (std::size_t i = 0; i < r; ++i) {
    if (p.b[i] < T(0)) flip[i] = -1;
    for (std::size_t j = 0; j < n; ++j) t[i * w + j] = flip[i] > 0 ? p.a[i * n + j] : T(-p.a[i * n + j]);
    t[i * w + n + i] = T(1);
    t[i * w + n + r] = flip[i] > 0 ? p.b[i] : T(-p.b[i]);
  }
  std::vector<std::size_t> basis(r);
  for (std::size_t i = 0; i < r; ++i) basis[i] = n + i;

  std::size_t pivots = 0;
  auto pivot = [&](std::size_t row, std::size_t col) {
    const T piv = t[row * w + col];
    for (std::size_t j = 0; j < w; ++j) t[row * w + j] /= piv;
    for (std::size_t i = 0; i < r; ++i) {
      if (i == row) continue;
      const T f = t[i * w + col];
      if (!lp_nonzero(f)) {
        t[i * w + col] = T(0);
        continue;
      }
      for (std::size_t j = 0; j < w; ++j) t[i * w + j] -= f * t[row * w + j];
      t[i * w + col] = T(0);
    }
    basis[row] = col;
    ++pivots;
  };

  // Reduced costs d_j = cost_j - cost_B^T B^{-1} A_j for the given cost vector
  // over all n + r columns; also returns the objective value.
  auto reduced = [&](const std::vector<T>& cost, std::vector<T>& d, T& obj) {
    d.assign(n + r, T(0));
    for (std::size_t j = 0; j < n + r; ++j) d[j] = cost[j];
    obj = T(0);
    for (std::size_t i = 0; i < r; ++i) {
      const T cb = cost[basis[i]];
      if (cb == T(0)) continue;
      for (std::size_t j = 0; j < n + r; ++j) d[j] -= cb * t[i * w + j];
      obj += cb * t[i * w + n + r];
    }
  };

  // Minimizes cost over the current tableau; columns >= limit never enter.
  auto run = [&](const std::vector<T>& cost, std::size_t limit) -> bool {
    std::vector<T> d;
    T obj;
    while (true) {
      reduced(cost, d, obj);
      std::size_t enter = limit;
      for (std::size_t j = 0; j < limit; ++j)
        if (lp_negative(d[j])) {
          enter = j;
          break;
        }
      if (enter == limit) return true;
      std::size_t leave = r;
      T best{};
      for (std::size_t i = 0; i < r; ++i) {
        const T aij = t[i * w + enter];
        if (!lp_positive(aij)) continue;
        const T ratio = t[i * w + n + r] / aij;
        if (leave == r || detail::lp_less(ratio, best) ||
            (!detail::lp_less(best, ratio) && basis[i] < basis[leave])) {
          leave = i;
          best = ratio;
        }
      }
      if (leave == r) return false;  // unbounded
      pivot(leave, enter);
    }
  };

  LpSolution<T> sol;
  std::vector<T> phase1(n + r, T(0));
  for (std::size_t i = 0; i < r; ++i) phase1[n + i] = T(1);
  run(phase1, n);
  {
    T infeas(0);
    for (std::size_t i = 0; i < r; ++i)
      if (basis[i] >= n) infeas += t[i * w + n + r];
    if (lp_positive(infeas)) {
      sol.status = LpStatus::Infeasible;
      sol.pivots = pivots;
      return sol;
    }
  }
  // Drive zero-level artificials out of the basis where a structural
  // column can replace them; rows where none can are redundant and stay.
  for (std::size_t i = 0; i < r; ++i) {
    if (basis[i] < n) continue;
    for (std::size_t j = 0; j < n; ++j)
      if (lp_nonzero(t[i * w + j])) {
        pivot(i, j);
        break;
      }
  }

  std::vector<T> cost(n + r, T(0));
  for (std::size_t j = 0; j < n; ++j) cost[j] = p.sense == Sense::Min ? p.c[j] : T(-p.c[j]);
  if (!run(cost, n)) {
    sol.status = LpStatus::Unbounded;
    sol.pivots = pivots;
    return sol;
  }

  sol.status = LpStatus::Optimal;
  sol.pivots = pivots;
  sol.x.assign(n, T(0));
  for (std::size_t i = 0; i < r; ++i)
    if (basis[i] < n) sol.x[basis[i]] = t[i * w + n + r];
  sol.value = T(0);
  for (std::size_t j = 0; j < n; ++j) sol.value += p.c[j] * sol.x[j];

  // Artificial i starts as unit column e_i, so its reduced cost is -y_i
  // for the (possibly sign-flipped) row i of the minimization.
  std::vector<T> d;
  T obj;
  reduced(cost, d, obj);
  sol.y.assign(r, T(0));
  sol.dual_value = T(0);
  for (std::size_t i = 0; i < r; ++i) {
    T yi = -d[n + i];
    if (flip[i] < 0) yi = -yi;
    if (p.sense == Sense::Max) yi = -yi;
    sol.y[i] = yi;
    sol.dual_value += p.b[i] * yi;
  }
  return sol;
}

}  // namespace doeblin
