#include "doeblin/lp_oracle.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include "doeblin/coefficients.hpp"
#include "doeblin/error.hpp"
#include "doeblin/kernels.hpp"

namespace doeblin {

namespace {

struct CouplingLp {
  LpProblem<double> lp;
  std::size_t n = 0, m = 0, vars = 0;
};

CouplingLp build_coupling_lp(const std::vector<Pmf>& targets, const std::vector<double>& objective,
                             Sense sense) {
  if (targets.size() < 2) throw ValidationError("coupling LP needs at least two PMFs");
  const std::size_t n = targets.size(), m = targets.front().size();
  for (const auto& p : targets)
    if (p.size() != m) throw ValidationError("coupling LP: PMFs have different alphabet sizes");
  const std::size_t vars = table_size(m, n);
  if (vars > kOracleVariableCap) {
    std::ostringstream os;
    os << "coupling LP: " << m << "^" << n << " variables exceed the oracle cap of " << kOracleVariableCap;
    throw CapExceededError(os.str());
  }
  if (objective.size() != vars) throw ValidationError("coupling LP: objective length must be m^n");

  CouplingLp c;
  c.n = n;
  c.m = m;
  c.vars = vars;
  // Family 0 keeps all m rows; later families drop their last symbol.
  c.lp.rows = m + (n - 1) * (m - 1);
  c.lp.cols = vars;
  c.lp.a.assign(c.lp.rows * vars, 0.0);
  c.lp.b.assign(c.lp.rows, 0.0);
  c.lp.c = objective;
  c.lp.sense = sense;
  auto row_of = [m](std::size_t i, std::size_t y) -> std::ptrdiff_t {
    if (i == 0) return static_cast<std::ptrdiff_t>(y);
    if (y == m - 1) return -1;
    return static_cast<std::ptrdiff_t>(m + (i - 1) * (m - 1) + y);
  };
  for (std::size_t key = 0; key < vars; ++key) {
    const auto t = decode_tuple(key, n, m);
    for (std::size_t i = 0; i < n; ++i) {
      const auto r = row_of(i, t[i]);
      if (r >= 0) c.lp.a[static_cast<std::size_t>(r) * vars + key] = 1.0;
    }
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t y = 0; y < m; ++y) {
      const auto r = row_of(i, y);
      if (r >= 0) c.lp.b[static_cast<std::size_t>(r)] = targets[i][y];
    }
  return c;
}

// The shortest decimal that round-trips to v, as a fraction: 0.2 becomes
// 1/5 rather than the binary double nearest to it.
mpq_class decimal_rational(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  const std::string s(buf, res.ptr);
  std::string digits;
  long exp10 = 0;
  bool neg = false, frac = false;
  std::size_t i = 0;
  if (i < s.size() && s[i] == '-') {
    neg = true;
    ++i;
  }
  for (; i < s.size() && s[i] != 'e'; ++i) {
    if (s[i] == '.') {
      frac = true;
      continue;
    }
    digits += s[i];
    if (frac) --exp10;
  }
  if (i < s.size()) exp10 += std::stol(s.substr(i + 1));
  mpz_class num(digits, 10), ten = 10, scale;
  mpz_pow_ui(scale.get_mpz_t(), ten.get_mpz_t(), static_cast<unsigned long>(std::labs(exp10)));
  mpq_class q = exp10 >= 0 ? mpq_class(num * scale) : mpq_class(num, scale);
  q.canonicalize();
  return neg ? mpq_class(-q) : q;
}

// Each row read as decimals and rescaled to sum to exactly one.
std::vector<mpq_class> exact_pmf(std::span<const double> p) {
  std::vector<mpq_class> out;
  mpq_class sum = 0;
  for (double v : p) {
    out.push_back(decimal_rational(v));
    sum += out.back();
  }
  for (auto& v : out) v /= sum;
  return out;
}

LpProblem<mpq_class> to_exact(const LpProblem<double>& p) {
  LpProblem<mpq_class> q;
  q.rows = p.rows;
  q.cols = p.cols;
  q.sense = p.sense;
  q.a.reserve(p.a.size());
  for (double v : p.a) q.a.push_back(decimal_rational(v));
  for (double v : p.b) q.b.push_back(decimal_rational(v));
  for (double v : p.c) q.c.push_back(decimal_rational(v));
  return q;
}

std::vector<double> to_double(const std::vector<mpq_class>& v) {
  std::vector<double> out;
  out.reserve(v.size());
  for (const auto& x : v) out.push_back(x.get_d());
  return out;
}

void check_status(LpStatus s, const char* what) {
  if (s == LpStatus::Infeasible) throw InfeasibleError(std::string(what) + ": LP reported infeasible");
  if (s == LpStatus::Unbounded) throw InfeasibleError(std::string(what) + ": LP reported unbounded");
}

}  // namespace

std::vector<double> diag_objective(std::size_t n, std::size_t m) {
  const std::size_t vars = table_size(m, n);
  std::vector<double> c(vars, 0.0);
  for (std::size_t y = 0; y < m; ++y) c[encode_tuple(std::vector<std::size_t>(n, y), m)] = 1.0;
  return c;
}

std::vector<double> union_objective(std::size_t n, std::size_t m) {
  const std::size_t vars = table_size(m, n);
  std::vector<double> c(vars, 0.0);
  std::vector<bool> seen(m);
  for (std::size_t key = 0; key < vars; ++key) {
    std::fill(seen.begin(), seen.end(), false);
    std::size_t distinct = 0;
    for (std::size_t s : decode_tuple(key, n, m))
      if (!seen[s]) {
        seen[s] = true;
        ++distinct;
      }
    c[key] = static_cast<double>(distinct);
  }
  return c;
}

OracleResult coupling_opt(const std::vector<Pmf>& targets, const std::vector<double>& objective,
                          Sense sense, bool exact) {
  const CouplingLp c = build_coupling_lp(targets, objective, sense);
  OracleResult r;
  std::vector<double> x;
  r.exact = exact;
  if (exact) {
    auto q = to_exact(c.lp);
    // right-hand sides from exactly normalized targets keep the dropped rows consistent
    for (std::size_t i = 0; i < c.n; ++i) {
      const auto t = exact_pmf(targets[i].probs());
      for (std::size_t y = 0; y < c.m; ++y) {
        if (i == 0) q.b[y] = t[y];
        else if (y + 1 < c.m) q.b[c.m + (i - 1) * (c.m - 1) + y] = t[y];
      }
    }
    const auto sol = solve_lp(q);
    check_status(sol.status, "coupling LP");
    x = to_double(sol.x);
    r.value = sol.value.get_d();
    r.dual_value = sol.dual_value.get_d();
    r.exact_value = sol.value.get_str();
    r.pivots = sol.pivots;
  } else {
    const auto sol = solve_lp(c.lp);
    check_status(sol.status, "coupling LP");
    x = sol.x;
    r.value = sol.value;
    r.dual_value = sol.dual_value;
    r.pivots = sol.pivots;
  }
  // Residuals against every marginal, the dropped rows included.
  std::vector<std::vector<double>> marg(c.n, std::vector<double>(c.m, 0.0));
  r.min_mass = x.empty() ? 0.0 : x.front();
  for (std::size_t key = 0; key < c.vars; ++key) {
    r.min_mass = std::min(r.min_mass, x[key]);
    if (x[key] == 0.0) continue;
    const auto t = decode_tuple(key, c.n, c.m);
    for (std::size_t i = 0; i < c.n; ++i) marg[i][t[i]] += x[key];
    r.witness.emplace_back(key, x[key]);
  }
  for (std::size_t i = 0; i < c.n; ++i)
    for (std::size_t y = 0; y < c.m; ++y)
      r.max_residual = std::max(r.max_residual, std::abs(marg[i][y] - targets[i][y]));
  return r;
}

OracleResult coupling_diag_opt(const std::vector<Pmf>& targets, Sense sense, bool exact) {
  if (targets.empty()) throw ValidationError("coupling LP needs at least two PMFs");
  return coupling_opt(targets, diag_objective(targets.size(), targets.front().size()), sense, exact);
}

OracleResult coupling_union_opt(const std::vector<Pmf>& targets, Sense sense, bool exact) {
  if (targets.empty()) throw ValidationError("coupling LP needs at least two PMFs");
  return coupling_opt(targets, union_objective(targets.size(), targets.front().size()), sense, exact);
}

EstimatorResult estimator_opt(const Channel& w, Sense sense) {
  const TraceResult t = sense == Sense::Min ? min_trace(w) : max_trace(w);
  return {t.value / static_cast<double>(w.inputs()), t.estimator};
}

OracleResult estimator_lp(const Channel& w, Sense sense, bool exact) {
  const std::size_t n = w.inputs(), m = w.outputs();
  // Variable (y, i) at y * n + i is P(decide i | observe y).
  LpProblem<double> lp;
  lp.rows = m;
  lp.cols = m * n;
  lp.a.assign(m * m * n, 0.0);
  lp.b.assign(m, 1.0);
  lp.c.assign(m * n, 0.0);
  lp.sense = sense;
  for (std::size_t y = 0; y < m; ++y)
    for (std::size_t i = 0; i < n; ++i) {
      lp.a[y * (m * n) + y * n + i] = 1.0;
      lp.c[y * n + i] = w(i, y) / static_cast<double>(n);
    }
  OracleResult r;
  r.exact = exact;
  std::vector<double> x;
  if (exact) {
    auto q = to_exact(lp);
    for (std::size_t i = 0; i < n; ++i) {
      const auto row = exact_pmf(w.row(i));
      for (std::size_t y = 0; y < m; ++y) q.c[y * n + i] = row[y] / mpq_class(static_cast<unsigned long>(n));
    }
    const auto sol = solve_lp(q);
    check_status(sol.status, "estimator LP");
    x = to_double(sol.x);
    r.value = sol.value.get_d();
    r.dual_value = sol.dual_value.get_d();
    r.exact_value = sol.value.get_str();
    r.pivots = sol.pivots;
  } else {
    const auto sol = solve_lp(lp);
    check_status(sol.status, "estimator LP");
    x = sol.x;
    r.value = sol.value;
    r.dual_value = sol.dual_value;
    r.pivots = sol.pivots;
  }
  r.min_mass = *std::min_element(x.begin(), x.end());
  for (std::size_t y = 0; y < m; ++y) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += x[y * n + i];
    r.max_residual = std::max(r.max_residual, std::abs(s - 1.0));
  }
  return r;
}

}  // namespace doeblin
