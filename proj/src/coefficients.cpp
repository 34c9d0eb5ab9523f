#include "doeblin/coefficients.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "doeblin/error.hpp"

namespace doeblin {

double doeblin_coef(const Channel& w) {
  double s = 0.0;
  for (std::size_t j = 0; j < w.outputs(); ++j) {
    double lo = w(0, j);
    for (std::size_t i = 1; i < w.inputs(); ++i) lo = std::min(lo, w(i, j));
    s += lo;
  }
  return std::clamp(s, 0.0, 1.0);
}

double max_doeblin(const Channel& w) {
  double s = 0.0;
  for (std::size_t j = 0; j < w.outputs(); ++j) {
    double hi = w(0, j);
    for (std::size_t i = 1; i < w.inputs(); ++i) hi = std::max(hi, w(i, j));
    s += hi;
  }
  return std::clamp(s, 1.0, static_cast<double>(w.inputs()));
}

double max2_doeblin(const Channel& w) {
  if (w.inputs() < 2) throw ValidationError("second-max coefficient needs at least two rows");
  double s = 0.0;
  for (std::size_t j = 0; j < w.outputs(); ++j) {
    double a = -1.0, b = -1.0;  // a >= b
    for (std::size_t i = 0; i < w.inputs(); ++i) {
      const double x = w(i, j);
      if (x >= a) {
        b = a;
        a = x;
      } else if (x > b) {
        b = x;
      }
    }
    s += b;
  }
  return s;
}

double dobrushin_tv(const Channel& w) {
  if (w.inputs() < 2) throw ValidationError("Dobrushin coefficient needs at least two rows");
  double best = 0.0;
  for (std::size_t i = 0; i < w.inputs(); ++i)
    for (std::size_t k = i + 1; k < w.inputs(); ++k) {
      double s = 0.0;
      for (std::size_t j = 0; j < w.outputs(); ++j) s += std::abs(w(i, j) - w(k, j));
      best = std::max(best, 0.5 * s);
    }
  return std::min(best, 1.0);
}

double doeblin_coef(const std::vector<Pmf>& ps) { return doeblin_coef(Channel::from_pmfs(ps)); }
double max_doeblin(const std::vector<Pmf>& ps) { return max_doeblin(Channel::from_pmfs(ps)); }
double max2_doeblin(const std::vector<Pmf>& ps) { return max2_doeblin(Channel::from_pmfs(ps)); }

CoefficientReport report(const Channel& w) {
  if (w.inputs() < 2) throw ValidationError("coefficient report needs at least two rows");
  CoefficientReport r;
  r.tau = doeblin_coef(w);
  r.gamma = 1.0 - r.tau;
  r.tau_max = max_doeblin(w);
  r.gamma_max = (r.tau_max - 1.0) / static_cast<double>(w.inputs() - 1);
  r.tau_max2 = max2_doeblin(w);
  r.eta_tv = dobrushin_tv(w);
  return r;
}

namespace {

template <class Better>
TraceResult extreme_trace(const Channel& w, Better better) {
  const std::size_t n = w.inputs(), m = w.outputs();
  std::vector<double> est(m * n, 0.0);
  double value = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    std::size_t pick = 0;
    for (std::size_t i = 1; i < n; ++i)
      if (better(w(i, j), w(pick, j))) pick = i;
    est[j * n + pick] = 1.0;
    value += w(pick, j);
  }
  return {value, Channel::from_computed(m, n, std::move(est))};
}

}  // namespace

TraceResult min_trace(const Channel& w) {
  return extreme_trace(w, [](double a, double b) { return a < b; });
}

TraceResult max_trace(const Channel& w) {
  return extreme_trace(w, [](double a, double b) { return a > b; });
}

double trace_product(const Channel& p, const Channel& w) {
  if (p.inputs() != w.outputs() || p.outputs() != w.inputs())
    throw ValidationError("trace_product: estimator must be m x n for an n x m channel");
  double s = 0.0;
  for (std::size_t j = 0; j < p.inputs(); ++j)
    for (std::size_t i = 0; i < p.outputs(); ++i) s += p(j, i) * w(i, j);
  return s;
}

MinorizationSplit minorization_split(const Channel& w) {
  const std::size_t n = w.inputs(), m = w.outputs();
  std::vector<double> lo(m);
  for (std::size_t j = 0; j < m; ++j) {
    lo[j] = w(0, j);
    for (std::size_t i = 1; i < n; ++i) lo[j] = std::min(lo[j], w(i, j));
  }
  MinorizationSplit s;
  s.alpha = doeblin_coef(w);
  if (s.alpha > 0.0) {
    s.mu = Pmf::from_weights(lo);
  } else {
    s.mu = Pmf::uniform(m);
    s.mu_degenerate = true;
  }
  if (1.0 - s.alpha < 1e-12) {
    s.residual = Channel::constant(n, Pmf::uniform(m));
    s.residual_degenerate = true;
    return s;
  }
  std::vector<double> res(n * m);
  for (std::size_t i = 0; i < n; ++i) {
    double rs = 0.0;
    for (std::size_t j = 0; j < m; ++j) rs += res[i * m + j] = w(i, j) - lo[j];
    for (std::size_t j = 0; j < m; ++j) res[i * m + j] /= rs;
  }
  s.residual = Channel::from_computed(n, m, std::move(res));
  return s;
}

Channel erasure_degradation(const Channel& w, double eps) {
  if (!(eps >= 0.0)) throw ValidationError("erasure probability must be nonnegative");
  const double tau = doeblin_coef(w);
  if (eps > tau) {
    std::ostringstream os;
    os.precision(17);
    os << "no degradation from the " << eps << "-erasure channel: Doeblin coefficient is " << tau;
    throw InfeasibleError(os.str());
  }
  const std::size_t n = w.inputs(), m = w.outputs();
  std::vector<double> d((n + 1) * m);
  if (eps == 0.0) {
    std::copy(w.data().begin(), w.data().end(), d.begin());
    std::fill(d.begin() + static_cast<std::ptrdiff_t>(n * m), d.end(), 1.0 / static_cast<double>(m));
    return Channel::from_computed(n + 1, m, std::move(d));
  }
  const MinorizationSplit split = minorization_split(w);
  for (std::size_t i = 0; i < n; ++i) {
    double rs = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      const double x = 1.0 - eps < 1e-12 ? split.mu[j] : std::max(0.0, w(i, j) - eps * split.mu[j]);
      rs += d[i * m + j] = x;
    }
    for (std::size_t j = 0; j < m; ++j) d[i * m + j] /= rs;
  }
  for (std::size_t j = 0; j < m; ++j) d[n * m + j] = split.mu[j];
  return Channel::from_computed(n + 1, m, std::move(d));
}

double mutual_information(const Pmf& input, const Channel& w) {
  const Pmf out = output_distribution(input, w);
  double s = 0.0;
  for (std::size_t i = 0; i < w.inputs(); ++i)
    for (std::size_t j = 0; j < w.outputs(); ++j) {
      const double p = input[i] * w(i, j);
      if (p > 0.0) s += p * std::log(w(i, j) / out[j]);
    }
  return s;
}

}  // namespace doeblin
