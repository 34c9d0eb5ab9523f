#include "doeblin/degroot.hpp"

#include <algorithm>
#include <cmath>

#include "doeblin/error.hpp"

namespace doeblin {

LossMatrix::LossMatrix(const std::vector<std::vector<double>>& rows) : n(rows.size()) {
  if (n == 0) throw ValidationError("loss matrix must be nonempty");
  for (const auto& r : rows) {
    if (r.size() != n) throw ValidationError("loss matrix must be square");
    for (double v : r) {
      if (!std::isfinite(v)) throw ValidationError("loss matrix entries must be finite");
      data.push_back(v);
    }
  }
}

LossMatrix LossMatrix::identity(std::size_t n) {
  std::vector<std::vector<double>> r(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) r[i][i] = 1.0;
  return LossMatrix(r);
}

LossMatrix LossMatrix::complement(std::size_t n) {
  std::vector<std::vector<double>> r(n, std::vector<double>(n, 1.0));
  for (std::size_t i = 0; i < n; ++i) r[i][i] = 0.0;
  return LossMatrix(r);
}

namespace {
void check_prior(const Pmf& prior, const Channel& w) {
  if (prior.size() != w.inputs()) throw ValidationError("prior size differs from the channel's input count");
}
}  // namespace

double risk(const Pmf& prior, const Channel& w, const LossMatrix& loss, const Channel& estimator) {
  check_prior(prior, w);
  const std::size_t n = w.inputs(), m = w.outputs();
  if (loss.n != n) throw ValidationError("loss matrix size differs from the channel's input count");
  if (estimator.inputs() != m || estimator.outputs() != n)
    throw ValidationError("estimator must be m x n");
  // sum_{i,j} L_ij lambda_i (W E)_ij
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t y = 0; y < m; ++y) {
      const double pw = prior[i] * w(i, y);
      if (pw == 0.0) continue;
      for (std::size_t j = 0; j < n; ++j) s += loss(i, j) * pw * estimator(y, j);
    }
  return s;
}

double min_degroot(const Pmf& prior, const Channel& w) {
  check_prior(prior, w);
  if (w.inputs() < 2) throw ValidationError("DeGroot distances need n >= 2");
  const double lmin = *std::min_element(prior.probs().begin(), prior.probs().end());
  double s = 0.0;
  for (std::size_t y = 0; y < w.outputs(); ++y) {
    double lo = prior[0] * w(0, y);
    for (std::size_t i = 1; i < w.inputs(); ++i) lo = std::min(lo, prior[i] * w(i, y));
    s += lo;
  }
  return lmin - s;
}

double max_degroot(const Pmf& prior, const Channel& w) {
  check_prior(prior, w);
  if (w.inputs() < 2) throw ValidationError("DeGroot distances need n >= 2");
  const double lmax = *std::max_element(prior.probs().begin(), prior.probs().end());
  double s = 0.0;
  for (std::size_t y = 0; y < w.outputs(); ++y) {
    double hi = prior[0] * w(0, y);
    for (std::size_t i = 1; i < w.inputs(); ++i) hi = std::max(hi, prior[i] * w(i, y));
    s += hi;
  }
  return s - lmax;
}

Channel bayes_estimator(const Pmf& prior, const Channel& w, const LossMatrix& loss) {
  check_prior(prior, w);
  const std::size_t n = w.inputs(), m = w.outputs();
  if (loss.n != n) throw ValidationError("loss matrix size differs from the channel's input count");
  std::vector<double> e(m * n, 0.0);
  for (std::size_t y = 0; y < m; ++y) {
    std::size_t best = 0;
    double best_v = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      double v = 0.0;
      for (std::size_t i = 0; i < n; ++i) v += loss(i, j) * prior[i] * w(i, y);
      if (j == 0 || v < best_v) {
        best = j;
        best_v = v;
      }
    }
    e[y * n + best] = 1.0;
  }
  return Channel::from_computed(m, n, std::move(e));
}

double classical_degroot(double lambda, const Pmf& p1, const Pmf& p2) {
  if (p1.size() != p2.size()) throw ValidationError("classical_degroot: alphabet mismatch");
  double l1 = 0.0;
  for (std::size_t y = 0; y < p1.size(); ++y) l1 += std::abs(lambda * p1[y] - (1.0 - lambda) * p2[y]);
  return 0.5 * l1 - 0.5 * std::abs(1.0 - 2.0 * lambda);
}

}  // namespace doeblin
