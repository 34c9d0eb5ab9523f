#pragma once

#include <vector>

#include "doeblin/channel.hpp"
#include "doeblin/pmf.hpp"

namespace doeblin {

/// Sum over columns of the column minimum. In [0, 1].
double doeblin_coef(const Channel& w);
/// Sum over columns of the column maximum. In [1, n].
double max_doeblin(const Channel& w);
/// Sum over columns of the second largest entry; a tied maximum counts
/// twice, so the column contributes the maximum. Requires n >= 2.
double max2_doeblin(const Channel& w);
/// Largest pairwise total variation distance between rows. Requires n >= 2.
double dobrushin_tv(const Channel& w);

// Same quantities for a family of PMFs on a common alphabet.
double doeblin_coef(const std::vector<Pmf>& ps);
double max_doeblin(const std::vector<Pmf>& ps);
double max2_doeblin(const std::vector<Pmf>& ps);

struct CoefficientReport {
  double tau = 0, gamma = 0, tau_max = 0, gamma_max = 0, tau_max2 = 0, eta_tv = 0;
};

CoefficientReport report(const Channel& w);

struct TraceResult {
  double value = 0;
  Channel estimator;  // m x n, deterministic
};

/// min over m x n row-stochastic P of Tr(P W), attained by putting row j's
/// mass on the smallest index achieving min_i W_ij. value == doeblin_coef(w).
TraceResult min_trace(const Channel& w);
/// Maximizing counterpart. value == max_doeblin(w).
TraceResult max_trace(const Channel& w);

/// Tr(P W) for an m x n estimator P.
double trace_product(const Channel& p, const Channel& w);

struct MinorizationSplit {
  double alpha = 0;
  Pmf mu;
  Channel residual;
  bool mu_degenerate = false;        // alpha == 0, mu set to uniform
  bool residual_degenerate = false;  // alpha == 1, residual rows set to uniform
};

/// W = alpha * 1 mu^T + (1 - alpha) * residual with alpha = doeblin_coef(w).
MinorizationSplit minorization_split(const Channel& w);

/// Channel P_{R|B} with n + 1 rows (last row is the erasure symbol) such
/// that erasure(n, eps) * P_{R|B} == W. Throws InfeasibleError if eps
/// exceeds doeblin_coef(w).
Channel erasure_degradation(const Channel& w, double eps);

/// Mutual information in nats of the joint input x W.
double mutual_information(const Pmf& input, const Channel& w);

}  // namespace doeblin
