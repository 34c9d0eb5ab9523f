#pragma once

#include <vector>

#include "doeblin/channel.hpp"
#include "doeblin/pmf.hpp"

namespace doeblin {

/// Square loss matrix; entry (i, j) is the loss of deciding j when i is true.
struct LossMatrix {
  std::size_t n = 0;
  std::vector<double> data;  // row-major

  LossMatrix() = default;
  explicit LossMatrix(const std::vector<std::vector<double>>& rows);
  static LossMatrix identity(std::size_t n);
  static LossMatrix complement(std::size_t n);  // all-ones minus identity
  double operator()(std::size_t i, std::size_t j) const { return data[i * n + j]; }
};

/// Tr(L^T diag(lambda) W E) for an m x n estimator E.
double risk(const Pmf& prior, const Channel& w, const LossMatrix& loss, const Channel& estimator);

/// min_i lambda_i - sum_y min_i lambda_i W_i(y).
double min_degroot(const Pmf& prior, const Channel& w);
/// sum_y max_i lambda_i W_i(y) - max_i lambda_i.
double max_degroot(const Pmf& prior, const Channel& w);

/// Deterministic estimator minimizing the risk: for each output y pick the
/// smallest j minimizing sum_i L_ij lambda_i W_i(y).
Channel bayes_estimator(const Pmf& prior, const Channel& w, const LossMatrix& loss);

/// For n = 2: TV(lambda P_1, (1 - lambda) P_2) - |1 - 2 lambda| / 2, with the
/// TV of unnormalized measures taken as half the l1 distance.
double classical_degroot(double lambda, const Pmf& p1, const Pmf& p2);

}  // namespace doeblin
