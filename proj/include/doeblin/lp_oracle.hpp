#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "doeblin/channel.hpp"
#include "doeblin/coupling.hpp"
#include "doeblin/pmf.hpp"
#include "doeblin/simplex.hpp"

namespace doeblin {

struct OracleResult {
  double value = 0;
  double dual_value = 0;
  /// Largest marginal (or row-sum) constraint violation of the witness,
  /// including the constraints dropped as redundant.
  double max_residual = 0;
  double min_mass = 0;
  bool exact = false;
  std::string exact_value;  // "p/q" when exact
  std::size_t pivots = 0;
  SparseTable witness;  // coupling problems; keys as in SparseTable
};

/// Largest number of LP variables the coupling problems accept.
inline constexpr std::size_t kOracleVariableCap = 100000;

/// Optimizes sum_t objective[t] * p(t) over couplings of the targets; t
/// runs over all m^n tuples in base-m order. One redundant marginal
/// constraint is dropped per coordinate after the first.
OracleResult coupling_opt(const std::vector<Pmf>& targets, const std::vector<double>& objective,
                          Sense sense, bool exact = false);

/// Objective: total mass on constant tuples.
OracleResult coupling_diag_opt(const std::vector<Pmf>& targets, Sense sense, bool exact = false);
/// Objective: number of distinct symbols in the tuple.
OracleResult coupling_union_opt(const std::vector<Pmf>& targets, Sense sense, bool exact = false);

std::vector<double> diag_objective(std::size_t n, std::size_t m);
std::vector<double> union_objective(std::size_t n, std::size_t m);

struct EstimatorResult {
  double value = 0;
  Channel witness;  // m x n
};

/// Optimum of Tr(P W) / n over m x n row-stochastic P, solved column by
/// column.
EstimatorResult estimator_opt(const Channel& w, Sense sense);

/// The same problem handed to the simplex solver as a full LP.
OracleResult estimator_lp(const Channel& w, Sense sense, bool exact = false);

}  // namespace doeblin
