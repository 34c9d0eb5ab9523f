#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "doeblin/coupling.hpp"
#include "doeblin/pmf.hpp"

namespace doeblin {

/// Event masses of a joint law on n coordinates over an m-ary alphabet.
struct TableStats {
  std::vector<std::vector<double>> marginals;  // n x m
  double total = 0;
  double min_mass = 0;
  double diagonal = 0;  // P(all coordinates equal)
  double union_mass = 0;  // sum over y of P(some coordinate equals y)
  /// intersections[mask] = sum over y of P(Y_i = y for all i in mask).
  /// Index 0 is unused.
  std::vector<double> intersections;
};

TableStats table_stats(const SparseTable& t, std::size_t n, std::size_t m);

/// Same quantities computed from the mixture components without
/// expanding, via inclusion-exclusion. Requires n <= 16.
TableStats structural_stats(const Coupling& c);

struct VerificationReport {
  bool expanded = false;  // false: the cap refused expansion
  double weight_sum = 0;
  double max_marginal_residual = 0;
  double min_mass = 0;
  double total_mass = 0;
  double diagonal = 0;
  double union_mass = 0;
  std::vector<double> intersections;
  bool orthogonal = true;
  /// When expanded, the largest gap between table-based and structural
  /// values (a consistency check of the two routes).
  double route_gap = 0;
};

/// Checks a coupling against its targets. Expands (or uses the attached
/// table) when alphabet^arity <= cap; otherwise verifies the structured
/// form only.
VerificationReport verify_coupling(const Coupling& c, const std::vector<Pmf>& targets,
                                   std::size_t cap);

/// True when no two components share a support point, decided from the
/// factor supports without expansion.
bool components_orthogonal(const Coupling& c);

/// For three coordinates: sum over y of P(Y_a = y and (Y_b = y or Y_c = y))
/// with a the smallest index maximizing P_i(y), c the largest index
/// minimizing it and b the remaining one. Never exceeds one for a valid
/// coupling; the strengthened union lower bound rests on that.
double n3_overlap_mass(const SparseTable& t, std::size_t m, const std::vector<Pmf>& ps);

/// Labels for subset masks, e.g. "0,2".
std::string mask_label(unsigned mask, std::size_t n);

}  // namespace doeblin
