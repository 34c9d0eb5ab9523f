#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "doeblin/pmf.hpp"

namespace doeblin {

/// Sparse joint distribution over n-tuples in {0..m-1}^n. The key is the
/// base-m tuple index with coordinate 0 most significant. Sorted by key,
/// keys unique.
using SparseTable = std::vector<std::pair<std::uint64_t, double>>;

std::vector<std::size_t> decode_tuple(std::uint64_t key, std::size_t n, std::size_t m);
std::uint64_t encode_tuple(const std::vector<std::size_t>& t, std::size_t m);

/// One mixture component: the glued coordinates all equal a common symbol
/// drawn from `shared`; each free coordinate draws independently from
/// its own factor.
struct CouplingComponent {
  double weight = 0;
  std::vector<std::size_t> glued;                 // sorted
  Pmf shared;                                     // unused when glued is empty
  std::vector<std::pair<std::size_t, Pmf>> free;  // sorted by coordinate
};

struct Coupling {
  std::size_t arity = 0;
  std::size_t alphabet = 0;
  std::vector<CouplingComponent> components;
  std::optional<SparseTable> expanded;

  double weight_sum() const;
  /// Distribution of coordinate i under the mixture.
  std::vector<double> marginal(std::size_t i) const;
};

/// Diagonal component with weight tau plus the product of residuals.
Coupling maximal_coupling(const std::vector<Pmf>& ps);

/// Union-minimizing coupling for any n >= 2. Throws InfeasibleError when
/// the second-max coefficient exceeds 1 + 1e-12.
Coupling minimal_coupling_max(const std::vector<Pmf>& ps);

/// Union-minimizing coupling for three PMFs covering both regimes of the
/// second-max coefficient.
Coupling minimal_coupling_max_n3(const std::vector<Pmf>& ps);

/// Closed-form optimal union value for three PMFs:
/// tau_max + (tau_max2 - 1)_+.
double minimal_union_value_n3(const std::vector<Pmf>& ps);

/// Distribution over X x Y stored flat with index x * ny + y.
struct JointPmf {
  std::size_t nx = 0, ny = 0;
  Pmf flat;

  JointPmf() = default;
  JointPmf(std::size_t nx_, std::size_t ny_, Pmf p);
  double operator()(std::size_t x, std::size_t y) const { return flat[x * ny + y]; }
  std::vector<double> x_marginal() const;
};

struct JointCoupling {
  std::size_t arity = 0;
  std::size_t nx = 0, ny = 0;
  /// Tuples of pair symbols (pair index x * ny + y), base nx * ny.
  SparseTable table;
  /// Weights of the pair-diagonal, x-glued, and product parts.
  double w_diagonal = 0, w_x_glued = 0, w_product = 0;
  bool trivial = false;  // x-glued part dropped
};

/// Coupling of joint distributions that simultaneously maximizes
/// P(all pairs equal) and P(all x equal).
JointCoupling simultaneous_joint_coupling(const std::vector<JointPmf>& joints,
                                          std::size_t cap = 0);

}  // namespace doeblin
