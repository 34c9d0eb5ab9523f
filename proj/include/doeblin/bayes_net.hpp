#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "doeblin/channel.hpp"
#include "doeblin/kernels.hpp"

namespace doeblin {

struct BayesNode {
  std::string name;
  std::size_t alphabet = 0;
  std::vector<std::size_t> parents;  // indices of earlier nodes, declared order
  /// Rows indexed by parent assignments, row-major over the declared parent
  /// order; each row has `alphabet` entries. Empty for the source.
  std::vector<double> cpt;
};

/// Discrete DAG in topological order with a single source of unspecified
/// marginal.
class BayesNet {
 public:
  /// Nodes are reordered topologically (ties keep declaration order).
  /// Rejects cycles, unknown parents, a source with parents or a CPT, other
  /// nodes without CPTs, and malformed CPT rows.
  BayesNet(std::vector<BayesNode> nodes, const std::string& source);

  static BayesNet from_json(const nlohmann::json& j);

  std::size_t size() const noexcept { return nodes_.size(); }
  std::size_t source() const noexcept { return source_; }
  const BayesNode& node(std::size_t u) const { return nodes_.at(u); }
  const std::vector<std::size_t>& children(std::size_t u) const { return children_.at(u); }
  std::size_t index_of(const std::string& name) const;

  /// CPT as a channel from joint parent assignments to the node alphabet.
  Channel node_channel(std::size_t u) const;

  /// Nodes reachable from u along directed edges (u excluded).
  std::vector<bool> descendants(std::size_t u) const;
  /// Nodes from which some node of `set` is reachable, the set included.
  std::vector<bool> ancestors_of(const std::vector<std::size_t>& set) const;

 private:
  std::vector<BayesNode> nodes_;
  std::vector<std::vector<std::size_t>> children_;
  std::size_t source_ = 0;
};

/// Sorted, deduplicated copy.
std::vector<std::size_t> node_set(std::vector<std::size_t> v);

/// Doeblin coefficient of the node's CPT. Throws for the source.
double node_tau(const BayesNet& net, std::size_t u);

/// Default cap on enumerated joint states for composite_channel.
inline constexpr std::size_t kCompositeCap = 10000000;

/// P_{V|X}: rows are source symbols, columns the joint assignments of V
/// (row-major over V in node order). Enumerates the source's and V's
/// ancestors; throws CapExceededError when their joint state count exceeds
/// cap. The empty set gives a one-column channel.
Channel composite_channel(const BayesNet& net, const std::vector<std::size_t>& v,
                          std::size_t cap = kCompositeCap, Exec exec = Exec::Parallel);

/// tau_u tau(P_{V|X}) + (1 - tau_u) tau(P_{V u pa(u)|X}). Requires that u
/// is not the source, not in V, and has no directed path into V.
double recursion_bound(const BayesNet& net, const std::vector<std::size_t>& v, std::size_t u,
                       std::size_t cap = kCompositeCap);

struct PercolationResult {
  double probability = 0;
  bool monte_carlo = false;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  double std_error = 0;
  std::size_t relevant_nodes = 0;
};

/// Nodes other than the source lying on some directed source-to-V path.
std::vector<std::size_t> relevant_nodes(const BayesNet& net, const std::vector<std::size_t>& v);

inline constexpr std::size_t kExactPercolationCap = 25;

/// Probability that an open directed path joins the source to V when each
/// node u is open independently with probability 1 - tau_u.
PercolationResult percolation_exact(const BayesNet& net, const std::vector<std::size_t>& v,
                                    Exec exec = Exec::Parallel);
PercolationResult percolation_mc(const BayesNet& net, const std::vector<std::size_t>& v,
                                 std::uint64_t samples, std::uint64_t seed,
                                 Exec exec = Exec::Parallel);

/// Same estimators over an explicit open-probability vector (indexed by
/// node; the source is always open). Used by the benchmarks.
double percolation_exact_probs(const BayesNet& net, const std::vector<std::size_t>& v,
                               const std::vector<double>& open_prob, Exec exec);
std::uint64_t percolation_mc_hits(const BayesNet& net, const std::vector<std::size_t>& v,
                                  const std::vector<double>& open_prob, std::uint64_t samples,
                                  std::uint64_t seed, Exec exec);

std::uint64_t splitmix64(std::uint64_t x);

struct PathBound {
  double bound = 0;
  std::vector<std::vector<std::size_t>> paths;  // node indices, source first
};

inline constexpr std::size_t kPathCap = 1000000;

/// Sum over shortcut-free source-to-V paths of the product of 1 - tau_U
/// over the path's non-source nodes.
PathBound shortcut_free_bound(const BayesNet& net, const std::vector<std::size_t>& v,
                              std::size_t cap = kPathCap);

/// sum over T of P(T) tau(P_{X_T|U}) with P(T) = prod_{i in T}(1 - tau_i)
/// prod_{i not in T} tau_i. Columns of prior_channel index X^n row-major
/// over letters with the given alphabet sizes.
double samorodnitsky_bound(const Channel& prior_channel, const std::vector<std::size_t>& letter_alphabets,
                           const std::vector<double>& letter_taus);

/// Marginal channel onto the letters in `keep` (ascending).
Channel marginal_letters(const Channel& prior_channel, const std::vector<std::size_t>& letter_alphabets,
                         const std::vector<std::size_t>& keep);

}  // namespace doeblin
