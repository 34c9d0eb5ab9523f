#include "doeblin/fusion.hpp"

#include <algorithm>

#include "doeblin/error.hpp"

namespace doeblin {

FusionResult fuse_min(const std::vector<Pmf>& ps) {
  if (ps.empty()) throw ValidationError("fusion needs at least one PMF");
  const std::size_t m = ps.front().size();
  std::vector<double> lo(ps.front().probs().begin(), ps.front().probs().end());
  for (const auto& p : ps) {
    if (p.size() != m) throw ValidationError("fusion: PMFs have different alphabet sizes");
    for (std::size_t y = 0; y < m; ++y) lo[y] = std::min(lo[y], p[y]);
  }
  double tau = 0.0;
  for (double v : lo) tau += v;
  if (!(tau > 0.0)) throw InfeasibleError("fusion: the PMFs share no mass (agreement is zero), no consensus");
  return {Pmf::from_weights(std::move(lo)), std::min(tau, 1.0)};
}

}  // namespace doeblin
