#pragma once

#include <vector>

#include "doeblin/pmf.hpp"

namespace doeblin {

struct FusionResult {
  Pmf fused;
  double agreement = 0;  // Doeblin coefficient of the inputs
};

/// Normalized pointwise minimum. Throws InfeasibleError when the inputs
/// share no mass (agreement zero).
FusionResult fuse_min(const std::vector<Pmf>& ps);

}  // namespace doeblin
