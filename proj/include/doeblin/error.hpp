#pragma once

#include <stdexcept>
#include <string>

namespace doeblin {

// Input or invariant violation: malformed channel, dimension mismatch,
// precondition outside the operation's domain. The CLI maps it to exit code 1.
class ValidationError : public std::invalid_argument {
 public:
  explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

// The request is well formed but has no solution: fusion with zero
// agreement, degradation beyond the Doeblin coefficient, a minimal
// coupling whose second-max mass exceeds one. CLI exit code 2.
class InfeasibleError : public std::runtime_error {
 public:
  explicit InfeasibleError(const std::string& what) : std::runtime_error(what) {}
};

// A configured size cap (expansion, enumeration, path count) was hit.
class CapExceededError : public std::runtime_error {
 public:
  explicit CapExceededError(const std::string& what) : std::runtime_error(what) {}
};

namespace tol {
// Row sums read from text are accepted within this distance from one.
inline constexpr double kInput = 1e-9;
// Algebraic identities recomputed in double precision.
inline constexpr double kIdentity = 1e-12;
// Marginal and mass checks on constructed couplings.
inline constexpr double kVerify = 1e-10;
// Agreement between closed forms and the floating-point LP oracle.
inline constexpr double kOracle = 1e-9;
}  // namespace tol

}  // namespace doeblin
