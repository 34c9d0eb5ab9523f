#pragma once

#include <cstddef>
#include <cstdint>

#include "doeblin/coupling.hpp"

namespace doeblin {

/// Every data-parallel kernel has a serial reference; both produce
/// bit-identical results.
enum class Exec { Serial, Parallel };

/// Default 10^6 entries; DOEBLIN_EXPANSION_CAP overrides.
std::size_t expansion_cap();

/// m^n, or SIZE_MAX on overflow.
std::size_t table_size(std::size_t m, std::size_t n);

/// Materializes the mixture as a sparse table. Components are expanded
/// independently (in parallel under Exec::Parallel) and merged in
/// component order, so the summation order never depends on threads.
/// Throws CapExceededError when alphabet^arity exceeds cap.
SparseTable expand(const Coupling& c, std::size_t cap, Exec exec = Exec::Parallel);

/// Expansion of a single component, weight included. Sorted by key.
SparseTable expand_component(const Coupling& c, std::size_t index);

}  // namespace doeblin
