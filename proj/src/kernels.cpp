#include "doeblin/kernels.hpp"

#include <algorithm>
#include <cstdlib>
#include <limits>
#include <string>

#include "doeblin/error.hpp"

namespace doeblin {

std::size_t expansion_cap() {
  if (const char* env = std::getenv("DOEBLIN_EXPANSION_CAP")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end == env || *end != '\0' || v == 0)
      throw ValidationError(std::string("DOEBLIN_EXPANSION_CAP is not a positive integer: ") + env);
    return static_cast<std::size_t>(v);
  }
  return 1000000;
}

std::size_t table_size(std::size_t m, std::size_t n) {
  std::size_t s = 1;
  for (std::size_t i = 0; i < n; ++i) {
    if (m != 0 && s > std::numeric_limits<std::size_t>::max() / m)
      return std::numeric_limits<std::size_t>::max();
    s *= m;
  }
  return s;
}

SparseTable expand_component(const Coupling& c, std::size_t index) {
  const CouplingComponent& comp = c.components.at(index);
  const std::size_t n = c.arity, m = c.alphabet;

  // Each "slot" is either the glued block or one free coordinate.
  struct Slot {
    const Pmf* f;
    std::vector<std::size_t> coords;
    std::vector<std::size_t> support;
  };
  std::vector<Slot> slots;
  if (!comp.glued.empty()) slots.push_back({&comp.shared, comp.glued, {}});
  for (const auto& [coord, p] : comp.free) slots.push_back({&p, {coord}, {}});
  for (auto& s : slots)
    for (std::size_t y = 0; y < m; ++y)
      if ((*s.f)[y] > 0.0) s.support.push_back(y);

  SparseTable out;
  if (comp.weight <= 0.0) return out;
  for (const auto& s : slots)
    if (s.support.empty()) return out;

  std::vector<std::size_t> pos(slots.size(), 0), tuple(n, 0);
  while (true) {
    double mass = comp.weight;
    for (std::size_t k = 0; k < slots.size(); ++k) {
      const std::size_t y = slots[k].support[pos[k]];
      mass *= (*slots[k].f)[y];
      for (std::size_t coord : slots[k].coords) tuple[coord] = y;
    }
    out.emplace_back(encode_tuple(tuple, m), mass);
    std::size_t k = slots.size();
    while (k-- > 0) {
      if (++pos[k] < slots[k].support.size()) break;
      pos[k] = 0;
    }
    if (k == static_cast<std::size_t>(-1)) break;
  }
  std::sort(out.begin(), out.end());
  return out;
}

SparseTable expand(const Coupling& c, std::size_t cap, Exec exec) {
  if (table_size(c.alphabet, c.arity) > cap)
    throw CapExceededError("coupling expansion: alphabet^arity exceeds cap of " + std::to_string(cap));
  const std::size_t k = c.components.size();
  std::vector<SparseTable> parts(k);
  if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(dynamic, 1)
    for (std::size_t i = 0; i < k; ++i) parts[i] = expand_component(c, i);
  } else {
    for (std::size_t i = 0; i < k; ++i) parts[i] = expand_component(c, i);
  }

  // Stable merge keeps equal keys in component order, so each tuple's
  // mass is summed in a fixed order.
  SparseTable all;
  for (auto& p : parts) all.insert(all.end(), p.begin(), p.end());
  std::stable_sort(all.begin(), all.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  SparseTable out;
  for (const auto& [key, mass] : all) {
    if (!out.empty() && out.back().first == key)
      out.back().second += mass;
    else
      out.emplace_back(key, mass);
  }
  return out;
}

}  // namespace doeblin
