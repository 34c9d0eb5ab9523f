#include "doeblin/coupling_verify.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "doeblin/error.hpp"
#include "doeblin/kernels.hpp"

namespace doeblin {

TableStats table_stats(const SparseTable& t, std::size_t n, std::size_t m) {
  if (n > 16) throw ValidationError("table_stats: at most 16 coordinates");
  TableStats s;
  s.marginals.assign(n, std::vector<double>(m, 0.0));
  s.intersections.assign(std::size_t{1} << n, 0.0);
  s.min_mass = t.empty() ? 0.0 : t.front().second;
  std::vector<unsigned> mask_of(m, 0);
  for (const auto& [key, mass] : t) {
    const auto tuple = decode_tuple(key, n, m);
    s.total += mass;
    s.min_mass = std::min(s.min_mass, mass);
    std::fill(mask_of.begin(), mask_of.end(), 0u);
    for (std::size_t i = 0; i < n; ++i) {
      s.marginals[i][tuple[i]] += mass;
      mask_of[tuple[i]] |= 1u << i;
    }
    std::size_t distinct = 0;
    for (std::size_t y = 0; y < m; ++y) {
      const unsigned full = mask_of[y];
      if (full == 0) continue;
      ++distinct;
      for (unsigned sub = full; sub != 0; sub = (sub - 1) & full) s.intersections[sub] += mass;
    }
    s.union_mass += mass * static_cast<double>(distinct);
    if (distinct == 1) s.diagonal += mass;
  }
  return s;
}

TableStats structural_stats(const Coupling& c) {
  const std::size_t n = c.arity, m = c.alphabet;
  if (n > 16) throw ValidationError("structural_stats: at most 16 coordinates");
  TableStats s;
  s.marginals.assign(n, std::vector<double>(m, 0.0));
  for (std::size_t i = 0; i < n; ++i) s.marginals[i] = c.marginal(i);
  s.intersections.assign(std::size_t{1} << n, 0.0);
  s.total = c.weight_sum();
  s.min_mass = 0.0;
  for (const auto& comp : c.components) s.min_mass = std::min(s.min_mass, comp.weight);

  for (const auto& comp : c.components) {
    unsigned glued = 0;
    for (std::size_t g : comp.glued) glued |= 1u << g;
    std::vector<const Pmf*> factor(n, nullptr);
    for (const auto& [coord, p] : comp.free) factor[coord] = &p;
    for (unsigned mask = 1; mask < (1u << n); ++mask) {
      double acc = 0.0;
      for (std::size_t y = 0; y < m; ++y) {
        double p = (mask & glued) ? comp.shared[y] : 1.0;
        for (std::size_t i = 0; i < n && p > 0.0; ++i)
          if ((mask >> i & 1u) && factor[i]) p *= (*factor[i])[y];
        acc += p;
      }
      s.intersections[mask] += comp.weight * acc;
    }
  }
  s.diagonal = s.intersections[(1u << n) - 1];
  for (unsigned mask = 1; mask < (1u << n); ++mask)
    s.union_mass += (__builtin_popcount(mask) % 2 ? 1.0 : -1.0) * s.intersections[mask];
  return s;
}

namespace {

std::vector<bool> support(const Pmf& p) {
  std::vector<bool> s(p.size());
  for (std::size_t y = 0; y < p.size(); ++y) s[y] = p[y] > 0.0;
  return s;
}

std::vector<bool> allowed(const CouplingComponent& comp, std::size_t coord) {
  if (std::binary_search(comp.glued.begin(), comp.glued.end(), coord)) return support(comp.shared);
  for (const auto& [c, p] : comp.free)
    if (c == coord) return support(p);
  throw std::logic_error("component does not cover coordinate");
}

bool disjoint(const CouplingComponent& a, const CouplingComponent& b, std::size_t n, std::size_t m) {
  // Coordinates forced equal by either component form classes; the two
  // supports meet iff every class has a symbol allowed at all its members.
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto* comp : {&a, &b})
    for (std::size_t k = 1; k < comp->glued.size(); ++k)
      parent[find(comp->glued[k])] = find(comp->glued[0]);
  std::vector<std::vector<bool>> ok(n, std::vector<bool>(m, true));
  for (std::size_t i = 0; i < n; ++i) {
    const auto sa = allowed(a, i), sb = allowed(b, i);
    auto& cls = ok[find(i)];
    for (std::size_t y = 0; y < m; ++y) cls[y] = cls[y] && sa[y] && sb[y];
  }
  for (std::size_t i = 0; i < n; ++i)
    if (find(i) == i && std::none_of(ok[i].begin(), ok[i].end(), [](bool v) { return v; })) return true;
  return false;
}

}  // namespace

bool components_orthogonal(const Coupling& c) {
  for (std::size_t a = 0; a < c.components.size(); ++a)
    for (std::size_t b = a + 1; b < c.components.size(); ++b)
      if (!disjoint(c.components[a], c.components[b], c.arity, c.alphabet)) return false;
  return true;
}

VerificationReport verify_coupling(const Coupling& c, const std::vector<Pmf>& targets, std::size_t cap) {
  if (targets.size() != c.arity) throw ValidationError("verify: number of targets differs from arity");
  for (const auto& p : targets)
    if (p.size() != c.alphabet) throw ValidationError("verify: target alphabet differs from coupling");

  VerificationReport r;
  r.weight_sum = c.weight_sum();
  r.orthogonal = components_orthogonal(c);
  const TableStats st = structural_stats(c);

  const TableStats* use = &st;
  TableStats ex;
  if (c.expanded || table_size(c.alphabet, c.arity) <= cap) {
    const SparseTable t = c.expanded ? *c.expanded : expand(c, cap);
    ex = table_stats(t, c.arity, c.alphabet);
    use = &ex;
    r.expanded = true;
    r.route_gap = std::max({std::abs(ex.diagonal - st.diagonal), std::abs(ex.union_mass - st.union_mass),
                            std::abs(ex.total - st.total)});
    for (std::size_t k = 1; k < ex.intersections.size(); ++k)
      r.route_gap = std::max(r.route_gap, std::abs(ex.intersections[k] - st.intersections[k]));
    for (std::size_t i = 0; i < c.arity; ++i)
      for (std::size_t y = 0; y < c.alphabet; ++y)
        r.route_gap = std::max(r.route_gap, std::abs(ex.marginals[i][y] - st.marginals[i][y]));
  }
  r.min_mass = use->min_mass;
  r.total_mass = use->total;
  r.diagonal = use->diagonal;
  r.union_mass = use->union_mass;
  r.intersections = use->intersections;
  for (std::size_t i = 0; i < c.arity; ++i)
    for (std::size_t y = 0; y < c.alphabet; ++y)
      r.max_marginal_residual = std::max(r.max_marginal_residual, std::abs(use->marginals[i][y] - targets[i][y]));
  return r;
}

double n3_overlap_mass(const SparseTable& t, std::size_t m, const std::vector<Pmf>& ps) {
  if (ps.size() != 3) throw ValidationError("n3_overlap_mass needs three PMFs");
  std::vector<std::size_t> a(m), b(m), c(m);
  for (std::size_t y = 0; y < m; ++y) {
    std::size_t hi = 0, lo = 2;
    for (std::size_t i = 1; i < 3; ++i)
      if (ps[i][y] > ps[hi][y]) hi = i;
    for (std::size_t i = 2; i-- > 0;)
      if (ps[i][y] < ps[lo][y]) lo = i;
    a[y] = hi;
    c[y] = lo;
    b[y] = 3 - hi - lo;
  }
  double s = 0.0;
  for (const auto& [key, mass] : t) {
    const auto tuple = decode_tuple(key, 3, m);
    for (std::size_t y = 0; y < m; ++y)
      if (tuple[a[y]] == y && (tuple[b[y]] == y || tuple[c[y]] == y)) s += mass;
  }
  return s;
}

std::string mask_label(unsigned mask, std::size_t n) {
  std::string s;
  for (std::size_t i = 0; i < n; ++i)
    if (mask >> i & 1u) {
      if (!s.empty()) s += ',';
      s += std::to_string(i);
    }
  return s;
}

}  // namespace doeblin
