#include "doeblin/coupling.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "doeblin/coefficients.hpp"
#include "doeblin/error.hpp"

namespace doeblin {

namespace {

constexpr double kDropWeight = 1e-14;

void check_family(const std::vector<Pmf>& ps, std::size_t min_n) {
  if (ps.size() < min_n) {
    std::ostringstream os;
    os << "coupling needs at least " << min_n << " PMFs, got " << ps.size();
    throw ValidationError(os.str());
  }
  for (const auto& p : ps)
    if (p.size() != ps.front().size()) throw ValidationError("coupling: PMFs have different alphabet sizes");
}

std::vector<double> column_min(const std::vector<Pmf>& ps) {
  std::vector<double> lo(ps.front().probs().begin(), ps.front().probs().end());
  for (const auto& p : ps)
    for (std::size_t y = 0; y < lo.size(); ++y) lo[y] = std::min(lo[y], p[y]);
  return lo;
}

double sum(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s;
}

// Bit i of mask set means coordinate i belongs to the subset.
std::vector<std::size_t> members(unsigned mask, std::size_t n) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < n; ++i)
    if (mask >> i & 1u) out.push_back(i);
  return out;
}

// Subsets of {0..n-1} ordered by size, then lexicographically by members.
std::vector<unsigned> subsets_by_size(std::size_t n, std::size_t max_size) {
  std::vector<unsigned> all;
  for (unsigned mask = 0; mask < (1u << n); ++mask)
    if (static_cast<std::size_t>(__builtin_popcount(mask)) <= max_size) all.push_back(mask);
  std::sort(all.begin(), all.end(), [n](unsigned a, unsigned b) {
    const int ca = __builtin_popcount(a), cb = __builtin_popcount(b);
    if (ca != cb) return ca < cb;
    return members(a, n) < members(b, n);
  });
  return all;
}

}  // namespace

std::vector<std::size_t> decode_tuple(std::uint64_t key, std::size_t n, std::size_t m) {
  std::vector<std::size_t> t(n);
  for (std::size_t i = n; i-- > 0;) {
    t[i] = static_cast<std::size_t>(key % m);
    key /= m;
  }
  return t;
}

std::uint64_t encode_tuple(const std::vector<std::size_t>& t, std::size_t m) {
  std::uint64_t key = 0;
  for (std::size_t s : t) key = key * m + s;
  return key;
}

double Coupling::weight_sum() const {
  double s = 0.0;
  for (const auto& c : components) s += c.weight;
  return s;
}

std::vector<double> Coupling::marginal(std::size_t i) const {
  std::vector<double> out(alphabet, 0.0);
  for (const auto& c : components) {
    const Pmf* f = nullptr;
    if (std::binary_search(c.glued.begin(), c.glued.end(), i)) {
      f = &c.shared;
    } else {
      for (const auto& [coord, p] : c.free)
        if (coord == i) f = &p;
    }
    if (f == nullptr) throw std::logic_error("coupling component does not cover every coordinate");
    for (std::size_t y = 0; y < alphabet; ++y) out[y] += c.weight * (*f)[y];
  }
  return out;
}

Coupling maximal_coupling(const std::vector<Pmf>& ps) {
  check_family(ps, 2);
  const std::size_t n = ps.size(), m = ps.front().size();
  Coupling cp;
  cp.arity = n;
  cp.alphabet = m;
  const std::vector<double> lo = column_min(ps);
  const double c = std::min(1.0, sum(lo));

  std::vector<std::size_t> all(n);
  for (std::size_t i = 0; i < n; ++i) all[i] = i;
  if (c > 0.0) cp.components.push_back({c, all, Pmf::from_weights(lo), {}});
  if (1.0 - c > kDropWeight) {
    CouplingComponent prod{1.0 - c, {}, {}, {}};
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<double> r(m);
      for (std::size_t y = 0; y < m; ++y) r[y] = ps[i][y] - lo[y];
      prod.free.emplace_back(i, Pmf::from_weights(std::move(r)));
    }
    cp.components.push_back(std::move(prod));
  } else if (!cp.components.empty()) {
    cp.components.front().weight = 1.0;
  }
  return cp;
}

Coupling minimal_coupling_max(const std::vector<Pmf>& ps) {
  check_family(ps, 2);
  const std::size_t n = ps.size(), m = ps.front().size();
  if (n > 20) throw ValidationError("minimal coupling: at most 20 PMFs supported");
  const double t2 = max2_doeblin(ps);
  if (t2 > 1.0 + 1e-12) {
    std::ostringstream os;
    os.precision(17);
    os << "second-max coefficient is " << t2
       << " > 1; the union-minimizing construction does not apply (use the three-PMF variant "
          "for n = 3 or the LP oracle)";
    throw InfeasibleError(os.str());
  }

  Coupling cp;
  cp.arity = n;
  cp.alphabet = m;

  // R_a proportional to the amount by which P_a strictly exceeds all others.
  std::vector<std::vector<double>> excess(n, std::vector<double>(m, 0.0));
  std::vector<double> excess_mass(n, 0.0);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t y = 0; y < m; ++y) {
      double others = 0.0;
      for (std::size_t i = 0; i < n; ++i)
        if (i != a) others = std::max(others, ps[i][y]);
      excess[a][y] = std::max(0.0, ps[a][y] - others);
    }
    excess_mass[a] = sum(excess[a]);
  }
  std::vector<Pmf> r(n);
  for (std::size_t a = 0; a < n; ++a)
    if (excess_mass[a] > 0.0) r[a] = Pmf::from_weights(excess[a]);

  double used = 0.0;
  for (unsigned mask : subsets_by_size(n, n - 2)) {
    const std::vector<std::size_t> free_set = members(mask, n);
    std::vector<std::size_t> glued;
    for (std::size_t i = 0; i < n; ++i)
      if (!(mask >> i & 1u)) glued.push_back(i);
    std::vector<double> g(m);
    for (std::size_t y = 0; y < m; ++y) {
      double lo = 1.0, hi = 0.0;
      for (std::size_t i : glued) lo = std::min(lo, ps[i][y]);
      for (std::size_t i : free_set) hi = std::max(hi, ps[i][y]);
      g[y] = std::max(0.0, lo - hi);
    }
    const double w = sum(g);
    if (w <= kDropWeight) continue;
    CouplingComponent comp{w, glued, Pmf::from_weights(std::move(g)), {}};
    for (std::size_t a : free_set) {
      if (excess_mass[a] <= 0.0)
        throw std::logic_error("minimal coupling: free coordinate without excess mass");
      comp.free.emplace_back(a, r[a]);
    }
    used += w;
    cp.components.push_back(std::move(comp));
  }

  const double rest = 1.0 - used;
  bool product_ok = rest > kDropWeight;
  for (std::size_t a = 0; a < n && product_ok; ++a) product_ok = excess_mass[a] > 0.0;
  if (product_ok) {
    CouplingComponent prod{rest, {}, {}, {}};
    for (std::size_t a = 0; a < n; ++a) prod.free.emplace_back(a, r[a]);
    cp.components.push_back(std::move(prod));
  }
  return cp;
}

double minimal_union_value_n3(const std::vector<Pmf>& ps) {
  check_family(ps, 3);
  if (ps.size() != 3) throw ValidationError("three-PMF union value needs exactly three PMFs");
  return max_doeblin(ps) + std::max(0.0, max2_doeblin(ps) - 1.0);
}

Coupling minimal_coupling_max_n3(const std::vector<Pmf>& ps) {
  check_family(ps, 3);
  if (ps.size() != 3) throw ValidationError("three-PMF minimal coupling needs exactly three PMFs");
  const double t2 = max2_doeblin(ps);
  if (t2 <= 1.0) return minimal_coupling_max(ps);

  const std::size_t m = ps.front().size();
  const std::vector<double> lo = column_min(ps);
  const double tau = sum(lo);
  const double d = (t2 - 1.0) / 3.0;

  // Pairwise minima, indexed by the excluded coordinate: pair[k] = {i, j} with k the third.
  const std::size_t pair_of[3][2] = {{1, 2}, {0, 2}, {0, 1}};
  std::vector<double> pmin[3];
  std::vector<double> spread[3];  // normalized excess of the pair minimum over the triple minimum
  double tau_pair[3];
  for (std::size_t k = 0; k < 3; ++k) {
    const auto [i, j] = std::pair{pair_of[k][0], pair_of[k][1]};
    pmin[k].resize(m);
    for (std::size_t y = 0; y < m; ++y) pmin[k][y] = std::min(ps[i][y], ps[j][y]);
    tau_pair[k] = sum(pmin[k]);
    const double den = tau_pair[k] - tau;
    spread[k].assign(m, 0.0);
    if (den > 0.0)
      for (std::size_t y = 0; y < m; ++y) spread[k][y] = (pmin[k][y] - lo[y]) / den;
  }

  Coupling cp;
  cp.arity = 3;
  cp.alphabet = m;
  if (tau > 0.0) cp.components.push_back({tau, {0, 1, 2}, Pmf::from_weights(lo), {}});
  for (std::size_t i = 0; i < 3; ++i) {
    // pairs containing i are those excluding the other two coordinates
    const std::size_t j = pair_of[i][0], k = pair_of[i][1];
    const double w = 1.0 + tau - tau_pair[k] - tau_pair[j] + 2.0 * d;
    if (w <= kDropWeight) continue;
    std::vector<double> num(m);
    for (std::size_t y = 0; y < m; ++y)
      num[y] = ps[i][y] + lo[y] - pmin[k][y] - pmin[j][y] + d * (spread[k][y] + spread[j][y]);
    CouplingComponent comp{w, {j, k}, Pmf::from_weights(spread[i]), {}};
    comp.free.emplace_back(i, Pmf::from_weights(std::move(num)));
    cp.components.push_back(std::move(comp));
  }
  return cp;
}

JointPmf::JointPmf(std::size_t nx_, std::size_t ny_, Pmf p) : nx(nx_), ny(ny_), flat(std::move(p)) {
  if (nx == 0 || ny == 0 || flat.size() != nx * ny)
    throw ValidationError("joint PMF: table size does not match |X| x |Y|");
}

std::vector<double> JointPmf::x_marginal() const {
  std::vector<double> out(nx, 0.0);
  for (std::size_t x = 0; x < nx; ++x)
    for (std::size_t y = 0; y < ny; ++y) out[x] += (*this)(x, y);
  return out;
}

}  // namespace doeblin
