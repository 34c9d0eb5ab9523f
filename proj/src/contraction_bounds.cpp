#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "doeblin/bayes_net.hpp"
#include "doeblin/coefficients.hpp"
#include "doeblin/error.hpp"

namespace doeblin {

namespace {

void check_nodes(const BayesNet& net, const std::vector<std::size_t>& v) {
  for (std::size_t u : v)
    if (u >= net.size()) throw ValidationError("node index out of range");
}

double tau_of_set(const BayesNet& net, const std::vector<std::size_t>& v, std::size_t cap) {
  if (v.empty()) return 1.0;
  return doeblin_coef(composite_channel(net, v, cap));
}

}  // namespace

double recursion_bound(const BayesNet& net, const std::vector<std::size_t>& v_in, std::size_t u,
                       std::size_t cap) {
  const std::vector<std::size_t> v = node_set(v_in);
  check_nodes(net, v);
  if (u >= net.size()) throw ValidationError("node index out of range");
  if (u == net.source()) throw ValidationError("recursion bound: u must not be the source");
  if (std::binary_search(v.begin(), v.end(), u)) throw ValidationError("recursion bound: u must not belong to V");
  const std::vector<bool> desc = net.descendants(u);
  for (std::size_t x : v)
    if (desc[x])
      throw ValidationError("recursion bound: there is a directed path from " + net.node(u).name + " to " +
                            net.node(x).name);
  const double tu = node_tau(net, u);
  std::vector<std::size_t> w = v;
  w.insert(w.end(), net.node(u).parents.begin(), net.node(u).parents.end());
  w = node_set(w);
  return tu * tau_of_set(net, v, cap) + (1.0 - tu) * tau_of_set(net, w, cap);
}

std::vector<std::size_t> relevant_nodes(const BayesNet& net, const std::vector<std::size_t>& v) {
  check_nodes(net, v);
  const std::vector<bool> desc = net.descendants(net.source());
  const std::vector<bool> anc = net.ancestors_of(v);
  std::vector<std::size_t> out;
  for (std::size_t u = 0; u < net.size(); ++u)
    if (u != net.source() && desc[u] && anc[u]) out.push_back(u);
  return out;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

namespace {

// Reachability through open nodes, processed in topological order.
struct Reach {
  const BayesNet& net;
  std::vector<std::size_t> rel;       // relevant nodes in node order
  std::vector<bool> target;           // by node
  std::vector<std::vector<std::size_t>> rel_parents;  // per relevant node: parent positions in rel, or SIZE_MAX for source

  Reach(const BayesNet& n, const std::vector<std::size_t>& v) : net(n), rel(relevant_nodes(n, v)) {
    target.assign(n.size(), false);
    for (std::size_t x : v) target[x] = true;
    std::vector<std::size_t> pos(n.size(), SIZE_MAX);
    for (std::size_t k = 0; k < rel.size(); ++k) pos[rel[k]] = k;
    rel_parents.resize(rel.size());
    for (std::size_t k = 0; k < rel.size(); ++k)
      for (std::size_t p : n.node(rel[k]).parents) {
        if (p == n.source())
          rel_parents[k].push_back(SIZE_MAX);
        else if (pos[p] != SIZE_MAX)
          rel_parents[k].push_back(pos[p]);
      }
  }

  // open(k) says whether relevant node k is open.
  template <class Open>
  bool connected(Open open, std::vector<char>& reached) const {
    for (std::size_t k = 0; k < rel.size(); ++k) {
      reached[k] = 0;
      if (!open(k)) continue;
      for (std::size_t q : rel_parents[k])
        if (q == SIZE_MAX || reached[q]) {
          reached[k] = 1;
          break;
        }
      if (reached[k] && target[rel[k]]) return true;
    }
    return false;
  }
};

bool source_in(const BayesNet& net, const std::vector<std::size_t>& v) {
  return std::find(v.begin(), v.end(), net.source()) != v.end();
}

}  // namespace

double percolation_exact_probs(const BayesNet& net, const std::vector<std::size_t>& v,
                               const std::vector<double>& open_prob, Exec exec) {
  check_nodes(net, v);
  if (source_in(net, v)) return 1.0;
  const Reach reach(net, v);
  const std::size_t k = reach.rel.size();
  if (k > kExactPercolationCap) {
    std::ostringstream os;
    os << "exact percolation: " << k << " relevant nodes exceed the cap of " << kExactPercolationCap;
    throw CapExceededError(os.str());
  }
  const std::uint64_t total = std::uint64_t{1} << k;
  const std::size_t chunks = static_cast<std::size_t>(std::clamp<std::uint64_t>(total / 1024, 1, 64));
  std::vector<double> partial(chunks, 0.0);
  auto run_chunk = [&](std::size_t c) {
    const std::uint64_t lo = total * c / chunks, hi = total * (c + 1) / chunks;
    std::vector<char> reached(k);
    double s = 0.0;
    for (std::uint64_t cfg = lo; cfg < hi; ++cfg) {
      auto open = [cfg](std::size_t j) { return (cfg >> j & 1u) != 0; };
      if (!reach.connected(open, reached)) continue;
      double p = 1.0;
      for (std::size_t j = 0; j < k; ++j) {
        const double q = open_prob[reach.rel[j]];
        p *= open(j) ? q : 1.0 - q;
      }
      s += p;
    }
    partial[c] = s;
  };
  if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(static, 1)
    for (std::size_t c = 0; c < chunks; ++c) run_chunk(c);
  } else {
    for (std::size_t c = 0; c < chunks; ++c) run_chunk(c);
  }
  double s = 0.0;
  for (double x : partial) s += x;
  return std::clamp(s, 0.0, 1.0);
}

std::uint64_t percolation_mc_hits(const BayesNet& net, const std::vector<std::size_t>& v,
                                  const std::vector<double>& open_prob, std::uint64_t samples,
                                  std::uint64_t seed, Exec exec) {
  check_nodes(net, v);
  if (source_in(net, v)) return samples;
  const Reach reach(net, v);
  const std::size_t k = reach.rel.size();
  auto trial = [&](std::uint64_t t, std::vector<char>& reached, std::vector<char>& open) -> bool {
    std::mt19937_64 eng(splitmix64(seed ^ splitmix64(t)));
    for (std::size_t j = 0; j < k; ++j) {
      const double u = static_cast<double>(eng() >> 11) * 0x1.0p-53;
      open[j] = u < open_prob[reach.rel[j]];
    }
    return reach.connected([&](std::size_t j) { return open[j] != 0; }, reached);
  };
  std::uint64_t hits = 0;
  const auto n = static_cast<std::int64_t>(samples);
  if (exec == Exec::Parallel) {
#pragma omp parallel reduction(+ : hits)
    {
      std::vector<char> reached(k), open(k);
#pragma omp for schedule(static)
      for (std::int64_t t = 0; t < n; ++t) hits += trial(static_cast<std::uint64_t>(t), reached, open);
    }
  } else {
    std::vector<char> reached(k), open(k);
    for (std::int64_t t = 0; t < n; ++t) hits += trial(static_cast<std::uint64_t>(t), reached, open);
  }
  return hits;
}

namespace {
std::vector<double> open_probs(const BayesNet& net, const std::vector<std::size_t>& rel) {
  std::vector<double> q(net.size(), 1.0);
  for (std::size_t u : rel) q[u] = 1.0 - node_tau(net, u);
  return q;
}
}  // namespace

PercolationResult percolation_exact(const BayesNet& net, const std::vector<std::size_t>& v, Exec exec) {
  PercolationResult r;
  const auto rel = relevant_nodes(net, v);
  r.relevant_nodes = rel.size();
  r.probability = percolation_exact_probs(net, v, open_probs(net, rel), exec);
  return r;
}

PercolationResult percolation_mc(const BayesNet& net, const std::vector<std::size_t>& v, std::uint64_t samples,
                                 std::uint64_t seed, Exec exec) {
  if (samples == 0) throw ValidationError("Monte Carlo percolation needs at least one sample");
  PercolationResult r;
  const auto rel = relevant_nodes(net, v);
  r.relevant_nodes = rel.size();
  r.monte_carlo = true;
  r.samples = samples;
  r.seed = seed;
  const std::uint64_t hits = percolation_mc_hits(net, v, open_probs(net, rel), samples, seed, exec);
  r.probability = static_cast<double>(hits) / static_cast<double>(samples);
  r.std_error = std::sqrt(r.probability * (1.0 - r.probability) / static_cast<double>(samples));
  return r;
}

PathBound shortcut_free_bound(const BayesNet& net, const std::vector<std::size_t>& v_in, std::size_t cap) {
  const std::vector<std::size_t> v = node_set(v_in);
  check_nodes(net, v);
  PathBound out;
  const std::size_t src = net.source();
  if (std::binary_search(v.begin(), v.end(), src)) {
    out.bound = 1.0;
    out.paths.push_back({src});
    return out;
  }
  std::vector<bool> target(net.size(), false);
  for (std::size_t x : v) target[x] = true;
  std::vector<double> open(net.size(), 1.0);
  for (std::size_t u = 0; u < net.size(); ++u)
    if (u != src) open[u] = 1.0 - node_tau(net, u);

  // A path has a strictly smaller sub-path to V exactly when it passes a V
  // node before its end or some edge jumps over path nodes. Both are
  // pruned while extending.
  std::vector<std::size_t> path{src};
  std::vector<std::size_t> on_path(net.size(), SIZE_MAX);  // position in path
  on_path[src] = 0;
  auto dfs = [&](auto&& self, double weight) -> void {
    const std::size_t last = path.back();
    for (std::size_t c : net.children(last)) {
      bool chord = false;
      for (std::size_t p : net.node(c).parents)
        if (p != last && on_path[p] != SIZE_MAX) {
          chord = true;
          break;
        }
      if (chord) continue;
      const double w = weight * open[c];
      path.push_back(c);
      on_path[c] = path.size() - 1;
      if (target[c]) {
        if (out.paths.size() >= cap) throw CapExceededError("shortcut-free paths exceed cap of " + std::to_string(cap));
        out.paths.push_back(path);
        out.bound += w;
      } else {
        self(self, w);
      }
      on_path[c] = SIZE_MAX;
      path.pop_back();
    }
  };
  dfs(dfs, 1.0);
  return out;
}

Channel marginal_letters(const Channel& pc, const std::vector<std::size_t>& alph, const std::vector<std::size_t>& keep) {
  std::size_t total = 1;
  for (std::size_t a : alph) {
    if (a == 0) throw ValidationError("letter alphabet sizes must be positive");
    total *= a;
  }
  if (total != pc.outputs()) throw ValidationError("letter alphabets do not factor the channel's output alphabet");
  std::size_t kept = 1;
  for (std::size_t i : keep) {
    if (i >= alph.size()) throw ValidationError("letter index out of range");
    kept *= alph[i];
  }
  const std::size_t n = alph.size();
  std::vector<double> d(pc.inputs() * kept, 0.0);
  std::vector<std::size_t> digit(n);
  for (std::size_t col = 0; col < total; ++col) {
    std::size_t rem = col;
    for (std::size_t i = n; i-- > 0;) {
      digit[i] = rem % alph[i];
      rem /= alph[i];
    }
    std::size_t k = 0;
    for (std::size_t i : keep) k = k * alph[i] + digit[i];
    for (std::size_t r = 0; r < pc.inputs(); ++r) d[r * kept + k] += pc(r, col);
  }
  return Channel::from_computed(pc.inputs(), kept, std::move(d));
}

double samorodnitsky_bound(const Channel& pc, const std::vector<std::size_t>& alph, const std::vector<double>& taus) {
  const std::size_t n = alph.size();
  if (taus.size() != n) throw ValidationError("need one Doeblin coefficient per letter");
  if (n > 24) throw ValidationError("at most 24 letters supported");
  for (double t : taus)
    if (!(t >= 0.0 && t <= 1.0)) throw ValidationError("letter coefficients must lie in [0,1]");
  double s = 0.0;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    double w = 1.0;
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask >> i & 1u) {
        w *= 1.0 - taus[i];
        keep.push_back(i);
      } else {
        w *= taus[i];
      }
    }
    if (w == 0.0) continue;
    s += w * (keep.empty() ? 1.0 : doeblin_coef(marginal_letters(pc, alph, keep)));
  }
  return s;
}

}  // namespace doeblin
