#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "doeblin/bayes_net.hpp"
#include "doeblin/channel.hpp"
#include "doeblin/coefficients.hpp"
#include "doeblin/coupling.hpp"
#include "doeblin/pmf.hpp"

namespace testgen {

using doeblin::Channel;
using doeblin::Pmf;

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : eng_(seed) {}

  std::mt19937_64& engine() { return eng_; }
  double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(eng_); }
  std::size_t index(std::size_t lo, std::size_t hi) {  // inclusive
    return std::uniform_int_distribution<std::size_t>(lo, hi)(eng_);
  }
  bool coin(double p) { return uniform() < p; }

  /// Flat Dirichlet draw.
  std::vector<double> dirichlet(std::size_t m, double alpha = 1.0) {
    std::gamma_distribution<double> g(alpha, 1.0);
    std::vector<double> w(m);
    double s = 0;
    for (auto& x : w) s += (x = g(eng_));
    if (s <= 0) {
      w.assign(m, 0.0);
      w[index(0, m - 1)] = 1.0;
      return w;
    }
    for (auto& x : w) x /= s;
    return w;
  }

  /// Mix of dense, sparse (some zeros) and point-mass draws.
  Pmf pmf(std::size_t m) {
    const double r = uniform();
    if (r < 0.1) return Pmf::point_mass(m, index(0, m - 1));
    std::vector<double> w = dirichlet(m, r < 0.5 ? 0.5 : 1.5);
    if (r > 0.8 && m > 1) {
      w[index(0, m - 1)] = 0.0;
      double s = 0;
      for (double x : w) s += x;
      if (s == 0) w[0] = 1.0;
    }
    return Pmf::from_weights(w);
  }

  Pmf positive_pmf(std::size_t m) {
    auto w = dirichlet(m, 1.0);
    for (auto& x : w) x += 1e-3;
    return Pmf::from_weights(w);
  }

  std::vector<Pmf> pmfs(std::size_t n, std::size_t m) {
    std::vector<Pmf> out;
    for (std::size_t i = 0; i < n; ++i) out.push_back(pmf(m));
    // occasionally repeat a row, to hit coincident-PMF branches
    if (n > 1 && coin(0.1)) out[n - 1] = out[0];
    return out;
  }

  /// Common part plus mass on coordinate-private symbols; keeps the
  /// second-max coefficient at or below one.
  std::vector<Pmf> low_max2_pmfs(std::size_t n, std::size_t m) {
    const auto common = dirichlet(m, 1.0);
    std::vector<std::size_t> owner(m);
    for (auto& o : owner) o = index(0, n - 1);
    std::vector<Pmf> out;
    for (std::size_t i = 0; i < n; ++i) {
      const double a = uniform();
      std::vector<double> w(m, 0.0), priv(m, 0.0);
      double ps = 0;
      for (std::size_t y = 0; y < m; ++y)
        if (owner[y] == i) ps += (priv[y] = uniform());
      for (std::size_t y = 0; y < m; ++y)
        w[y] = ps > 0 ? a * common[y] + (1 - a) * priv[y] / ps : common[y];
      out.push_back(Pmf::from_weights(w));
    }
    return out;
  }

  /// Rejection sampling for second-max coefficient <= 1 over a mix of
  /// plain and structured draws.
  std::vector<Pmf> pmfs_max2_at_most_one(std::size_t n, std::size_t m) {
    while (true) {
      auto ps = coin(0.5) ? pmfs(n, m) : low_max2_pmfs(n, m);
      if (doeblin::max2_doeblin(ps) <= 1.0) return ps;
    }
  }

  Channel channel(std::size_t n, std::size_t m) { return Channel::from_pmfs(pmfs(n, m)); }

  Channel positive_channel(std::size_t n, std::size_t m) {
    std::vector<Pmf> rows;
    for (std::size_t i = 0; i < n; ++i) rows.push_back(positive_pmf(m));
    return Channel::from_pmfs(rows);
  }

  /// Random DAG in topological order, node 0 the source.
  doeblin::BayesNet net(std::size_t max_nodes = 6, std::size_t max_alphabet = 3) {
    const std::size_t k = index(2, max_nodes);
    std::vector<doeblin::BayesNode> nodes(k);
    for (std::size_t u = 0; u < k; ++u) {
      auto& nd = nodes[u];
      nd.name = "N" + std::to_string(u);
      nd.alphabet = index(2, max_alphabet);
      if (u == 0) continue;
      for (std::size_t p = 0; p < u; ++p)
        if (coin(0.45)) nd.parents.push_back(p);
      if (nd.parents.empty() && coin(0.9)) nd.parents.push_back(index(0, u - 1));
      std::size_t rows = 1;
      for (std::size_t p : nd.parents) rows *= nodes[p].alphabet;
      const double style = uniform();
      Pmf shared = pmf(nd.alphabet);
      for (std::size_t r = 0; r < rows; ++r) {
        Pmf row = style < 0.15 ? shared : pmf(nd.alphabet);
        // noisy copies keep tau away from 0 and 1
        if (style > 0.6) {
          std::vector<double> w(row.probs().begin(), row.probs().end());
          for (auto& x : w) x = 0.5 * x + 0.5 / static_cast<double>(nd.alphabet);
          row = Pmf::from_weights(w);
        }
        nd.cpt.insert(nd.cpt.end(), row.probs().begin(), row.probs().end());
      }
    }
    return doeblin::BayesNet(std::move(nodes), "N0");
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace testgen
