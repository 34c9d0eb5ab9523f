#include <benchmark/benchmark.h>

#include <random>

#include "doeblin/bayes_net.hpp"
#include "doeblin/coupling.hpp"
#include "doeblin/kernels.hpp"

using namespace doeblin;

namespace {

std::vector<Pmf> spread_pmfs(std::size_t n, std::size_t m, std::uint64_t seed) {
  std::mt19937_64 eng(seed);
  std::gamma_distribution<double> g(1.0, 1.0);
  std::vector<Pmf> ps;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> w(m);
    for (auto& x : w) x = g(eng) + 0.05;
    ps.push_back(Pmf::from_weights(w));
  }
  return ps;
}

// Layered DAG: each layer's nodes take two parents from the layer above.
BayesNet layered_net(std::size_t layers, std::size_t width, std::size_t alphabet) {
  std::mt19937_64 eng(7);
  std::uniform_real_distribution<double> u(0.1, 1.0);
  std::vector<BayesNode> nodes;
  nodes.push_back({"X", alphabet, {}, {}});
  std::vector<std::size_t> prev{0};
  for (std::size_t l = 0; l < layers; ++l) {
    std::vector<std::size_t> cur;
    for (std::size_t k = 0; k < width; ++k) {
      BayesNode nd;
      nd.name = "L" + std::to_string(l) + "_" + std::to_string(k);
      nd.alphabet = alphabet;
      nd.parents.push_back(prev[k % prev.size()]);
      if (prev.size() > 1) nd.parents.push_back(prev[(k + 1) % prev.size()]);
      std::size_t rows = 1;
      for (std::size_t p : nd.parents) rows *= nodes[p].alphabet;
      for (std::size_t r = 0; r < rows; ++r) {
        std::vector<double> w(alphabet);
        double s = 0;
        for (auto& x : w) s += (x = u(eng));
        for (auto& x : w) nd.cpt.push_back(x / s);
      }
      cur.push_back(nodes.size());
      nodes.push_back(nd);
    }
    prev = cur;
  }
  return BayesNet(nodes, "X");
}

Exec mode(const benchmark::State& s) { return s.range(0) ? Exec::Parallel : Exec::Serial; }

void BM_ExpandMaximal(benchmark::State& state) {
  const Coupling c = maximal_coupling(spread_pmfs(8, 5, 1));
  for (auto _ : state) benchmark::DoNotOptimize(expand(c, SIZE_MAX, mode(state)));
}
BENCHMARK(BM_ExpandMaximal)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_CompositeChannel(benchmark::State& state) {
  const BayesNet net = layered_net(4, 4, 3);
  const std::vector<std::size_t> v{net.size() - 1};
  for (auto _ : state) benchmark::DoNotOptimize(composite_channel(net, v, SIZE_MAX, mode(state)));
}
BENCHMARK(BM_CompositeChannel)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_PercolationExact(benchmark::State& state) {
  const BayesNet net = layered_net(5, 4, 2);
  const std::vector<std::size_t> v{net.size() - 1};
  std::vector<double> open(net.size(), 0.6);
  for (auto _ : state) benchmark::DoNotOptimize(percolation_exact_probs(net, v, open, mode(state)));
}
BENCHMARK(BM_PercolationExact)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_PercolationMonteCarlo(benchmark::State& state) {
  const BayesNet net = layered_net(6, 5, 2);
  const std::vector<std::size_t> v{net.size() - 1};
  std::vector<double> open(net.size(), 0.6);
  for (auto _ : state) benchmark::DoNotOptimize(percolation_mc_hits(net, v, open, 200000, 3, mode(state)));
}
BENCHMARK(BM_PercolationMonteCarlo)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
