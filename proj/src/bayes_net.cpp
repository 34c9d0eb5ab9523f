#include "doeblin/bayes_net.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "doeblin/coefficients.hpp"
#include "doeblin/error.hpp"

namespace doeblin {

BayesNet::BayesNet(std::vector<BayesNode> nodes, const std::string& source) {
  const std::size_t n = nodes.size();
  if (n == 0) throw ValidationError("network has no nodes");
  std::map<std::string, std::size_t> by_name;
  for (std::size_t i = 0; i < n; ++i) {
    if (nodes[i].name.empty()) throw ValidationError("network node without a name");
    if (!by_name.emplace(nodes[i].name, i).second)
      throw ValidationError("duplicate node name: " + nodes[i].name);
    if (nodes[i].alphabet == 0) throw ValidationError("node " + nodes[i].name + ": alphabet must be >= 1");
  }
  const auto src_it = by_name.find(source);
  if (src_it == by_name.end()) throw ValidationError("source node not found: " + source);

  // Kahn's algorithm, always taking the earliest declared ready node.
  std::vector<std::size_t> indeg(n, 0);
  std::vector<std::vector<std::size_t>> kids(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t p : nodes[i].parents) {
      if (p >= n) throw ValidationError("node " + nodes[i].name + ": parent index out of range");
      if (p == i) throw ValidationError("node " + nodes[i].name + " is its own parent");
      ++indeg[i];
      kids[p].push_back(i);
    }
  std::vector<std::size_t> order;
  std::vector<bool> done(n, false);
  while (order.size() < n) {
    std::size_t pick = n;
    for (std::size_t i = 0; i < n; ++i)
      if (!done[i] && indeg[i] == 0) {
        pick = i;
        break;
      }
    if (pick == n) throw ValidationError("network contains a directed cycle");
    done[pick] = true;
    order.push_back(pick);
    for (std::size_t c : kids[pick]) --indeg[c];
  }
  std::vector<std::size_t> pos(n);
  for (std::size_t k = 0; k < n; ++k) pos[order[k]] = k;

  nodes_.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    nodes_[k] = std::move(nodes[order[k]]);
    for (auto& p : nodes_[k].parents) p = pos[p];
  }
  source_ = pos[src_it->second];
  children_.assign(n, {});
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t p : nodes_[u].parents) children_[p].push_back(u);

  for (std::size_t u = 0; u < n; ++u) {
    BayesNode& nd = nodes_[u];
    std::vector<std::size_t> sorted = nd.parents;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw ValidationError("node " + nd.name + ": repeated parent");
    if (u == source_) {
      if (!nd.parents.empty()) throw ValidationError("source " + nd.name + " must not have parents");
      if (!nd.cpt.empty()) throw ValidationError("source " + nd.name + " must not have a CPT");
      continue;
    }
    if (nd.cpt.empty())
      throw ValidationError("node " + nd.name + " has no CPT; only the designated source may omit one");
    std::size_t rows = 1;
    for (std::size_t p : nd.parents) rows *= nodes_[p].alphabet;
    if (nd.cpt.size() != rows * nd.alphabet) {
      std::ostringstream os;
      os << "node " << nd.name << ": CPT must have " << rows << " rows of " << nd.alphabet << " entries";
      throw ValidationError(os.str());
    }
    for (std::size_t r = 0; r < rows; ++r) {
      try {
        Pmf p(std::vector<double>(nd.cpt.begin() + static_cast<std::ptrdiff_t>(r * nd.alphabet),
                                  nd.cpt.begin() + static_cast<std::ptrdiff_t>((r + 1) * nd.alphabet)));
        std::copy(p.probs().begin(), p.probs().end(), nd.cpt.begin() + static_cast<std::ptrdiff_t>(r * nd.alphabet));
      } catch (const ValidationError& e) {
        std::ostringstream os;
        os << "node " << nd.name << " CPT row " << r << ": " << e.what();
        throw ValidationError(os.str());
      }
    }
  }
}

BayesNet BayesNet::from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("nodes") || !j.at("nodes").is_array())
    throw ValidationError("network JSON needs a \"nodes\" array");
  if (!j.contains("source") || !j.at("source").is_string())
    throw ValidationError("network JSON needs a \"source\" name");
  const auto& arr = j.at("nodes");
  std::map<std::string, std::size_t> idx;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const auto& nd = arr[i];
    if (!nd.is_object() || !nd.contains("name") || !nd.at("name").is_string())
      throw ValidationError("network node " + std::to_string(i) + " needs a string \"name\"");
    idx.emplace(nd.at("name").get<std::string>(), i);
  }
  std::vector<BayesNode> nodes;
  for (const auto& nd : arr) {
    BayesNode b;
    b.name = nd.at("name").get<std::string>();
    if (!nd.contains("alphabet") || !nd.at("alphabet").is_number_unsigned())
      throw ValidationError("node " + b.name + " needs a positive integer \"alphabet\"");
    b.alphabet = nd.at("alphabet").get<std::size_t>();
    if (nd.contains("parents")) {
      if (!nd.at("parents").is_array()) throw ValidationError("node " + b.name + ": \"parents\" must be an array");
      for (const auto& p : nd.at("parents")) {
        if (!p.is_string()) throw ValidationError("node " + b.name + ": parent names must be strings");
        const auto it = idx.find(p.get<std::string>());
        if (it == idx.end()) throw ValidationError("node " + b.name + ": unknown parent " + p.get<std::string>());
        b.parents.push_back(it->second);
      }
    }
    if (nd.contains("cpt")) {
      if (!nd.at("cpt").is_array()) throw ValidationError("node " + b.name + ": \"cpt\" must be an array of rows");
      for (const auto& row : nd.at("cpt")) {
        if (!row.is_array() || row.size() != b.alphabet)
          throw ValidationError("node " + b.name + ": each CPT row needs " + std::to_string(b.alphabet) + " entries");
        for (const auto& x : row) {
          if (!x.is_number()) throw ValidationError("node " + b.name + ": non-numeric CPT entry");
          b.cpt.push_back(x.get<double>());
        }
      }
    }
    nodes.push_back(std::move(b));
  }
  return BayesNet(std::move(nodes), j.at("source").get<std::string>());
}

std::size_t BayesNet::index_of(const std::string& name) const {
  for (std::size_t u = 0; u < nodes_.size(); ++u)
    if (nodes_[u].name == name) return u;
  throw ValidationError("unknown node: " + name);
}

Channel BayesNet::node_channel(std::size_t u) const {
  const BayesNode& nd = node(u);
  if (u == source_) throw ValidationError("the source node has no conditional distribution");
  const std::size_t rows = nd.cpt.size() / nd.alphabet;
  return Channel::from_computed(rows, nd.alphabet, nd.cpt);
}

std::vector<bool> BayesNet::descendants(std::size_t u) const {
  std::vector<bool> seen(size(), false);
  std::vector<std::size_t> stack{u};
  while (!stack.empty()) {
    const std::size_t x = stack.back();
    stack.pop_back();
    for (std::size_t c : children_[x])
      if (!seen[c]) {
        seen[c] = true;
        stack.push_back(c);
      }
  }
  return seen;
}

std::vector<bool> BayesNet::ancestors_of(const std::vector<std::size_t>& set) const {
  std::vector<bool> seen(size(), false);
  std::vector<std::size_t> stack;
  for (std::size_t v : set) {
    if (v >= size()) throw ValidationError("node index out of range");
    if (!seen[v]) {
      seen[v] = true;
      stack.push_back(v);
    }
  }
  while (!stack.empty()) {
    const std::size_t x = stack.back();
    stack.pop_back();
    for (std::size_t p : nodes_[x].parents)
      if (!seen[p]) {
        seen[p] = true;
        stack.push_back(p);
      }
  }
  return seen;
}

std::vector<std::size_t> node_set(std::vector<std::size_t> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

double node_tau(const BayesNet& net, std::size_t u) { return doeblin_coef(net.node_channel(u)); }

Channel composite_channel(const BayesNet& net, const std::vector<std::size_t>& v_in, std::size_t cap,
                          Exec exec) {
  const std::vector<std::size_t> v = node_set(v_in);
  const std::size_t src = net.source();
  const std::size_t nx = net.node(src).alphabet;
  const std::vector<bool> anc = net.ancestors_of(v);

  std::vector<std::size_t> enumerated;  // non-source ancestors, in node order
  std::size_t states = 1;
  std::size_t budget = nx;
  for (std::size_t u = 0; u < net.size(); ++u) {
    if (!anc[u] || u == src) continue;
    enumerated.push_back(u);
    const std::size_t a = net.node(u).alphabet;
    if (budget > cap / a) {
      std::ostringstream os;
      os << "composite channel: joint state count of the source and the target's ancestors exceeds cap " << cap;
      throw CapExceededError(os.str());
    }
    budget *= a;
    states *= a;
  }
  std::size_t nv = 1;
  for (std::size_t u : v) nv *= net.node(u).alphabet;

  const std::size_t total = nx * states;
  const std::size_t chunks = std::clamp<std::size_t>(total / 4096, 1, 64);
  std::vector<std::vector<double>> partial(chunks, std::vector<double>(nx * nv, 0.0));

  auto run_chunk = [&](std::size_t c, std::vector<double>& out) {
    const std::size_t lo = total * c / chunks, hi = total * (c + 1) / chunks;
    std::vector<std::size_t> val(net.size(), 0);
    for (std::size_t idx = lo; idx < hi; ++idx) {
      std::size_t rem = idx % states;
      val[src] = idx / states;
      for (std::size_t k = enumerated.size(); k-- > 0;) {
        const std::size_t u = enumerated[k];
        val[u] = rem % net.node(u).alphabet;
        rem /= net.node(u).alphabet;
      }
      double p = 1.0;
      for (std::size_t u : enumerated) {
        const BayesNode& nd = net.node(u);
        std::size_t row = 0;
        for (std::size_t q : nd.parents) row = row * net.node(q).alphabet + val[q];
        p *= nd.cpt[row * nd.alphabet + val[u]];
        if (p == 0.0) break;
      }
      if (p == 0.0) continue;
      std::size_t col = 0;
      for (std::size_t u : v) col = col * net.node(u).alphabet + val[u];
      out[val[src] * nv + col] += p;
    }
  };

  if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(static, 1)
    for (std::size_t c = 0; c < chunks; ++c) run_chunk(c, partial[c]);
  } else {
    for (std::size_t c = 0; c < chunks; ++c) run_chunk(c, partial[c]);
  }
  std::vector<double> d(nx * nv, 0.0);
  for (const auto& part : partial)
    for (std::size_t k = 0; k < d.size(); ++k) d[k] += part[k];
  return Channel::from_computed(nx, nv, std::move(d));
}

}  // namespace doeblin
