#include "viralcm/diffusion.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <thread>

namespace viralcm {

namespace {

template <class Neighbors>
std::vector<Node> reachable(const EnhancedGraph& g, Node start, Neighbors neighbors) {
  if (start >= g.node_count()) throw DomainError("node index out of range");
  std::vector<char> seen(g.node_count(), 0);
  std::vector<Node> stack{start};
  std::vector<Node> out;
  seen[start] = 1;
  while (!stack.empty()) {
    const Node u = stack.back();
    stack.pop_back();
    out.push_back(u);
    for (Node v : neighbors(u)) {
      if (!seen[v]) {
        seen[v] = 1;
        stack.push_back(v);
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

void ClassificationRule::validate() const {
  if (!(gamma > 0.0 && gamma <= 1.0)) throw DomainError("classification: gamma must lie in (0, 1]");
  if (!(floor >= 0.0 && floor < 1.0)) throw DomainError("classification: floor must lie in [0, 1)");
}

std::vector<Node> influenced_set(const EnhancedGraph& g, Node pioneer) {
  return reachable(g, pioneer, [&](Node u) { return g.out_neighbors(u); });
}

std::vector<Node> reverse_reach(const EnhancedGraph& g, Node target) {
  return reachable(g, target, [&](Node v) { return g.in_neighbors(v); });
}

SccDecomposition strongly_connected_components(const EnhancedGraph& g) {
  // Iterative Tarjan.
  const std::size_t n = g.node_count();
  constexpr std::uint32_t kUnvisited = std::numeric_limits<std::uint32_t>::max();
  SccDecomposition scc;
  scc.component.assign(n, kUnvisited);
  std::vector<std::uint32_t> index(n, kUnvisited), low(n, 0);
  std::vector<char> on_stack(n, 0);
  std::vector<Node> stack;
  std::vector<std::pair<Node, std::size_t>> call;  // node, next neighbor position
  std::uint32_t next_index = 0;

  for (Node root = 0; root < n; ++root) {
    if (index[root] != kUnvisited) continue;
    call.emplace_back(root, 0);
    index[root] = low[root] = next_index++;
    stack.push_back(root);
    on_stack[root] = 1;
    while (!call.empty()) {
      auto& [u, pos] = call.back();
      const auto out = g.out_neighbors(u);
      if (pos < out.size()) {
        const Node v = out[pos++];
        if (index[v] == kUnvisited) {
          index[v] = low[v] = next_index++;
          stack.push_back(v);
          on_stack[v] = 1;
          call.emplace_back(v, 0);
        } else if (on_stack[v]) {
          low[u] = std::min(low[u], index[v]);
        }
        continue;
      }
      const Node done = u;
      call.pop_back();
      if (!call.empty()) {
        const Node parent = call.back().first;
        low[parent] = std::min(low[parent], low[done]);
      }
      if (low[done] == index[done]) {
        const auto id = static_cast<std::uint32_t>(scc.size.size());
        std::size_t count = 0;
        Node w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = 0;
          scc.component[w] = id;
          ++count;
        } while (w != done);
        scc.size.push_back(count);
      }
    }
  }
  return scc;
}

std::vector<std::size_t> reach_sizes(const EnhancedGraph& g, unsigned threads) {
  const std::size_t n = g.node_count();
  const SccDecomposition scc = strongly_connected_components(g);
  const std::size_t c = scc.size.size();

  // Condensation DAG in CSR form, both directions.
  std::vector<std::size_t> out_off(c + 1, 0), in_off(c + 1, 0);
  for (Node u = 0; u < n; ++u) {
    for (Node v : g.out_neighbors(u)) {
      const auto cu = scc.component[u], cv = scc.component[v];
      if (cu != cv) {
        ++out_off[cu + 1];
        ++in_off[cv + 1];
      }
    }
  }
  for (std::size_t i = 0; i < c; ++i) {
    out_off[i + 1] += out_off[i];
    in_off[i + 1] += in_off[i];
  }
  std::vector<std::uint32_t> out_adj(out_off[c]), in_adj(in_off[c]);
  {
    std::vector<std::size_t> of(out_off.begin(), out_off.end() - 1), inf(in_off.begin(), in_off.end() - 1);
    for (Node u = 0; u < n; ++u) {
      for (Node v : g.out_neighbors(u)) {
        const auto cu = scc.component[u], cv = scc.component[v];
        if (cu != cv) {
          out_adj[of[cu]++] = cv;
          in_adj[inf[cv]++] = cu;
        }
      }
    }
  }

  const auto giant = static_cast<std::uint32_t>(
      std::max_element(scc.size.begin(), scc.size.end()) - scc.size.begin());
  auto mark_from = [&](const std::vector<std::size_t>& off, const std::vector<std::uint32_t>& adj) {
    std::vector<char> mark(c, 0);
    std::vector<std::uint32_t> stack{giant};
    mark[giant] = 1;
    while (!stack.empty()) {
      const auto x = stack.back();
      stack.pop_back();
      for (std::size_t i = off[x]; i < off[x + 1]; ++i) {
        if (!mark[adj[i]]) {
          mark[adj[i]] = 1;
          stack.push_back(adj[i]);
        }
      }
    }
    return mark;
  };
  const std::vector<char> downstream = mark_from(out_off, out_adj);  // reachable from giant
  const std::vector<char> upstream = mark_from(in_off, in_adj);      // reaches giant
  std::size_t downstream_nodes = 0;
  for (std::size_t i = 0; i < c; ++i) {
    if (downstream[i]) downstream_nodes += scc.size[i];
  }

  std::vector<std::size_t> comp_reach(c, 0);
  auto work = [&](std::size_t begin, std::size_t end) {
    std::vector<std::uint32_t> stamp(c, 0);
    std::vector<std::uint32_t> stack;
    std::uint32_t epoch = 0;
    for (std::size_t src = begin; src < end; ++src) {
      if (src == giant) {
        comp_reach[src] = downstream_nodes;
        continue;
      }
      // Sources upstream of the giant reach all of its descendants; count
      // those once and only walk the part of the reach outside them.
      const bool skip_downstream = upstream[src];
      std::size_t total = skip_downstream ? downstream_nodes : 0;
      ++epoch;
      stack.assign(1, static_cast<std::uint32_t>(src));
      stamp[src] = epoch;
      while (!stack.empty()) {
        const auto x = stack.back();
        stack.pop_back();
        total += scc.size[x];
        for (std::size_t i = out_off[x]; i < out_off[x + 1]; ++i) {
          const auto y = out_adj[i];
          if (stamp[y] == epoch || (skip_downstream && downstream[y])) continue;
          stamp[y] = epoch;
          stack.push_back(y);
        }
      }
      comp_reach[src] = total;
    }
  };

  unsigned workers = threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : threads;
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(1, c / 256)));
  if (workers <= 1) {
    work(0, c);
  } else {
    std::vector<std::thread> pool;
    const std::size_t chunk = (c + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
      const std::size_t b = w * chunk, e = std::min(c, b + chunk);
      if (b < e) pool.emplace_back(work, b, e);
    }
    for (auto& t : pool) t.join();
  }

  std::vector<std::size_t> sizes(n);
  for (Node v = 0; v < n; ++v) sizes[v] = comp_reach[scc.component[v]];
  return sizes;
}

std::vector<Node> classify_good_pioneers(std::span<const std::size_t> reach,
                                         const ClassificationRule& rule) {
  rule.validate();
  std::vector<Node> good;
  if (reach.empty()) return good;
  const double n = static_cast<double>(reach.size());
  const double largest = static_cast<double>(*std::max_element(reach.begin(), reach.end()));
  const double cut = std::max(rule.gamma * largest, rule.floor * n);
  for (std::size_t v = 0; v < reach.size(); ++v) {
    if (static_cast<double>(reach[v]) >= cut) good.push_back(static_cast<Node>(v));
  }
  return good;
}

DiffusionOutcome all_reach(const EnhancedGraph& g, const ClassificationRule& rule, unsigned threads) {
  DiffusionOutcome out;
  out.n = g.node_count();
  out.seed = g.seed();
  out.rule = rule;
  out.reach_sizes = reach_sizes(g, threads);
  out.good_pioneers = classify_good_pioneers(out.reach_sizes, rule);

  const double n = static_cast<double>(out.n);
  if (!out.good_pioneers.empty()) {
    double total = 0.0;
    for (Node v : out.good_pioneers) total += static_cast<double>(out.reach_sizes[v]);
    out.alpha_hat_sim = total / static_cast<double>(out.good_pioneers.size()) / n;
  }
  out.alpha_bar_hat_sim = static_cast<double>(out.good_pioneers.size()) / n;

  std::map<std::size_t, std::size_t> counts;
  for (std::size_t s : out.reach_sizes) ++counts[s];
  for (const auto& [size, count] : counts) {
    out.reach_histogram.emplace_back(static_cast<double>(size) / n, count);
  }
  return out;
}

SampledReach sample_reach(const EnhancedGraph& g, std::size_t pioneers, std::uint64_t seed,
                          const ClassificationRule& rule, double z) {
  rule.validate();
  if (pioneers == 0) throw DomainError("sample_reach: need at least one pioneer");
  Rng rng(mix_seed(seed));
  std::vector<std::size_t> sizes(pioneers);
  for (auto& s : sizes) {
    const auto v = static_cast<Node>(uniform_below(rng, g.node_count()));
    s = influenced_set(g, v).size();
  }
  const double n = static_cast<double>(g.node_count());
  const double largest = static_cast<double>(*std::max_element(sizes.begin(), sizes.end()));
  const double cut = std::max(rule.gamma * largest, rule.floor * n);

  SampledReach out;
  out.pioneers = pioneers;
  double reach_total = 0.0;
  for (std::size_t s : sizes) {
    if (static_cast<double>(s) >= cut) {
      ++out.good;
      reach_total += static_cast<double>(s);
    }
  }
  const double m = static_cast<double>(pioneers);
  out.alpha_bar_hat = static_cast<double>(out.good) / m;
  if (out.good > 0) out.alpha_hat = reach_total / static_cast<double>(out.good) / n;
  // Wilson score interval.
  const double p = out.alpha_bar_hat, z2 = z * z;
  const double centre = (p + z2 / (2 * m)) / (1 + z2 / m);
  const double half = z * std::sqrt(p * (1 - p) / m + z2 / (4 * m * m)) / (1 + z2 / m);
  out.alpha_bar_low = std::max(0.0, centre - half);
  out.alpha_bar_high = std::min(1.0, centre + half);
  return out;
}

}  // namespace viralcm
