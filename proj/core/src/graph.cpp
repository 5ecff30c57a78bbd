#include "viralcm/graph.hpp"

#include <limits>
#include <numeric>
#include <ostream>

#include <nlohmann/json.hpp>

namespace viralcm {

EnhancedGraph EnhancedGraph::build(std::span<const NodeDegrees> sample, std::uint64_t seed) {
  if (sample.empty()) throw DomainError("graph build: empty sample");
  if (sample.size() > std::numeric_limits<Node>::max()) throw DomainError("graph build: too many nodes");

  EnhancedGraph g;
  g.seed_ = seed;
  g.degrees_.assign(sample.begin(), sample.end());
  Rng rng(mix_seed(seed));

  std::uint64_t total = 0;
  for (const NodeDegrees& d : g.degrees_) {
    if (d.total < 0 || d.transmitter < 0 || d.transmitter > d.total) {
      throw DomainError("graph build: invalid degree pair");
    }
    total += static_cast<std::uint64_t>(d.total);
  }
  if (total % 2 == 1) {
    const auto v = static_cast<Node>(uniform_below(rng, g.degrees_.size()));
    g.degrees_[v].total += 1;  // one extra receiver half-edge
    g.parity_node_ = v;
    ++total;
  }

  g.first_half_edge_.resize(g.degrees_.size() + 1);
  g.first_half_edge_[0] = 0;
  for (std::size_t v = 0; v < g.degrees_.size(); ++v) {
    g.first_half_edge_[v + 1] = g.first_half_edge_[v] + static_cast<HalfEdge>(g.degrees_[v].total);
  }
  g.owner_.resize(total);
  for (std::size_t v = 0; v < g.degrees_.size(); ++v) {
    std::fill(g.owner_.begin() + static_cast<std::ptrdiff_t>(g.first_half_edge_[v]),
              g.owner_.begin() + static_cast<std::ptrdiff_t>(g.first_half_edge_[v + 1]),
              static_cast<Node>(v));
  }

  std::vector<HalfEdge> order(total);
  std::iota(order.begin(), order.end(), HalfEdge{0});
  for (std::uint64_t i = total; i > 1; --i) {
    std::swap(order[i - 1], order[uniform_below(rng, i)]);
  }
  g.partner_.resize(total);
  for (std::uint64_t i = 0; i < total; i += 2) {
    g.partner_[order[i]] = order[i + 1];
    g.partner_[order[i + 1]] = order[i];
  }
  g.build_digraph();
  return g;
}

bool EnhancedGraph::is_transmitter(HalfEdge h) const {
  const Node v = owner_[h];
  const HalfEdge first_transmitter =
      first_half_edge_[v + 1] - static_cast<HalfEdge>(degrees_[v].transmitter);
  return h >= first_transmitter;
}

std::vector<std::pair<HalfEdge, HalfEdge>> EnhancedGraph::matching() const {
  std::vector<std::pair<HalfEdge, HalfEdge>> pairs;
  pairs.reserve(edge_count());
  for (HalfEdge h = 0; h < partner_.size(); ++h) {
    if (h < partner_[h]) pairs.emplace_back(h, partner_[h]);
  }
  return pairs;
}

void EnhancedGraph::build_digraph() {
  const std::size_t n = degrees_.size();
  out_offsets_.assign(n + 1, 0);
  in_offsets_.assign(n + 1, 0);
  for (HalfEdge h = 0; h < owner_.size(); ++h) {
    if (!is_transmitter(h)) continue;
    ++out_offsets_[owner_[h] + 1];
    ++in_offsets_[owner_[partner_[h]] + 1];
  }
  std::partial_sum(out_offsets_.begin(), out_offsets_.end(), out_offsets_.begin());
  std::partial_sum(in_offsets_.begin(), in_offsets_.end(), in_offsets_.begin());
  out_targets_.resize(out_offsets_[n]);
  in_sources_.resize(in_offsets_[n]);
  std::vector<std::size_t> out_fill(out_offsets_.begin(), out_offsets_.end() - 1);
  std::vector<std::size_t> in_fill(in_offsets_.begin(), in_offsets_.end() - 1);
  for (HalfEdge h = 0; h < owner_.size(); ++h) {
    if (!is_transmitter(h)) continue;
    const Node u = owner_[h];
    const Node v = owner_[partner_[h]];
    out_targets_[out_fill[u]++] = v;
    in_sources_[in_fill[v]++] = u;
  }
}

std::span<const Node> EnhancedGraph::out_neighbors(Node u) const {
  return {out_targets_.data() + out_offsets_[u], out_offsets_[u + 1] - out_offsets_[u]};
}

std::span<const Node> EnhancedGraph::in_neighbors(Node v) const {
  return {in_sources_.data() + in_offsets_[v], in_offsets_[v + 1] - in_offsets_[v]};
}

DegreeChecksums degree_checksums(const EnhancedGraph& g) {
  DegreeChecksums c;
  for (const NodeDegrees& d : g.degrees()) {
    c.sum_total += static_cast<std::uint64_t>(d.total);
    c.sum_transmitter += static_cast<std::uint64_t>(d.transmitter);
  }
  c.matched_half_edges = 2 * g.matching().size();
  c.parity_fixed = g.parity_fixed();
  return c;
}

void write_edge_list(std::ostream& out, const EnhancedGraph& g) {
  const nlohmann::json header = {
      {"n", g.node_count()},
      {"seed", g.seed()},
      {"parity_fixed", g.parity_fixed()},
      {"arcs", g.arc_count()},
  };
  out << header.dump() << '\n';
  for (Node u = 0; u < g.node_count(); ++u) {
    for (Node v : g.out_neighbors(u)) out << u << ' ' << v << '\n';
  }
}

}  // namespace viralcm
