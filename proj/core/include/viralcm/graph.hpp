#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "viralcm/population.hpp"

namespace viralcm {

using Node = std::uint32_t;
using HalfEdge = std::uint64_t;

/// Realized configuration model with transmitter/receiver half-edges.
///
/// Node v owns the half-edge range [offset(v), offset(v+1)); its receivers
/// come first, then its transmitters. The influence digraph has one arc
/// u -> v per transmitter half-edge of u, pointing at the owner of its
/// partner. Self-loops and multi-arcs are kept.
class EnhancedGraph {
 public:
  /// Uniform perfect matching of all half-edges (Fisher-Yates shuffle, then
  /// consecutive pairs). An odd half-edge total gets one extra receiver on a
  /// uniformly chosen node; see parity_fixed().
  static EnhancedGraph build(std::span<const NodeDegrees> sample, std::uint64_t seed);

  std::size_t node_count() const { return degrees_.size(); }
  std::uint64_t seed() const { return seed_; }

  /// Degrees as realized, including the parity repair.
  std::span<const NodeDegrees> degrees() const { return degrees_; }
  bool parity_fixed() const { return parity_node_.has_value(); }
  std::optional<Node> parity_node() const { return parity_node_; }

  std::size_t half_edge_count() const { return owner_.size(); }
  Node owner(HalfEdge h) const { return owner_[h]; }
  bool is_transmitter(HalfEdge h) const;
  HalfEdge partner(HalfEdge h) const { return partner_[h]; }
  /// Matched pairs (a, b) with a < b, ordered by a.
  std::vector<std::pair<HalfEdge, HalfEdge>> matching() const;
  std::size_t edge_count() const { return owner_.size() / 2; }

  std::size_t arc_count() const { return out_targets_.size(); }
  std::span<const Node> out_neighbors(Node u) const;
  std::span<const Node> in_neighbors(Node v) const;

 private:
  EnhancedGraph() = default;
  void build_digraph();

  std::uint64_t seed_ = 0;
  std::vector<NodeDegrees> degrees_;
  std::optional<Node> parity_node_;
  std::vector<HalfEdge> first_half_edge_;  // size n + 1
  std::vector<Node> owner_;
  std::vector<HalfEdge> partner_;
  std::vector<std::size_t> out_offsets_, in_offsets_;
  std::vector<Node> out_targets_, in_sources_;
};

struct DegreeChecksums {
  std::uint64_t sum_total = 0;        // sum of D over nodes, after parity repair
  std::uint64_t sum_transmitter = 0;  // sum of D(t)
  std::uint64_t matched_half_edges = 0;
  bool parity_fixed = false;
};

DegreeChecksums degree_checksums(const EnhancedGraph& g);

/// Edge-list dump: a JSON header line {"n", "seed", "parity_fixed", "arcs"}
/// followed by one "u v" line per arc.
void write_edge_list(std::ostream& out, const EnhancedGraph& g);

}  // namespace viralcm
