#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "viralcm/graph.hpp"

namespace viralcm {

/// Finite-n rule for "good pioneer": |C(v)| >= max(gamma * max_u |C(u)|, floor * n).
struct ClassificationRule {
  double gamma = 0.5;
  double floor = 0.01;

  void validate() const;
};

struct DiffusionOutcome {
  std::size_t n = 0;
  std::uint64_t seed = 0;
  ClassificationRule rule;
  std::vector<std::size_t> reach_sizes;  // |C(v)| per node, pioneer included
  std::vector<Node> good_pioneers;       // ascending
  double alpha_hat_sim = 0.0;            // mean |C(v)| / n over good pioneers
  double alpha_bar_hat_sim = 0.0;        // |good pioneers| / n
  /// (reach size / n, node count), ascending in size.
  std::vector<std::pair<double, std::size_t>> reach_histogram;
};

/// Nodes influenced by a campaign started at `pioneer`: the forward-reachable
/// set in the influence digraph, ascending. This is the set revealed by the
/// forward exploration (activate pioneer, repeatedly match an active
/// transmitter half-edge to a uniformly chosen living half-edge); the matching
/// is fixed up front because its law is the same.
std::vector<Node> influenced_set(const EnhancedGraph& g, Node pioneer);

/// Nodes whose campaign would reach `target` (backward reachability), ascending.
std::vector<Node> reverse_reach(const EnhancedGraph& g, Node target);

/// Exact |C(v)| for every node via the strongly-connected-component
/// condensation. Sources that reach the largest component reuse its
/// descendant count, so supercritical graphs cost about one traversal of
/// each small out-tree. `threads` = 0 picks the hardware concurrency.
std::vector<std::size_t> reach_sizes(const EnhancedGraph& g, unsigned threads = 0);

/// Strongly connected components; component ids are in reverse topological
/// order of the condensation (sinks first).
struct SccDecomposition {
  std::vector<std::uint32_t> component;  // per node
  std::vector<std::size_t> size;         // per component
};
SccDecomposition strongly_connected_components(const EnhancedGraph& g);

std::vector<Node> classify_good_pioneers(std::span<const std::size_t> reach_sizes,
                                         const ClassificationRule& rule);

/// Reach sizes, good pioneers and empirical fractions for all n pioneers.
DiffusionOutcome all_reach(const EnhancedGraph& g, const ClassificationRule& rule = {},
                           unsigned threads = 0);

/// Estimate from m uniformly chosen pioneers, for graphs too large for all_reach.
struct SampledReach {
  std::size_t pioneers = 0;
  std::size_t good = 0;
  double alpha_hat = 0.0;      // mean reach / n over sampled good pioneers
  double alpha_bar_hat = 0.0;  // good / pioneers
  double alpha_bar_low = 0.0;  // Wilson interval at multiplier z
  double alpha_bar_high = 0.0;
};
SampledReach sample_reach(const EnhancedGraph& g, std::size_t pioneers, std::uint64_t seed,
                          const ClassificationRule& rule = {}, double z = 1.96);

}  // namespace viralcm
