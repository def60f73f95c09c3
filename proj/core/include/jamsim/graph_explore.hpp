#pragma once

#include <cstdint>
#include <vector>

namespace jamsim {

/// One greedy exploration of an explicitly sampled G(N, c/N): activate a
/// uniform unexplored vertex, block its unexplored neighbors, repeat until
/// every vertex is explored. The active set is a maximal independent set.
struct ExplorationRun {
  std::int64_t items = 0;
  double edge_prob = 0.0;
  std::int64_t active_count = 0;
  std::vector<std::int64_t> explored_trace;  // |A u B| after each step
  std::uint64_t seed = 0;
  std::uint64_t run_index = 0;
};

/// Samples the graph and runs the exploration to exhaustion. For N <= 1000
/// the edge list is materialized (geometric skipping) and independence of the
/// active set is asserted on every activation; for larger N edges incident to
/// the activated vertex are revealed lazily, which by deferred decisions
/// yields the same law with O(N) memory.
///
/// c may be 0 (empty graph) or N (complete graph) inclusive.
ExplorationRun explore_er_graph(std::int64_t items, double c,
                                std::uint64_t seed,
                                std::uint64_t run_index = 0);

/// Active-set sizes of `runs` independent explorations (parallel over runs,
/// reduced in run order).
std::vector<std::int64_t> graph_active_counts(std::int64_t items, double c,
                                              std::int64_t runs,
                                              std::uint64_t seed,
                                              int threads = 1);

}  // namespace jamsim
