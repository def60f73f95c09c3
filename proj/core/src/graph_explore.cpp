#include "jamsim/graph_explore.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "jamsim/errors.hpp"
#include "jamsim/kernel.hpp"
#include "jamsim/parallel.hpp"
#include "jamsim/rng.hpp"

namespace jamsim {
namespace {

constexpr std::int64_t kMaterializeLimit = 1000;

// Uniform O(1) sampling from the unexplored pool via index swaps.
class SwapPool {
 public:
  explicit SwapPool(std::int64_t n) : ids_(n), pos_(n) {
    for (std::int64_t i = 0; i < n; ++i) {
      ids_[static_cast<std::size_t>(i)] = i;
      pos_[static_cast<std::size_t>(i)] = i;
    }
    size_ = n;
  }

  std::int64_t size() const { return size_; }
  bool contains(std::int64_t v) const {
    return pos_[static_cast<std::size_t>(v)] < size_;
  }
  std::int64_t pick(Rng& rng) const {
    return ids_[static_cast<std::size_t>(
        rng.uniform_below(static_cast<std::uint64_t>(size_)))];
  }
  std::int64_t at(std::int64_t i) const {
    return ids_[static_cast<std::size_t>(i)];
  }
  void remove(std::int64_t v) {
    const std::int64_t p = pos_[static_cast<std::size_t>(v)];
    const std::int64_t last = ids_[static_cast<std::size_t>(size_ - 1)];
    std::swap(ids_[static_cast<std::size_t>(p)],
              ids_[static_cast<std::size_t>(size_ - 1)]);
    pos_[static_cast<std::size_t>(last)] = p;
    pos_[static_cast<std::size_t>(v)] = size_ - 1;
    --size_;
  }

 private:
  std::vector<std::int64_t> ids_;
  std::vector<std::int64_t> pos_;
  std::int64_t size_ = 0;
};

// Adjacency sampled up front with geometric skips over the pair ordering.
std::vector<std::vector<std::int64_t>> sample_adjacency(std::int64_t n,
                                                        double p, Rng& rng) {
  std::vector<std::vector<std::int64_t>> adj(static_cast<std::size_t>(n));
  if (p <= 0.0) return adj;
  auto link = [&adj](std::int64_t a, std::int64_t b) {
    adj[static_cast<std::size_t>(a)].push_back(b);
    adj[static_cast<std::size_t>(b)].push_back(a);
  };
  if (p >= 1.0) {
    for (std::int64_t i = 0; i < n; ++i) {
      for (std::int64_t j = i + 1; j < n; ++j) link(i, j);
    }
    return adj;
  }
  const double log_q = std::log1p(-p);
  const std::int64_t pairs = n * (n - 1) / 2;
  std::int64_t idx = -1;
  while (true) {
    const double skip = std::floor(std::log(rng.uniform_pos()) / log_q);
    if (skip > static_cast<double>(pairs)) break;
    idx += 1 + static_cast<std::int64_t>(skip);
    if (idx >= pairs) break;
    // Invert the row-major pair index: i = row, j = column > i.
    std::int64_t i = 0;
    std::int64_t rem = idx;
    std::int64_t row_len = n - 1;
    while (rem >= row_len) {
      rem -= row_len;
      --row_len;
      ++i;
    }
    link(i, i + 1 + rem);
  }
  return adj;
}

ExplorationRun explore_materialized(std::int64_t n, double p,
                                    std::uint64_t seed,
                                    std::uint64_t run_index) {
  ExplorationRun run;
  run.items = n;
  run.edge_prob = p;
  run.seed = seed;
  run.run_index = run_index;

  Rng rng(seed, run_index);
  const auto adj = sample_adjacency(n, p, rng);
  SwapPool unexplored(n);
  std::vector<char> active(static_cast<std::size_t>(n), 0);
  std::int64_t covered = 0;
  while (unexplored.size() > 0) {
    const std::int64_t v = unexplored.pick(rng);
    for (const std::int64_t w : adj[static_cast<std::size_t>(v)]) {
      if (active[static_cast<std::size_t>(w)]) {
        throw std::logic_error(
            "graph exploration: activated vertex adjacent to active set");
      }
    }
    active[static_cast<std::size_t>(v)] = 1;
    unexplored.remove(v);
    ++covered;
    for (const std::int64_t w : adj[static_cast<std::size_t>(v)]) {
      if (unexplored.contains(w)) {
        unexplored.remove(w);
        ++covered;
      }
    }
    ++run.active_count;
    run.explored_trace.push_back(covered);
  }
  return run;
}

// Deferred decisions: only edges incident to the activated vertex are ever
// revealed, as a Binomial(|unexplored|-1, p) count of blocked vertices drawn
// uniformly from the pool.
ExplorationRun explore_lazy(std::int64_t n, double p, std::uint64_t seed,
                            std::uint64_t run_index) {
  ExplorationRun run;
  run.items = n;
  run.edge_prob = p;
  run.seed = seed;
  run.run_index = run_index;

  Rng rng(seed, run_index);
  SwapPool unexplored(n);
  std::int64_t covered = 0;
  while (unexplored.size() > 0) {
    const std::int64_t v = unexplored.pick(rng);
    unexplored.remove(v);
    ++covered;
    const std::int64_t blocked =
        sample_binomial(unexplored.size(), p, rng);
    for (std::int64_t b = 0; b < blocked; ++b) {
      const std::int64_t w = unexplored.pick(rng);
      unexplored.remove(w);
      ++covered;
    }
    ++run.active_count;
    run.explored_trace.push_back(covered);
  }
  return run;
}

}  // namespace

ExplorationRun explore_er_graph(std::int64_t items, double c,
                                std::uint64_t seed, std::uint64_t run_index) {
  if (items < 1) throw InvalidParameter("explore_er_graph: N must be >= 1");
  if (c < 0.0 || c > static_cast<double>(items)) {
    throw InvalidParameter("explore_er_graph: need 0 <= c <= N");
  }
  const double p = c / static_cast<double>(items);
  return items <= kMaterializeLimit
             ? explore_materialized(items, p, seed, run_index)
             : explore_lazy(items, p, seed, run_index);
}

std::vector<std::int64_t> graph_active_counts(std::int64_t items, double c,
                                              std::int64_t runs,
                                              std::uint64_t seed,
                                              int threads) {
  std::vector<std::int64_t> counts(static_cast<std::size_t>(runs), 0);
  parallel_for(runs, threads, [&](std::int64_t i) {
    counts[static_cast<std::size_t>(i)] =
        explore_er_graph(items, c, seed, static_cast<std::uint64_t>(i))
            .active_count;
  });
  return counts;
}

}  // namespace jamsim
