#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "fnlayout/graph.hpp"
#include "fnlayout/objectives.hpp"
#include "fnlayout/random.hpp"

namespace fnlayout {

struct PartitionerConfig {
  std::uint32_t max_depth = 16;
  std::uint32_t max_iterations = 20;
  double skip_probability = 0.1;
  Objective objective;
  std::uint64_t seed = 0;
  // Recursion levels whose two halves may run concurrently.
  std::uint32_t parallel_depth = 4;
  std::uint32_t threads = 1;

  void validate() const;
  std::string describe() const;
};

struct Layout {
  std::vector<FunctionId> order;
  std::string provenance;
};

/// Outcome of the local search on one split.
struct RefineOutcome {
  std::uint32_t rounds = 0;
  std::uint64_t exchanges = 0;
  std::uint64_t skipped = 0;
  bool converged = false;
  // Order-sensitive hash of the executed exchanges.
  std::uint64_t digest = 0;
};

/// One refinement round: gains of every function against the current
/// counts, both sides sorted by descending gain, pairs exchanged in lockstep
/// while gain(v) + gain(u) > 0. Gains are not updated within a round. Each
/// pair is exchanged only if moving both together gains (utilities holding
/// both keep their counts); otherwise one of the two is passed over. Each
/// qualifying pair is skipped with probability skip_probability.
///
/// Gains are compared after rounding to 2^-24 of the cost of splitting off
/// a single function, and equal gains are ordered by a per-round random key.
///
/// Runs until a round finds no qualifying pair or max_iterations rounds
/// have run. `sides` must be fully assigned.
RefineOutcome refine_split(const BipartiteGraph& g, std::span<Side> sides,
                           const PartitionerConfig& cfg, Rng& rng);

struct Bisection {
  std::vector<FunctionId> left;   // floor(n/2) ids, ascending
  std::vector<FunctionId> right;  // ceil(n/2) ids, ascending
  RefineOutcome refine;
  double initial_cost = 0;
  double final_cost = 0;
};

/// Splits `subset` (at least two ids of g) into balanced halves: a seeded
/// shuffle-and-halve followed by refine_split on the induced subgraph.
Bisection bisect(const BipartiteGraph& g, std::span<const FunctionId> subset,
                 const PartitionerConfig& cfg, std::uint64_t node_key);

struct BisectionEvent {
  std::uint32_t depth = 0;
  std::uint64_t node_key = 0;
  std::size_t left_size = 0;
  std::size_t right_size = 0;
  RefineOutcome refine;
};

struct ReorderStats {
  std::uint32_t depth_limit = 0;
  std::uint32_t max_depth_reached = 0;
  std::uint64_t bisections = 0;
  std::uint64_t exchanges = 0;
  // Order-independent combination of the per-node digests; equal digests
  // mean the same exchanges were made at the same nodes.
  std::uint64_t decision_digest = 0;
};

struct ReorderOptions {
  ReorderStats* stats = nullptr;
  // Called once per bisection, possibly from worker threads.
  std::function<void(const BisectionEvent&)> on_bisection;
};

/// Recursive balanced bisection. The recursion depth is
/// min(ceil(log2 n), max_depth); a node stops early when it has at most one
/// function or when no utility tells its functions apart (every utility
/// contains all of them, so all balanced splits cost the same). Functions of
/// a stopped node keep their relative order from `initial_order`.
///
/// The result depends only on (g, initial_order, cfg without `threads`).
Layout reorder(const BipartiteGraph& g, std::span<const FunctionId> initial_order,
               const PartitionerConfig& cfg, const ReorderOptions& options = {});

/// Closed-form step count m*log2(n) + n*log2(n)^2 of the recursion, for
/// sizing expectations. At least 1.
struct ComplexityEstimate {
  double gain_steps = 0;
  double sort_steps = 0;
  double total() const;
};
ComplexityEstimate estimate_complexity(std::uint64_t n, std::uint64_t m);

}  // namespace fnlayout
