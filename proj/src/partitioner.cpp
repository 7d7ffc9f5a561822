#include "fnlayout/partitioner.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <future>
#include <numeric>
#include <sstream>

#include "fnlayout/error.hpp"
#include "fnlayout/kernels.hpp"

namespace fnlayout {

void PartitionerConfig::validate() const {
  if (max_depth < 1) throw InputError("max depth must be at least 1");
  if (max_iterations < 1) throw InputError("iteration limit must be at least 1");
  if (!(skip_probability >= 0.0 && skip_probability < 1.0)) {
    throw InputError("skip probability must lie in [0, 1)");
  }
  if (threads < 1) throw InputError("thread count must be at least 1");
  objective.validate();
}

std::string PartitionerConfig::describe() const {
  std::ostringstream out;
  out << "bp(objective=" << objective.to_string() << ", max_depth=" << max_depth
      << ", iterations=" << max_iterations << ", skip=" << skip_probability << ", seed=" << seed
      << ")";
  return out.str();
}

namespace {

std::uint64_t mix_pair(std::uint64_t digest, FunctionId v, FunctionId u) {
  return splitmix64(digest ^ ((static_cast<std::uint64_t>(v) << 32) | u));
}

// Scratch buffers for the refinement rounds of one split.
struct RefineScratch {
  std::vector<std::uint32_t> left;
  std::vector<std::uint32_t> right;
  std::vector<double> to_right;
  std::vector<double> to_left;
  std::vector<double> gains;
  std::vector<std::int64_t> ranks;
  std::vector<std::uint64_t> tie_keys;
  std::vector<FunctionId> first;
  std::vector<FunctionId> second;
};

// Gain of moving `v` right and `u` left together, from the round-start
// deltas. Utilities holding both functions keep their counts.
double exchange_gain(std::span<const UtilityId> v, std::span<const UtilityId> u,
                     std::span<const double> to_right, std::span<const double> to_left) {
  double sum = 0.0;
  std::size_t a = 0;
  std::size_t b = 0;
  while (a < v.size() || b < u.size()) {
    if (b == u.size() || (a < v.size() && v[a] < u[b])) {
      sum += to_right[v[a++]];
    } else if (a == v.size() || u[b] < v[a]) {
      sum += to_left[u[b++]];
    } else {
      ++a;
      ++b;
    }
  }
  return sum;
}

}  // namespace

RefineOutcome refine_split(const BipartiteGraph& g, std::span<Side> sides,
                           const PartitionerConfig& cfg, Rng& rng) {
  const std::size_t n = g.num_functions();
  const std::size_t n_util = g.num_utilities();
  if (sides.size() != n) throw InputError("side assignment does not cover the graph");
  for (Side s : sides) {
    if (s == Side::Unassigned) throw InputError("refinement needs every function assigned");
  }

  const kernels::KernelSet& kern = kernels::active_kernels();
  const SplitCostModel model(cfg.objective, g.max_degree());

  RefineScratch s;
  s.left.resize(n_util);
  s.right.resize(n_util);
  s.to_right.resize(n_util);
  s.to_left.resize(n_util);
  s.gains.resize(n);
  s.ranks.resize(n);
  s.tie_keys.resize(n);

  // Gains are compared on a grid of 2^-24 cost units, so rounding noise
  // cannot flip a sign or an order. The unit is the cost of splitting off one
  // function, which makes the grid follow any rescaling of the objective.
  const double unit = model.separable() && model.terms().size() > 1 ? std::abs(model.terms()[1]) : 1.0;
  const double to_grid = unit > 0.0 ? 0x1.0p24 / unit : 0x1.0p24;

  RefineOutcome out;
  for (std::uint32_t round = 0; round < cfg.max_iterations; ++round) {
    std::fill(s.left.begin(), s.left.end(), 0u);
    std::fill(s.right.begin(), s.right.end(), 0u);
    for (FunctionId f = 0; f < n; ++f) {
      auto& counts = sides[f] == Side::Left ? s.left : s.right;
      for (UtilityId u : g.utilities_of(f)) ++counts[u];
    }

    kern.move_deltas(s.left, s.right, model.terms(), s.to_right, s.to_left);
    for (FunctionId f = 0; f < n; ++f) {
      const double* deltas = sides[f] == Side::Left ? s.to_right.data() : s.to_left.data();
      s.gains[f] = kern.gather_sum(g.utilities_of(f), deltas);
      s.ranks[f] = std::llround(s.gains[f] * to_grid);
    }
    // Equal gains are ordered by a fresh random key each round, so the
    // pairing does not depend on how functions happen to be numbered.
    const std::uint64_t salt = rng.next();
    for (FunctionId f = 0; f < n; ++f) s.tie_keys[f] = splitmix64(salt ^ f);

    s.first.clear();
    s.second.clear();
    for (FunctionId f = 0; f < n; ++f) (sides[f] == Side::Left ? s.first : s.second).push_back(f);
    const auto by_gain = [&](FunctionId a, FunctionId b) {
      if (s.ranks[a] != s.ranks[b]) return s.ranks[a] > s.ranks[b];
      return s.tie_keys[a] != s.tie_keys[b] ? s.tie_keys[a] < s.tie_keys[b] : a < b;
    };
    std::sort(s.first.begin(), s.first.end(), by_gain);
    std::sort(s.second.begin(), s.second.end(), by_gain);

    ++out.rounds;
    std::size_t candidates = 0;
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < s.first.size() && j < s.second.size()) {
      const FunctionId v = s.first[i];
      const FunctionId u = s.second[j];
      if (s.ranks[v] + s.ranks[u] <= 0) break;
      // The summed gains count shared utilities twice; an exchange leaves
      // their counts as they were. A pair that gains nothing once that is
      // accounted for is passed over, dropping whichever vertex has the
      // weaker successor.
      const double joint = exchange_gain(g.utilities_of(v), g.utilities_of(u), s.to_right, s.to_left);
      if (std::llround(joint * to_grid) <= 0) {
        const bool drop_left =
            j + 1 >= s.second.size() ||
            (i + 1 < s.first.size() && s.ranks[s.first[i + 1]] > s.ranks[s.second[j + 1]]);
        (drop_left ? i : j) += 1;
        continue;
      }
      ++candidates;
      ++i;
      ++j;
      if (cfg.skip_probability > 0.0 && rng.unit() < cfg.skip_probability) {
        ++out.skipped;
        continue;
      }
      sides[v] = Side::Right;
      sides[u] = Side::Left;
      ++out.exchanges;
      out.digest = mix_pair(out.digest, v, u);
    }
    if (candidates == 0) {
      out.converged = true;
      break;
    }
  }
  return out;
}

namespace {

// Shuffle-and-halve: exactly floor(n/2) functions on the left.
std::vector<Side> random_balanced_split(std::size_t n, Rng& rng) {
  std::vector<FunctionId> perm(n);
  std::iota(perm.begin(), perm.end(), FunctionId{0});
  rng.shuffle(std::span<FunctionId>(perm));
  std::vector<Side> sides(n, Side::Right);
  for (std::size_t i = 0; i < n / 2; ++i) sides[perm[i]] = Side::Left;
  return sides;
}

}  // namespace

Bisection bisect(const BipartiteGraph& g, std::span<const FunctionId> subset,
                 const PartitionerConfig& cfg, std::uint64_t node_key) {
  cfg.validate();
  if (subset.size() < 2) throw InputError("bisection needs at least two functions");
  InducedSubgraph sub = induce_subgraph(g, subset);

  Rng rng(node_key);
  std::vector<Side> sides = random_balanced_split(subset.size(), rng);

  Bisection out;
  out.initial_cost = partition_cost(sub.graph, sides, cfg.objective);
  out.refine = refine_split(sub.graph, sides, cfg, rng);
  out.final_cost = partition_cost(sub.graph, sides, cfg.objective);
  for (std::size_t i = 0; i < sides.size(); ++i) {
    (sides[i] == Side::Left ? out.left : out.right).push_back(sub.parent_ids[i]);
  }
  return out;
}

namespace {

class Recursion {
 public:
  Recursion(const PartitionerConfig& cfg, const ReorderOptions& options, std::uint32_t depth_limit)
      : cfg_(cfg), options_(options), depth_limit_(depth_limit),
        spare_threads_(static_cast<int>(cfg.threads) - 1) {}

  // `ids[i]` is the root id of local function i of `graph`; local ids are
  // in initial-order rank, so emitting them as-is keeps the relative order.
  void run(const BipartiteGraph& graph, std::span<const FunctionId> ids, std::uint32_t depth,
           std::uint64_t key, std::span<FunctionId> out) {
    const std::size_t n = ids.size();
    const auto degrees = graph.degrees();
    const bool uninformative =
        std::all_of(degrees.begin(), degrees.end(), [n](std::uint32_t d) { return d == n; });
    if (n <= 1 || depth >= depth_limit_ || uninformative) {
      std::copy(ids.begin(), ids.end(), out.begin());
      note_leaf(depth);
      return;
    }

    Rng rng(key);
    std::vector<Side> sides = random_balanced_split(n, rng);
    const RefineOutcome refine = refine_split(graph, sides, cfg_, rng);

    std::vector<FunctionId> left_local;
    std::vector<FunctionId> right_local;
    left_local.reserve(n / 2);
    right_local.reserve(n - n / 2);
    for (FunctionId f = 0; f < n; ++f) (sides[f] == Side::Left ? left_local : right_local).push_back(f);
    if (left_local.size() != n / 2) throw InvariantError("bisection lost balance");

    note_bisection(depth, key, left_local.size(), right_local.size(), refine);

    // The part that sits earlier in the initial order is emitted first.
    const auto rank_sum = [](const std::vector<FunctionId>& part) {
      return std::accumulate(part.begin(), part.end(), std::uint64_t{0});
    };
    const bool right_first = rank_sum(right_local) * left_local.size() <
                             rank_sum(left_local) * right_local.size();

    auto left = std::make_shared<Child>(graph, ids, left_local);
    auto right = std::make_shared<Child>(graph, ids, right_local);
    auto left_out = right_first ? out.last(left_local.size()) : out.first(left_local.size());
    auto right_out = right_first ? out.first(right_local.size()) : out.last(right_local.size());
    const std::uint64_t left_key = child_key(key, 0);
    const std::uint64_t right_key = child_key(key, 1);

    if (depth < cfg_.parallel_depth && try_acquire_thread()) {
      auto pending = std::async(std::launch::async, [this, left, depth, left_key, left_out] {
        struct Release {
          Recursion* self;
          ~Release() { self->spare_threads_.fetch_add(1); }
        } release{this};
        run(left->sub.graph, left->ids, depth + 1, left_key, left_out);
      });
      run(right->sub.graph, right->ids, depth + 1, right_key, right_out);
      pending.get();
    } else {
      run(left->sub.graph, left->ids, depth + 1, left_key, left_out);
      left.reset();
      run(right->sub.graph, right->ids, depth + 1, right_key, right_out);
    }
  }

  void fill(ReorderStats& stats) const {
    stats.max_depth_reached = max_depth_.load();
    stats.bisections = bisections_.load();
    stats.exchanges = exchanges_.load();
    stats.decision_digest = digest_.load();
  }

 private:
  struct Child {
    Child(const BipartiteGraph& parent, std::span<const FunctionId> parent_ids,
          std::span<const FunctionId> local)
        : sub(induce_subgraph(parent, local)) {
      ids.reserve(local.size());
      for (FunctionId f : local) ids.push_back(parent_ids[f]);
    }
    InducedSubgraph sub;
    std::vector<FunctionId> ids;
  };

  bool try_acquire_thread() {
    int available = spare_threads_.load();
    while (available > 0) {
      if (spare_threads_.compare_exchange_weak(available, available - 1)) return true;
    }
    return false;
  }

  void note_leaf(std::uint32_t depth) {
    std::uint32_t seen = max_depth_.load();
    while (depth > seen && !max_depth_.compare_exchange_weak(seen, depth)) {
    }
  }

  void note_bisection(std::uint32_t depth, std::uint64_t key, std::size_t left, std::size_t right,
                      const RefineOutcome& refine) {
    bisections_.fetch_add(1);
    exchanges_.fetch_add(refine.exchanges);
    digest_.fetch_add(splitmix64(key ^ refine.digest));
    if (options_.on_bisection) {
      options_.on_bisection(BisectionEvent{depth, key, left, right, refine});
    }
  }

  const PartitionerConfig& cfg_;
  const ReorderOptions& options_;
  const std::uint32_t depth_limit_;
  std::atomic<int> spare_threads_;
  std::atomic<std::uint32_t> max_depth_{0};
  std::atomic<std::uint64_t> bisections_{0};
  std::atomic<std::uint64_t> exchanges_{0};
  std::atomic<std::uint64_t> digest_{0};
};

}  // namespace

Layout reorder(const BipartiteGraph& g, std::span<const FunctionId> initial_order,
               const PartitionerConfig& cfg, const ReorderOptions& options) {
  cfg.validate();
  const std::size_t n = g.num_functions();
  if (initial_order.size() != n) {
    throw InputError("initial order has " + std::to_string(initial_order.size()) +
                     " entries for a graph of " + std::to_string(n) + " functions");
  }
  std::vector<std::uint8_t> seen(n, 0);
  for (FunctionId f : initial_order) {
    if (f >= n || seen[f]) throw InputError("initial order is not a permutation of the functions");
    seen[f] = 1;
  }

  Layout layout;
  layout.provenance = cfg.describe();
  layout.order.resize(n);
  const auto depth_limit = std::min<std::uint32_t>(
      n > 1 ? static_cast<std::uint32_t>(std::bit_width(n - 1)) : 0, cfg.max_depth);

  if (n > 0) {
    // Root-level induce relabels functions by initial-order rank.
    InducedSubgraph root = induce_subgraph(g, initial_order);
    Recursion recursion(cfg, options, depth_limit);
    recursion.run(root.graph, root.parent_ids, 0, splitmix64(cfg.seed), layout.order);
    if (options.stats != nullptr) {
      recursion.fill(*options.stats);
      options.stats->depth_limit = depth_limit;
    }
  } else if (options.stats != nullptr) {
    *options.stats = ReorderStats{};
  }
  return layout;
}

double ComplexityEstimate::total() const { return std::max(1.0, gain_steps + sort_steps); }

ComplexityEstimate estimate_complexity(std::uint64_t n, std::uint64_t m) {
  ComplexityEstimate est;
  if (n <= 1) return est;
  const double levels = std::log2(static_cast<double>(n));
  est.gain_steps = static_cast<double>(m) * levels;
  est.sort_steps = static_cast<double>(n) * levels * levels;
  return est;
}

}  // namespace fnlayout
