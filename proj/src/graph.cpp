#include "fnlayout/graph.hpp"

#include <algorithm>
#include <string>

#include "fnlayout/error.hpp"

namespace fnlayout {

BipartiteGraph BipartiteGraph::build(std::span<const Edge> edges, std::size_t n_functions) {
  for (const Edge& e : edges) {
    if (e.function >= n_functions) {
      throw InputError("edge (f" + std::to_string(e.function) + ", u" + std::to_string(e.utility) +
                       ") names a function outside [0, " + std::to_string(n_functions) + ")");
    }
  }

  // Group by utility label so duplicates and low-degree utilities can be
  // dropped in one pass.
  std::vector<Edge> by_utility(edges.begin(), edges.end());
  std::sort(by_utility.begin(), by_utility.end(), [](const Edge& a, const Edge& b) {
    return a.utility != b.utility ? a.utility < b.utility : a.function < b.function;
  });
  by_utility.erase(std::unique(by_utility.begin(), by_utility.end()), by_utility.end());

  std::vector<std::uint32_t> degrees;
  std::vector<Edge> kept;
  kept.reserve(by_utility.size());
  for (std::size_t i = 0; i < by_utility.size();) {
    std::size_t j = i;
    while (j < by_utility.size() && by_utility[j].utility == by_utility[i].utility) ++j;
    if (j - i >= 2) {
      auto dense = static_cast<UtilityId>(degrees.size());
      degrees.push_back(static_cast<std::uint32_t>(j - i));
      for (std::size_t k = i; k < j; ++k) kept.push_back({by_utility[k].function, dense});
    }
    i = j;
  }

  // Counting sort into CSR; utilities arrive ascending so each adjacency
  // list ends up sorted.
  std::vector<std::uint32_t> offsets(n_functions + 1, 0);
  for (const Edge& e : kept) ++offsets[e.function + 1];
  for (std::size_t f = 0; f < n_functions; ++f) offsets[f + 1] += offsets[f];
  std::vector<UtilityId> targets(kept.size());
  std::vector<std::uint32_t> cursor(offsets.begin(), offsets.end() - 1);
  for (const Edge& e : kept) targets[cursor[e.function]++] = e.utility;

  return BipartiteGraph(std::move(offsets), std::move(targets), std::move(degrees));
}

std::uint32_t BipartiteGraph::max_degree() const {
  return degrees_.empty() ? 0 : *std::max_element(degrees_.begin(), degrees_.end());
}

std::vector<Edge> BipartiteGraph::edges() const {
  std::vector<Edge> out;
  out.reserve(num_edges());
  for (FunctionId f = 0; f < num_functions(); ++f) {
    for (UtilityId u : utilities_of(f)) out.push_back({f, u});
  }
  return out;
}

InducedSubgraph induce_subgraph(const BipartiteGraph& g, std::span<const FunctionId> subset) {
  const std::size_t n = g.num_functions();
  std::vector<std::uint8_t> seen(n, 0);
  for (FunctionId f : subset) {
    if (f >= n) throw InputError("subset names function " + std::to_string(f) + " outside the graph");
    if (seen[f]) throw InputError("subset repeats function " + std::to_string(f));
    seen[f] = 1;
  }

  std::vector<std::uint32_t> local_degree(g.num_utilities(), 0);
  for (FunctionId f : subset) {
    for (UtilityId u : g.utilities_of(f)) ++local_degree[u];
  }
  // Monotone relabelling keeps adjacency lists sorted.
  constexpr UtilityId kDropped = ~UtilityId{0};
  std::vector<UtilityId> relabel(g.num_utilities(), kDropped);
  std::vector<std::uint32_t> degrees;
  for (UtilityId u = 0; u < g.num_utilities(); ++u) {
    if (local_degree[u] >= 2) {
      relabel[u] = static_cast<UtilityId>(degrees.size());
      degrees.push_back(local_degree[u]);
    }
  }

  std::vector<std::uint32_t> offsets;
  offsets.reserve(subset.size() + 1);
  offsets.push_back(0);
  std::vector<UtilityId> targets;
  for (FunctionId f : subset) {
    for (UtilityId u : g.utilities_of(f)) {
      if (relabel[u] != kDropped) targets.push_back(relabel[u]);
    }
    offsets.push_back(static_cast<std::uint32_t>(targets.size()));
  }

  InducedSubgraph out;
  out.graph = BipartiteGraph(std::move(offsets), std::move(targets), std::move(degrees));
  out.parent_ids.assign(subset.begin(), subset.end());
  return out;
}

}  // namespace fnlayout
