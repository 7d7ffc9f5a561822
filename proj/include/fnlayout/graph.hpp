#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace fnlayout {

using FunctionId = std::uint32_t;
using UtilityId = std::uint32_t;

struct Edge {
  FunctionId function = 0;
  UtilityId utility = 0;

  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Bipartite graph G = (F u U, E) between function and utility vertices.
///
/// Adjacency is stored function -> utilities in CSR form, sorted per
/// function. Only utility degrees are kept on the other side. Every utility
/// has degree >= 2: a utility touching a single function adds the same cost
/// to every split and is dropped at build time.
///
/// Immutable after construction.
class BipartiteGraph {
 public:
  BipartiteGraph() = default;

  /// Builds a graph from an edge list. Utility ids in `edges` are arbitrary
  /// labels; the result re-densifies the surviving ones in ascending label
  /// order. Duplicate edges are removed. Throws InputError when an edge
  /// names a function >= n_functions.
  static BipartiteGraph build(std::span<const Edge> edges, std::size_t n_functions);

  std::size_t num_functions() const { return offsets_.size() - 1; }
  std::size_t num_utilities() const { return degrees_.size(); }
  std::size_t num_edges() const { return targets_.size(); }

  std::span<const UtilityId> utilities_of(FunctionId f) const {
    return {targets_.data() + offsets_[f], targets_.data() + offsets_[f + 1]};
  }
  std::uint32_t degree(UtilityId u) const { return degrees_[u]; }
  std::span<const std::uint32_t> degrees() const { return degrees_; }
  std::uint32_t max_degree() const;

  /// Edge list sorted by (function, utility); feeding it back to build()
  /// reproduces the graph.
  std::vector<Edge> edges() const;

  friend bool operator==(const BipartiteGraph&, const BipartiteGraph&) = default;

 private:
  BipartiteGraph(std::vector<std::uint32_t> offsets, std::vector<UtilityId> targets,
                 std::vector<std::uint32_t> degrees)
      : offsets_(std::move(offsets)), targets_(std::move(targets)), degrees_(std::move(degrees)) {}

  friend struct InducedSubgraph induce_subgraph(const BipartiteGraph&, std::span<const FunctionId>);

  std::vector<std::uint32_t> offsets_{0};
  std::vector<UtilityId> targets_;
  std::vector<std::uint32_t> degrees_;
};

struct InducedSubgraph {
  BipartiteGraph graph;
  // parent_ids[i] is the parent-graph id of local function i.
  std::vector<FunctionId> parent_ids;
};

/// Graph induced by `subset` and all utilities, with the degree >= 2 rule
/// re-applied. Local function i corresponds to subset[i]. Throws InputError
/// on out-of-range or repeated ids.
InducedSubgraph induce_subgraph(const BipartiteGraph& g, std::span<const FunctionId> subset);

}  // namespace fnlayout
