#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

#include "fnlayout/graph.hpp"
#include "fnlayout/random.hpp"
#include "fnlayout/symbols.hpp"

namespace fnlayout {

// Functions in order of first execution during one cold start.
struct Trace {
  std::vector<FunctionId> sequence;

  std::size_t size() const { return sequence.size(); }
  friend bool operator==(const Trace&, const Trace&) = default;
};

// Throws InputError if a function appears twice.
void validate_trace(const Trace& trace);

struct TraceSet {
  std::vector<Trace> traces;
  std::size_t sample_cap = 300;

  std::size_t max_length() const;
};

/// Uniform fixed-size sample of a stream of unknown length. The i-th trace
/// (1-based) is kept outright while i <= cap; afterwards it replaces a
/// uniformly chosen resident with probability cap / i.
class ReservoirSampler {
 public:
  ReservoirSampler(std::size_t cap, std::uint64_t seed);

  void offer(Trace trace);
  std::size_t seen() const { return seen_; }
  const std::vector<Trace>& sample() const { return sample_; }
  TraceSet take() &&;

 private:
  std::size_t cap_;
  std::size_t seen_ = 0;
  Rng rng_;
  std::vector<Trace> sample_;
};

TraceSet reservoir_sample(std::span<const Trace> stream, std::size_t cap, std::uint64_t seed);

struct ThresholdScheme {
  std::vector<std::uint32_t> thresholds;  // strictly increasing, >= 1

  /// 1, 2, 4, ... up to the first power of two >= max_length.
  static ThresholdScheme doubling(std::size_t max_length);
  /// "doubling" or a comma-separated list such as "2,8,32".
  static ThresholdScheme parse(std::string_view text, std::size_t max_length);
  void validate() const;
};

struct BpsGraph {
  BipartiteGraph graph;
  // Global id of each local function, in order of first appearance across
  // the traces (trace by trace). Passing the identity as the initial order
  // of reorder() therefore starts from the profiled order.
  std::vector<FunctionId> functions;
};

/// One utility per (trace, threshold) joined to the first t functions of the
/// trace. Thresholds past the end of a trace collapse into a single
/// whole-trace utility. Throws InputError on an empty trace set.
BpsGraph build_bps_graph(const TraceSet& traces, const ThresholdScheme& scheme);

struct PagingModel {
  std::uint64_t page_size = 16384;
  std::vector<std::uint64_t> function_sizes;  // indexed by FunctionId, each >= 1
};

// p(t), t = 1..T: mean page faults after the first t functions of a trace.
struct EvaluationCurve {
  std::vector<double> values;
};

/// Places `layout` contiguously from offset 0 and replays every trace with
/// never-evicted pages. A trace shorter than the longest one keeps its final
/// fault count for the remaining steps. Throws InputError naming any traced
/// function that is missing from the layout.
EvaluationCurve simulate_page_faults(std::span<const FunctionId> layout, const TraceSet& traces,
                                     const PagingModel& model, const SymbolTable* names = nullptr);

/// p_sigma(t) for a single trace.
std::vector<std::uint32_t> trace_page_faults(std::span<const FunctionId> layout, const Trace& trace,
                                             const PagingModel& model);

double curve_area(const EvaluationCurve& curve);

/// One trace per line, whitespace-separated names; blank lines and '#'
/// comments are skipped. Unknown names are interned. Repeated names within a
/// line keep their first occurrence.
std::vector<Trace> read_traces(std::istream& in, SymbolTable& symbols);
void write_traces(std::ostream& out, std::span<const Trace> traces, const SymbolTable& symbols);

// "t,p_t" header followed by one row per step.
void write_curve_csv(std::ostream& out, const EvaluationCurve& curve);

}  // namespace fnlayout
