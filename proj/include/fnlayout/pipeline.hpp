#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fnlayout/compression.hpp"
#include "fnlayout/partitioner.hpp"
#include "fnlayout/startup.hpp"
#include "fnlayout/symbols.hpp"

namespace fnlayout {

enum class Comparator : std::uint8_t { Bp, Baseline, Random, OrderAvg, Greedy };

Comparator parse_comparator(std::string_view text);
std::string_view comparator_name(Comparator c);
inline constexpr Comparator kAllComparators[] = {Comparator::Bp, Comparator::Baseline,
                                                 Comparator::Random, Comparator::OrderAvg,
                                                 Comparator::Greedy};

// An uninstrumented function placed right after its first profiled caller.
struct CallerHint {
  FunctionId callee = 0;
  FunctionId first_caller = 0;
};

struct PipelineConfig {
  std::filesystem::path trace_path;
  std::filesystem::path manifest_path;
  std::filesystem::path output_path;
  std::filesystem::path hints_path;   // optional
  std::filesystem::path bodies_dir;   // optional
  std::filesystem::path report_path;  // optional

  PartitionerConfig partitioner;
  std::string thresholds = "doubling";
  std::size_t sample_cap = 300;
  Comparator comparator = Comparator::Bp;
  std::uint64_t page_size = 16384;
  KmerMetricParams kmer;
  // Adds wall-clock timings to the report, which then differs run to run.
  bool report_timing = false;

  void validate() const;
};

// Everything the layout stage needs, already resolved to ids. Function ids
// follow manifest order; names that only occur in traces are appended.
struct PipelineInputs {
  SymbolTable symbols;
  std::vector<FunctionRecord> records;  // indexed by FunctionId
  std::vector<Trace> traces;
  std::vector<CallerHint> hints;
  std::vector<std::optional<Bytes>> bodies;  // empty when no bodies were given
  std::vector<std::string> warnings;
};

PipelineInputs load_inputs(const PipelineConfig& cfg);

/// Whitespace-separated `callee first_caller` pairs, one per line; '#'
/// comments and blank lines are skipped. Unknown names are an input error.
std::vector<CallerHint> read_hints(std::istream& in, const SymbolTable& symbols);

struct LayoutReport {
  std::string comparator;
  std::size_t functions = 0;
  std::size_t hot_functions = 0;
  std::size_t cold_functions = 0;
  std::size_t unique_cold_functions = 0;
  std::size_t traces_loaded = 0;
  std::size_t traces_sampled = 0;
  std::size_t bps_utilities = 0;
  std::size_t bps_edges = 0;
  std::size_t bpc_utilities = 0;
  std::size_t bpc_edges = 0;
  double curve_area = 0;
  std::optional<std::uint64_t> kmer_metric;
  std::optional<double> hot_seconds;
  std::optional<double> cold_seconds;
  std::string partitioner;

  std::string to_json() const;
};

struct LayoutResult {
  std::vector<FunctionId> order;
  std::size_t hot_count = 0;  // order[0, hot_count) is the hot section
  LayoutReport report;
  std::vector<std::string> warnings;
};

/// Full layout for one comparator. `bp`: sampled traces -> BPS for the hot
/// functions, caller hints, BPC over the deduplicated cold functions.
/// `baseline` returns manifest order.
LayoutResult compute_layout(const PipelineInputs& inputs, const PipelineConfig& cfg,
                            Comparator comparator);

/// Loads inputs, computes the configured comparator, writes the order file
/// and the optional report.
LayoutResult run_pipeline(const PipelineConfig& cfg);

/// Each hinted callee moves to just after its first caller; callees of the
/// same caller keep hint order. Hints whose caller is not in the layout are
/// ignored and reported through `warnings`.
Layout apply_caller_hints(const Layout& hot_layout, std::span<const CallerHint> hints,
                          std::vector<std::string>* warnings = nullptr,
                          const SymbolTable* names = nullptr);

/// Hot functions by mean 1-based position over the traces that contain
/// them; ties by name.
Layout order_avg(std::span<const Trace> traces, const SymbolTable& names);

/// Starts at the function with the most hashes and repeatedly appends the
/// remaining function with the highest Jaccard similarity to the last one
/// placed, among functions sharing a hash with it. Ties and dead ends fall
/// back to name order.
Layout greedy_similarity(std::span<const FunctionRecord> records, std::span<const FunctionId> subset);

Layout random_layout(std::span<const FunctionId> functions, std::uint64_t seed);

// One name per line, newline-terminated.
void write_order_file(std::ostream& out, std::span<const FunctionId> order, const SymbolTable& symbols);
std::vector<std::string> read_order_file(std::istream& in);

/// Simple `key = value` config (flat, '#' comments). Returns pairs in file order.
std::vector<std::pair<std::string, std::string>> read_config_file(const std::filesystem::path& path);

}  // namespace fnlayout
