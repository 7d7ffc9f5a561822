#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fnlayout/graph.hpp"
#include "fnlayout/symbols.hpp"

namespace fnlayout {

using Bytes = std::vector<std::uint8_t>;

struct FunctionRecord {
  std::string name;
  std::uint64_t size = 1;
  bool hot = false;
  // Set of stable instruction hashes: sorted, no duplicates.
  std::vector<std::uint64_t> content_hashes;

  void normalize();
};

/// Manifest lines: name<TAB>size<TAB>hot|cold<TAB>hex,hex,...
/// The hash column may be empty. Blank lines and '#' comments are skipped.
std::vector<FunctionRecord> read_manifest(std::istream& in);
void write_manifest(std::ostream& out, std::span<const FunctionRecord> records);

// Functions with identical hash sets, laid out as one unit. Indices refer
// to the record span the groups were built from.
struct DedupGroup {
  std::size_t representative = 0;
  std::vector<std::size_t> members;  // representative first, then input order
};

/// Groups records with equal non-empty hash sets. Records without hashes
/// stay singletons. Groups are ordered by their representative.
std::vector<DedupGroup> group_identical(std::span<const FunctionRecord> records);

struct BpcGraph {
  BipartiteGraph graph;  // vertex i stands for groups[i]
  std::vector<DedupGroup> groups;
};

/// Dedups `records`, then creates one utility per hash that occurs in at
/// least two distinct hash sets.
BpcGraph build_bpc_graph(std::span<const FunctionRecord> records);

/// Replaces every group vertex in `unique_layout` with its members.
/// Throws InputError if a group is missing or repeated.
std::vector<std::size_t> expand_dedup(std::span<const FunctionId> unique_layout,
                                      std::span<const DedupGroup> groups);

struct KmerMetricParams {
  std::size_t k = 8;
  std::size_t window = 65536;
  std::size_t stride = 1;

  void validate() const;
};

/// Distinct k-mers of each window [s, s + w) for s = 0, stride, ...,
/// |data| - w. Data shorter than the window is one window; data shorter
/// than k has none.
std::vector<std::uint32_t> kmer_window_profile(std::span<const std::uint8_t> data,
                                               const KmerMetricParams& params);

/// Sum of kmer_window_profile. Lower predicts better LZ compression.
std::uint64_t kmer_window_metric(std::span<const std::uint8_t> data, const KmerMetricParams& params);

/// Concatenates bodies in layout order. Throws InputError naming a function
/// without a body.
Bytes layout_to_bytes(std::span<const FunctionId> layout, std::span<const std::optional<Bytes>> bodies,
                      const SymbolTable* names = nullptr);

/// Hashes of every `width`-byte shingle of a body, as a sorted set. Bodies
/// shorter than the width contribute one hash of the whole body.
std::vector<std::uint64_t> shingle_hashes(std::span<const std::uint8_t> body, std::size_t width = 8);

/// Loads <dir>/<name> for every record; missing files give std::nullopt.
std::vector<std::optional<Bytes>> read_bodies(const std::filesystem::path& dir,
                                              std::span<const FunctionRecord> records);
Bytes read_file_bytes(const std::filesystem::path& path);

}  // namespace fnlayout
