#pragma once

// Synthetic inputs with known structure, used by the tests, the acceptance
// suite and `fnlayout synth`.

#include <cstdint>
#include <optional>
#include <vector>

#include "fnlayout/compression.hpp"
#include "fnlayout/startup.hpp"

namespace fnlayout {

struct FamilyCorpusParams {
  std::size_t families = 100;
  std::size_t min_members = 4;
  std::size_t max_members = 16;
  std::size_t min_body = 512;
  std::size_t max_body = 4096;
  // Fraction of each member's bytes rewritten relative to the family base,
  // in runs of 8..64 bytes.
  double mutation_rate = 0.08;
  // Each family is cut into this many runs that are scattered through the
  // baseline order, like related code spread over several object files.
  std::size_t scatter_chunks = 3;
  std::uint64_t seed = 1;
};

struct FamilyCorpus {
  std::vector<FunctionRecord> records;  // baseline order
  std::vector<std::optional<Bytes>> bodies;
  std::vector<std::uint32_t> family;  // per record

  std::size_t total_bytes() const;
};

/// Functions grouped into families that share most of their bytes. Hashes
/// are 8-byte shingles of the bodies. All records are cold.
FamilyCorpus make_family_corpus(const FamilyCorpusParams& params);

/// Every family contiguous, families in order of first appearance.
std::vector<FunctionId> family_contiguous_order(const FamilyCorpus& corpus);

/// Starts from `order` and re-positions a `fraction` of its entries at
/// random, producing layouts between ordered and fully random.
std::vector<FunctionId> perturb_order(std::span<const FunctionId> order, double fraction,
                                      std::uint64_t seed);

struct StartupAppParams {
  std::size_t functions = 1000;
  std::size_t traces = 1000;
  // Share of functions that never run during start-up.
  double unused_fraction = 0.3;
  std::size_t min_module = 4;
  std::size_t max_module = 40;
  // Modules that run in every trace; the rest run with their own
  // probability at a random point of the start-up.
  double core_module_fraction = 0.25;
  std::uint64_t min_size = 64;
  std::uint64_t max_size = 4096;
  std::uint64_t seed = 1;
};

struct StartupApp {
  std::vector<FunctionRecord> records;  // baseline order; hot flag = used in some trace
  std::vector<Trace> traces;            // ids index `records`
};

/// An app made of modules (runs of functions that execute together). Core
/// modules run early in a mostly fixed order; optional modules run in some
/// traces at varying times.
StartupApp make_startup_app(const StartupAppParams& params);

}  // namespace fnlayout
