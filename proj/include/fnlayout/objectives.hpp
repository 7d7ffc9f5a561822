#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fnlayout/graph.hpp"

namespace fnlayout {

enum class ObjectiveKind : std::uint8_t {
  UniformLogGap,        // -L log(L+1) - R log(R+1)
  ProbabilisticFanout,  // (1 - p^L) + (1 - p^R)
  AbsoluteDifference,   // L + R - |L - R|
};

enum class LogBase : std::uint8_t { Natural, Binary };

struct Objective {
  ObjectiveKind kind = ObjectiveKind::UniformLogGap;
  double fanout_p = 0.9;
  // Only affects UniformLogGap. Costs scale by a constant, so the layout
  // does not depend on it.
  LogBase log_base = LogBase::Natural;

  /// Parses "log-gap", "fanout", "fanout:<p>" or "abs-diff".
  static Objective parse(std::string_view text);
  std::string to_string() const;
  void validate() const;
};

enum class Side : std::uint8_t { Left = 0, Right = 1, Unassigned = 2 };

inline Side opposite(Side s) { return s == Side::Left ? Side::Right : Side::Left; }

// L(u) and R(u): neighbours of a utility on each side of the split.
struct SplitCounts {
  std::uint32_t left = 0;
  std::uint32_t right = 0;

  friend bool operator==(const SplitCounts&, const SplitCounts&) = default;
};

/// log(x + 1) for integer x. Values below 2^14 come from a table that fits
/// in L1/L2; larger arguments are evaluated directly.
class LogTable {
 public:
  static constexpr std::uint32_t kSize = 1u << 14;

  explicit LogTable(LogBase base = LogBase::Natural);

  double operator()(std::uint32_t x) const { return x < kSize ? values_[x] : direct(x); }
  double direct(std::uint32_t x) const;
  std::span<const double> values() const { return values_; }

  static const LogTable& shared(LogBase base);

 private:
  LogBase base_;
  std::vector<double> values_;
};

double utility_cost(SplitCounts c, const Objective& obj);

/// L(u)/R(u) for every utility. Throws InputError if a side is unassigned.
std::vector<SplitCounts> split_counts(const BipartiteGraph& g, std::span<const Side> sides);

/// Sum of utility_cost over all utilities, recomputed from scratch.
double partition_cost(const BipartiteGraph& g, std::span<const Side> sides, const Objective& obj);

/// Cost reduction from moving f to the other side, given counts that match
/// `sides`. Positive means the move lowers the total cost.
double move_gain(const BipartiteGraph& g, std::span<const Side> sides,
                 std::span<const SplitCounts> counts, FunctionId f, const Objective& obj);

/// Objective cost as a function of one count, for the separable objectives:
/// cost(L, R) = c + term(L) + term(R). AbsoluteDifference is not separable
/// and is evaluated directly by the kernels.
///
/// The table covers counts 0..max_count+1 so the gain kernels never fall
/// back to scalar evaluation.
class SplitCostModel {
 public:
  SplitCostModel(const Objective& obj, std::uint32_t max_count);

  const Objective& objective() const { return objective_; }
  bool separable() const { return objective_.kind != ObjectiveKind::AbsoluteDifference; }
  std::span<const double> terms() const { return terms_; }

 private:
  Objective objective_;
  std::vector<double> terms_;
};

}  // namespace fnlayout
