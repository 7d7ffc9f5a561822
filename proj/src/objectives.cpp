#include "fnlayout/objectives.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <string>

#include "fnlayout/error.hpp"

namespace fnlayout {

Objective Objective::parse(std::string_view text) {
  Objective obj;
  if (text == "log-gap") {
    obj.kind = ObjectiveKind::UniformLogGap;
  } else if (text == "abs-diff") {
    obj.kind = ObjectiveKind::AbsoluteDifference;
  } else if (text == "fanout" || text.starts_with("fanout:")) {
    obj.kind = ObjectiveKind::ProbabilisticFanout;
    if (text.size() > 7) {
      std::string p(text.substr(7));
      char* end = nullptr;
      obj.fanout_p = std::strtod(p.c_str(), &end);
      if (end == p.c_str() || *end != '\0') throw InputError("bad fanout probability '" + p + "'");
    }
  } else {
    throw InputError("unknown objective '" + std::string(text) + "' (log-gap, fanout[:p], abs-diff)");
  }
  obj.validate();
  return obj;
}

std::string Objective::to_string() const {
  switch (kind) {
    case ObjectiveKind::UniformLogGap:
      return log_base == LogBase::Natural ? "log-gap" : "log-gap(base 2)";
    case ObjectiveKind::ProbabilisticFanout: {
      char buf[32];
      auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), fanout_p);
      return "fanout:" + std::string(buf, ptr);
    }
    case ObjectiveKind::AbsoluteDifference:
      return "abs-diff";
  }
  return "?";
}

void Objective::validate() const {
  if (!(fanout_p >= 0.0 && fanout_p <= 1.0)) {
    throw InputError("fanout probability must lie in [0, 1]");
  }
}

LogTable::LogTable(LogBase base) : base_(base), values_(kSize) {
  for (std::uint32_t x = 0; x < kSize; ++x) values_[x] = direct(x);
}

double LogTable::direct(std::uint32_t x) const {
  const double v = static_cast<double>(x) + 1.0;
  return base_ == LogBase::Natural ? std::log(v) : std::log2(v);
}

const LogTable& LogTable::shared(LogBase base) {
  static const LogTable natural(LogBase::Natural);
  static const LogTable binary(LogBase::Binary);
  return base == LogBase::Natural ? natural : binary;
}

double utility_cost(SplitCounts c, const Objective& obj) {
  const double l = c.left;
  const double r = c.right;
  switch (obj.kind) {
    case ObjectiveKind::UniformLogGap: {
      const LogTable& log1 = LogTable::shared(obj.log_base);
      return -l * log1(c.left) - r * log1(c.right);
    }
    case ObjectiveKind::ProbabilisticFanout:
      return (1.0 - std::pow(obj.fanout_p, l)) + (1.0 - std::pow(obj.fanout_p, r));
    case ObjectiveKind::AbsoluteDifference:
      return l + r - std::abs(l - r);
  }
  return 0.0;
}

std::vector<SplitCounts> split_counts(const BipartiteGraph& g, std::span<const Side> sides) {
  if (sides.size() != g.num_functions()) {
    throw InputError("side assignment covers " + std::to_string(sides.size()) + " of " +
                     std::to_string(g.num_functions()) + " functions");
  }
  std::vector<SplitCounts> counts(g.num_utilities());
  for (FunctionId f = 0; f < g.num_functions(); ++f) {
    if (sides[f] == Side::Unassigned) {
      throw InputError("function " + std::to_string(f) + " is not assigned to a side");
    }
    for (UtilityId u : g.utilities_of(f)) {
      if (sides[f] == Side::Left) {
        ++counts[u].left;
      } else {
        ++counts[u].right;
      }
    }
  }
  return counts;
}

double partition_cost(const BipartiteGraph& g, std::span<const Side> sides, const Objective& obj) {
  double total = 0.0;
  for (const SplitCounts& c : split_counts(g, sides)) total += utility_cost(c, obj);
  return total;
}

double move_gain(const BipartiteGraph& g, std::span<const Side> sides,
                 std::span<const SplitCounts> counts, FunctionId f, const Objective& obj) {
  double gain = 0.0;
  for (UtilityId u : g.utilities_of(f)) {
    const SplitCounts c = counts[u];
    const SplitCounts moved = sides[f] == Side::Left ? SplitCounts{c.left - 1, c.right + 1}
                                                     : SplitCounts{c.left + 1, c.right - 1};
    gain += utility_cost(c, obj) - utility_cost(moved, obj);
  }
  return gain;
}

SplitCostModel::SplitCostModel(const Objective& obj, std::uint32_t max_count) : objective_(obj) {
  if (!separable()) return;
  terms_.resize(static_cast<std::size_t>(max_count) + 2);
  const LogTable& log1 = LogTable::shared(obj.log_base);
  for (std::uint32_t x = 0; x < terms_.size(); ++x) {
    if (obj.kind == ObjectiveKind::UniformLogGap) {
      terms_[x] = -static_cast<double>(x) * log1(x);
    } else {
      terms_[x] = -std::pow(obj.fanout_p, static_cast<double>(x));
    }
  }
}

}  // namespace fnlayout
