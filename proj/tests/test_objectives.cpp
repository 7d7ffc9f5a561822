#include <cmath>

#include "doctest.h"
#include "fnlayout/error.hpp"
#include "fnlayout/objectives.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace fnlayout;

namespace {

Objective make(ObjectiveKind kind) {
  Objective o;
  o.kind = kind;
  return o;
}

const Objective kLogGap = make(ObjectiveKind::UniformLogGap);
const Objective kFanout = make(ObjectiveKind::ProbabilisticFanout);
const Objective kAbsDiff = make(ObjectiveKind::AbsoluteDifference);
const Objective kAll[] = {kLogGap, kFanout, kAbsDiff};

}  // namespace

TEST_CASE("utility_cost hand-evaluated values") {
  CHECK(utility_cost({0, 0}, kLogGap) == 0.0);
  CHECK(utility_cost({1, 1}, kLogGap) == doctest::Approx(-2 * std::log(2.0)).epsilon(1e-12));
  CHECK(utility_cost({1, 1}, kLogGap) == doctest::Approx(-1.386294).epsilon(1e-6));
  CHECK(utility_cost({2, 0}, kLogGap) == doctest::Approx(-2.197225).epsilon(1e-6));
  CHECK(utility_cost({1, 1}, kFanout) == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(utility_cost({3, 1}, kAbsDiff) == 2.0);
}

TEST_CASE("partition_cost small cases") {
  const auto g = BipartiteGraph::build(std::vector<Edge>{{0, 0}, {1, 0}}, 2);
  const std::vector<Side> together{Side::Left, Side::Left};
  const std::vector<Side> apart{Side::Left, Side::Right};
  CHECK(partition_cost(g, together, kLogGap) == doctest::Approx(-2 * std::log(3.0)));
  CHECK(partition_cost(g, apart, kLogGap) == doctest::Approx(-2 * std::log(2.0)));

  const auto empty = BipartiteGraph::build({}, 3);
  CHECK(partition_cost(empty, std::vector<Side>(3, Side::Left), kLogGap) == 0.0);
}

TEST_CASE("partition_cost rejects unassigned functions") {
  const auto g = BipartiteGraph::build(std::vector<Edge>{{0, 0}, {1, 0}}, 2);
  const std::vector<Side> sides{Side::Left, Side::Unassigned};
  CHECK_THROWS_AS(partition_cost(g, sides, kLogGap), InputError);
}

TEST_CASE("move_gain hand-evaluated values") {
  // u0 ~ {f0, f1}, u1 ~ {f1, f2}; f0, f1 left, f2 right.
  const auto g = BipartiteGraph::build(std::vector<Edge>{{0, 0}, {1, 0}, {1, 1}, {2, 1}}, 3);
  const std::vector<Side> sides{Side::Left, Side::Left, Side::Right};
  const auto counts = split_counts(g, sides);
  CHECK(move_gain(g, sides, counts, 1, kLogGap) == doctest::Approx(0.0));
  CHECK(move_gain(g, sides, counts, 0, kLogGap) ==
        doctest::Approx(-2 * std::log(3.0) + 2 * std::log(2.0)));
  CHECK(move_gain(g, sides, counts, 0, kLogGap) == doctest::Approx(-0.8109).epsilon(1e-4));

  const auto lonely = BipartiteGraph::build(std::vector<Edge>{{0, 0}, {1, 0}}, 3);
  const std::vector<Side> s3{Side::Left, Side::Right, Side::Left};
  CHECK(move_gain(lonely, s3, split_counts(lonely, s3), 2, kLogGap) == 0.0);
}

TEST_CASE("move_gain equals the from-scratch cost delta") {
  Rng rng(21);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + rng.below(40);
    const auto edges = gen::random_edges(n, 1 + rng.below(50), rng.below(300), rng);
    const auto g = BipartiteGraph::build(edges, n);
    auto sides = gen::balanced_sides(n, rng);
    const auto counts = split_counts(g, sides);
    for (const Objective& obj : kAll) {
      const double before = oracle::partition_cost(edges, sides, obj);
      for (FunctionId f = 0; f < n; ++f) {
        sides[f] = opposite(sides[f]);
        const double after = oracle::partition_cost(edges, sides, obj);
        sides[f] = opposite(sides[f]);
        CHECK(std::abs(move_gain(g, sides, counts, f, obj) - (before - after)) <= 1e-9);
      }
    }
  }
}

TEST_CASE("every objective is symmetric and extremal at the ends and the middle") {
  Objective fanout_half = kFanout;
  fanout_half.fanout_p = 0.5;
  for (const Objective& obj : {kLogGap, kFanout, kAbsDiff, fanout_half}) {
    for (std::uint32_t d = 1; d <= 64; ++d) {
      double lo = utility_cost({d, 0}, obj);
      CHECK(utility_cost({0, d}, obj) == lo);
      for (std::uint32_t l = 0; l <= d; ++l) {
        const double c = utility_cost({l, d - l}, obj);
        CHECK(c == utility_cost({d - l, l}, obj));
        CHECK(c >= lo - 1e-12);
        if (d % 2 == 0) CHECK(c <= utility_cost({d / 2, d / 2}, obj) + 1e-12);
      }
    }
  }
}

TEST_CASE("utility_cost matches the closed forms") {
  Objective binary = kLogGap;
  binary.log_base = LogBase::Binary;
  for (const Objective& obj : {kLogGap, kFanout, kAbsDiff, binary}) {
    for (std::uint32_t l = 0; l < 40; ++l) {
      for (std::uint32_t r = 0; r < 40; ++r) {
        CHECK(utility_cost({l, r}, obj) == doctest::Approx(oracle::split_cost(l, r, obj)).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("log table matches direct evaluation") {
  for (LogBase base : {LogBase::Natural, LogBase::Binary}) {
    const LogTable& table = LogTable::shared(base);
    REQUIRE(table.values().size() == LogTable::kSize);
    double worst = 0;
    for (std::uint32_t x = 0; x < LogTable::kSize; ++x) {
      const double ref = base == LogBase::Natural ? std::log(x + 1.0) : std::log2(x + 1.0);
      worst = std::max(worst, std::abs(table(x) - ref));
    }
    CHECK(worst <= 1e-12);
    // Past the table the direct path takes over.
    CHECK(table(LogTable::kSize + 5) == table.direct(LogTable::kSize + 5));
  }
}

TEST_CASE("base-2 costs are natural costs scaled by 1/ln 2") {
  Objective binary = kLogGap;
  binary.log_base = LogBase::Binary;
  for (std::uint32_t l = 0; l < 30; ++l) {
    for (std::uint32_t r = 0; r < 30; ++r) {
      CHECK(utility_cost({l, r}, binary) ==
            doctest::Approx(utility_cost({l, r}, kLogGap) / std::log(2.0)).epsilon(1e-12));
    }
  }
}

TEST_CASE("separable cost model terms reproduce utility_cost") {
  for (const Objective& obj : {kLogGap, kFanout}) {
    const SplitCostModel model(obj, 50);
    REQUIRE(model.separable());
    const auto t = model.terms();
    REQUIRE(t.size() >= 52);
    // cost(L, R) = cost(0, 0) + term[L] + term[R] up to the constant.
    const double c00 = utility_cost({0, 0}, obj) - 2 * t[0];
    for (std::uint32_t l = 0; l <= 50; ++l) {
      for (std::uint32_t r = 0; r <= 50; r += 7) {
        CHECK(c00 + t[l] + t[r] == doctest::Approx(utility_cost({l, r}, obj)).epsilon(1e-12));
      }
    }
  }
  CHECK_FALSE(SplitCostModel(kAbsDiff, 10).separable());
}

TEST_CASE("objective parsing") {
  CHECK(Objective::parse("log-gap").kind == ObjectiveKind::UniformLogGap);
  CHECK(Objective::parse("abs-diff").kind == ObjectiveKind::AbsoluteDifference);
  const Objective f = Objective::parse("fanout:0.75");
  CHECK(f.kind == ObjectiveKind::ProbabilisticFanout);
  CHECK(f.fanout_p == 0.75);
  CHECK(Objective::parse("fanout").fanout_p == 0.9);
  CHECK(Objective::parse(f.to_string()).fanout_p == 0.75);
  CHECK_THROWS_AS(Objective::parse("fanout:1.5"), InputError);
  CHECK_THROWS_AS(Objective::parse("fanout:x"), InputError);
  CHECK_THROWS_AS(Objective::parse("gap"), InputError);
}
