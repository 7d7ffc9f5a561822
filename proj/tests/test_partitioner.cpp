#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numeric>
#include <set>

#include "doctest.h"
#include "fnlayout/error.hpp"
#include "fnlayout/partitioner.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace fnlayout;

namespace {

PartitionerConfig no_skip(std::uint32_t rounds = 20) {
  PartitionerConfig cfg;
  cfg.skip_probability = 0.0;
  cfg.max_iterations = rounds;
  return cfg;
}

std::vector<FunctionId> iota_ids(std::size_t n) {
  std::vector<FunctionId> v(n);
  std::iota(v.begin(), v.end(), FunctionId{0});
  return v;
}

bool is_permutation_of_n(const std::vector<FunctionId>& order, std::size_t n) {
  auto sorted = order;
  std::sort(sorted.begin(), sorted.end());
  return sorted == iota_ids(n);
}

// One refinement round without skips, computed with from-scratch costs:
// lockstep walk over both sides in descending gain, stopping once the two
// single gains no longer sum positive. A pair is exchanged when moving both
// together lowers the cost; otherwise the side whose next gain is lower
// keeps its vertex. Only meaningful when no two gains are near-equal.
std::vector<double> oracle_gains(const std::vector<Edge>& edges, const std::vector<Side>& sides,
                                 const Objective& obj) {
  const double before = oracle::partition_cost(edges, sides, obj);
  std::vector<double> gain(sides.size());
  for (std::size_t f = 0; f < sides.size(); ++f) {
    auto moved = sides;
    moved[f] = opposite(moved[f]);
    gain[f] = before - oracle::partition_cost(edges, moved, obj);
  }
  return gain;
}

std::vector<Side> oracle_round(const std::vector<Edge>& edges, const std::vector<Side>& sides,
                               const Objective& obj) {
  const auto gain = oracle_gains(edges, sides, obj);
  const double before = oracle::partition_cost(edges, sides, obj);
  std::vector<FunctionId> l, r;
  for (FunctionId f = 0; f < sides.size(); ++f) (sides[f] == Side::Left ? l : r).push_back(f);
  auto by_gain = [&](FunctionId a, FunctionId b) { return gain[a] > gain[b]; };
  std::sort(l.begin(), l.end(), by_gain);
  std::sort(r.begin(), r.end(), by_gain);
  auto out = sides;
  std::size_t i = 0, j = 0;
  while (i < l.size() && j < r.size() && gain[l[i]] + gain[r[j]] > 1e-9) {
    auto both = sides;
    both[l[i]] = Side::Right;
    both[r[j]] = Side::Left;
    if (before - oracle::partition_cost(edges, both, obj) > 1e-9) {
      out[l[i++]] = Side::Right;
      out[r[j++]] = Side::Left;
    } else if (j + 1 >= r.size() || (i + 1 < l.size() && gain[l[i + 1]] > gain[r[j + 1]] + 1e-9)) {
      ++i;
    } else {
      ++j;
    }
  }
  return out;
}

// True when some pair of gains, sums of gains, or joint exchange gains lies
// close to a decision boundary without being exactly on it.
bool near_tie(const std::vector<Edge>& edges, const std::vector<Side>& sides, const Objective& obj) {
  const auto gain = oracle_gains(edges, sides, obj);
  const double before = oracle::partition_cost(edges, sides, obj);
  auto close = [](double x) { return std::abs(x) < 1e-6; };
  for (std::size_t a = 0; a < gain.size(); ++a) {
    for (std::size_t b = 0; b < gain.size(); ++b) {
      if (a == b) continue;
      if (sides[a] == sides[b] && close(gain[a] - gain[b])) return true;
      if (sides[a] != sides[b] && std::abs(gain[a] - gain[b]) > 1e-12 && close(gain[a] - gain[b])) return true;
      if (std::abs(gain[a] + gain[b]) > 1e-12 && close(gain[a] + gain[b])) return true;
      if (sides[a] == Side::Left && sides[b] == Side::Right) {
        auto both = sides;
        both[a] = Side::Right;
        both[b] = Side::Left;
        const double joint = before - oracle::partition_cost(edges, both, obj);
        if (std::abs(joint) > 1e-12 && close(joint)) return true;
      }
    }
  }
  return false;
}

// Orders whose every recursion level splits the functions with minimum
// cost among balanced splits, for the complete recursion on tiny graphs.
std::set<std::vector<FunctionId>> brute_force_optimal_orders(const std::vector<Edge>& edges, std::size_t n,
                                                             const Objective& obj) {
  std::function<bool(std::span<const FunctionId>)> optimal = [&](std::span<const FunctionId> part) {
    const std::size_t k = part.size();
    if (k <= 1) return true;
    std::set<FunctionId> members(part.begin(), part.end());
    std::vector<Edge> local;
    for (const Edge& e : edges) {
      if (members.count(e.function)) local.push_back(e);
    }
    auto cost_of = [&](const std::set<FunctionId>& left) {
      std::vector<Side> sides(n, Side::Right);
      for (FunctionId f : left) sides[f] = Side::Left;
      return oracle::partition_cost(local, sides, obj);
    };
    double best = 1e300;
    std::vector<FunctionId> ids(part.begin(), part.end());
    std::sort(ids.begin(), ids.end());
    std::vector<bool> pick(k, false);
    std::fill(pick.begin(), pick.begin() + static_cast<std::ptrdiff_t>(k / 2), true);
    std::sort(pick.begin(), pick.end());
    do {
      std::set<FunctionId> left;
      for (std::size_t i = 0; i < k; ++i) {
        if (pick[i]) left.insert(ids[i]);
      }
      best = std::min(best, cost_of(left));
    } while (std::next_permutation(pick.begin(), pick.end()));
    const std::set<FunctionId> left(part.begin(), part.begin() + static_cast<std::ptrdiff_t>(k / 2));
    if (cost_of(left) > best + 1e-12) return false;
    return optimal(part.first(k / 2)) && optimal(part.subspan(k / 2));
  };
  std::set<std::vector<FunctionId>> out;
  auto perm = iota_ids(n);
  do {
    if (optimal(perm)) out.insert(perm);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

}  // namespace

TEST_CASE("config validation") {
  PartitionerConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.max_depth = 0;
  CHECK_THROWS_AS(cfg.validate(), InputError);
  cfg = {};
  cfg.max_iterations = 0;
  CHECK_THROWS_AS(cfg.validate(), InputError);
  cfg = {};
  cfg.skip_probability = 1.0;
  CHECK_THROWS_AS(cfg.validate(), InputError);
  cfg.skip_probability = -0.1;
  CHECK_THROWS_AS(cfg.validate(), InputError);
}

TEST_CASE("bisect of two functions is always one and one") {
  const auto g = BipartiteGraph::build(std::vector<Edge>{{0, 0}, {1, 0}}, 2);
  for (std::uint64_t key = 0; key < 50; ++key) {
    const auto b = bisect(g, iota_ids(2), PartitionerConfig{}, key);
    CHECK(b.left.size() == 1);
    CHECK(b.right.size() == 1);
  }
}

TEST_CASE("bisect sizes are floor and ceil of n/2") {
  Rng rng(41);
  for (std::size_t n = 2; n < 40; ++n) {
    const auto g = BipartiteGraph::build(gen::random_edges(n, 10, 4 * n, rng), n);
    const auto b = bisect(g, iota_ids(n), PartitionerConfig{}, n);
    CHECK(b.left.size() == n / 2);
    CHECK(b.right.size() == n - n / 2);
  }
}

TEST_CASE("a single shared utility keeps every balanced split at cost(2,2)") {
  const auto g = BipartiteGraph::build(std::vector<Edge>{{0, 0}, {1, 0}, {2, 0}, {3, 0}}, 4);
  const Objective obj;
  const double c22 = utility_cost({2, 2}, obj);
  for (std::uint64_t key = 0; key < 20; ++key) {
    const auto b = bisect(g, iota_ids(4), PartitionerConfig{}, key);
    CHECK(b.left.size() == 2);
    CHECK(b.right.size() == 2);
    CHECK(b.initial_cost == doctest::Approx(c22));
    CHECK(b.final_cost == doctest::Approx(c22));
  }
}

TEST_CASE("adversarial two-cluster split") {
  // u0 ~ {f0, f1}, u1 ~ {f2, f3}, start from {f0, f2} | {f1, f3}. Every
  // function has the same positive gain.
  const std::vector<Edge> edges{{0, 0}, {1, 0}, {2, 1}, {3, 1}};
  const auto g = BipartiteGraph::build(edges, 4);
  const std::vector<Side> bad{Side::Left, Side::Right, Side::Left, Side::Right};
  auto clustered = [](const std::vector<Side>& s) { return s[0] == s[1] && s[2] == s[3]; };

  // With random tie order the first pair is same-cluster half of the time.
  // Its exchange changes nothing, so the walk passes over it, exchanges one
  // crossing pair and clusters. Otherwise both crossing pairs qualify and
  // exchanging both lands on another crossing split.
  SUBCASE("without skips one round clusters half of the time") {
    int hits = 0;
    const int runs = 4000;
    for (int seed = 0; seed < runs; ++seed) {
      auto sides = bad;
      Rng rng(static_cast<std::uint64_t>(seed));
      const auto out = refine_split(g, sides, no_skip(1), rng);
      CHECK(std::count(sides.begin(), sides.end(), Side::Left) == 2);
      if (clustered(sides)) {
        ++hits;
        CHECK(out.exchanges == 1);
      } else {
        CHECK(out.exchanges == 2);
      }
    }
    CHECK(std::abs(static_cast<double>(hits) / runs - 0.5) < 0.03);
  }
  SUBCASE("with skips one round clusters with the derived rate") {
    // 1/2 * 0.9 (single crossing exchange not skipped) + 1/2 * 2 * 0.9 * 0.1
    // (exactly one of the two crossing exchanges skipped).
    const double expected = 0.5 * 0.9 + 0.5 * 2 * 0.9 * 0.1;
    int hits = 0;
    const int runs = 4000;
    for (int seed = 0; seed < runs; ++seed) {
      auto sides = bad;
      auto cfg = PartitionerConfig{};
      cfg.max_iterations = 1;
      Rng rng(static_cast<std::uint64_t>(seed));
      refine_split(g, sides, cfg, rng);
      hits += clustered(sides);
    }
    CHECK(std::abs(static_cast<double>(hits) / runs - expected) < 0.03);
  }
  SUBCASE("the full search clusters and converges") {
    for (int seed = 0; seed < 1000; ++seed) {
      for (const auto& cfg : {PartitionerConfig{}, no_skip()}) {
        auto sides = bad;
        Rng rng(static_cast<std::uint64_t>(seed));
        const auto out = refine_split(g, sides, cfg, rng);
        CHECK(clustered(sides));
        CHECK(out.converged);
      }
    }
  }
  SUBCASE("a clustered split is already converged") {
    std::vector<Side> sides{Side::Left, Side::Left, Side::Right, Side::Right};
    Rng rng(2);
    const auto out = refine_split(g, sides, PartitionerConfig{}, rng);
    CHECK(out.converged);
    CHECK(out.rounds == 1);
    CHECK(out.exchanges == 0);
  }
}

TEST_CASE("one refinement round matches the from-scratch oracle") {
  Rng rng(42);
  Objective abs_diff;
  abs_diff.kind = ObjectiveKind::AbsoluteDifference;
  Objective fanout;
  fanout.kind = ObjectiveKind::ProbabilisticFanout;
  int compared = 0, exchanged = 0;
  for (int trial = 0; trial < 600; ++trial) {
    const std::size_t n = 2 + rng.below(16);
    const auto edges = gen::random_edges(n, 1 + rng.below(30), rng.below(200), rng);
    const auto g = BipartiteGraph::build(edges, n);
    const auto start = gen::balanced_sides(n, rng);
    for (const Objective& obj : {Objective{}, fanout, abs_diff}) {
      if (near_tie(edges, start, obj)) continue;
      auto cfg = no_skip(1);
      cfg.objective = obj;
      auto sides = start;
      Rng round_rng(static_cast<std::uint64_t>(trial));
      refine_split(g, sides, cfg, round_rng);
      CHECK(sides == oracle_round(edges, start, obj));
      exchanged += sides != start;
      ++compared;
    }
  }
  MESSAGE("compared " << compared << " rounds, " << exchanged << " with exchanges");
  CHECK(compared >= 300);
  CHECK(exchanged >= 100);
}

TEST_CASE("functions with identical utilities are never exchanged for each other") {
  // u0 ~ {f0, f1, f2, f3}, u1 ~ {f0, f1}. From {f0, f2} | {f1, f3} the
  // highest-gain pair is (f0, f1), which changes no count.
  const auto g = BipartiteGraph::build(std::vector<Edge>{{0, 0}, {1, 0}, {2, 0}, {3, 0}, {0, 1}, {1, 1}}, 4);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    std::vector<Side> sides{Side::Left, Side::Right, Side::Left, Side::Right};
    Rng rng(seed);
    const auto out = refine_split(g, sides, no_skip(1), rng);
    CHECK(out.exchanges == 1);
    CHECK(sides[0] == sides[1]);
  }
}

TEST_CASE("refinement lowers the cost on random graphs") {
  Rng rng(43);
  Objective fanout;
  fanout.kind = ObjectiveKind::ProbabilisticFanout;
  Objective abs_diff;
  abs_diff.kind = ObjectiveKind::AbsoluteDifference;
  for (const Objective& obj : {Objective{}, fanout, abs_diff}) {
    int first_round_raised = 0, final_raised = 0, runs = 0;
    double initial_total = 0, final_total = 0;
    for (int trial = 0; trial < 300; ++trial) {
      const std::size_t n = 2 + rng.below(60);
      const auto g = BipartiteGraph::build(gen::random_edges(n, 1 + rng.below(40), rng.below(400), rng), n);
      const auto start = gen::balanced_sides(n, rng);
      const double before = partition_cost(g, start, obj);

      auto one = start;
      auto cfg = no_skip(1);
      cfg.objective = obj;
      Rng r1(static_cast<std::uint64_t>(trial));
      refine_split(g, one, cfg, r1);
      first_round_raised += partition_cost(g, one, obj) > before + 1e-9;

      auto full = start;
      PartitionerConfig dflt;
      dflt.objective = obj;
      Rng r2(static_cast<std::uint64_t>(trial));
      refine_split(g, full, dflt, r2);
      const double after = partition_cost(g, full, obj);
      final_raised += after > before + 1e-9;
      initial_total += before;
      final_total += after;
      ++runs;
    }
    // Stale gains let exchanges in one round interact, so single rounds and
    // even whole searches can end above the starting cost; on average the
    // search must still improve markedly.
    MESSAGE(obj.to_string() << ": first round raised the cost in " << first_round_raised << "/" << runs
                            << ", full search in " << final_raised << "/" << runs);
    CHECK(final_total < initial_total);
    CHECK(final_raised * 20 < runs);
  }
}

TEST_CASE("stale gains can raise the cost within one round") {
  // Found by search over small random graphs: both exchanges look good
  // alone, but they touch the same utilities.
  Rng rng(49);
  bool found = false;
  for (int trial = 0; trial < 2000 && !found; ++trial) {
    const std::size_t n = 4 + rng.below(4);
    const auto edges = gen::random_edges(n, 3, 3 * n, rng);
    const auto g = BipartiteGraph::build(edges, n);
    auto sides = gen::balanced_sides(n, rng);
    const double before = partition_cost(g, sides, Objective{});
    Rng r(0);
    refine_split(g, sides, no_skip(1), r);
    found = oracle::partition_cost(edges, sides, Objective{}) > before + 1e-9;
  }
  CHECK(found);
}

TEST_CASE("reorder on two clusters keeps each cluster adjacent") {
  const std::vector<Edge> edges{{0, 0}, {1, 0}, {2, 1}, {3, 1}};
  const auto g = BipartiteGraph::build(edges, 4);
  const auto optimal = brute_force_optimal_orders(edges, 4, Objective{});
  CHECK(optimal.size() == 8);
  const std::vector<FunctionId> initial{0, 2, 1, 3};
  std::set<std::vector<FunctionId>> seen;
  int hits = 0;
  const int seeds = 500;
  for (int seed = 0; seed < seeds; ++seed) {
    PartitionerConfig cfg;
    cfg.seed = static_cast<std::uint64_t>(seed);
    const auto layout = reorder(g, initial, cfg);
    REQUIRE(is_permutation_of_n(layout.order, 4));
    if (optimal.count(layout.order)) {
      ++hits;
      seen.insert(layout.order);
    }
  }
  // Every run clusters; the earlier cluster in the initial order comes
  // first and each leaf keeps the initial order, so one output remains.
  CHECK(hits == seeds);
  CHECK(seen == std::set<std::vector<FunctionId>>{{0, 1, 2, 3}});
}

TEST_CASE("reorder emits the part that is earlier in the initial order first") {
  const auto g = BipartiteGraph::build(std::vector<Edge>{{0, 0}, {1, 0}, {2, 1}, {3, 1}}, 4);
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    PartitionerConfig cfg;
    cfg.seed = seed;
    CHECK(reorder(g, std::vector<FunctionId>{3, 1, 2, 0}, cfg).order == std::vector<FunctionId>{3, 2, 1, 0});
    CHECK(reorder(g, std::vector<FunctionId>{1, 3, 0, 2}, cfg).order == std::vector<FunctionId>{1, 0, 3, 2});
  }
}

TEST_CASE("reorder trivial inputs") {
  SUBCASE("single function") {
    const auto g = BipartiteGraph::build({}, 1);
    CHECK(reorder(g, std::vector<FunctionId>{0}, PartitionerConfig{}).order == std::vector<FunctionId>{0});
  }
  SUBCASE("empty graph") {
    const auto g = BipartiteGraph::build({}, 0);
    CHECK(reorder(g, std::vector<FunctionId>{}, PartitionerConfig{}).order.empty());
  }
  SUBCASE("no utilities keeps the initial order") {
    const auto g = BipartiteGraph::build({}, 9);
    const std::vector<FunctionId> initial{4, 2, 8, 0, 1, 7, 3, 6, 5};
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
      PartitionerConfig cfg;
      cfg.seed = seed;
      const auto layout = reorder(g, initial, cfg);
      CHECK(layout.order == initial);
    }
  }
}

TEST_CASE("reorder rejects an initial order that is not a permutation") {
  const auto g = BipartiteGraph::build({}, 3);
  CHECK_THROWS_AS(reorder(g, std::vector<FunctionId>{0, 1}, PartitionerConfig{}), InputError);
  CHECK_THROWS_AS(reorder(g, std::vector<FunctionId>{0, 1, 1}, PartitionerConfig{}), InputError);
  CHECK_THROWS_AS(reorder(g, std::vector<FunctionId>{0, 1, 3}, PartitionerConfig{}), InputError);
}

TEST_CASE("reorder output is a balanced, depth-capped permutation") {
  Rng rng(44);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 1 + rng.below(300);
    const auto g = BipartiteGraph::build(gen::random_edges(n, 1 + n / 2, 4 * n, rng), n);
    auto initial = iota_ids(n);
    rng.shuffle(std::span(initial));
    PartitionerConfig cfg;
    cfg.seed = rng.next();
    cfg.max_depth = 1 + static_cast<std::uint32_t>(rng.below(10));
    ReorderStats stats;
    std::mutex mu;
    std::uint32_t deepest = 0;
    bool balanced = true;
    ReorderOptions opts;
    opts.stats = &stats;
    opts.on_bisection = [&](const BisectionEvent& e) {
      std::lock_guard lock(mu);
      deepest = std::max(deepest, e.depth + 1);
      const std::size_t total = e.left_size + e.right_size;
      balanced = balanced && e.left_size == total / 2;
    };
    const auto layout = reorder(g, initial, cfg, opts);
    CHECK(is_permutation_of_n(layout.order, n));
    CHECK(balanced);
    const auto ceil_log2 = n > 1 ? static_cast<std::uint32_t>(std::ceil(std::log2(static_cast<double>(n)))) : 0u;
    CHECK(stats.depth_limit == std::min(ceil_log2, cfg.max_depth));
    CHECK(deepest <= stats.depth_limit);
    CHECK(stats.max_depth_reached <= stats.depth_limit);
  }
}

TEST_CASE("leaves keep the initial relative order") {
  Rng rng(45);
  const std::size_t n = 64;
  const auto g = BipartiteGraph::build(gen::random_edges(n, 40, 300, rng), n);
  auto initial = iota_ids(n);
  rng.shuffle(std::span(initial));
  std::vector<std::size_t> rank(n);
  for (std::size_t i = 0; i < n; ++i) rank[initial[i]] = i;

  PartitionerConfig cfg;
  cfg.max_depth = 2;
  const auto layout = reorder(g, initial, cfg);
  // Four leaves of 16 functions, each in initial-order rank.
  for (std::size_t leaf = 0; leaf < 4; ++leaf) {
    for (std::size_t i = leaf * 16 + 1; i < (leaf + 1) * 16; ++i) {
      CHECK(rank[layout.order[i - 1]] < rank[layout.order[i]]);
    }
  }
}

TEST_CASE("reorder is deterministic and independent of the thread count") {
  Rng rng(46);
  const std::size_t n = 3000;
  const auto g = BipartiteGraph::build(gen::random_edges(n, 1500, 12000, rng), n);
  const auto initial = iota_ids(n);
  std::vector<FunctionId> reference;
  std::uint64_t digest = 0;
  for (std::uint32_t threads : {1u, 2u, 8u, 1u}) {
    PartitionerConfig cfg;
    cfg.seed = 99;
    cfg.threads = threads;
    ReorderStats stats;
    ReorderOptions opts;
    opts.stats = &stats;
    const auto layout = reorder(g, initial, cfg, opts);
    if (reference.empty()) {
      reference = layout.order;
      digest = stats.decision_digest;
    } else {
      CHECK(layout.order == reference);
      CHECK(stats.decision_digest == digest);
    }
  }
  PartitionerConfig other;
  other.seed = 100;
  CHECK(reorder(g, initial, other).order != reference);
}

TEST_CASE("base-2 and natural logs make the same decisions") {
  Rng rng(47);
  for (int trial = 0; trial < 5; ++trial) {
    const std::size_t n = 200 + rng.below(300);
    const auto g = BipartiteGraph::build(gen::random_edges(n, n / 3, 5 * n, rng), n);
    PartitionerConfig natural;
    natural.seed = rng.next();
    PartitionerConfig binary = natural;
    binary.objective.log_base = LogBase::Binary;
    ReorderStats a, b;
    ReorderOptions oa, ob;
    oa.stats = &a;
    ob.stats = &b;
    const auto la = reorder(g, iota_ids(n), natural, oa);
    const auto lb = reorder(g, iota_ids(n), binary, ob);
    CHECK(la.order == lb.order);
    CHECK(a.decision_digest == b.decision_digest);
  }
}

TEST_CASE("planted clusters come out contiguous") {
  Rng rng(48);
  int contiguous = 0, total = 0;
  for (int seed = 0; seed < 5; ++seed) {
    const auto pc = gen::planted_clusters(16, 8, 6, rng);
    const auto g = BipartiteGraph::build(pc.edges, pc.n);
    PartitionerConfig cfg;
    cfg.seed = static_cast<std::uint64_t>(seed);
    const auto layout = reorder(g, iota_ids(pc.n), cfg);
    std::map<std::uint32_t, std::vector<std::size_t>> positions;
    for (std::size_t i = 0; i < layout.order.size(); ++i) positions[pc.cluster[layout.order[i]]].push_back(i);
    for (const auto& [c, pos] : positions) {
      contiguous += pos.back() - pos.front() + 1 == pos.size();
      ++total;
    }
  }
  CHECK(static_cast<double>(contiguous) / total >= 0.9);
}

TEST_CASE("complexity estimate") {
  auto bound = [](double n, double m) { return m * std::log2(n) + n * std::log2(n) * std::log2(n); };
  const auto a = estimate_complexity(1 << 10, 1 << 12);
  const auto b = estimate_complexity(1 << 11, 1 << 13);
  CHECK(a.total() == doctest::Approx(bound(1 << 10, 1 << 12)));
  const double ratio = b.total() / a.total();
  CHECK(ratio == doctest::Approx(bound(1 << 11, 1 << 13) / bound(1 << 10, 1 << 12)));
  CHECK(ratio > 2.0);
  CHECK(ratio < 2.5);
  CHECK(estimate_complexity(1, 0).total() == 1.0);
  CHECK(estimate_complexity(1, 100).total() == estimate_complexity(1, 5).total());
  const auto no_edges = estimate_complexity(1 << 12, 0);
  CHECK(no_edges.gain_steps == 0.0);
  CHECK(no_edges.total() == doctest::Approx(no_edges.sort_steps));
}
