#include "fnlayout/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "fnlayout/error.hpp"
#include "fnlayout/random.hpp"

namespace fnlayout {

namespace {

std::size_t uniform_between(Rng& rng, std::size_t lo, std::size_t hi) {
  return lo + static_cast<std::size_t>(rng.below(hi - lo + 1));
}

double normal(Rng& rng, double mean, double sd) {
  // Box-Muller; 1 - unit() keeps the log argument in (0, 1].
  const double u1 = 1.0 - rng.unit();
  const double u2 = rng.unit();
  return mean + sd * std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

}  // namespace

std::size_t FamilyCorpus::total_bytes() const {
  std::size_t total = 0;
  for (const auto& b : bodies) total += b ? b->size() : 0;
  return total;
}

FamilyCorpus make_family_corpus(const FamilyCorpusParams& params) {
  if (params.families == 0 || params.min_members == 0 || params.min_members > params.max_members ||
      params.min_body == 0 || params.min_body > params.max_body || params.scatter_chunks == 0) {
    throw InputError("invalid family corpus parameters");
  }
  Rng rng(params.seed);

  struct Member {
    std::uint32_t family;
    std::uint32_t index;
    Bytes body;
  };
  // Runs of members that appear contiguously in the baseline order.
  std::vector<std::vector<Member>> runs;
  for (std::uint32_t fam = 0; fam < params.families; ++fam) {
    Bytes base(uniform_between(rng, params.min_body, params.max_body));
    for (auto& b : base) b = static_cast<std::uint8_t>(rng.below(256));

    const std::size_t members = uniform_between(rng, params.min_members, params.max_members);
    std::vector<Member> family;
    for (std::uint32_t m = 0; m < members; ++m) {
      Bytes body = base;
      auto budget = static_cast<std::size_t>(params.mutation_rate * static_cast<double>(body.size()));
      while (budget > 0) {
        const std::size_t run = std::min(budget, uniform_between(rng, 8, 64));
        const std::size_t at = static_cast<std::size_t>(rng.below(body.size() - std::min(run, body.size()) + 1));
        for (std::size_t i = at; i < std::min(body.size(), at + run); ++i) {
          body[i] = static_cast<std::uint8_t>(rng.below(256));
        }
        budget -= run;
      }
      family.push_back({fam, m, std::move(body)});
    }

    const std::size_t chunks = std::min(params.scatter_chunks, family.size());
    std::size_t begin = 0;
    for (std::size_t c = 0; c < chunks; ++c) {
      const std::size_t end = family.size() * (c + 1) / chunks;
      runs.emplace_back(std::make_move_iterator(family.begin() + begin),
                        std::make_move_iterator(family.begin() + end));
      begin = end;
    }
  }
  rng.shuffle(std::span(runs));

  FamilyCorpus corpus;
  for (auto& run : runs) {
    for (Member& m : run) {
      FunctionRecord rec;
      rec.name = "fam" + std::to_string(m.family) + "_m" + std::to_string(m.index);
      rec.size = m.body.size();
      rec.hot = false;
      rec.content_hashes = shingle_hashes(m.body, 8);
      corpus.records.push_back(std::move(rec));
      corpus.family.push_back(m.family);
      corpus.bodies.emplace_back(std::move(m.body));
    }
  }
  return corpus;
}

std::vector<FunctionId> family_contiguous_order(const FamilyCorpus& corpus) {
  std::vector<FunctionId> order(corpus.records.size());
  std::iota(order.begin(), order.end(), FunctionId{0});
  std::vector<std::size_t> first_seen(corpus.records.size(), corpus.records.size());
  for (std::size_t i = corpus.family.size(); i-- > 0;) first_seen[corpus.family[i]] = i;
  std::stable_sort(order.begin(), order.end(), [&](FunctionId a, FunctionId b) {
    return first_seen[corpus.family[a]] < first_seen[corpus.family[b]];
  });
  return order;
}

std::vector<FunctionId> perturb_order(std::span<const FunctionId> order, double fraction,
                                      std::uint64_t seed) {
  Rng rng(seed);
  std::vector<FunctionId> out(order.begin(), order.end());
  std::vector<std::size_t> positions(out.size());
  std::iota(positions.begin(), positions.end(), std::size_t{0});
  rng.shuffle(std::span(positions));
  const auto chosen = static_cast<std::size_t>(std::llround(std::clamp(fraction, 0.0, 1.0) *
                                                            static_cast<double>(out.size())));
  positions.resize(chosen);
  std::vector<FunctionId> moved;
  for (std::size_t p : positions) moved.push_back(out[p]);
  rng.shuffle(std::span(moved));
  for (std::size_t i = 0; i < positions.size(); ++i) out[positions[i]] = moved[i];
  return out;
}

StartupApp make_startup_app(const StartupAppParams& params) {
  if (params.functions == 0 || params.min_module == 0 || params.min_module > params.max_module ||
      params.min_size == 0 || params.min_size > params.max_size) {
    throw InputError("invalid start-up app parameters");
  }
  Rng rng(params.seed);
  const std::size_t n = params.functions;
  const auto unused = static_cast<std::size_t>(params.unused_fraction * static_cast<double>(n));

  struct Module {
    std::vector<FunctionId> functions;
    bool core = false;
    double probability = 1.0;
    double time = 0.0;
  };

  // Function ids are assigned in baseline order below; build modules over
  // placeholder slots first.
  std::vector<Module> modules;
  std::size_t used = n - unused;
  std::size_t next_slot = 0;
  while (next_slot < used) {
    Module m;
    const std::size_t size = std::min(used - next_slot, uniform_between(rng, params.min_module, params.max_module));
    for (std::size_t i = 0; i < size; ++i) m.functions.push_back(static_cast<FunctionId>(next_slot++));
    modules.push_back(std::move(m));
  }
  const auto core_count = std::max<std::size_t>(
      1, static_cast<std::size_t>(params.core_module_fraction * static_cast<double>(modules.size())));
  for (std::size_t i = 0; i < modules.size(); ++i) {
    Module& m = modules[i];
    m.core = i < core_count;
    if (m.core) {
      m.time = 0.6 * static_cast<double>(i) / static_cast<double>(core_count);
    } else {
      m.probability = 0.05 + 0.85 * rng.unit();
      m.time = rng.unit();
    }
  }

  // Baseline order: modules in random order, each contiguous, with unused
  // functions dropped in as small runs.
  std::vector<std::vector<FunctionId>> blocks;
  for (const Module& m : modules) blocks.push_back(m.functions);
  for (std::size_t slot = used; slot < n;) {
    const std::size_t size = std::min(n - slot, uniform_between(rng, 1, 20));
    std::vector<FunctionId> block;
    for (std::size_t i = 0; i < size; ++i) block.push_back(static_cast<FunctionId>(slot++));
    blocks.push_back(std::move(block));
  }
  rng.shuffle(std::span(blocks));
  std::vector<FunctionId> slot_to_id(n);
  FunctionId next_id = 0;
  for (const auto& block : blocks) {
    for (FunctionId slot : block) slot_to_id[slot] = next_id++;
  }
  for (Module& m : modules) {
    for (FunctionId& f : m.functions) f = slot_to_id[f];
  }

  StartupApp app;
  app.records.resize(n);
  const double log_lo = std::log(static_cast<double>(params.min_size));
  const double log_hi = std::log(static_cast<double>(params.max_size));
  for (std::size_t i = 0; i < n; ++i) {
    app.records[i].name = "fn" + std::to_string(i);
    app.records[i].size = static_cast<std::uint64_t>(std::exp(log_lo + (log_hi - log_lo) * rng.unit()));
    app.records[i].size = std::clamp(app.records[i].size, params.min_size, params.max_size);
  }

  for (std::size_t t = 0; t < params.traces; ++t) {
    std::vector<std::pair<double, std::size_t>> events;
    for (std::size_t i = 0; i < modules.size(); ++i) {
      const Module& m = modules[i];
      if (m.core) {
        events.emplace_back(normal(rng, m.time, 0.03), i);
      } else if (rng.unit() < m.probability) {
        events.emplace_back(normal(rng, m.time, 0.2), i);
      }
    }
    std::sort(events.begin(), events.end());
    Trace trace;
    for (const auto& [time, index] : events) {
      for (FunctionId f : modules[index].functions) {
        if (rng.unit() < 0.9) trace.sequence.push_back(f);
      }
    }
    if (trace.sequence.empty()) continue;
    for (FunctionId f : trace.sequence) app.records[f].hot = true;
    app.traces.push_back(std::move(trace));
  }
  return app;
}

}  // namespace fnlayout
