#include "fnlayout/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "json.hpp"

#include "fnlayout/error.hpp"
#include "fnlayout/random.hpp"

namespace fnlayout {

namespace {

std::string label(FunctionId f, const SymbolTable* names) {
  if (names != nullptr && f < names->size()) return names->name(f);
  return "#" + std::to_string(f);
}

std::string trim(std::string_view text) {
  const auto begin = text.find_first_not_of(" \t\r");
  if (begin == std::string_view::npos) return {};
  const auto end = text.find_last_not_of(" \t\r");
  return std::string(text.substr(begin, end - begin + 1));
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  return in;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

Comparator parse_comparator(std::string_view text) {
  for (Comparator c : kAllComparators) {
    if (comparator_name(c) == text) return c;
  }
  throw InputError("unknown comparator '" + std::string(text) +
                   "' (expected bp, baseline, random, order-avg or greedy)");
}

std::string_view comparator_name(Comparator c) {
  switch (c) {
    case Comparator::Bp: return "bp";
    case Comparator::Baseline: return "baseline";
    case Comparator::Random: return "random";
    case Comparator::OrderAvg: return "order-avg";
    case Comparator::Greedy: return "greedy";
  }
  throw InvariantError("bad comparator value");
}

void PipelineConfig::validate() const {
  partitioner.validate();
  kmer.validate();
  if (trace_path.empty()) throw InputError("a trace file is required");
  if (manifest_path.empty()) throw InputError("a manifest file is required");
  if (output_path.empty()) throw InputError("an output path is required");
  if (page_size == 0) throw InputError("page size must be positive");
  if (sample_cap == 0) throw InputError("sample cap must be positive");

  std::vector<std::filesystem::path> paths{trace_path, manifest_path, output_path};
  if (!hints_path.empty()) paths.push_back(hints_path);
  if (!report_path.empty()) paths.push_back(report_path);
  for (auto& p : paths) p = p.lexically_normal();
  for (std::size_t i = 0; i < paths.size(); ++i) {
    for (std::size_t j = i + 1; j < paths.size(); ++j) {
      if (paths[i] == paths[j]) throw InputError("path " + paths[i].string() + " is used twice");
    }
  }
}

std::vector<CallerHint> read_hints(std::istream& in, const SymbolTable& symbols) {
  std::vector<CallerHint> hints;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream words(line);
    std::string callee, caller, extra;
    if (!(words >> callee)) continue;
    if (!(words >> caller) || (words >> extra)) {
      throw InputError("hints line " + std::to_string(line_no) + ": expected 'callee first_caller'");
    }
    const auto callee_id = symbols.find(callee);
    const auto caller_id = symbols.find(caller);
    if (!callee_id) throw InputError("hints line " + std::to_string(line_no) + ": unknown function " + callee);
    if (!caller_id) throw InputError("hints line " + std::to_string(line_no) + ": unknown function " + caller);
    hints.push_back({*callee_id, *caller_id});
  }
  return hints;
}

PipelineInputs load_inputs(const PipelineConfig& cfg) {
  PipelineInputs inputs;
  {
    auto in = open_input(cfg.manifest_path);
    inputs.records = read_manifest(in);
  }
  for (std::size_t i = 0; i < inputs.records.size(); ++i) {
    const FunctionRecord& r = inputs.records[i];
    if (inputs.symbols.find(r.name)) {
      const FunctionRecord& first = inputs.records[*inputs.symbols.find(r.name)];
      if (first.hot != r.hot) {
        throw InputError("function " + r.name + " is listed as both hot and cold");
      }
      throw InputError("function " + r.name + " is listed twice in the manifest");
    }
    inputs.symbols.intern(r.name);
  }

  {
    auto in = open_input(cfg.trace_path);
    inputs.traces = read_traces(in, inputs.symbols);
  }
  for (FunctionId f = static_cast<FunctionId>(inputs.records.size()); f < inputs.symbols.size(); ++f) {
    FunctionRecord r;
    r.name = inputs.symbols.name(f);
    r.size = 1;
    r.hot = true;
    inputs.records.push_back(std::move(r));
    inputs.warnings.push_back("trace function " + inputs.symbols.name(f) +
                              " is not in the manifest; assuming a 1-byte function");
  }

  if (!cfg.hints_path.empty()) {
    auto in = open_input(cfg.hints_path);
    inputs.hints = read_hints(in, inputs.symbols);
  }
  if (!cfg.bodies_dir.empty()) {
    inputs.bodies = read_bodies(cfg.bodies_dir, inputs.records);
    for (std::size_t i = 0; i < inputs.records.size(); ++i) {
      FunctionRecord& r = inputs.records[i];
      if (r.content_hashes.empty() && inputs.bodies[i]) r.content_hashes = shingle_hashes(*inputs.bodies[i]);
    }
  }
  return inputs;
}

Layout apply_caller_hints(const Layout& hot_layout, std::span<const CallerHint> hints,
                          std::vector<std::string>* warnings, const SymbolTable* names) {
  auto warn = [&](std::string message) {
    if (warnings != nullptr) warnings->push_back(std::move(message));
  };
  std::unordered_set<FunctionId> placed(hot_layout.order.begin(), hot_layout.order.end());
  std::unordered_map<FunctionId, std::vector<FunctionId>> after;
  std::unordered_set<FunctionId> moved;
  for (const CallerHint& h : hints) {
    if (h.callee == h.first_caller) {
      warn("hint for " + label(h.callee, names) + " names itself as caller; ignored");
    } else if (!placed.contains(h.first_caller)) {
      warn("caller " + label(h.first_caller, names) + " of " + label(h.callee, names) +
           " is not in the hot layout; hint ignored");
    } else if (moved.contains(h.callee)) {
      warn("function " + label(h.callee, names) + " has more than one hint; later ones ignored");
    } else {
      moved.insert(h.callee);
      after[h.first_caller].push_back(h.callee);
    }
  }

  Layout out;
  out.provenance = hot_layout.provenance;
  out.order.reserve(hot_layout.order.size() + moved.size());
  std::unordered_set<FunctionId> emitted;
  auto emit = [&](auto&& self, FunctionId f) -> void {
    if (!emitted.insert(f).second) return;
    out.order.push_back(f);
    if (auto it = after.find(f); it != after.end()) {
      // Detach before recursing so a cycle of hints cannot loop.
      std::vector<FunctionId> callees = std::move(it->second);
      after.erase(it);
      for (FunctionId c : callees) self(self, c);
    }
  };
  for (FunctionId f : hot_layout.order) {
    if (!moved.contains(f)) emit(emit, f);
  }
  // Callees whose whole caller chain was itself hinted away in a cycle.
  for (const CallerHint& h : hints) {
    if (moved.contains(h.callee) && !emitted.contains(h.callee)) {
      warn("hint cycle through " + label(h.callee, names) + "; placed at the end");
      emit(emit, h.callee);
    }
  }
  return out;
}

Layout order_avg(std::span<const Trace> traces, const SymbolTable& names) {
  std::map<FunctionId, std::pair<double, std::size_t>> score;  // position sum, count
  for (const Trace& t : traces) {
    for (std::size_t i = 0; i < t.size(); ++i) {
      auto& s = score[t.sequence[i]];
      s.first += static_cast<double>(i + 1);
      s.second += 1;
    }
  }
  std::vector<std::pair<double, FunctionId>> ranked;
  ranked.reserve(score.size());
  for (const auto& [f, s] : score) ranked.emplace_back(s.first / static_cast<double>(s.second), f);
  std::sort(ranked.begin(), ranked.end(), [&](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first < b.first;
    return names.name(a.second) < names.name(b.second);
  });
  Layout out;
  out.provenance = "order-avg";
  for (const auto& [avg, f] : ranked) out.order.push_back(f);
  return out;
}

Layout greedy_similarity(std::span<const FunctionRecord> records, std::span<const FunctionId> subset) {
  Layout out;
  out.provenance = "greedy";
  if (subset.empty()) return out;

  auto by_name = [&](FunctionId a, FunctionId b) {
    if (records[a].name != records[b].name) return records[a].name < records[b].name;
    return a < b;
  };
  std::set<FunctionId, decltype(by_name)> remaining(by_name);
  std::unordered_map<std::uint64_t, std::vector<FunctionId>> postings;
  for (FunctionId f : subset) {
    if (f >= records.size()) throw InputError("greedy subset references an unknown function");
    if (!remaining.insert(f).second) throw InputError("greedy subset repeats a function");
    for (std::uint64_t h : records[f].content_hashes) postings[h].push_back(f);
  }

  auto jaccard = [&](FunctionId a, FunctionId b) {
    const auto& x = records[a].content_hashes;
    const auto& y = records[b].content_hashes;
    std::size_t common = 0;
    for (std::size_t i = 0, j = 0; i < x.size() && j < y.size();) {
      if (x[i] < y[j]) {
        ++i;
      } else if (y[j] < x[i]) {
        ++j;
      } else {
        ++common, ++i, ++j;
      }
    }
    const std::size_t unite = x.size() + y.size() - common;
    return unite == 0 ? 0.0 : static_cast<double>(common) / static_cast<double>(unite);
  };

  FunctionId current = *remaining.begin();
  for (FunctionId f : remaining) {
    if (records[f].content_hashes.size() > records[current].content_hashes.size()) current = f;
  }
  std::vector<std::uint8_t> is_candidate(records.size(), 0);
  std::vector<FunctionId> candidates;
  while (true) {
    remaining.erase(current);
    out.order.push_back(current);
    if (remaining.empty()) break;

    candidates.clear();
    for (std::uint64_t h : records[current].content_hashes) {
      for (FunctionId c : postings[h]) {
        if (!is_candidate[c] && remaining.contains(c)) {
          is_candidate[c] = 1;
          candidates.push_back(c);
        }
      }
    }
    if (candidates.empty()) {
      current = *remaining.begin();
      continue;
    }
    FunctionId best = candidates.front();
    double best_score = -1.0;
    for (FunctionId c : candidates) {
      is_candidate[c] = 0;
      const double s = jaccard(current, c);
      if (s > best_score || (s == best_score && by_name(c, best))) {
        best = c;
        best_score = s;
      }
    }
    current = best;
  }
  return out;
}

Layout random_layout(std::span<const FunctionId> functions, std::uint64_t seed) {
  Layout out;
  out.provenance = "random(seed=" + std::to_string(seed) + ")";
  out.order.assign(functions.begin(), functions.end());
  Rng rng(seed);
  rng.shuffle(std::span(out.order));
  return out;
}

std::string LayoutReport::to_json() const {
  nlohmann::ordered_json j;
  j["comparator"] = comparator;
  j["partitioner"] = partitioner;
  j["functions"] = functions;
  j["hot_functions"] = hot_functions;
  j["cold_functions"] = cold_functions;
  j["unique_cold_functions"] = unique_cold_functions;
  j["traces_loaded"] = traces_loaded;
  j["traces_sampled"] = traces_sampled;
  j["bps_graph"] = {{"utilities", bps_utilities}, {"edges", bps_edges}};
  j["bpc_graph"] = {{"utilities", bpc_utilities}, {"edges", bpc_edges}};
  j["curve_area"] = curve_area;
  j["kmer_metric"] = kmer_metric ? nlohmann::ordered_json(*kmer_metric) : nlohmann::ordered_json();
  if (hot_seconds || cold_seconds) {
    j["timing"] = {{"hot_seconds", hot_seconds.value_or(0.0)}, {"cold_seconds", cold_seconds.value_or(0.0)}};
  }
  return j.dump(2) + "\n";
}

LayoutResult compute_layout(const PipelineInputs& inputs, const PipelineConfig& cfg,
                            Comparator comparator) {
  cfg.partitioner.validate();
  const std::size_t n = inputs.records.size();
  if (inputs.symbols.size() != n) throw InvariantError("symbol table and records disagree");

  LayoutResult result;
  LayoutReport& report = result.report;
  report.comparator = std::string(comparator_name(comparator));
  report.partitioner = cfg.partitioner.describe();
  report.functions = n;
  report.traces_loaded = inputs.traces.size();

  const TraceSet sampled = reservoir_sample(inputs.traces, cfg.sample_cap, cfg.partitioner.seed);
  report.traces_sampled = sampled.traces.size();

  std::vector<std::uint8_t> hot(n, 0);
  for (const Trace& t : sampled.traces) {
    for (FunctionId f : t.sequence) hot[f] = 1;
  }

  // Hints only apply to uninstrumented functions the manifest marks hot.
  std::vector<CallerHint> hints;
  for (const CallerHint& h : inputs.hints) {
    if (hot[h.callee]) {
      result.warnings.push_back("hinted function " + inputs.symbols.name(h.callee) +
                                " appears in a trace; hint ignored");
    } else if (!inputs.records[h.callee].hot) {
      result.warnings.push_back("hinted function " + inputs.symbols.name(h.callee) +
                                " is not marked hot in the manifest; hint ignored");
    } else {
      hints.push_back(h);
    }
  }

  std::vector<FunctionId> hot_functions;
  for (FunctionId f = 0; f < n; ++f) {
    if (hot[f]) hot_functions.push_back(f);
  }

  const auto hot_start = std::chrono::steady_clock::now();
  Layout hot_layout;
  switch (comparator) {
    case Comparator::Bp:
      if (!sampled.traces.empty()) {
        const BpsGraph bps = build_bps_graph(sampled, ThresholdScheme::parse(cfg.thresholds, sampled.max_length()));
        report.bps_utilities = bps.graph.num_utilities();
        report.bps_edges = bps.graph.num_edges();
        std::vector<FunctionId> initial(bps.functions.size());
        std::iota(initial.begin(), initial.end(), FunctionId{0});
        hot_layout = reorder(bps.graph, initial, cfg.partitioner);
        for (FunctionId& f : hot_layout.order) f = bps.functions[f];
      }
      break;
    case Comparator::Random:
      hot_layout = random_layout(hot_functions, cfg.partitioner.seed);
      break;
    case Comparator::OrderAvg:
      hot_layout = order_avg(sampled.traces, inputs.symbols);
      break;
    case Comparator::Baseline:
    case Comparator::Greedy:
      hot_layout.order = hot_functions;
      break;
  }
  if (comparator != Comparator::Baseline) {
    hot_layout = apply_caller_hints(hot_layout, hints, &result.warnings, &inputs.symbols);
    for (FunctionId f : hot_layout.order) hot[f] = 1;
  }
  const double hot_seconds = seconds_since(hot_start);

  std::vector<FunctionId> cold_functions;
  for (FunctionId f = 0; f < n; ++f) {
    if (!hot[f]) cold_functions.push_back(f);
  }
  report.hot_functions = n - cold_functions.size();
  report.cold_functions = cold_functions.size();

  const auto cold_start = std::chrono::steady_clock::now();
  std::vector<FunctionId> cold_order;
  std::vector<FunctionRecord> cold_records;
  cold_records.reserve(cold_functions.size());
  for (FunctionId f : cold_functions) cold_records.push_back(inputs.records[f]);
  std::vector<DedupGroup> groups = group_identical(cold_records);
  report.unique_cold_functions = groups.size();
  switch (comparator) {
    case Comparator::Bp: {
      const BpcGraph bpc = build_bpc_graph(cold_records);
      report.bpc_utilities = bpc.graph.num_utilities();
      report.bpc_edges = bpc.graph.num_edges();
      std::vector<FunctionId> initial(bpc.groups.size());
      std::iota(initial.begin(), initial.end(), FunctionId{0});
      PartitionerConfig cold_cfg = cfg.partitioner;
      cold_cfg.seed = splitmix64(cfg.partitioner.seed ^ 0xc01dULL);
      const Layout unique = reorder(bpc.graph, initial, cold_cfg);
      for (std::size_t i : expand_dedup(unique.order, bpc.groups)) cold_order.push_back(cold_functions[i]);
      break;
    }
    case Comparator::Random:
      cold_order = random_layout(cold_functions, splitmix64(cfg.partitioner.seed ^ 0xc01dULL)).order;
      break;
    case Comparator::Greedy:
      cold_order = greedy_similarity(inputs.records, cold_functions).order;
      break;
    case Comparator::Baseline:
    case Comparator::OrderAvg:
      cold_order = cold_functions;
      break;
  }
  const double cold_seconds = seconds_since(cold_start);

  if (comparator == Comparator::Baseline) {
    result.order.resize(n);
    std::iota(result.order.begin(), result.order.end(), FunctionId{0});
    result.hot_count = 0;
  } else {
    result.order = hot_layout.order;
    result.hot_count = result.order.size();
    result.order.insert(result.order.end(), cold_order.begin(), cold_order.end());
  }
  if (result.order.size() != n) {
    throw InvariantError("layout has " + std::to_string(result.order.size()) + " entries for " +
                         std::to_string(n) + " functions");
  }

  PagingModel model;
  model.page_size = cfg.page_size;
  for (const FunctionRecord& r : inputs.records) model.function_sizes.push_back(r.size);
  report.curve_area = curve_area(simulate_page_faults(result.order, sampled, model, &inputs.symbols));

  if (!inputs.bodies.empty()) {
    const bool complete = std::all_of(inputs.bodies.begin(), inputs.bodies.end(),
                                      [](const auto& b) { return b.has_value(); });
    if (complete) {
      report.kmer_metric = kmer_window_metric(layout_to_bytes(result.order, inputs.bodies), cfg.kmer);
    } else {
      result.warnings.push_back("some functions have no body file; k-mer metric skipped");
    }
  }
  if (cfg.report_timing) {
    report.hot_seconds = hot_seconds;
    report.cold_seconds = cold_seconds;
  }
  return result;
}

LayoutResult run_pipeline(const PipelineConfig& cfg) {
  cfg.validate();
  PipelineInputs inputs = load_inputs(cfg);
  LayoutResult result = compute_layout(inputs, cfg, cfg.comparator);
  result.warnings.insert(result.warnings.begin(), inputs.warnings.begin(), inputs.warnings.end());

  {
    std::ofstream out(cfg.output_path, std::ios::binary);
    if (!out) throw InputError("cannot write " + cfg.output_path.string());
    write_order_file(out, result.order, inputs.symbols);
  }
  if (!cfg.report_path.empty()) {
    std::ofstream out(cfg.report_path, std::ios::binary);
    if (!out) throw InputError("cannot write " + cfg.report_path.string());
    out << result.report.to_json();
  }
  return result;
}

void write_order_file(std::ostream& out, std::span<const FunctionId> order, const SymbolTable& symbols) {
  for (FunctionId f : order) out << symbols.name(f) << '\n';
}

std::vector<std::string> read_order_file(std::istream& in) {
  std::vector<std::string> names;
  std::string line;
  while (std::getline(in, line)) {
    std::string name = trim(line);
    if (!name.empty()) names.push_back(std::move(name));
  }
  return names;
}

std::vector<std::pair<std::string, std::string>> read_config_file(const std::filesystem::path& path) {
  auto in = open_input(path);
  std::vector<std::pair<std::string, std::string>> entries;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw InputError(path.string() + ":" + std::to_string(line_no) + ": expected key = value");
    }
    std::string key = trim(std::string_view(line).substr(0, eq));
    std::string value = trim(std::string_view(line).substr(eq + 1));
    if (key.empty()) throw InputError(path.string() + ":" + std::to_string(line_no) + ": empty key");
    entries.emplace_back(std::move(key), std::move(value));
  }
  return entries;
}

}  // namespace fnlayout
