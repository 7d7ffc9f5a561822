#include "fnlayout/startup.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <unordered_map>
#include <unordered_set>

#include "fnlayout/error.hpp"

namespace fnlayout {

void validate_trace(const Trace& trace) {
  std::unordered_set<FunctionId> seen;
  seen.reserve(trace.size());
  for (FunctionId f : trace.sequence) {
    if (!seen.insert(f).second) {
      throw InputError("trace lists function " + std::to_string(f) + " twice");
    }
  }
}

std::size_t TraceSet::max_length() const {
  std::size_t longest = 0;
  for (const Trace& t : traces) longest = std::max(longest, t.size());
  return longest;
}

ReservoirSampler::ReservoirSampler(std::size_t cap, std::uint64_t seed) : cap_(cap), rng_(seed) {
  if (cap_ == 0) throw InputError("sample cap must be at least 1");
  sample_.reserve(cap_);
}

void ReservoirSampler::offer(Trace trace) {
  ++seen_;
  if (seen_ <= cap_) {
    sample_.push_back(std::move(trace));
    return;
  }
  // A uniform slot in [0, seen) lands in the reservoir with probability
  // cap/seen, and is then a uniform choice among the residents.
  const std::uint64_t slot = rng_.below(seen_);
  if (slot < cap_) sample_[slot] = std::move(trace);
}

TraceSet ReservoirSampler::take() && {
  TraceSet out;
  out.traces = std::move(sample_);
  out.sample_cap = cap_;
  return out;
}

TraceSet reservoir_sample(std::span<const Trace> stream, std::size_t cap, std::uint64_t seed) {
  ReservoirSampler sampler(cap, seed);
  for (const Trace& t : stream) sampler.offer(t);
  return std::move(sampler).take();
}

ThresholdScheme ThresholdScheme::doubling(std::size_t max_length) {
  ThresholdScheme scheme;
  std::uint64_t t = 1;
  scheme.thresholds.push_back(1);
  while (t < max_length) {
    t *= 2;
    scheme.thresholds.push_back(static_cast<std::uint32_t>(t));
  }
  return scheme;
}

ThresholdScheme ThresholdScheme::parse(std::string_view text, std::size_t max_length) {
  if (text == "doubling") return doubling(max_length);
  ThresholdScheme scheme;
  while (!text.empty()) {
    const auto comma = text.find(',');
    const std::string_view item = text.substr(0, comma);
    std::uint32_t value = 0;
    auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), value);
    if (ec != std::errc{} || ptr != item.data() + item.size()) {
      throw InputError("bad threshold '" + std::string(item) + "'");
    }
    scheme.thresholds.push_back(value);
    text = comma == std::string_view::npos ? std::string_view{} : text.substr(comma + 1);
  }
  scheme.validate();
  return scheme;
}

void ThresholdScheme::validate() const {
  if (thresholds.empty()) throw InputError("threshold scheme is empty");
  for (std::size_t i = 0; i < thresholds.size(); ++i) {
    if (thresholds[i] < 1) throw InputError("thresholds must be at least 1");
    if (i > 0 && thresholds[i] <= thresholds[i - 1]) {
      throw InputError("thresholds must be strictly increasing");
    }
  }
}

BpsGraph build_bps_graph(const TraceSet& traces, const ThresholdScheme& scheme) {
  if (traces.traces.empty()) throw InputError("no traces to build a start-up graph from");
  scheme.validate();

  BpsGraph out;
  std::unordered_map<FunctionId, FunctionId> local_id;
  for (const Trace& t : traces.traces) {
    for (FunctionId f : t.sequence) {
      if (local_id.try_emplace(f, static_cast<FunctionId>(out.functions.size())).second) {
        out.functions.push_back(f);
      }
    }
  }
  const auto local = [&](FunctionId f) { return local_id.at(f); };

  std::vector<Edge> edges;
  UtilityId next = 0;
  for (const Trace& t : traces.traces) {
    validate_trace(t);
    std::vector<FunctionId> ids(t.size());
    std::transform(t.sequence.begin(), t.sequence.end(), ids.begin(), local);
    bool whole_trace_emitted = false;
    for (std::uint32_t threshold : scheme.thresholds) {
      std::size_t prefix = threshold;
      if (prefix >= t.size()) {
        if (whole_trace_emitted) break;
        prefix = t.size();
        whole_trace_emitted = true;
      }
      for (std::size_t i = 0; i < prefix; ++i) edges.push_back({ids[i], next});
      ++next;
    }
  }
  out.graph = BipartiteGraph::build(edges, out.functions.size());
  return out;
}

std::vector<std::uint32_t> trace_page_faults(std::span<const FunctionId> layout, const Trace& trace,
                                             const PagingModel& model) {
  TraceSet single;
  single.traces.push_back(trace);
  EvaluationCurve curve = simulate_page_faults(layout, single, model);
  std::vector<std::uint32_t> out(trace.size());
  for (std::size_t i = 0; i < trace.size(); ++i) out[i] = static_cast<std::uint32_t>(curve.values[i]);
  return out;
}

EvaluationCurve simulate_page_faults(std::span<const FunctionId> layout, const TraceSet& traces,
                                     const PagingModel& model, const SymbolTable* names) {
  if (model.page_size == 0) throw InputError("page size must be positive");
  const std::size_t n = model.function_sizes.size();
  constexpr std::uint64_t kUnplaced = ~std::uint64_t{0};
  std::vector<std::uint64_t> first_page(n, kUnplaced);
  std::vector<std::uint64_t> last_page(n, 0);
  std::uint64_t offset = 0;
  for (FunctionId f : layout) {
    if (f >= n) throw InputError("layout names function " + std::to_string(f) + " without a size");
    const std::uint64_t size = model.function_sizes[f];
    if (size == 0) throw InputError("function " + std::to_string(f) + " has size 0");
    first_page[f] = offset / model.page_size;
    last_page[f] = (offset + size - 1) / model.page_size;
    offset += size;
  }
  const std::uint64_t total_pages = offset == 0 ? 0 : (offset - 1) / model.page_size + 1;

  const std::size_t steps = traces.max_length();
  EvaluationCurve curve;
  curve.values.assign(steps, 0.0);
  if (traces.traces.empty()) return curve;

  // Page p was touched by the current trace iff stamp[p] == trace number.
  std::vector<std::uint32_t> stamp(total_pages, 0);
  std::vector<std::uint64_t> sums(steps, 0);
  std::uint32_t trace_no = 0;
  for (const Trace& t : traces.traces) {
    ++trace_no;
    std::uint64_t faults = 0;
    for (std::size_t i = 0; i < steps; ++i) {
      if (i < t.size()) {
        const FunctionId f = t.sequence[i];
        if (f >= n || first_page[f] == kUnplaced) {
          const std::string label =
              names != nullptr && f < names->size() ? names->name(f) : "#" + std::to_string(f);
          throw InputError("traced function " + label + " is not placed in the layout");
        }
        for (std::uint64_t p = first_page[f]; p <= last_page[f]; ++p) {
          if (stamp[p] != trace_no) {
            stamp[p] = trace_no;
            ++faults;
          }
        }
      }
      sums[i] += faults;
    }
  }
  const double count = static_cast<double>(traces.traces.size());
  for (std::size_t i = 0; i < steps; ++i) curve.values[i] = static_cast<double>(sums[i]) / count;
  return curve;
}

double curve_area(const EvaluationCurve& curve) {
  double area = 0.0;
  for (double v : curve.values) area += v;
  return area;
}

std::vector<Trace> read_traces(std::istream& in, SymbolTable& symbols) {
  std::vector<Trace> out;
  std::string line;
  std::unordered_set<FunctionId> seen;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream words(line);
    Trace trace;
    seen.clear();
    std::string name;
    while (words >> name) {
      const FunctionId id = symbols.intern(name);
      if (seen.insert(id).second) trace.sequence.push_back(id);
    }
    if (!trace.sequence.empty()) out.push_back(std::move(trace));
  }
  return out;
}

void write_traces(std::ostream& out, std::span<const Trace> traces, const SymbolTable& symbols) {
  for (const Trace& t : traces) {
    for (std::size_t i = 0; i < t.size(); ++i) {
      if (i > 0) out << ' ';
      out << symbols.name(t.sequence[i]);
    }
    out << '\n';
  }
}

void write_curve_csv(std::ostream& out, const EvaluationCurve& curve) {
  out << "t,p_t\n";
  for (std::size_t t = 0; t < curve.values.size(); ++t) out << (t + 1) << ',' << curve.values[t] << '\n';
}

}  // namespace fnlayout
