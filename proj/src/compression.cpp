#include "fnlayout/compression.hpp"

#include <algorithm>
#include <charconv>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <unordered_map>

#include "fnlayout/error.hpp"
#include "fnlayout/random.hpp"

namespace fnlayout {

void FunctionRecord::normalize() {
  std::sort(content_hashes.begin(), content_hashes.end());
  content_hashes.erase(std::unique(content_hashes.begin(), content_hashes.end()), content_hashes.end());
}

namespace {

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  while (true) {
    const auto pos = text.find(sep);
    parts.push_back(text.substr(0, pos));
    if (pos == std::string_view::npos) break;
    text.remove_prefix(pos + 1);
  }
  return parts;
}

template <typename T>
T parse_number(std::string_view text, int base, const std::string& what, std::size_t line) {
  T value{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value, base);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) {
    throw InputError("manifest line " + std::to_string(line) + ": bad " + what + " '" +
                     std::string(text) + "'");
  }
  return value;
}

}  // namespace

std::vector<FunctionRecord> read_manifest(std::istream& in) {
  std::vector<FunctionRecord> records;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    const auto fields = split(line, '\t');
    if (fields.size() < 3 || fields.size() > 4) {
      throw InputError("manifest line " + std::to_string(line_no) +
                       ": expected name<TAB>size<TAB>hot|cold<TAB>hashes");
    }
    FunctionRecord rec;
    rec.name = std::string(fields[0]);
    if (rec.name.empty()) throw InputError("manifest line " + std::to_string(line_no) + ": empty name");
    rec.size = parse_number<std::uint64_t>(fields[1], 10, "size", line_no);
    if (rec.size == 0) throw InputError("manifest line " + std::to_string(line_no) + ": size must be >= 1");
    if (fields[2] == "hot") {
      rec.hot = true;
    } else if (fields[2] != "cold") {
      throw InputError("manifest line " + std::to_string(line_no) + ": expected hot or cold");
    }
    if (fields.size() == 4 && !fields[3].empty()) {
      for (std::string_view h : split(fields[3], ',')) {
        if (h.starts_with("0x") || h.starts_with("0X")) h.remove_prefix(2);
        rec.content_hashes.push_back(parse_number<std::uint64_t>(h, 16, "hash", line_no));
      }
    }
    rec.normalize();
    records.push_back(std::move(rec));
  }
  return records;
}

void write_manifest(std::ostream& out, std::span<const FunctionRecord> records) {
  char buf[20];
  for (const FunctionRecord& rec : records) {
    out << rec.name << '\t' << rec.size << '\t' << (rec.hot ? "hot" : "cold") << '\t';
    for (std::size_t i = 0; i < rec.content_hashes.size(); ++i) {
      if (i > 0) out << ',';
      auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), rec.content_hashes[i], 16);
      out << std::string_view(buf, ptr - buf);
    }
    out << '\n';
  }
}

namespace {

struct HashSetHasher {
  std::size_t operator()(const std::vector<std::uint64_t>& v) const {
    std::uint64_t h = v.size();
    for (std::uint64_t x : v) h = splitmix64(h ^ x);
    return static_cast<std::size_t>(h);
  }
};

}  // namespace

std::vector<DedupGroup> group_identical(std::span<const FunctionRecord> records) {
  std::vector<DedupGroup> groups;
  std::unordered_map<std::vector<std::uint64_t>, std::size_t, HashSetHasher> index;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& hashes = records[i].content_hashes;
    if (!hashes.empty()) {
      auto [it, inserted] = index.try_emplace(hashes, groups.size());
      if (!inserted) {
        groups[it->second].members.push_back(i);
        continue;
      }
    }
    groups.push_back(DedupGroup{i, {i}});
  }
  return groups;
}

BpcGraph build_bpc_graph(std::span<const FunctionRecord> records) {
  BpcGraph out;
  out.groups = group_identical(records);

  std::vector<std::pair<std::uint64_t, FunctionId>> occurrences;
  for (std::size_t g = 0; g < out.groups.size(); ++g) {
    for (std::uint64_t h : records[out.groups[g].representative].content_hashes) {
      occurrences.emplace_back(h, static_cast<FunctionId>(g));
    }
  }
  std::sort(occurrences.begin(), occurrences.end());

  // Most hashes occur once; only runs of two or more become utilities.
  std::vector<Edge> edges;
  UtilityId next = 0;
  for (std::size_t i = 0; i < occurrences.size();) {
    std::size_t j = i + 1;
    while (j < occurrences.size() && occurrences[j].first == occurrences[i].first) ++j;
    if (j - i >= 2) {
      for (std::size_t k = i; k < j; ++k) edges.push_back({occurrences[k].second, next});
      ++next;
    }
    i = j;
  }
  out.graph = BipartiteGraph::build(edges, out.groups.size());
  return out;
}

std::vector<std::size_t> expand_dedup(std::span<const FunctionId> unique_layout,
                                      std::span<const DedupGroup> groups) {
  std::vector<std::uint8_t> placed(groups.size(), 0);
  std::vector<std::size_t> out;
  for (FunctionId g : unique_layout) {
    if (g >= groups.size()) throw InputError("layout names unknown dedup group " + std::to_string(g));
    if (placed[g]) throw InputError("layout repeats dedup group " + std::to_string(g));
    placed[g] = 1;
    out.insert(out.end(), groups[g].members.begin(), groups[g].members.end());
  }
  for (std::size_t g = 0; g < groups.size(); ++g) {
    if (!placed[g]) {
      throw InputError("layout is missing dedup group " + std::to_string(g) + " (function #" +
                       std::to_string(groups[g].representative) + ")");
    }
  }
  return out;
}

void KmerMetricParams::validate() const {
  if (k < 1) throw InputError("k must be at least 1");
  if (window < k) throw InputError("window must be at least k");
  if (stride < 1) throw InputError("stride must be at least 1");
}

namespace {

// Dense id per k-mer start position; equal k-mers share an id.
std::vector<std::uint32_t> kmer_ids(std::span<const std::uint8_t> data, std::size_t k,
                                    std::size_t& distinct) {
  const std::size_t positions = data.size() - k + 1;
  std::vector<std::uint32_t> ids(positions);
  if (k <= 8) {
    std::vector<std::uint64_t> codes(positions);
    std::uint64_t code = 0;
    const std::uint64_t mask = k == 8 ? ~std::uint64_t{0} : (std::uint64_t{1} << (8 * k)) - 1;
    for (std::size_t i = 0; i < data.size(); ++i) {
      code = ((code << 8) | data[i]) & mask;
      if (i + 1 >= k) codes[i + 1 - k] = code;
    }
    std::vector<std::uint64_t> sorted = codes;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    for (std::size_t i = 0; i < positions; ++i) {
      ids[i] = static_cast<std::uint32_t>(std::lower_bound(sorted.begin(), sorted.end(), codes[i]) -
                                          sorted.begin());
    }
    distinct = sorted.size();
    return ids;
  }
  std::unordered_map<std::string_view, std::uint32_t> index;
  index.reserve(positions);
  const auto* chars = reinterpret_cast<const char*>(data.data());
  for (std::size_t i = 0; i < positions; ++i) {
    auto [it, inserted] = index.try_emplace(std::string_view(chars + i, k),
                                            static_cast<std::uint32_t>(index.size()));
    ids[i] = it->second;
  }
  distinct = index.size();
  return ids;
}

}  // namespace

std::vector<std::uint32_t> kmer_window_profile(std::span<const std::uint8_t> data,
                                               const KmerMetricParams& params) {
  params.validate();
  const std::size_t k = params.k;
  if (data.size() < k) return {};
  const std::size_t window = std::min(params.window, data.size());

  std::size_t distinct_total = 0;
  const std::vector<std::uint32_t> ids = kmer_ids(data, k, distinct_total);
  std::vector<std::uint32_t> count(distinct_total, 0);
  std::uint32_t distinct = 0;
  const auto add = [&](std::size_t pos) {
    if (count[ids[pos]]++ == 0) ++distinct;
  };
  const auto remove = [&](std::size_t pos) {
    if (--count[ids[pos]] == 0) --distinct;
  };

  // The window starting at s holds the k-mers starting in [s, s + window - k].
  const std::size_t per_window = window - k + 1;
  const std::size_t last_start = data.size() - window;
  std::vector<std::uint32_t> profile;
  profile.reserve(last_start / params.stride + 1);

  std::size_t lo = 0;
  std::size_t hi = per_window;
  for (std::size_t pos = lo; pos < hi; ++pos) add(pos);
  profile.push_back(distinct);
  for (std::size_t start = params.stride; start <= last_start; start += params.stride) {
    const std::size_t new_lo = start;
    const std::size_t new_hi = start + per_window;
    for (std::size_t pos = lo; pos < std::min(new_lo, hi); ++pos) remove(pos);
    for (std::size_t pos = std::max(hi, new_lo); pos < new_hi; ++pos) add(pos);
    lo = new_lo;
    hi = new_hi;
    profile.push_back(distinct);
  }
  return profile;
}

std::uint64_t kmer_window_metric(std::span<const std::uint8_t> data, const KmerMetricParams& params) {
  std::uint64_t total = 0;
  for (std::uint32_t c : kmer_window_profile(data, params)) total += c;
  return total;
}

Bytes layout_to_bytes(std::span<const FunctionId> layout, std::span<const std::optional<Bytes>> bodies,
                      const SymbolTable* names) {
  std::size_t total = 0;
  for (FunctionId f : layout) {
    if (f >= bodies.size() || !bodies[f]) {
      const std::string label =
          names != nullptr && f < names->size() ? names->name(f) : "#" + std::to_string(f);
      throw InputError("function " + label + " has no body");
    }
    total += bodies[f]->size();
  }
  Bytes out;
  out.reserve(total);
  for (FunctionId f : layout) out.insert(out.end(), bodies[f]->begin(), bodies[f]->end());
  return out;
}

std::vector<std::uint64_t> shingle_hashes(std::span<const std::uint8_t> body, std::size_t width) {
  if (width == 0) throw InputError("shingle width must be positive");
  std::vector<std::uint64_t> out;
  if (body.empty()) return out;
  const std::size_t w = std::min(width, body.size());
  out.reserve(body.size() - w + 1);
  for (std::size_t i = 0; i + w <= body.size(); ++i) {
    std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
    for (std::size_t j = 0; j < w; ++j) h = (h ^ body[i + j]) * 0x100000001b3ULL;
    out.push_back(splitmix64(h));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

Bytes read_file_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  return Bytes(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

std::vector<std::optional<Bytes>> read_bodies(const std::filesystem::path& dir,
                                              std::span<const FunctionRecord> records) {
  if (!std::filesystem::is_directory(dir)) throw InputError(dir.string() + " is not a directory");
  std::vector<std::optional<Bytes>> bodies(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto path = dir / records[i].name;
    if (std::filesystem::is_regular_file(path)) bodies[i] = read_file_bytes(path);
  }
  return bodies;
}

}  // namespace fnlayout
