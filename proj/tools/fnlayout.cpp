// fnlayout: function layout for start-up and compression.
//
//   fnlayout reorder --traces t.txt --manifest m.tsv --output order.txt
//   fnlayout compare --traces t.txt --manifest m.tsv --output summary.csv
//   fnlayout simulate --order order.txt --traces t.txt --manifest m.tsv
//
// Every subcommand accepts --config FILE with `key = value` lines named
// after the long flags; flags given on the command line win.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fnlayout/error.hpp"
#include "fnlayout/kernels.hpp"
#include "fnlayout/pipeline.hpp"
#include "fnlayout/synth.hpp"

namespace fs = std::filesystem;
using namespace fnlayout;

namespace {

std::ifstream open_in(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  return in;
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path.string());
  return out;
}

struct PartitionerFlags {
  std::string objective = "log-gap";
  bool binary_log = false;

  void add(CLI::App& app, PartitionerConfig& cfg) {
    app.add_option("--objective", objective, "log-gap, fanout[:p] or abs-diff")->capture_default_str();
    app.add_flag("--log2", binary_log, "Evaluate the log-gap cost with base-2 logs");
    app.add_option("--max-depth", cfg.max_depth, "Recursion depth cap")->capture_default_str();
    app.add_option("--iterations", cfg.max_iterations, "Refinement rounds per split")->capture_default_str();
    app.add_option("--skip-prob", cfg.skip_probability, "Chance to skip a candidate exchange")
        ->capture_default_str();
    app.add_option("--seed", cfg.seed, "Random seed")->capture_default_str();
    app.add_option("--threads", cfg.threads, "Worker threads")->capture_default_str();
    app.add_option("--parallel-depth", cfg.parallel_depth, "Fork subproblems above this depth")
        ->capture_default_str();
  }

  void apply(PartitionerConfig& cfg) const {
    cfg.objective = Objective::parse(objective);
    if (binary_log) cfg.objective.log_base = LogBase::Binary;
    cfg.validate();
  }
};

struct PipelineFlags {
  PipelineConfig cfg;
  PartitionerFlags partitioner;
  std::string comparator = "bp";

  void add_inputs(CLI::App& app) {
    app.add_option("--traces", cfg.trace_path, "Trace file, one start-up per line")->required();
    app.add_option("--manifest", cfg.manifest_path, "Function manifest (TSV)")->required();
    app.add_option("--hints", cfg.hints_path, "Caller hints for uninstrumented functions");
    app.add_option("--bodies", cfg.bodies_dir, "Directory of function bodies, one file per name");
    app.add_option("--thresholds", cfg.thresholds, "'doubling' or a list such as 2,8,32")
        ->capture_default_str();
    app.add_option("--sample-cap", cfg.sample_cap, "Traces kept by reservoir sampling")->capture_default_str();
    app.add_option("--page-size", cfg.page_size, "Page size in bytes")->capture_default_str();
    app.add_option("--kmer-k", cfg.kmer.k, "k-mer length")->capture_default_str();
    app.add_option("--kmer-window", cfg.kmer.window, "k-mer metric window in bytes")->capture_default_str();
    app.add_flag("--timing", cfg.report_timing, "Include wall-clock timings in the report");
    partitioner.add(app, cfg.partitioner);
  }

  void finish() {
    partitioner.apply(cfg.partitioner);
    cfg.comparator = parse_comparator(comparator);
  }
};

void print_warnings(const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
}

// Expands `--config FILE` into `--key=value` arguments placed before the
// command-line ones, so that later command-line values take precedence.
std::vector<std::string> expand_config(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  std::vector<std::string> out;
  std::vector<std::string> rest;
  fs::path config;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      config = args[++i];
    } else if (args[i].starts_with("--config=")) {
      config = args[i].substr(9);
    } else {
      rest.push_back(args[i]);
    }
  }
  if (config.empty()) return rest;
  std::size_t split = 0;
  while (split < rest.size() && rest[split].starts_with("-")) ++split;
  if (split < rest.size()) ++split;  // keep the subcommand first
  out.assign(rest.begin(), rest.begin() + static_cast<std::ptrdiff_t>(split));
  for (const auto& [key, value] : read_config_file(config)) out.push_back("--" + key + "=" + value);
  out.insert(out.end(), rest.begin() + static_cast<std::ptrdiff_t>(split), rest.end());
  return out;
}

int run(int argc, char** argv) {
  CLI::App app{"Function layout for start-up performance and compressed size"};
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.set_version_flag("--version", std::string("fnlayout 1.0 (") +
                                        std::string(kernels::isa_name(kernels::active_kernels().isa)) + ")");
  // Accepted here only so --help lists it; expand_config consumes it.
  std::string config_unused;
  app.add_option("--config", config_unused, "key = value file; flags override it");

  // reorder
  PipelineFlags reorder_flags;
  auto* reorder = app.add_subcommand("reorder", "Compute a layout and write an order file");
  reorder_flags.add_inputs(*reorder);
  reorder->add_option("--output", reorder_flags.cfg.output_path, "Order file to write")->required();
  reorder->add_option("--report", reorder_flags.cfg.report_path, "JSON report to write");
  reorder->add_option("--comparator", reorder_flags.comparator, "bp, baseline, random, order-avg or greedy")
      ->capture_default_str();

  // compare
  PipelineFlags compare_flags;
  fs::path compare_orders;
  auto* compare = app.add_subcommand("compare", "Run every comparator and write a CSV summary");
  compare_flags.add_inputs(*compare);
  compare->add_option("--output", compare_flags.cfg.output_path, "CSV summary (default: stdout)");
  compare->add_option("--orders-dir", compare_orders, "Also write <comparator>.order files here");

  // simulate
  fs::path sim_order, sim_traces, sim_manifest, sim_csv;
  std::uint64_t sim_page = 16384;
  std::size_t sim_cap = 0;
  std::uint64_t sim_seed = 0;
  auto* simulate = app.add_subcommand("simulate", "Page-fault curve of an order file");
  simulate->add_option("--order", sim_order, "Order file")->required();
  simulate->add_option("--traces", sim_traces, "Trace file")->required();
  simulate->add_option("--manifest", sim_manifest, "Manifest with function sizes")->required();
  simulate->add_option("--page-size", sim_page, "Page size in bytes")->capture_default_str();
  simulate->add_option("--sample-cap", sim_cap, "Sample this many traces first (0 keeps all)");
  simulate->add_option("--seed", sim_seed, "Sampling seed")->capture_default_str();
  simulate->add_option("--csv", sim_csv, "Write t,p_t rows here");

  // kmer-metric
  fs::path km_input, km_order, km_bodies, km_csv;
  KmerMetricParams km;
  auto* kmer = app.add_subcommand("kmer-metric", "Distinct k-mers summed over sliding windows");
  kmer->add_option("--input", km_input, "Raw byte file");
  kmer->add_option("--order", km_order, "Order file; concatenates --bodies in this order");
  kmer->add_option("--bodies", km_bodies, "Directory of function bodies");
  kmer->add_option("-k,--kmer-k", km.k, "k-mer length")->capture_default_str();
  kmer->add_option("--window", km.window, "Window in bytes")->capture_default_str();
  kmer->add_option("--stride", km.stride, "Window stride in bytes")->capture_default_str();
  kmer->add_option("--csv", km_csv, "Write start,distinct rows, one per window");

  // sample-traces
  fs::path st_traces, st_output;
  std::size_t st_cap = 300;
  std::uint64_t st_seed = 0;
  auto* sample = app.add_subcommand("sample-traces", "Reservoir-sample a trace file");
  sample->add_option("--traces", st_traces, "Trace file")->required();
  sample->add_option("--cap", st_cap, "Traces to keep")->capture_default_str();
  sample->add_option("--seed", st_seed, "Random seed")->capture_default_str();
  sample->add_option("--output", st_output, "Output trace file (default: stdout)");

  // synth
  std::string sy_kind = "startup";
  fs::path sy_dir;
  StartupAppParams sy_app;
  FamilyCorpusParams sy_fam;
  std::uint64_t sy_seed = 1;
  auto* synth = app.add_subcommand("synth", "Write a synthetic manifest, traces and bodies");
  synth->add_option("--kind", sy_kind, "startup or family")->capture_default_str()->check(
      CLI::IsMember({"startup", "family"}));
  synth->add_option("--out-dir", sy_dir, "Directory to create")->required();
  synth->add_option("--functions", sy_app.functions, "startup: number of functions")->capture_default_str();
  synth->add_option("--traces", sy_app.traces, "startup: number of traces")->capture_default_str();
  synth->add_option("--families", sy_fam.families, "family: number of families")->capture_default_str();
  synth->add_option("--seed", sy_seed, "Random seed")->capture_default_str();

  const auto args = expand_config(argc, argv);
  std::vector<const char*> cargs{argv[0]};
  for (const auto& a : args) cargs.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(cargs.size()), cargs.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  if (reorder->parsed()) {
    reorder_flags.finish();
    const LayoutResult result = run_pipeline(reorder_flags.cfg);
    print_warnings(result.warnings);
    std::cerr << result.order.size() << " functions (" << result.hot_count << " hot), curve area "
              << result.report.curve_area << '\n';
  } else if (compare->parsed()) {
    compare_flags.finish();
    PipelineConfig cfg = compare_flags.cfg;
    if (cfg.output_path.empty()) cfg.output_path = "-";
    cfg.validate();
    const PipelineInputs inputs = load_inputs(cfg);
    print_warnings(inputs.warnings);
    if (!compare_orders.empty()) fs::create_directories(compare_orders);

    std::ostringstream csv;
    csv << "comparator,functions,hot,curve_area,kmer_metric,seconds\n";
    for (Comparator c : kAllComparators) {
      const auto start = std::chrono::steady_clock::now();
      const LayoutResult r = compute_layout(inputs, cfg, c);
      const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      if (c == Comparator::Bp) print_warnings(r.warnings);
      csv << comparator_name(c) << ',' << r.order.size() << ',' << r.report.hot_functions << ','
          << r.report.curve_area << ',';
      if (r.report.kmer_metric) csv << *r.report.kmer_metric;
      csv << ',' << (cfg.report_timing ? std::to_string(secs) : "") << '\n';
      if (!compare_orders.empty()) {
        auto out = open_out(compare_orders / (std::string(comparator_name(c)) + ".order"));
        write_order_file(out, r.order, inputs.symbols);
      }
    }
    if (cfg.output_path == "-") {
      std::cout << csv.str();
    } else {
      open_out(cfg.output_path) << csv.str();
    }
  } else if (simulate->parsed()) {
    SymbolTable symbols;
    std::vector<FunctionRecord> records;
    {
      auto in = open_in(sim_manifest);
      records = read_manifest(in);
    }
    for (const auto& r : records) symbols.intern(r.name);
    std::vector<Trace> traces;
    {
      auto in = open_in(sim_traces);
      traces = read_traces(in, symbols);
    }
    std::vector<std::string> names;
    {
      auto in = open_in(sim_order);
      names = read_order_file(in);
    }
    std::vector<FunctionId> layout;
    for (const auto& name : names) layout.push_back(symbols.intern(name));
    PagingModel model{sim_page, {}};
    for (std::size_t f = 0; f < symbols.size(); ++f) {
      model.function_sizes.push_back(f < records.size() ? records[f].size : 1);
    }
    TraceSet set = sim_cap > 0 ? reservoir_sample(traces, sim_cap, sim_seed) : TraceSet{traces, traces.size()};
    const EvaluationCurve curve = simulate_page_faults(layout, set, model, &symbols);
    if (!sim_csv.empty()) {
      auto out = open_out(sim_csv);
      write_curve_csv(out, curve);
    }
    std::cout << "traces " << set.traces.size() << "\ncurve_area " << curve_area(curve) << "\nfinal_faults "
              << (curve.values.empty() ? 0.0 : curve.values.back()) << '\n';
  } else if (kmer->parsed()) {
    km.validate();
    Bytes data;
    if (!km_input.empty()) {
      if (!km_order.empty()) throw InputError("give either --input or --order, not both");
      data = read_file_bytes(km_input);
    } else {
      if (km_order.empty() || km_bodies.empty()) throw InputError("need --input, or --order with --bodies");
      std::vector<std::string> names;
      {
        auto in = open_in(km_order);
        names = read_order_file(in);
      }
      for (const auto& name : names) {
        const Bytes body = read_file_bytes(km_bodies / name);
        data.insert(data.end(), body.begin(), body.end());
      }
    }
    const auto profile = kmer_window_profile(data, km);
    if (!km_csv.empty()) {
      auto out = open_out(km_csv);
      out << "start,distinct\n";
      for (std::size_t i = 0; i < profile.size(); ++i) out << i * km.stride << ',' << profile[i] << '\n';
    }
    std::uint64_t total = 0;
    for (std::uint32_t c : profile) total += c;
    std::cout << total << '\n';
  } else if (sample->parsed()) {
    SymbolTable symbols;
    std::vector<Trace> traces;
    {
      auto in = open_in(st_traces);
      traces = read_traces(in, symbols);
    }
    const TraceSet set = reservoir_sample(traces, st_cap, st_seed);
    if (st_output.empty()) {
      write_traces(std::cout, set.traces, symbols);
    } else {
      auto out = open_out(st_output);
      write_traces(out, set.traces, symbols);
    }
  } else if (synth->parsed()) {
    fs::create_directories(sy_dir);
    if (sy_kind == "startup") {
      sy_app.seed = sy_seed;
      const StartupApp a = make_startup_app(sy_app);
      SymbolTable symbols;
      for (const auto& r : a.records) symbols.intern(r.name);
      auto m = open_out(sy_dir / "manifest.tsv");
      write_manifest(m, a.records);
      auto t = open_out(sy_dir / "traces.txt");
      write_traces(t, a.traces, symbols);
    } else {
      sy_fam.seed = sy_seed;
      FamilyCorpus corpus = make_family_corpus(sy_fam);
      fs::create_directories(sy_dir / "bodies");
      for (std::size_t i = 0; i < corpus.records.size(); ++i) {
        auto out = open_out(sy_dir / "bodies" / corpus.records[i].name);
        out.write(reinterpret_cast<const char*>(corpus.bodies[i]->data()),
                  static_cast<std::streamsize>(corpus.bodies[i]->size()));
        // Hashes are re-derived from the bodies on load.
        corpus.records[i].content_hashes.clear();
      }
      auto m = open_out(sy_dir / "manifest.tsv");
      write_manifest(m, corpus.records);
      open_out(sy_dir / "traces.txt");
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const InvariantError& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
