#include "gyroproxy/cli/app.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <iostream>
#include <map>
#include <sstream>

#include "gyroproxy/cli/verify.hpp"
#include "gyroproxy/commsim.hpp"
#include "gyroproxy/grid.hpp"
#include "gyroproxy/kernels.hpp"
#include "gyroproxy/padding.hpp"
#include "gyroproxy/parallel.hpp"
#include "gyroproxy/timing.hpp"

namespace gyroproxy::cli {

namespace {

constexpr const char* kExitCodeHelp =
    "Exit codes:\n"
    "  0  success\n"
    "  1  verification failure (failed check or speedup below a reference floor)\n"
    "  2  invalid configuration or arguments\n"
    "  3  I/O failure (unreadable input, unwritable output)\n"
    "  4  resource exhaustion or internal error\n"
    "Environment:\n"
    "  GYROPROXY_THREADS  kernel thread count; --threads takes precedence\n";

std::string hex(std::uint64_t v) {
  std::ostringstream os;
  os << std::hex;
  os.width(16);
  os.fill('0');
  os << v;
  return os.str();
}

double parse_double(const std::string& text, const std::string& what) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(text, &pos);
    if (pos != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw IoError("bad number '" + text + "' in " + what);
  }
}

void emit(const RunConfig& config, const Metadata& meta, const Table& table) {
  if (!config.out.empty()) write_atomic(config.out, render_csv(meta, table));
  std::cout << (config.markdown ? render_markdown(table) : render_csv(meta, table));
}

int plan_padding(const RunConfig& config) {
  const auto rule = padding::parse_rule(config.rule);
  const auto primes = padding::parse_primes(config.primes);
  Table table{{"n_logical", "n_min", "n_padded", "factors", "score"}, {}};
  for (auto n : config.n_logical) {
    const auto plan = config.naive ? padding::naive_plan(n, rule) : padding::plan_padded_size(n, rule, primes);
    table.add_row({std::to_string(plan.n_logical), std::to_string(plan.n_min), std::to_string(plan.n_padded),
                   padding::format_factors(plan.factors), format_double(plan.cost_score)});
  }
  emit(config, make_metadata("plan-padding", std::nullopt), table);
  return kExitOk;
}

int fft_bench(const RunConfig& config) {
  Table table{{"size", "factors", "median_seconds"}, {}};
  for (auto n : config.sizes) {
    const auto t = time_fft(n, config.batch, config.reps, Seed{config.seed});
    table.add_row({std::to_string(n), padding::format_factors(padding::factorize(n)), format_double(t.median_s)});
  }
  auto meta = make_metadata("fft-bench", config.seed);
  meta.set("batch", std::to_string(config.batch));
  meta.set("reps", std::to_string(config.reps));
  meta.set("threads", std::to_string(thread_count()));
  emit(config, meta, table);
  return kExitOk;
}

int bench(const RunConfig& config) {
  auto meta = make_metadata("bench", config.seed);
  meta.set("threads", std::to_string(thread_count()));
  emit(config, meta, bench_table(config));
  return kExitOk;
}

int verify(const RunConfig& config) {
  bool passed = true;
  const auto table = verify_table(config, passed);
  emit(config, make_metadata("verify", config.seed), table);
  if (!passed) {
    std::cerr << "gyroproxy verify: one or more checks failed\n";
    return kExitVerificationFailed;
  }
  return kExitOk;
}

commsim::MachineTopology resolve_topology(const RunConfig& config) {
  if (!config.topology_file.empty()) return commsim::load_topology(config.topology_file);
  return commsim::builtin_topology(config.topology);
}

int comm_estimate(const RunConfig& config) {
  const auto shape = make_case(config.case_name);
  const auto topo = resolve_topology(config);
  const auto vm = commsim::VolumeModel::from_shape(shape);
  commsim::CommPlan plan;
  if (config.n1) {
    const std::size_t n1 = *config.n1;
    if (n1 == 0 || config.ranks % n1 != 0) {
      throw ParameterError("--n1 " + std::to_string(n1) + " does not divide " + std::to_string(config.ranks) + " ranks");
    }
    plan = {n1, config.ranks / n1,
            {config.spread_nodes > 1 ? commsim::PlacementKind::dim1_spread : commsim::PlacementKind::dim1_intra_node,
             config.spread_nodes},
            config.nodes};
  } else {
    plan = commsim::plan_decomposition(vm, config.ranks, config.nodes, topo);
  }
  const auto prediction = commsim::predict_report(vm, topo, plan);

  Table table{{"case", "topology", "n1", "n2", "placement", "dimension", "kind", "group_size", "group_nodes",
               "bytes_per_rank", "predicted_s"},
              {}};
  const auto placement = commsim::to_string(plan.placement);
  for (const auto& row : prediction.rows) {
    table.add_row({config.case_name, topo.name, std::to_string(plan.n1), std::to_string(plan.n2), placement,
                   std::to_string(row.dimension), std::string(commsim::to_string(row.kind)),
                   std::to_string(row.group_size), std::to_string(row.group_nodes), format_double(row.bytes_per_rank),
                   format_double(row.seconds)});
  }
  table.add_row({config.case_name, topo.name, std::to_string(plan.n1), std::to_string(plan.n2), placement, "all",
                 "total", std::to_string(plan.total_ranks()), std::to_string(plan.nodes), "",
                 format_double(prediction.total_seconds())});
  auto meta = make_metadata("comm-estimate", std::nullopt);
  meta.set("ranks", std::to_string(config.ranks));
  meta.set("nodes", std::to_string(config.nodes));
  emit(config, meta, table);
  return kExitOk;
}

int compare(const RunConfig& config) {
  const auto before = read_report(config.before);
  const auto after = read_report(config.after);
  const auto floors = config.floors.empty() ? std::vector<Floor>{} : read_floors(config.floors);
  const auto summary = summarize(before.table, after.table, config.before_variant, config.after_variant);

  Table table{{"case", "kernel", "before_median_s", "after_median_s", "ratio", "floor", "status"}, {}};
  bool gate_ok = true;
  for (const auto& row : summary.rows) {
    std::string floor_text;
    std::string status = "-";
    for (const auto& f : floors) {
      if (f.case_name == row.case_name && f.kernel == row.kernel) {
        floor_text = format_double(f.min_ratio);
        status = row.ratio() >= f.min_ratio ? "pass" : "FAIL";
        gate_ok = gate_ok && status == "pass";
      }
    }
    table.add_row({row.case_name, row.kernel, format_double(row.before_median_s), format_double(row.after_median_s),
                   format_double(row.ratio()), floor_text, status});
  }
  table.add_row({"all", "all", "", "", format_double(summary.overall_ratio()), "", "-"});
  auto meta = make_metadata("compare", std::nullopt);
  meta.set("before", config.before + ":" + config.before_variant);
  meta.set("after", config.after + ":" + config.after_variant);
  emit(config, meta, table);
  if (!gate_ok) {
    std::cerr << "gyroproxy compare: speedup below reference floor\n";
    return kExitVerificationFailed;
  }
  return kExitOk;
}

void add_common(CLI::App* sub, RunConfig& config, bool with_out = true) {
  if (with_out) sub->add_option("--out", config.out, "Write the CSV report here (write-then-rename)");
  sub->add_flag("--markdown", config.markdown, "Print a markdown table instead of CSV on stdout");
  sub->add_option("--threads", config.threads, "Kernel threads (overrides GYROPROXY_THREADS)");
}

}  // namespace

void RunConfig::validate() const {
  if ((command == "bench" || command == "fft-bench") && reps < 3) {
    throw ParameterError("--reps must be >= 3, got " + std::to_string(reps));
  }
  if (command == "bench" || command == "verify" || command == "comm-estimate") make_case(case_name);
  if (command == "bench") {
    if (kernels.empty() || variants.empty()) throw ParameterError("--kernels and --variants must be nonempty");
    for (const auto& k : kernels) kernels::parse_kernel(k);
    for (const auto& v : variants) kernels::parse_variant(v);
  }
  if (command == "verify" && seeds == 0) throw ParameterError("--seeds must be >= 1");
  if (command == "plan-padding") {
    if (n_logical.empty()) throw ParameterError("--n is required");
    for (auto n : n_logical) {
      if (n == 0) throw ParameterError("--n must be >= 1");
    }
    padding::parse_rule(rule);
    padding::parse_primes(primes);
  }
  if (command == "fft-bench") {
    if (sizes.empty()) throw ParameterError("--sizes must be nonempty");
    if (batch == 0) throw ParameterError("--batch must be >= 1");
    for (auto n : sizes) {
      if (n == 0) throw ParameterError("--sizes entries must be >= 1");
    }
  }
  if (command == "comm-estimate") {
    if (ranks == 0 || nodes == 0) throw ParameterError("--ranks and --nodes must be >= 1");
    if (topology_file.empty()) commsim::builtin_topology(topology);
    else if (!std::filesystem::is_regular_file(topology_file)) throw IoError("cannot read topology file " + topology_file);
    if (spread_nodes == 0) throw ParameterError("--spread-nodes must be >= 1");
  }
  if (command == "compare") {
    for (const auto* p : {&before, &after}) {
      if (p->empty()) throw ParameterError("--before and --after are required");
      if (!std::filesystem::is_regular_file(*p)) throw IoError("cannot read report " + *p);
    }
    if (!floors.empty() && !std::filesystem::is_regular_file(floors)) throw IoError("cannot read floors " + floors);
  }
  if (threads && *threads < 1) throw ParameterError("--threads must be >= 1");
  if (!out.empty()) check_output_location(out);
}

double SpeedupTable::overall_ratio() const noexcept {
  double before = 0.0;
  double after = 0.0;
  for (const auto& r : rows) {
    before += r.before_median_s;
    after += r.after_median_s;
  }
  return before / after;
}

SpeedupTable summarize(const Table& before, const Table& after, const std::string& before_variant,
                       const std::string& after_variant) {
  using Key = std::pair<std::string, std::string>;
  auto collect = [](const Table& t, const std::string& variant) {
    std::map<Key, double> out;
    std::vector<Key> order;
    const auto c = t.column_index("case");
    const auto k = t.column_index("kernel");
    const auto v = t.column_index("variant");
    const auto m = t.column_index("median_s");
    for (const auto& row : t.rows) {
      if (row[v] != variant) continue;
      Key key{row[c], row[k]};
      if (out.count(key)) throw CoverageError("duplicate row " + key.first + "/" + key.second + "/" + variant);
      out[key] = parse_double(row[m], "median_s");
      order.push_back(key);
    }
    return std::pair{out, order};
  };
  const auto [b, order] = collect(before, before_variant);
  const auto [a, unused] = collect(after, after_variant);
  (void)unused;

  std::string missing;
  for (const auto& [key, _] : b) {
    if (!a.count(key)) missing += " " + key.first + "/" + key.second + " (only in before)";
  }
  for (const auto& [key, _] : a) {
    if (!b.count(key)) missing += " " + key.first + "/" + key.second + " (only in after)";
  }
  if (!missing.empty()) throw CoverageError("reports cover different rows:" + missing);
  if (b.empty()) throw CoverageError("no rows for variants " + before_variant + " and " + after_variant);

  SpeedupTable table;
  for (const auto& key : order) table.rows.push_back({key.first, key.second, b.at(key), a.at(key)});
  return table;
}

std::vector<Floor> read_floors(const std::string& path) {
  const auto report = read_report(path);
  std::vector<Floor> floors;
  for (std::size_t r = 0; r < report.table.rows.size(); ++r) {
    floors.push_back({report.table.cell(r, "case"), report.table.cell(r, "kernel"),
                      parse_double(report.table.cell(r, "min_ratio"), path)});
  }
  return floors;
}

Table bench_table(const RunConfig& config) {
  const auto shape = make_case(config.case_name);
  const auto inputs = make_kernel_inputs(shape, Seed{config.seed});
  Table table{{"case", "kernel", "variant", "reps", "median_s", "min_s", "checksum"}, {}};
  for (const auto& k : config.kernels) {
    for (const auto& v : config.variants) {
      const auto t = time_kernel(kernels::parse_kernel(k), kernels::parse_variant(v), inputs, config.reps);
      table.add_row({config.case_name, k, v, std::to_string(t.reps), format_double(t.median_s), format_double(t.min_s),
                     hex(t.checksum)});
    }
  }
  return table;
}

Table verify_table(const RunConfig& config, bool& all_passed) {
  const auto rows = run_verification({config.case_name, Seed{config.seed}, config.seeds});
  Table table{{"case", "suite", "check", "max_error", "tolerance", "status"}, {}};
  all_passed = true;
  for (const auto& r : rows) {
    all_passed = all_passed && r.passed();
    table.add_row({config.case_name, r.suite, r.check, format_double(r.max_error), format_double(r.tolerance),
                   r.passed() ? "pass" : "FAIL"});
  }
  return table;
}

int run(int argc, char** argv) {
  RunConfig config;
  CLI::App app{"gyroproxy: gyrokinetic kernel proxy, FFT padding planner and communication cost model"};
  app.footer(kExitCodeHelp);
  app.require_subcommand(1);

  auto* pp = app.add_subcommand("plan-padding", "Plan a dealias-padded FFT size with small prime factors");
  pp->add_option("--n", config.n_logical, "Retained modes (comma-separated list allowed)")->required()->delimiter(',');
  pp->add_option("--rule", config.rule, "Dealias factor as p/q")->capture_default_str();
  pp->add_option("--primes", config.primes, "Allowed primes")->capture_default_str();
  pp->add_flag("--naive", config.naive, "Use the round-to-even scheme instead");
  add_common(pp, config);

  auto* fb = app.add_subcommand("fft-bench", "Time batched transforms at given sizes");
  fb->add_option("--sizes", config.sizes, "Transform lengths")->delimiter(',')->capture_default_str();
  fb->add_option("--batch", config.batch, "Sequences per batch")->capture_default_str();
  fb->add_option("--reps", config.reps, "Timed repetitions (>= 3)")->capture_default_str();
  fb->add_option("--seed", config.seed, "Input seed")->capture_default_str();
  add_common(fb, config);

  auto* be = app.add_subcommand("bench", "Time kernel variants on a test case");
  be->add_option("--case", config.case_name, "Case name")->capture_default_str();
  be->add_option("--kernels", config.kernels, "Kernels")->delimiter(',');
  be->add_option("--variants", config.variants, "Variants")->delimiter(',');
  be->add_option("--reps", config.reps, "Timed repetitions (>= 3)")->capture_default_str();
  be->add_option("--seed", config.seed, "Input seed")->capture_default_str();
  add_common(be, config);

  auto* ve = app.add_subcommand("verify", "Run the equivalence and transform suites");
  ve->add_option("--case", config.case_name, "Case name")->capture_default_str();
  ve->add_option("--seed", config.seed, "Base seed")->capture_default_str();
  ve->add_option("--seeds", config.seeds, "Seeds per randomized check")->capture_default_str();
  add_common(ve, config);

  auto* ce = app.add_subcommand("comm-estimate", "Plan the rank grid and predict communication time");
  ce->add_option("--case", config.case_name, "Case name")->capture_default_str();
  ce->add_option("--topo", config.topology, "Builtin topology")->capture_default_str();
  ce->add_option("--topo-file", config.topology_file, "key=value topology file (overrides --topo)");
  ce->add_option("--ranks", config.ranks, "Total ranks")->capture_default_str();
  ce->add_option("--nodes", config.nodes, "Nodes")->capture_default_str();
  ce->add_option("--n1", config.n1, "Force the all-to-all group size instead of planning");
  ce->add_option("--spread-nodes", config.spread_nodes, "Nodes per dim-1 group when --n1 is forced")
      ->capture_default_str();
  add_common(ce, config);

  auto* co = app.add_subcommand("compare", "Speedup table between two bench reports");
  co->add_option("--before", config.before, "Bench report for the baseline")->required();
  co->add_option("--after", config.after, "Bench report for the candidate")->required();
  co->add_option("--before-variant", config.before_variant, "Variant rows taken from --before")->capture_default_str();
  co->add_option("--after-variant", config.after_variant, "Variant rows taken from --after")->capture_default_str();
  co->add_option("--floors", config.floors, "case,kernel,min_ratio CSV; a ratio below its floor exits 1");
  add_common(co, config);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInvalidConfig;
  }

  const std::map<CLI::App*, int (*)(const RunConfig&)> handlers = {
      {pp, plan_padding}, {fb, fft_bench}, {be, bench}, {ve, verify}, {ce, comm_estimate}, {co, compare}};
  try {
    CLI::App* chosen = app.get_subcommands().front();
    config.command = chosen->get_name();
    config.validate();
    set_thread_count(resolve_thread_count(config.threads));
    return handlers.at(chosen)(config);
  } catch (const IoError& e) {
    std::cerr << "gyroproxy: I/O error: " << e.what() << '\n';
    return kExitIoFailure;
  } catch (const CoverageError& e) {
    std::cerr << "gyroproxy: " << e.what() << '\n';
    return kExitInvalidConfig;
  } catch (const ResourceError& e) {
    std::cerr << "gyroproxy: " << e.what() << '\n';
    return kExitInternal;
  } catch (const Error& e) {
    std::cerr << "gyroproxy: invalid configuration: " << e.what() << '\n';
    return kExitInvalidConfig;
  } catch (const std::bad_alloc&) {
    std::cerr << "gyroproxy: out of memory\n";
    return kExitInternal;
  } catch (const std::exception& e) {
    std::cerr << "gyroproxy: internal error: " << e.what() << '\n';
    return kExitInternal;
  }
}

}  // namespace gyroproxy::cli
