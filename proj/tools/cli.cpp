#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <thread>

#include "peermatch/generators.hpp"
#include "peermatch/io.hpp"
#include "peermatch/metrics.hpp"
#include "peermatch/oracle.hpp"
#include "peermatch/solvers.hpp"
#include "peermatch/stability.hpp"

namespace peermatch::cli {

namespace fs = std::filesystem;

namespace {

struct Options {
  std::string instance;
  std::uint64_t seed = 0;
  std::string seeds;
  std::string out_dir;
  std::string format = "json";
  std::string trace_csv;
  std::string matching;
  std::size_t max_iters = 0;  // 0 keeps the solver default
  double temperature = 1.0;
  std::optional<double> final_temperature;
  bool polish = false;
  std::string pivot = "first";
  std::string gamma = "auto";
  std::size_t oracle_cap = 12;

  // generators and ingest
  double k = 8.0;
  std::size_t grid_m = 3;
  std::size_t grid_k = 3;
  std::size_t n = 10;
  std::size_t m = 2;
  double p = 0.2;
  std::string weights = "unweighted";
  std::string desirability = "uniform";
  std::string scoring = "zero";
  std::vector<std::size_t> quotas;
  std::string edges;
  std::string policy = "max";
  std::vector<std::size_t> ms{2, 4, 8};
  std::size_t restarts = 3;
  std::size_t heuristic_iters = 20'000;
};

/// One finished pipeline: the results record plus an optional trace table.
struct Output {
  Json record;
  std::string trace_csv;
};

std::pair<std::uint64_t, std::uint64_t> parse_seed_range(const std::string& text) {
  const auto dots = text.find("..");
  std::uint64_t lo = 0;
  std::uint64_t hi = 0;
  bool ok = dots != std::string::npos;
  if (ok) {
    try {
      std::size_t used = 0;
      lo = std::stoull(text.substr(0, dots), &used);
      ok = used == dots;
      const std::string rest = text.substr(dots + 2);
      hi = std::stoull(rest, &used);
      ok = ok && used == rest.size();
    } catch (const std::exception&) {
      ok = false;
    }
  }
  if (!ok || hi < lo) throw Error(Errc::invalid_input, "--seeds expects a..b with a <= b");
  return {lo, hi};
}

Instance load(const Options& o) {
  if (o.instance.empty()) throw Error(Errc::invalid_input, "--instance is required");
  return build_instance(load_instance(o.instance));
}

std::uint64_t hash_of(const Instance& inst) { return instance_hash(inst.config()); }

Matching starting_matching(const Instance& inst, const Options& o, std::uint64_t seed) {
  if (!o.matching.empty()) return load_matching(inst, o.matching);
  return random_matching(inst, seed);
}

// The solver's own stream must not repeat the one that drew the start.
std::uint64_t solver_seed(std::uint64_t seed) { return seed ^ 0x9e3779b97f4a7c15ULL; }

std::string trace_text(const SolveTrace& trace) {
  std::ostringstream csv;
  write_trace_csv(csv, trace);
  return csv.str();
}

Output solve_greedy_run(const Instance& inst, const Options& o, std::uint64_t seed) {
  GreedyConfig cfg;
  cfg.seed = solver_seed(seed);
  if (o.max_iters) cfg.max_iterations = o.max_iters;
  cfg.pivot = o.pivot == "best" ? PivotRule::best_improvement : PivotRule::first_improvement;
  SolveResult result = solve_greedy(inst, starting_matching(inst, o, seed), cfg);

  RunArtifacts a;
  a.command = "solve-greedy";
  a.instance_hash = hash_of(inst);
  a.seed = seed;
  a.welfare = social_welfare(inst, result.matching);
  a.potential = potential(inst, result.matching);
  a.stability = is_two_sided_exchange_stable(inst, result.matching);
  a.matching = result.matching;
  a.trace = result.trace;
  return {artifacts_to_json(a), trace_text(result.trace)};
}

Output solve_mcmc_run(const Instance& inst, const Options& o, std::uint64_t seed) {
  McmcConfig cfg;
  cfg.seed = solver_seed(seed);
  if (o.max_iters) cfg.max_iterations = o.max_iters;
  cfg.temperature = o.temperature;
  cfg.final_temperature = o.final_temperature;
  cfg.polish = o.polish;
  SolveResult result = solve_mcmc(inst, starting_matching(inst, o, seed), cfg);

  RunArtifacts a;
  a.command = "solve-mcmc";
  a.instance_hash = hash_of(inst);
  a.seed = seed;
  a.welfare = social_welfare(inst, result.matching);
  a.potential = potential(inst, result.matching);
  a.stability = is_two_sided_exchange_stable(inst, result.matching);
  a.matching = result.matching;
  a.trace = result.trace;
  return {artifacts_to_json(a), trace_text(result.trace)};
}

Matching required_matching(const Instance& inst, const Options& o) {
  if (o.matching.empty()) throw Error(Errc::invalid_input, "--matching is required");
  return load_matching(inst, o.matching);
}

Output check_stability_run(const Instance& inst, const Options& o, std::uint64_t seed) {
  const Matching mu = required_matching(inst, o);
  RunArtifacts a;
  a.command = "check-stability";
  a.instance_hash = hash_of(inst);
  a.seed = seed;
  a.stability = is_two_sided_exchange_stable(inst, mu);
  a.welfare = social_welfare(inst, mu);
  a.potential = potential(inst, mu);
  a.matching = mu;
  return {artifacts_to_json(a), {}};
}

Output metrics_run(const Instance& inst, const Options& o, std::uint64_t seed) {
  const Matching mu = o.matching.empty() ? random_matching(inst, seed) : load_matching(inst, o.matching);
  RunArtifacts a;
  a.command = "metrics";
  a.instance_hash = hash_of(inst);
  a.seed = seed;
  a.metrics = partition_metrics(inst, mu);
  a.welfare = social_welfare(inst, mu);
  a.matching = mu;
  return {artifacts_to_json(a), {}};
}

Output bounds_run(const Instance& inst, const Options& o, std::uint64_t seed) {
  double gamma = 0.0;
  bool exact = false;
  const bool try_exact = o.gamma == "exact" ||
                         (o.gamma == "auto" && inst.padded_student_count() <= o.oracle_cap);
  if (try_exact) {
    gamma = gamma_star_exact(inst, o.oracle_cap);
    exact = true;
  } else {
    GammaHeuristicConfig cfg;
    cfg.seed = seed;
    cfg.restarts = o.restarts;
    cfg.mcmc_iterations = o.heuristic_iters;
    gamma = gamma_star_heuristic(inst, cfg);
  }
  RunArtifacts a;
  a.command = "bounds";
  a.instance_hash = hash_of(inst);
  a.seed = seed;
  a.bounds = bound_report(inst, gamma, exact);
  return {artifacts_to_json(a), {}};
}

Output oracle_run(const Instance& inst, const Options& o, std::uint64_t seed) {
  ExactOptions opts;
  opts.limits.max_students = o.oracle_cap;
  RunArtifacts a;
  a.command = "oracle";
  a.instance_hash = hash_of(inst);
  a.seed = seed;
  a.exact = exact_extremes(inst, opts);
  return {artifacts_to_json(a), {}};
}

Output gamma_trend_run(const Options& o, std::uint64_t seed) {
  RandomInstanceSpec spec;
  spec.n = o.n;
  spec.seed = seed;
  spec.weights = WeightModel::unit(o.p);
  spec.desirability = DesirabilityModel::zero;

  std::ostringstream csv;
  csv << "m,quota,gamma_star,non_increasing\n";
  Json rows = Json::array();
  double previous = 2.0;
  bool monotone = true;
  for (std::size_t m : o.ms) {
    if (m == 0 || o.n % m != 0) {
      throw Error(Errc::invalid_input, "n must be divisible by every m in --ms");
    }
    spec.m = m;
    const Instance inst = build_instance(generate_random_instance(spec));
    GammaHeuristicConfig cfg;
    cfg.seed = seed;
    cfg.restarts = o.restarts;
    cfg.mcmc_iterations = o.heuristic_iters;
    const double gamma = gamma_star_heuristic(inst, cfg);
    const bool step_ok = gamma <= previous + 1e-12;
    monotone = monotone && step_ok;
    previous = gamma;
    csv << m << ',' << o.n / m << ',' << format_double(gamma) << ',' << (step_ok ? 1 : 0) << '\n';
    rows.push_back(Json{{"m", m}, {"quota", o.n / m}, {"gamma_star", gamma}});
  }
  Json record;
  record["schema_version"] = kResultsSchemaVersion;
  record["command"] = "gamma-trend";
  record["seed"] = seed;
  record["n"] = o.n;
  record["rows"] = std::move(rows);
  record["non_increasing"] = monotone;
  return {std::move(record), csv.str()};
}

void flatten(const Json& node, const std::string& prefix, std::ostream& out) {
  if (node.is_object()) {
    for (const auto& [key, value] : node.items()) {
      flatten(value, prefix.empty() ? key : prefix + "." + key, out);
    }
    return;
  }
  out << prefix << ',';
  if (node.is_array()) {
    bool first = true;
    for (const auto& v : node) {
      if (!first) out << ';';
      first = false;
      out << (v.is_number_float() ? format_double(v.get<double>()) : v.dump());
    }
  } else if (node.is_number_float()) {
    out << format_double(node.get<double>());
  } else if (node.is_string()) {
    out << node.get<std::string>();
  } else {
    out << node.dump();
  }
  out << '\n';
}

std::string render(const Output& result, const std::string& format, bool table) {
  if (format == "json") return result.record.dump() + "\n";
  // Commands whose natural product is a table print the table itself.
  if (table) return result.trace_csv;
  std::ostringstream csv;
  csv << "field,value\n";
  flatten(result.record, "", csv);
  return csv.str();
}

void write_file(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream file(path, std::ios::binary);
  if (!file) throw Error(Errc::invalid_input, "cannot write " + path.string());
  file << text;
}

fs::path with_seed(const fs::path& path, std::uint64_t seed) {
  fs::path out = path;
  out.replace_filename(path.stem().string() + "-seed" + std::to_string(seed) +
                       path.extension().string());
  return out;
}

using Pipeline = std::function<Output(std::uint64_t)>;

/// Runs one seed, or a seed range across threads with private state; files are
/// written afterwards in seed order so output never depends on scheduling.
void execute(const std::string& command, const Options& o, const Pipeline& pipeline, bool table,
             std::ostream& out) {
  std::vector<std::uint64_t> seeds;
  const bool batch = !o.seeds.empty();
  if (batch) {
    const auto [lo, hi] = parse_seed_range(o.seeds);
    for (std::uint64_t s = lo;; ++s) {
      seeds.push_back(s);
      if (s == hi) break;
    }
  } else {
    seeds.push_back(o.seed);
  }

  std::vector<Output> results(seeds.size());
  if (seeds.size() == 1) {
    results[0] = pipeline(seeds[0]);
  } else {
    const std::size_t workers =
        std::min<std::size_t>(seeds.size(), std::max(1u, std::thread::hardware_concurrency()));
    std::vector<std::exception_ptr> failures(workers);
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t i = w; i < seeds.size(); i += workers) results[i] = pipeline(seeds[i]);
        } catch (...) {
          failures[w] = std::current_exception();
        }
      });
    }
    for (auto& t : pool) t.join();
    for (const auto& f : failures) {
      if (f) std::rethrow_exception(f);
    }
  }

  const std::string ext = o.format == "json" ? ".json" : ".csv";
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    const std::string text = render(results[i], o.format, table);
    if (!o.out_dir.empty()) {
      fs::path file = fs::path(o.out_dir) / (command + ext);
      write_file(batch ? with_seed(file, seeds[i]) : file, text);
    } else {
      out << text;
    }
    if (!o.trace_csv.empty() && !results[i].trace_csv.empty()) {
      write_file(batch ? with_seed(o.trace_csv, seeds[i]) : fs::path(o.trace_csv),
                 results[i].trace_csv);
    }
  }
}

void emit_instance(const InstanceConfig& config, const Options& o, std::ostream& out) {
  const std::string text = dump_instance(config);
  if (o.out_dir.empty()) {
    out << text;
  } else {
    write_file(fs::path(o.out_dir) / "instance.json", text);
  }
}

DesirabilityModel desirability_model(const std::string& name) {
  if (name == "zero") return DesirabilityModel::zero;
  if (name == "integer") return DesirabilityModel::objective_integer;
  if (name == "per-student") return DesirabilityModel::per_student_uniform;
  return DesirabilityModel::objective_uniform;
}

InstanceConfig random_config(const Options& o) {
  RandomInstanceSpec spec;
  spec.n = o.n;
  spec.m = o.m;
  spec.seed = o.seed;
  spec.weights.p = o.p;
  if (o.weights == "uniform") spec.weights.kind = WeightModel::Kind::uniform;
  if (o.weights == "integer") spec.weights.kind = WeightModel::Kind::integer;
  if (!o.quotas.empty()) {
    spec.quota_rule = QuotaRule::explicit_list;
    spec.quotas = o.quotas;
  }
  spec.desirability = desirability_model(o.desirability);
  spec.scoring = o.scoring == "additive" ? ScoringModel::additive_uniform : ScoringModel::zero;
  return generate_random_instance(spec);
}

InstanceConfig ingest_config(const Options& o, std::ostream& err) {
  if (o.edges.empty()) throw Error(Errc::invalid_input, "--edges is required");
  SymmetrizePolicy policy = SymmetrizePolicy::max;
  if (o.policy == "min") policy = SymmetrizePolicy::min;
  if (o.policy == "sum") policy = SymmetrizePolicy::sum;
  if (o.policy == "strict") policy = SymmetrizePolicy::strict;
  const LoadedGraph graph = load_edge_list(o.edges, policy);
  if (graph.self_loops_dropped > 0) {
    err << "warning: dropped " << graph.self_loops_dropped << " self-loop line(s)\n";
  }

  // Houses come from the random spec; the graph replaces the random edges.
  Options spec = o;
  spec.n = graph.network.student_count();
  spec.p = 0.0;
  InstanceConfig config = random_config(spec);
  config.edges = graph.network.edges();
  return config;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Many-to-one matching with peer effects: solvers, stability, bounds"};
  app.require_subcommand(1);
  Options o;
  // gamma-trend has its own defaults; sharing storage would leak them into other commands.
  std::size_t trend_n = 120;
  double trend_p = 0.05;
  std::string trend_format = "csv";

  const std::vector<std::string> formats{"json", "csv"};
  auto add_common = [&](CLI::App* sub, bool needs_instance) {
    auto* inst = sub->add_option("--instance", o.instance, "Instance JSON file");
    if (needs_instance) inst->required()->check(CLI::ExistingFile);
    sub->add_option("--seed", o.seed, "RNG seed");
    sub->add_option("--seeds", o.seeds, "Batch seed range a..b, one run per seed");
    sub->add_option("--out", o.out_dir, "Directory for result files (default: stdout)");
    sub->add_option("--format", o.format, "Output format")->check(CLI::IsMember(formats));
  };

  auto* greedy = app.add_subcommand("solve-greedy", "Approved-swap ascent to a stable matching");
  add_common(greedy, true);
  greedy->add_option("--max-iters", o.max_iters, "Cap on accepted swaps");
  greedy->add_option("--pivot", o.pivot, "Pivot rule")->check(CLI::IsMember({"first", "best"}));
  greedy->add_option("--matching", o.matching, "Starting matching (default: random)");
  greedy->add_option("--trace-csv", o.trace_csv, "Trace CSV path");

  auto* mcmc = app.add_subcommand("solve-mcmc", "Heat-bath search over welfare");
  add_common(mcmc, true);
  mcmc->add_option("--max-iters", o.max_iters, "Number of proposals");
  mcmc->add_option("--temperature", o.temperature, "Inverse temperature T")
      ->check(CLI::PositiveNumber);
  mcmc->add_option("--final-temperature", o.final_temperature, "Linear schedule end value")
      ->check(CLI::PositiveNumber);
  mcmc->add_flag("--polish", o.polish, "Run greedy from the best matching found");
  mcmc->add_option("--matching", o.matching, "Starting matching (default: random)");
  mcmc->add_option("--trace-csv", o.trace_csv, "Trace CSV path");

  auto* stability = app.add_subcommand("check-stability", "Two-sided exchange stability of a matching");
  add_common(stability, true);
  stability->add_option("--matching", o.matching, "Matching JSON")->required();

  auto* metrics = app.add_subcommand("metrics", "Edge metrics of a matching");
  add_common(metrics, true);
  metrics->add_option("--matching", o.matching, "Matching JSON (default: random)");

  auto* bounds = app.add_subcommand("bounds", "Price-of-anarchy bounds");
  add_common(bounds, true);
  bounds->add_option("--gamma", o.gamma, "How to obtain gamma*")
      ->check(CLI::IsMember({"auto", "exact", "heuristic"}));
  bounds->add_option("--max-students", o.oracle_cap, "Enumeration cap for exact gamma*");
  bounds->add_option("--restarts", o.restarts, "Heuristic restarts");
  bounds->add_option("--heuristic-iters", o.heuristic_iters, "MCMC proposals per restart");

  auto* oracle = app.add_subcommand("oracle", "Exhaustive enumeration of small instances");
  add_common(oracle, true);
  oracle->add_option("--max-students", o.oracle_cap, "Enumeration cap");

  auto* generate = app.add_subcommand("generate", "Emit an instance JSON");
  generate->require_subcommand(1);
  auto* gen_poa = generate->add_subcommand("unbounded-poa", "Four students whose PoA grows with k");
  gen_poa->add_option("--k", o.k, "Weight parameter (> 2)");
  gen_poa->add_option("--out", o.out_dir, "Directory for instance.json");
  auto* gen_tight = generate->add_subcommand("tight", "Grid family where the bound is tight");
  gen_tight->add_option("--m", o.grid_m, "Houses (>= 2)");
  gen_tight->add_option("--k", o.grid_k, "Cluster size (> 2)");
  gen_tight->add_option("--out", o.out_dir, "Directory for instance.json");
  auto* gen_random = generate->add_subcommand("random", "Seeded random market");
  auto add_random = [&](CLI::App* sub) {
    sub->add_option("--m", o.m, "Houses");
    sub->add_option("--seed", o.seed, "RNG seed");
    sub->add_option("--quotas", o.quotas, "Explicit quotas (default: equal split)");
    sub->add_option("--desirability", o.desirability, "House desirability model")
        ->check(CLI::IsMember({"zero", "uniform", "integer", "per-student"}));
    sub->add_option("--scoring", o.scoring, "House-side scoring")
        ->check(CLI::IsMember({"zero", "additive"}));
    sub->add_option("--out", o.out_dir, "Directory for instance.json");
  };
  add_random(gen_random);
  gen_random->add_option("--n", o.n, "Students");
  gen_random->add_option("--p", o.p, "Edge probability");
  gen_random->add_option("--weights", o.weights, "Edge weight model")
      ->check(CLI::IsMember({"unweighted", "uniform", "integer"}));

  auto* ingest = app.add_subcommand("ingest", "Turn an edge list into an instance JSON");
  ingest->add_option("--edges", o.edges, "Edge list file")->required()->check(CLI::ExistingFile);
  ingest->add_option("--policy", o.policy, "Merging of repeated pairs")
      ->check(CLI::IsMember({"max", "min", "sum", "strict"}));
  add_random(ingest);

  auto* trend = app.add_subcommand("gamma-trend", "Heuristic gamma* as the house count grows");
  trend->add_option("--n", trend_n, "Students");
  trend->add_option("--p", trend_p, "Edge probability");
  trend->add_option("--seed", o.seed, "RNG seed");
  trend->add_option("--ms", o.ms, "House counts");
  trend->add_option("--restarts", o.restarts, "Heuristic restarts");
  trend->add_option("--heuristic-iters", o.heuristic_iters, "MCMC proposals per restart");
  trend->add_option("--format", trend_format, "Output format")->check(CLI::IsMember(formats));
  trend->add_option("--out", o.out_dir, "Directory for result files");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return 1;
  }

  try {
    if (greedy->parsed()) {
      const Instance inst = load(o);
      execute("solve-greedy", o, [&](std::uint64_t s) { return solve_greedy_run(inst, o, s); },
              false, out);
    } else if (mcmc->parsed()) {
      const Instance inst = load(o);
      execute("solve-mcmc", o, [&](std::uint64_t s) { return solve_mcmc_run(inst, o, s); }, false,
              out);
    } else if (stability->parsed()) {
      const Instance inst = load(o);
      execute("check-stability", o, [&](std::uint64_t s) { return check_stability_run(inst, o, s); },
              false, out);
    } else if (metrics->parsed()) {
      const Instance inst = load(o);
      execute("metrics", o, [&](std::uint64_t s) { return metrics_run(inst, o, s); }, false, out);
    } else if (bounds->parsed()) {
      const Instance inst = load(o);
      execute("bounds", o, [&](std::uint64_t s) { return bounds_run(inst, o, s); }, false, out);
    } else if (oracle->parsed()) {
      const Instance inst = load(o);
      execute("oracle", o, [&](std::uint64_t s) { return oracle_run(inst, o, s); }, false, out);
    } else if (gen_poa->parsed()) {
      emit_instance(generate_unbounded_poa(o.k), o, out);
    } else if (gen_tight->parsed()) {
      emit_instance(generate_tight_example(o.grid_m, o.grid_k), o, out);
    } else if (gen_random->parsed()) {
      emit_instance(random_config(o), o, out);
    } else if (ingest->parsed()) {
      emit_instance(ingest_config(o, err), o, out);
    } else if (trend->parsed()) {
      o.n = trend_n;
      o.p = trend_p;
      o.format = trend_format;
      execute("gamma-trend", o, [&](std::uint64_t s) { return gamma_trend_run(o, s); }, true, out);
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

}  // namespace peermatch::cli
