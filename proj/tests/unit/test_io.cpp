#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "fixtures.hpp"
#include "peermatch/io.hpp"

using namespace peermatch;
namespace fs = std::filesystem;

namespace {

LoadedGraph parse_text(const std::string& text, SymmetrizePolicy policy = SymmetrizePolicy::max) {
  std::istringstream in(text);
  return parse_edge_list(in, policy);
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun run_cli(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "peermatch_io_test" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("edge list parsing") {
  const LoadedGraph tri = parse_text("0 1\n1 2\n2 0\n");
  CHECK(tri.network.student_count() == 3);
  CHECK(tri.network.total_weight() == 3.0);

  const LoadedGraph merged = parse_text("0 1 2.0\n1 0 5.0\n");
  CHECK(merged.network.edge_count() == 1);
  CHECK(merged.network.weight(0, 1) == 5.0);

  const LoadedGraph sparse = parse_text("# comment\n\n  10 30\n30 7 2\n7 7\n");
  CHECK(sparse.original_ids == std::vector<std::uint64_t>{7, 10, 30});
  CHECK(sparse.self_loops_dropped == 1);
  CHECK(sparse.edge_lines == 3);
  CHECK(sparse.network.weight(1, 2) == 1.0);  // 10 - 30
  CHECK(sparse.network.weight(0, 2) == 2.0);  // 7 - 30

  try {
    parse_text("0 1\n1 x\n");
    FAIL("expected ParseError");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::parse_error);
    CHECK(e.detail().find("line 2") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_text("0 1 -1\n"), Error);
  CHECK_THROWS_AS(parse_text("0 1 1 1\n"), Error);
  CHECK_THROWS_AS(parse_text("0 1 2\n1 0 3\n", SymmetrizePolicy::strict), Error);
}

TEST_CASE("instance JSON round trip is byte-identical") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const InstanceConfig c = fixtures::random_small(seed, 15, 4);
    const std::string once = dump_instance(c);
    const InstanceConfig back = parse_instance(once);
    CHECK(dump_instance(back) == once);
    CHECK(instance_hash(back) == instance_hash(c));
    const Instance a = build_instance(c);
    const Instance b = build_instance(back);
    CHECK(social_welfare(a, random_matching(a, seed)) == social_welfare(b, random_matching(b, seed)));
  }
  const std::string text = dump_instance(fixtures::instance_a());
  CHECK(text ==
        "{\"students\":4,\"houses\":[{\"id\":0,\"quota\":2,\"D\":2.0},{\"id\":1,\"quota\":2,"
        "\"D\":0.0}],\"edges\":[[0,1,3.0],[2,3,3.0]],\"desirability\":\"objective\",\"scoring\":"
        "\"zero\",\"seed\":null}\n");
  CHECK(hash_hex(0x1234) == "0000000000001234");
}

TEST_CASE("instance JSON errors") {
  CHECK_THROWS_AS(parse_instance("{"), Error);
  CHECK_THROWS_AS(parse_instance("{\"houses\":[]}"), Error);
  CHECK_THROWS_AS(parse_instance("{\"students\":2,\"houses\":[{\"id\":0,\"quota\":2}],"
                                 "\"edges\":[[0,\"a\"]]}"),
                  Error);
  auto c = fixtures::instance_a();
  c.scoring = HouseScoring::custom([](HouseId, std::span<const StudentId>) { return 0.0; });
  CHECK_THROWS_AS(dump_instance(c), Error);
}

TEST_CASE("trace CSV keeps full precision") {
  SolveTrace trace;
  trace.records.push_back({0, 0.1, 1.0 / 3.0, false});
  trace.records.push_back({1, 2.5, 7.0, true});
  std::ostringstream out;
  write_trace_csv(out, trace);
  CHECK(out.str() == "iter,welfare,potential,accepted\n0,0.1,0.3333333333333333,0\n1,2.5,7,1\n");
  CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("random generator contract") {
  RandomInstanceSpec spec;
  spec.n = 50;
  spec.m = 5;
  spec.seed = 7;
  spec.scoring = ScoringModel::additive_uniform;
  CHECK(dump_instance(generate_random_instance(spec)) == dump_instance(generate_random_instance(spec)));
  spec.seed = 8;
  const std::string other = dump_instance(generate_random_instance(spec));
  spec.seed = 7;
  CHECK(other != dump_instance(generate_random_instance(spec)));

  CHECK(equal_split_quotas(10, 3) == std::vector<std::size_t>{4, 3, 3});

  RandomInstanceSpec unit;
  unit.n = 100;
  unit.weights = WeightModel::unit(0.2);
  const InstanceConfig c = generate_random_instance(unit);
  for (const auto& e : c.edges) CHECK(e.weight == 1.0);
  CHECK(c.edges.size() > 800);  // about 990 expected
  CHECK(c.edges.size() < 1200);

  for (const auto& h : generate_random_instance(spec).houses) {
    CHECK(h.desirability >= 0.0);
    CHECK(h.desirability < 10.0);
  }
  CHECK_THROWS_AS(generate_random_instance(RandomInstanceSpec{.n = 0}), Error);
}

TEST_CASE("constructive generators certify themselves") {
  for (double k : {4.0, 8.0, 16.0}) CHECK_NOTHROW(generate_unbounded_poa(k));
  for (std::size_t m : {2, 3}) {
    for (std::size_t k : {3, 4}) CHECK_NOTHROW(generate_tight_example(m, k));
  }
  CHECK_THROWS_AS(generate_unbounded_poa(2.0), Error);
  CHECK_THROWS_AS(generate_tight_example(1, 3), Error);
  CHECK_THROWS_AS(generate_tight_example(3, 2), Error);
  const InstanceConfig tight = generate_tight_example(3, 3);
  CHECK(tight.edges.size() == 54);
  CHECK(tight.houses[1].desirability == 4.0);
}

TEST_CASE("cli exit codes and outputs") {
  const fs::path dir = scratch("cli");
  const std::string inst = (dir / "a.json").string();
  save_instance(inst, fixtures::instance_a());

  CHECK(run_cli({}).code == 1);
  CHECK(run_cli({"no-such-command"}).code == 1);
  CHECK(run_cli({"solve-greedy"}).code == 1);
  CHECK(run_cli({"solve-greedy", "--instance", (dir / "missing.json").string()}).code == 1);
  CHECK(run_cli({"--help"}).code == 0);

  const std::string trace = (dir / "t.csv").string();
  const CliRun greedy = run_cli({"solve-greedy", "--instance", inst, "--seed", "1", "--trace-csv", trace});
  CHECK(greedy.code == 0);
  CHECK(slurp(trace).rfind("iter,welfare,potential,accepted\n", 0) == 0);
  const Json record = Json::parse(greedy.out);
  CHECK(record["schema_version"] == kResultsSchemaVersion);
  CHECK(record["stability"]["stable"] == true);
  CHECK(record["instance_hash"] == hash_hex(instance_hash(fixtures::instance_a())));

  const CliRun oracle = run_cli({"oracle", "--instance", inst});
  CHECK(oracle.code == 0);
  const Json exact = Json::parse(oracle.out)["exact"];
  for (const char* field : {"matchings_enumerated", "stable_count", "max_welfare", "exact_poa",
                            "exact_pos", "gamma_star", "argmin_stable"}) {
    CHECK(exact.contains(field));
  }

  // Weighted edges: the unweighted bound must name its failed hypothesis.
  const CliRun bounds = run_cli({"bounds", "--instance", inst});
  CHECK(bounds.code == 0);
  const Json report = Json::parse(bounds.out)["bounds"];
  CHECK(report["bound_simple"].is_null());
  CHECK(report["simple_violations"][0] == "unit_weights");

  // A malformed matching is a validation error.
  std::ofstream(dir / "bad.json") << "{\"assignment\":[0,0,0,1]}";
  CHECK(run_cli({"check-stability", "--instance", inst, "--matching", (dir / "bad.json").string()}).code == 1);
}

TEST_CASE("cli batch mode writes one file per seed, independent of threading") {
  const fs::path dir = scratch("batch");
  const std::string inst = (dir / "r.json").string();
  RandomInstanceSpec spec;
  spec.n = 20;
  spec.m = 4;
  spec.seed = 3;
  save_instance(inst, generate_random_instance(spec));

  for (const char* sub : {"one", "two"}) {
    const CliRun r = run_cli({"solve-mcmc", "--instance", inst, "--seeds", "1..4", "--max-iters", "300",
                          "--polish", "--out", (dir / sub).string(), "--trace-csv",
                          (dir / sub / "trace.csv").string()});
    CHECK(r.code == 0);
  }
  for (int s = 1; s <= 4; ++s) {
    const std::string json = "solve-mcmc-seed" + std::to_string(s) + ".json";
    const std::string csv = "trace-seed" + std::to_string(s) + ".csv";
    CHECK(fs::exists(dir / "one" / json));
    CHECK(slurp(dir / "one" / json) == slurp(dir / "two" / json));
    CHECK(slurp(dir / "one" / csv) == slurp(dir / "two" / csv));
  }
  CHECK(run_cli({"solve-mcmc", "--instance", inst, "--seeds", "4..1"}).code == 1);
}

TEST_CASE("cli generators and ingest") {
  const fs::path dir = scratch("gen");
  const CliRun poa = run_cli({"generate", "unbounded-poa", "--k", "8"});
  CHECK(poa.code == 0);
  CHECK(poa.out == dump_instance(generate_unbounded_poa(8.0)));
  CHECK(run_cli({"generate", "unbounded-poa", "--k", "1"}).code == 1);

  std::ofstream(dir / "g.txt") << "# toy\n0 1\n1 2\n2 0\n5 5\n";
  const CliRun ingest = run_cli({"ingest", "--edges", (dir / "g.txt").string(), "--m", "1"});
  CHECK(ingest.code == 0);
  CHECK(ingest.err.find("1 self-loop") != std::string::npos);
  const InstanceConfig c = parse_instance(ingest.out);
  CHECK(c.students == 3);
  CHECK(c.edges.size() == 3);

  const CliRun trend = run_cli({"gamma-trend", "--n", "24", "--p", "0.3", "--ms", "2", "4", "--seed", "5",
                            "--heuristic-iters", "500"});
  CHECK(trend.code == 0);
  CHECK(trend.out.rfind("m,quota,gamma_star,non_increasing\n", 0) == 0);
  CHECK(run_cli({"gamma-trend", "--n", "10", "--ms", "3"}).code == 1);
}
