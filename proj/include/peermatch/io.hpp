#pragma once

// Instance JSON, edge-list ingestion, trace CSV and result records.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "peermatch/market.hpp"
#include "peermatch/metrics.hpp"
#include "peermatch/oracle.hpp"
#include "peermatch/solvers.hpp"
#include "peermatch/stability.hpp"

namespace peermatch {

using Json = nlohmann::ordered_json;

inline constexpr int kResultsSchemaVersion = 1;

/// Canonical form: edges merged by the config's policy, u < v, sorted.
/// Errors: InvalidInput for custom house scoring (not serializable).
Json instance_to_json(const InstanceConfig& config);
/// Errors: ParseError on schema problems.
InstanceConfig instance_from_json(const Json& doc);

std::string dump_instance(const InstanceConfig& config);
InstanceConfig parse_instance(const std::string& text);
InstanceConfig load_instance(const std::filesystem::path& path);
void save_instance(const std::filesystem::path& path, const InstanceConfig& config);

/// FNV-1a 64 over the canonical instance text.
std::uint64_t instance_hash(const InstanceConfig& config);
std::string hash_hex(std::uint64_t hash);

struct LoadedGraph {
  SocialNetwork network;
  std::vector<std::uint64_t> original_ids;  // dense index -> id in the file
  std::size_t edge_lines = 0;
  std::size_t self_loops_dropped = 0;
};

/// Lines `u v [w]` (w defaults to 1); blank and `#` lines skipped; ids are
/// compacted to 0..n-1 in increasing order. Errors: ParseError (with line
/// number), NegativeWeight.
LoadedGraph parse_edge_list(std::istream& in, SymmetrizePolicy policy = SymmetrizePolicy::max);
LoadedGraph load_edge_list(const std::filesystem::path& path,
                           SymmetrizePolicy policy = SymmetrizePolicy::max);

/// Shortest representation that reads back to the same double.
std::string format_double(double value);

/// Header `iter,welfare,potential,accepted`.
void write_trace_csv(std::ostream& out, const SolveTrace& trace);

Json matching_to_json(const Matching& mu);
std::vector<HouseId> assignment_from_json(const Json& doc);
Matching load_matching(const Instance& inst, const std::filesystem::path& path);

Json trace_summary_to_json(const SolveTrace& trace);
Json stability_to_json(const StabilityReport& report);
Json metrics_to_json(const PartitionMetrics& metrics);
Json bounds_to_json(const BoundReport& report);
Json exact_to_json(const ExactSummary& summary);

struct RunArtifacts {
  std::string command;
  std::uint64_t instance_hash = 0;
  std::uint64_t seed = 0;
  std::optional<Matching> matching;
  std::optional<SolveTrace> trace;
  std::optional<PartitionMetrics> metrics;
  std::optional<BoundReport> bounds;
  std::optional<ExactSummary> exact;
  std::optional<StabilityReport> stability;
  std::optional<double> welfare;
  std::optional<double> potential;
};

Json artifacts_to_json(const RunArtifacts& artifacts);

}  // namespace peermatch
