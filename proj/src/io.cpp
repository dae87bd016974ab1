#include "peermatch/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace peermatch {

namespace {

[[noreturn]] void schema_error(const std::string& what) { throw Error(Errc::parse_error, what); }

Json table_to_json(const std::vector<std::vector<double>>& table) {
  Json rows = Json::array();
  for (const auto& row : table) rows.push_back(row);
  return rows;
}

std::vector<std::vector<double>> table_from_json(const Json& doc, const char* field) {
  if (!doc.is_array()) schema_error(std::string(field) + " must be a string or a table");
  std::vector<std::vector<double>> table;
  for (const auto& row : doc) {
    if (!row.is_array()) schema_error(std::string(field) + " rows must be arrays");
    std::vector<double> values;
    for (const auto& v : row) {
      if (!v.is_number()) schema_error(std::string(field) + " entries must be numbers");
      values.push_back(v.get<double>());
    }
    table.push_back(std::move(values));
  }
  return table;
}

const Json& require(const Json& doc, const char* key) {
  auto it = doc.find(key);
  if (it == doc.end()) schema_error(std::string("missing field '") + key + "'");
  return *it;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::invalid_input, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Json optional_number(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

Json finite_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

}  // namespace

// ---------------------------------------------------------------------------
// Instance JSON

Json instance_to_json(const InstanceConfig& config) {
  if (config.scoring.mode() == HouseScoring::Mode::custom) {
    throw Error(Errc::invalid_input, "custom house scoring cannot be serialized");
  }
  Json doc;
  doc["students"] = config.students;
  Json houses = Json::array();
  for (const auto& h : config.houses) {
    Json entry;
    entry["id"] = h.id;
    entry["quota"] = h.quota;
    entry["D"] = h.desirability;
    houses.push_back(std::move(entry));
  }
  doc["houses"] = std::move(houses);
  Json edges = Json::array();
  const auto net = SocialNetwork::from_edges(config.students, config.edges, config.symmetrize);
  for (const auto& e : net.edges()) edges.push_back(Json::array({e.u, e.v, e.weight}));
  doc["edges"] = std::move(edges);
  doc["desirability"] = config.desirability ? table_to_json(*config.desirability) : Json("objective");
  doc["scoring"] = config.scoring.mode() == HouseScoring::Mode::additive
                       ? table_to_json(config.scoring.score_table())
                       : Json("zero");
  doc["seed"] = config.seed ? Json(*config.seed) : Json(nullptr);
  return doc;
}

InstanceConfig instance_from_json(const Json& doc) {
  if (!doc.is_object()) schema_error("instance must be a JSON object");
  InstanceConfig config;
  const Json& students = require(doc, "students");
  if (!students.is_number_unsigned()) schema_error("students must be a non-negative integer");
  config.students = students.get<std::size_t>();

  for (const auto& h : require(doc, "houses")) {
    HouseSpec spec;
    const Json& id = require(h, "id");
    const Json& quota = require(h, "quota");
    if (!id.is_number_integer()) schema_error("house id must be an integer");
    if (!quota.is_number_unsigned()) schema_error("house quota must be a positive integer");
    spec.id = id.get<std::int64_t>();
    spec.quota = quota.get<std::size_t>();
    if (auto d = h.find("D"); d != h.end()) {
      if (!d->is_number()) schema_error("house D must be a number");
      spec.desirability = d->get<double>();
    }
    config.houses.push_back(spec);
  }

  for (const auto& e : require(doc, "edges")) {
    if (!e.is_array() || e.size() < 2 || e.size() > 3) schema_error("edges are [u, v] or [u, v, w]");
    if (!e[0].is_number_unsigned() || !e[1].is_number_unsigned()) {
      schema_error("edge endpoints must be non-negative integers");
    }
    WeightedEdge edge{e[0].get<std::size_t>(), e[1].get<std::size_t>(), 1.0};
    if (e.size() == 3) {
      if (!e[2].is_number()) schema_error("edge weight must be a number");
      edge.weight = e[2].get<double>();
    }
    config.edges.push_back(edge);
  }

  if (auto d = doc.find("desirability"); d != doc.end() && !d->is_null()) {
    if (d->is_string()) {
      if (d->get<std::string>() != "objective") schema_error("desirability must be \"objective\" or a table");
    } else {
      config.desirability = table_from_json(*d, "desirability");
    }
  }
  if (auto s = doc.find("scoring"); s != doc.end() && !s->is_null()) {
    if (s->is_string()) {
      if (s->get<std::string>() != "zero") schema_error("scoring must be \"zero\" or a table");
    } else {
      config.scoring = HouseScoring::additive(table_from_json(*s, "scoring"));
    }
  }
  if (auto s = doc.find("seed"); s != doc.end() && !s->is_null()) {
    if (!s->is_number_unsigned()) schema_error("seed must be a non-negative integer");
    config.seed = s->get<std::uint64_t>();
  }
  return config;
}

std::string dump_instance(const InstanceConfig& config) { return instance_to_json(config).dump() + "\n"; }

InstanceConfig parse_instance(const std::string& text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    schema_error(e.what());
  }
  return instance_from_json(doc);
}

InstanceConfig load_instance(const std::filesystem::path& path) { return parse_instance(read_file(path)); }

void save_instance(const std::filesystem::path& path, const InstanceConfig& config) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::invalid_input, "cannot write " + path.string());
  out << dump_instance(config);
}

std::uint64_t instance_hash(const InstanceConfig& config) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : dump_instance(config)) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

std::string hash_hex(std::uint64_t hash) {
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i, hash >>= 4) out[static_cast<std::size_t>(i)] = digits[hash & 0xf];
  return out;
}

// ---------------------------------------------------------------------------
// Edge lists

LoadedGraph parse_edge_list(std::istream& in, SymmetrizePolicy policy) {
  struct RawEdge {
    std::uint64_t u, v;
    double w;
  };
  std::vector<RawEdge> raw;
  LoadedGraph out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream fields(line);
    std::string a, b, c, extra;
    fields >> a >> b;
    const bool has_weight = static_cast<bool>(fields >> c);
    if (b.empty() || static_cast<bool>(fields >> extra)) {
      throw Error(Errc::parse_error, "line " + std::to_string(line_no) + ": expected 'u v [w]'");
    }
    RawEdge e{0, 0, 1.0};
    auto parse_id = [&](const std::string& tok, std::uint64_t& dst) {
      auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), dst);
      if (ec != std::errc() || ptr != tok.data() + tok.size()) {
        throw Error(Errc::parse_error,
                    "line " + std::to_string(line_no) + ": bad node id '" + tok + "'");
      }
    };
    parse_id(a, e.u);
    parse_id(b, e.v);
    if (has_weight) {
      auto [ptr, ec] = std::from_chars(c.data(), c.data() + c.size(), e.w);
      if (ec != std::errc() || ptr != c.data() + c.size() || !std::isfinite(e.w)) {
        throw Error(Errc::parse_error, "line " + std::to_string(line_no) + ": bad weight '" + c + "'");
      }
      if (e.w < 0.0) throw Error(Errc::negative_weight, "line " + std::to_string(line_no));
    }
    ++out.edge_lines;
    if (e.u == e.v) {
      ++out.self_loops_dropped;
      continue;
    }
    raw.push_back(e);
  }

  std::vector<std::uint64_t> ids;
  ids.reserve(raw.size() * 2);
  for (const auto& e : raw) {
    ids.push_back(e.u);
    ids.push_back(e.v);
  }
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  auto dense = [&](std::uint64_t id) {
    return static_cast<StudentId>(std::lower_bound(ids.begin(), ids.end(), id) - ids.begin());
  };
  std::vector<WeightedEdge> edges;
  edges.reserve(raw.size());
  for (const auto& e : raw) edges.push_back({dense(e.u), dense(e.v), e.w});
  out.network = SocialNetwork::from_edges(ids.size(), edges, policy);
  out.original_ids = std::move(ids);
  return out;
}

LoadedGraph load_edge_list(const std::filesystem::path& path, SymmetrizePolicy policy) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::invalid_input, "cannot open " + path.string());
  return parse_edge_list(in, policy);
}

// ---------------------------------------------------------------------------
// Output records

std::string format_double(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

void write_trace_csv(std::ostream& out, const SolveTrace& trace) {
  out << "iter,welfare,potential,accepted\n";
  for (const auto& r : trace.records) {
    out << r.iteration << ',' << format_double(r.welfare) << ',' << format_double(r.potential)
        << ',' << (r.accepted ? 1 : 0) << '\n';
  }
}

Json matching_to_json(const Matching& mu) {
  Json doc;
  doc["assignment"] = std::vector<HouseId>(mu.assignment().begin(), mu.assignment().end());
  return doc;
}

std::vector<HouseId> assignment_from_json(const Json& doc) {
  const Json& list = doc.is_array() ? doc : require(doc, "assignment");
  if (!list.is_array()) schema_error("assignment must be an array");
  std::vector<HouseId> out;
  for (const auto& v : list) {
    if (!v.is_number_unsigned()) schema_error("assignment entries must be house indices");
    out.push_back(v.get<HouseId>());
  }
  return out;
}

Matching load_matching(const Instance& inst, const std::filesystem::path& path) {
  Json doc;
  try {
    doc = Json::parse(read_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    schema_error(e.what());
  }
  return Matching::from_assignment(inst, assignment_from_json(doc));
}

Json trace_summary_to_json(const SolveTrace& trace) {
  Json doc;
  doc["iterations"] = trace.records.empty() ? 0 : trace.records.back().iteration;
  doc["accepted_swaps"] = trace.accepted_swaps;
  doc["swap_evaluations"] = trace.swap_evaluations;
  doc["initial_welfare"] = trace.records.empty() ? 0.0 : trace.records.front().welfare;
  doc["final_welfare"] = trace.records.empty() ? 0.0 : trace.records.back().welfare;
  doc["best_welfare"] = trace.best_welfare;
  doc["terminated_reason"] =
      trace.terminated_reason == Termination::stable ? "stable" : "iteration_cap";
  doc["polished"] = trace.polished;
  return doc;
}

Json stability_to_json(const StabilityReport& report) {
  Json doc;
  doc["stable"] = report.stable;
  doc["witness"] = report.witness ? Json::array({report.witness->first, report.witness->second})
                                  : Json(nullptr);
  doc["pairs_checked"] = report.pairs_checked;
  return doc;
}

Json metrics_to_json(const PartitionMetrics& metrics) {
  Json doc;
  doc["total_edge_weight"] = metrics.total_edge_weight;
  doc["internal_weight"] = metrics.internal_weight;
  Json rows = Json::array();
  for (HouseId h = 0; h < metrics.house_count; ++h) {
    Json row = Json::array();
    for (HouseId g = 0; g < metrics.house_count; ++g) row.push_back(metrics.cross(h, g));
    rows.push_back(std::move(row));
  }
  doc["cross_weights"] = std::move(rows);
  doc["gamma"] = metrics.gamma;
  return doc;
}

Json bounds_to_json(const BoundReport& report) {
  Json doc;
  doc["m"] = report.m;
  doc["Q"] = optional_number(report.q_ratio);
  doc["gamma_star"] = report.gamma_star;
  doc["gamma_star_exact"] = report.gamma_star_exact;
  doc["q_max"] = report.q_max;
  doc["w_max"] = report.w_max;
  doc["D_delta"] = optional_number(report.d_delta);
  doc["bound_simple"] = optional_number(report.bound_simple);
  doc["simple_violations"] = report.simple_violations;
  doc["bound_general"] = optional_number(report.bound_general);
  doc["general_error"] = report.general_error.empty() ? Json(nullptr) : Json(report.general_error);
  return doc;
}

Json exact_to_json(const ExactSummary& summary) {
  Json doc;
  doc["matchings_enumerated"] = summary.matchings_enumerated;
  doc["stable_count"] = summary.stable_count;
  doc["max_welfare"] = summary.max_welfare;
  doc["max_stable_welfare"] = summary.max_stable_welfare;
  doc["min_stable_welfare"] = summary.min_stable_welfare;
  doc["exact_poa"] = finite_or_null(summary.exact_poa);
  doc["exact_pos"] = finite_or_null(summary.exact_pos);
  doc["gamma_star"] = summary.gamma_star;
  doc["min_stable_gamma"] = summary.min_stable_gamma;
  doc["poa_via_gamma"] = optional_number(summary.poa_via_gamma);
  doc["argmax_welfare"] = matching_to_json(summary.argmax_welfare)["assignment"];
  doc["argmax_stable"] = matching_to_json(summary.argmax_stable)["assignment"];
  doc["argmin_stable"] = matching_to_json(summary.argmin_stable)["assignment"];
  return doc;
}

Json artifacts_to_json(const RunArtifacts& a) {
  Json doc;
  doc["schema_version"] = kResultsSchemaVersion;
  doc["command"] = a.command;
  doc["instance_hash"] = hash_hex(a.instance_hash);
  doc["seed"] = a.seed;
  if (a.matching) doc["matching"] = matching_to_json(*a.matching)["assignment"];
  if (a.welfare) doc["welfare"] = *a.welfare;
  if (a.potential) doc["potential"] = *a.potential;
  if (a.trace) doc["trace"] = trace_summary_to_json(*a.trace);
  if (a.stability) doc["stability"] = stability_to_json(*a.stability);
  if (a.metrics) doc["metrics"] = metrics_to_json(*a.metrics);
  if (a.bounds) doc["bounds"] = bounds_to_json(*a.bounds);
  if (a.exact) doc["exact"] = exact_to_json(*a.exact);
  return doc;
}

}  // namespace peermatch
