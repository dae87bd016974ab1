#include "peermatch/market.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

namespace peermatch {

namespace {

bool valid_weight(double w) { return std::isfinite(w) && w >= 0.0; }

void check_table(const std::vector<std::vector<double>>& table, std::size_t rows,
                 std::size_t cols, const char* what) {
  if (table.size() != rows) {
    throw Error(Errc::invalid_input, std::string(what) + " table needs one row per student");
  }
  for (const auto& row : table) {
    if (row.size() != cols) {
      throw Error(Errc::invalid_input, std::string(what) + " table needs one column per house");
    }
    for (double v : row) {
      if (!valid_weight(v)) throw Error(Errc::negative_weight, std::string(what) + " value < 0");
    }
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// SocialNetwork

SocialNetwork SocialNetwork::from_edges(std::size_t student_count,
                                        std::span<const WeightedEdge> edges,
                                        SymmetrizePolicy policy) {
  std::vector<WeightedEdge> canon;
  canon.reserve(edges.size());
  for (const auto& e : edges) {
    if (e.u >= student_count || e.v >= student_count) {
      throw Error(Errc::invalid_student,
                  "edge " + std::to_string(e.u) + "-" + std::to_string(e.v) + " out of range");
    }
    if (e.u == e.v) throw Error(Errc::invalid_input, "self-loop on " + std::to_string(e.u));
    if (!valid_weight(e.weight)) {
      throw Error(Errc::negative_weight,
                  "edge " + std::to_string(e.u) + "-" + std::to_string(e.v));
    }
    canon.push_back({std::min(e.u, e.v), std::max(e.u, e.v), e.weight});
  }
  std::stable_sort(canon.begin(), canon.end(), [](const WeightedEdge& a, const WeightedEdge& b) {
    return a.u != b.u ? a.u < b.u : a.v < b.v;
  });

  std::vector<WeightedEdge> merged;
  for (std::size_t i = 0; i < canon.size();) {
    WeightedEdge acc = canon[i];
    std::size_t j = i + 1;
    for (; j < canon.size() && canon[j].u == acc.u && canon[j].v == acc.v; ++j) {
      double w = canon[j].weight;
      switch (policy) {
        case SymmetrizePolicy::strict:
          if (w != acc.weight) {
            throw Error(Errc::asymmetric_input, "pair " + std::to_string(acc.u) + "-" +
                                                    std::to_string(acc.v) +
                                                    " given with different weights");
          }
          break;
        case SymmetrizePolicy::max: acc.weight = std::max(acc.weight, w); break;
        case SymmetrizePolicy::min: acc.weight = std::min(acc.weight, w); break;
        case SymmetrizePolicy::sum: acc.weight += w; break;
      }
    }
    if (acc.weight > 0.0) merged.push_back(acc);
    i = j;
  }

  SocialNetwork net;
  std::vector<std::size_t> degree(student_count, 0);
  for (const auto& e : merged) {
    ++degree[e.u];
    ++degree[e.v];
  }
  net.offsets_.assign(student_count + 1, 0);
  for (std::size_t s = 0; s < student_count; ++s) net.offsets_[s + 1] = net.offsets_[s] + degree[s];
  net.adjacency_.resize(net.offsets_.back());
  std::vector<std::size_t> cursor(net.offsets_.begin(), net.offsets_.end() - 1);
  for (const auto& e : merged) {
    net.adjacency_[cursor[e.u]++] = {e.v, e.weight};
    net.adjacency_[cursor[e.v]++] = {e.u, e.weight};
    net.total_weight_ += e.weight;
    net.max_weight_ = std::max(net.max_weight_, e.weight);
  }
  for (std::size_t s = 0; s < student_count; ++s) {
    std::sort(net.adjacency_.begin() + static_cast<std::ptrdiff_t>(net.offsets_[s]),
              net.adjacency_.begin() + static_cast<std::ptrdiff_t>(net.offsets_[s + 1]),
              [](const Neighbor& a, const Neighbor& b) { return a.student < b.student; });
  }
  return net;
}

std::span<const Neighbor> SocialNetwork::neighbors(StudentId s) const {
  if (s >= student_count()) throw Error(Errc::invalid_student, std::to_string(s));
  return std::span<const Neighbor>(adjacency_).subspan(offsets_[s], offsets_[s + 1] - offsets_[s]);
}

double SocialNetwork::weight(StudentId s, StudentId t) const {
  auto row = neighbors(s);
  if (t >= student_count()) throw Error(Errc::invalid_student, std::to_string(t));
  auto it = std::lower_bound(row.begin(), row.end(), t,
                             [](const Neighbor& n, StudentId id) { return n.student < id; });
  return (it != row.end() && it->student == t) ? it->weight : 0.0;
}

bool SocialNetwork::unit_weights() const noexcept {
  return std::all_of(adjacency_.begin(), adjacency_.end(),
                     [](const Neighbor& n) { return n.weight == 1.0; });
}

std::vector<WeightedEdge> SocialNetwork::edges() const {
  std::vector<WeightedEdge> out;
  out.reserve(edge_count());
  for (StudentId s = 0; s < student_count(); ++s) {
    for (const auto& n : neighbors(s)) {
      if (s < n.student) out.push_back({s, n.student, n.weight});
    }
  }
  return out;
}

SocialNetwork SocialNetwork::padded(std::size_t count) const {
  if (count < student_count()) throw Error(Errc::invalid_input, "cannot shrink a network");
  SocialNetwork out = *this;
  if (out.offsets_.empty()) out.offsets_.push_back(0);
  out.offsets_.resize(count + 1, out.offsets_.back());
  return out;
}

// ---------------------------------------------------------------------------
// HouseScoring

HouseScoring HouseScoring::additive(std::vector<std::vector<double>> scores) {
  HouseScoring out;
  out.mode_ = Mode::additive;
  out.scores_ = std::move(scores);
  return out;
}

HouseScoring HouseScoring::custom(SetFunction function) {
  if (!function) throw Error(Errc::invalid_input, "custom house scoring needs a function");
  HouseScoring out;
  out.mode_ = Mode::custom;
  out.function_ = std::move(function);
  return out;
}

// ---------------------------------------------------------------------------
// Instance

Instance build_instance(const InstanceConfig& config) {
  const std::size_t m = config.houses.size();
  if (m == 0) throw Error(Errc::invalid_input, "at least one house is required");

  std::size_t capacity = 0;
  for (const auto& h : config.houses) {
    if (h.quota == 0) throw Error(Errc::invalid_input, "house " + std::to_string(h.id) + " has quota 0");
    if (!valid_weight(h.desirability)) {
      throw Error(Errc::negative_weight, "house " + std::to_string(h.id) + " desirability");
    }
    capacity += h.quota;
  }
  if (capacity < config.students) {
    throw Error(Errc::quota_deficit, "total quota " + std::to_string(capacity) + " < " +
                                         std::to_string(config.students) + " students");
  }
  if (config.desirability) check_table(*config.desirability, config.students, m, "desirability");
  if (config.scoring.mode() == HouseScoring::Mode::additive) {
    check_table(config.scoring.score_table(), config.students, m, "score");
  }
  for (const auto& e : config.edges) {
    if (e.u >= config.students || e.v >= config.students) {
      throw Error(Errc::invalid_student, "edge " + std::to_string(e.u) + "-" +
                                             std::to_string(e.v) + " references an unknown student");
    }
  }

  Instance inst;
  inst.config_ = config;
  inst.padded_ = capacity;
  inst.network_ = SocialNetwork::from_edges(capacity, config.edges, config.symmetrize);

  inst.desirability_.assign(capacity * m, 0.0);
  for (StudentId s = 0; s < config.students; ++s) {
    for (HouseId h = 0; h < m; ++h) {
      inst.desirability_[s * m + h] =
          config.desirability ? (*config.desirability)[s][h] : config.houses[h].desirability;
    }
  }
  inst.objective_ = true;
  for (StudentId s = 1; s < config.students && inst.objective_; ++s) {
    for (HouseId h = 0; h < m; ++h) {
      if (inst.desirability_[s * m + h] != inst.desirability_[h]) {
        inst.objective_ = false;
        break;
      }
    }
  }
  return inst;
}

double Instance::house_value(HouseId h) const {
  if (h >= house_count()) throw Error(Errc::invalid_input, "house " + std::to_string(h));
  if (objective_ && config_.students > 0) return desirability_[h];
  return config_.houses[h].desirability;
}

double Instance::score(StudentId s, HouseId h) const noexcept {
  if (config_.scoring.mode() != HouseScoring::Mode::additive || is_hole(s)) return 0.0;
  return config_.scoring.score_table()[s][h];
}

double Instance::evaluate_roster(HouseId h, std::span<const StudentId> roster) const {
  switch (config_.scoring.mode()) {
    case HouseScoring::Mode::zero: return 0.0;
    case HouseScoring::Mode::additive: {
      double sum = 0.0;
      for (StudentId s : roster) sum += score(s, h);
      return sum;
    }
    case HouseScoring::Mode::custom: {
      std::vector<StudentId> real;
      real.reserve(roster.size());
      for (StudentId s : roster) {
        if (!is_hole(s)) real.push_back(s);
      }
      std::sort(real.begin(), real.end());
      return config_.scoring.set_function()(h, real);
    }
  }
  return 0.0;
}

// ---------------------------------------------------------------------------
// Matching

Matching Matching::from_assignment(const Instance& inst, std::vector<HouseId> assignment) {
  const std::size_t n = inst.padded_student_count();
  const std::size_t m = inst.house_count();
  if (assignment.size() != n && assignment.size() != inst.real_student_count()) {
    throw Error(Errc::invalid_input, "assignment has " + std::to_string(assignment.size()) +
                                         " entries, expected " + std::to_string(n));
  }
  std::vector<std::size_t> count(m, 0);
  for (HouseId h : assignment) {
    if (h >= m) throw Error(Errc::invalid_input, "unknown house " + std::to_string(h));
    if (++count[h] > inst.quota(h)) {
      throw Error(Errc::invalid_input, "house " + std::to_string(h) + " over quota");
    }
  }
  // Fill vacancies with holes in house order.
  for (HouseId h = 0; h < m && assignment.size() < n; ++h) {
    while (count[h] < inst.quota(h)) {
      assignment.push_back(h);
      ++count[h];
    }
  }

  Matching mu;
  mu.assignment_ = std::move(assignment);
  mu.rosters_.assign(m, {});
  mu.slot_.assign(n, 0);
  for (HouseId h = 0; h < m; ++h) mu.rosters_[h].reserve(inst.quota(h));
  for (StudentId s = 0; s < n; ++s) {
    auto& roster = mu.rosters_[mu.assignment_[s]];
    mu.slot_[s] = roster.size();
    roster.push_back(s);
  }
  return mu;
}

void Matching::swap_students(StudentId s, StudentId t) {
  if (s >= assignment_.size() || t >= assignment_.size()) {
    throw Error(Errc::invalid_student, std::to_string(std::max(s, t)));
  }
  const HouseId h = assignment_[s];
  const HouseId g = assignment_[t];
  if (h == g) throw Error(Errc::same_house, std::to_string(s) + "," + std::to_string(t));
  rosters_[h][slot_[s]] = t;
  rosters_[g][slot_[t]] = s;
  std::swap(slot_[s], slot_[t]);
  assignment_[s] = g;
  assignment_[t] = h;
}

// ---------------------------------------------------------------------------
// Utilities

double weight_to_house(const Instance& inst, const Matching& mu, StudentId s, HouseId h) {
  double sum = 0.0;
  for (const auto& n : inst.network().neighbors(s)) {
    if (mu.house_of(n.student) == h) sum += n.weight;
  }
  return sum;
}

double student_utility(const Instance& inst, const Matching& mu, StudentId s) {
  const HouseId h = mu.house_of(s);
  return inst.desirability(s, h) + weight_to_house(inst, mu, s, h);
}

double house_utility(const Instance& inst, const Matching& mu, HouseId h) {
  return inst.evaluate_roster(h, mu.roster(h));
}

double social_welfare(const Instance& inst, const Matching& mu) {
  double total = 0.0;
  for (StudentId s = 0; s < mu.student_count(); ++s) total += student_utility(inst, mu, s);
  for (HouseId h = 0; h < mu.house_count(); ++h) total += house_utility(inst, mu, h);
  return total;
}

double potential(const Instance& inst, const Matching& mu) {
  double houses = 0.0;
  for (HouseId h = 0; h < mu.house_count(); ++h) houses += house_utility(inst, mu, h);
  double desirability = 0.0;
  double peers = 0.0;
  for (StudentId s = 0; s < mu.student_count(); ++s) {
    const HouseId h = mu.house_of(s);
    desirability += inst.desirability(s, h);
    peers += weight_to_house(inst, mu, s, h);
  }
  return houses + desirability + 0.5 * peers;
}

Matching apply_swap(const Matching& mu, StudentId s, StudentId t) {
  Matching out = mu;
  out.swap_students(s, t);
  return out;
}

SwapDelta welfare_delta(const Instance& inst, const Matching& mu, StudentId s, StudentId t) {
  if (s >= mu.student_count() || t >= mu.student_count()) {
    throw Error(Errc::invalid_student, std::to_string(std::max(s, t)));
  }
  const HouseId h = mu.house_of(s);
  const HouseId g = mu.house_of(t);
  if (h == g) throw Error(Errc::same_house, std::to_string(s) + "," + std::to_string(t));

  const double w_st = inst.network().weight(s, t);
  const double s_to_h = weight_to_house(inst, mu, s, h);
  const double s_to_g = weight_to_house(inst, mu, s, g);
  const double t_to_h = weight_to_house(inst, mu, t, h);
  const double t_to_g = weight_to_house(inst, mu, t, g);

  const double d_desire = inst.desirability(s, g) - inst.desirability(s, h) +
                          inst.desirability(t, h) - inst.desirability(t, g);
  const double d_internal = (s_to_g - w_st) - s_to_h + (t_to_h - w_st) - t_to_g;

  double d_houses = 0.0;
  switch (inst.scoring().mode()) {
    case HouseScoring::Mode::zero: break;
    case HouseScoring::Mode::additive:
      d_houses = inst.score(t, h) - inst.score(s, h) + inst.score(s, g) - inst.score(t, g);
      break;
    case HouseScoring::Mode::custom: {
      std::vector<StudentId> new_h(mu.roster(h).begin(), mu.roster(h).end());
      std::vector<StudentId> new_g(mu.roster(g).begin(), mu.roster(g).end());
      std::replace(new_h.begin(), new_h.end(), s, t);
      std::replace(new_g.begin(), new_g.end(), t, s);
      d_houses = inst.evaluate_roster(h, new_h) - inst.evaluate_roster(h, mu.roster(h)) +
                 inst.evaluate_roster(g, new_g) - inst.evaluate_roster(g, mu.roster(g));
      break;
    }
  }
  return {d_desire + 2.0 * d_internal + d_houses, d_desire + d_internal + d_houses};
}

}  // namespace peermatch
