#pragma once

// Instance data model for many-to-one matching with peer effects: the
// friendship network, houses with quotas, utilities, welfare and the
// potential function.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "peermatch/error.hpp"

namespace peermatch {

using StudentId = std::size_t;
using HouseId = std::size_t;

/// Default tolerance for "strictly greater" comparisons.
inline constexpr double kDefaultEpsilon = 1e-9;

struct WeightedEdge {
  StudentId u = 0;
  StudentId v = 0;
  double weight = 1.0;

  bool operator==(const WeightedEdge&) const = default;
};

/// How repeated mentions of one unordered pair are combined.
enum class SymmetrizePolicy {
  strict,  // all mentions must carry the same weight, else AsymmetricInput
  max,
  min,
  sum,
};

struct Neighbor {
  StudentId student = 0;
  double weight = 0.0;
};

/// Weighted undirected friendship graph in CSR form. Lookups are symmetric by
/// construction; self-loops and zero weights are never stored.
class SocialNetwork {
public:
  SocialNetwork() = default;

  /// Throws NegativeWeight, InvalidStudent (endpoint out of range),
  /// InvalidInput (self-loop) or AsymmetricInput (strict policy only).
  static SocialNetwork from_edges(std::size_t student_count,
                                  std::span<const WeightedEdge> edges,
                                  SymmetrizePolicy policy = SymmetrizePolicy::strict);

  std::size_t student_count() const noexcept { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  std::size_t edge_count() const noexcept { return adjacency_.size() / 2; }

  double weight(StudentId s, StudentId t) const;
  std::span<const Neighbor> neighbors(StudentId s) const;

  /// |E|, each undirected edge counted once.
  double total_weight() const noexcept { return total_weight_; }
  double max_weight() const noexcept { return max_weight_; }
  bool unit_weights() const noexcept;

  /// Canonical edge list (u < v, sorted).
  std::vector<WeightedEdge> edges() const;

  /// Same graph over a larger vertex set; the new vertices are isolated.
  SocialNetwork padded(std::size_t student_count) const;

private:
  std::vector<std::size_t> offsets_;
  std::vector<Neighbor> adjacency_;
  double total_weight_ = 0.0;
  double max_weight_ = 0.0;
};

struct HouseSpec {
  std::int64_t id = 0;
  std::size_t quota = 1;
  double desirability = 0.0;  // objective D_h, used when no per-student table is given
};

/// House-side utility U_h(mu) = D^h_{mu(h)}. Built-ins are the one-sided
/// market (always 0) and an additive per-student score table; `custom` takes
/// any set function and sees real students only.
class HouseScoring {
public:
  enum class Mode { zero, additive, custom };
  using SetFunction = std::function<double(HouseId, std::span<const StudentId>)>;

  HouseScoring() = default;

  static HouseScoring zero() { return HouseScoring{}; }
  /// scores[s][h] for real students s.
  static HouseScoring additive(std::vector<std::vector<double>> scores);
  static HouseScoring custom(SetFunction function);

  Mode mode() const noexcept { return mode_; }
  bool is_zero() const noexcept { return mode_ == Mode::zero; }

  const std::vector<std::vector<double>>& score_table() const noexcept { return scores_; }
  const SetFunction& set_function() const noexcept { return function_; }

private:
  Mode mode_ = Mode::zero;
  std::vector<std::vector<double>> scores_;
  SetFunction function_;
};

/// Everything needed to build an Instance; the JSON instance format maps onto
/// this one to one.
struct InstanceConfig {
  std::size_t students = 0;  // real students; holes are added by build_instance
  std::vector<HouseSpec> houses;
  std::vector<WeightedEdge> edges;
  SymmetrizePolicy symmetrize = SymmetrizePolicy::strict;
  /// desirability[s][h] = D^s_h. Absent means objective: D^s_h = houses[h].desirability.
  std::optional<std::vector<std::vector<double>>> desirability;
  HouseScoring scoring;
  std::optional<std::uint64_t> seed;
};

class Instance {
public:
  const SocialNetwork& network() const noexcept { return network_; }
  std::span<const HouseSpec> houses() const noexcept { return config_.houses; }
  std::size_t house_count() const noexcept { return config_.houses.size(); }
  std::size_t quota(HouseId h) const { return config_.houses.at(h).quota; }

  std::size_t real_student_count() const noexcept { return config_.students; }
  std::size_t padded_student_count() const noexcept { return padded_; }
  std::size_t hole_count() const noexcept { return padded_ - config_.students; }
  bool is_hole(StudentId s) const noexcept { return s >= config_.students; }
  bool exact_quotas() const noexcept { return padded_ == config_.students; }

  /// D^s_h; zero for holes.
  double desirability(StudentId s, HouseId h) const noexcept {
    return desirability_[s * config_.houses.size() + h];
  }
  /// True when every real student values every house identically.
  bool objective_desirability() const noexcept { return objective_; }
  /// Common D_h of an objective instance (the house spec value otherwise).
  double house_value(HouseId h) const;

  const HouseScoring& scoring() const noexcept { return config_.scoring; }
  /// Additive score of student s for house h (0 for holes and other modes).
  double score(StudentId s, HouseId h) const noexcept;
  /// U_h for a roster that may contain holes.
  double evaluate_roster(HouseId h, std::span<const StudentId> roster) const;

  const InstanceConfig& config() const noexcept { return config_; }

private:
  friend Instance build_instance(const InstanceConfig& config);

  InstanceConfig config_;
  SocialNetwork network_;
  std::size_t padded_ = 0;
  std::vector<double> desirability_;
  bool objective_ = true;
};

/// Validates and pads a configuration. Errors: QuotaDeficit, NegativeWeight,
/// AsymmetricInput, InvalidStudent, InvalidInput.
Instance build_instance(const InstanceConfig& config);

/// Quota-exact assignment of every padded student. Keeps both directions so a
/// swap only touches two rosters.
class Matching {
public:
  Matching() = default;

  /// `assignment` either covers all padded students or only the real ones; in
  /// the latter case holes fill the remaining vacancies in house order.
  static Matching from_assignment(const Instance& inst, std::vector<HouseId> assignment);

  HouseId house_of(StudentId s) const { return assignment_.at(s); }
  std::span<const StudentId> roster(HouseId h) const { return rosters_.at(h); }
  std::span<const HouseId> assignment() const noexcept { return assignment_; }
  std::size_t student_count() const noexcept { return assignment_.size(); }
  std::size_t house_count() const noexcept { return rosters_.size(); }

  /// In-place exchange; t takes s's roster slot and vice versa.
  void swap_students(StudentId s, StudentId t);

  bool operator==(const Matching& other) const { return assignment_ == other.assignment_; }

private:
  std::vector<HouseId> assignment_;
  std::vector<std::vector<StudentId>> rosters_;
  std::vector<std::size_t> slot_;
};

/// Sum of w(s, x) over the students x currently in house h.
double weight_to_house(const Instance& inst, const Matching& mu, StudentId s, HouseId h);

double student_utility(const Instance& inst, const Matching& mu, StudentId s);
double house_utility(const Instance& inst, const Matching& mu, HouseId h);
double social_welfare(const Instance& inst, const Matching& mu);
double potential(const Instance& inst, const Matching& mu);

/// mu_s^t as a new value. Errors: SameHouse, InvalidStudent.
Matching apply_swap(const Matching& mu, StudentId s, StudentId t);

struct SwapDelta {
  double welfare = 0.0;
  double potential = 0.0;
};

/// W(mu_s^t) - W(mu) and Phi(mu_s^t) - Phi(mu) from the two affected rosters.
SwapDelta welfare_delta(const Instance& inst, const Matching& mu, StudentId s, StudentId t);

}  // namespace peermatch
