#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "matchmkt/distribution.hpp"
#include "matchmkt/graph.hpp"

namespace matchmkt {

/// Hierarchical tier structure; index s in 1..m carries intrinsic value
/// v = s, so later entries are the more desirable tiers.
struct TierSpec {
  std::vector<double> applicant_fractions{1.0};
  std::vector<double> firm_fractions{1.0};

  void validate() const;
  bool single_tier() const {
    return applicant_fractions.size() == 1 && firm_fractions.size() == 1;
  }
};

/// Largest-remainder apportionment of n into |fractions| integer counts.
std::vector<int> apportion(const std::vector<double>& fractions, int n);

struct MarketConfig {
  int n_applicants = 1;
  int n_firms = 1;
  TierSpec tiers;
  ScoreDistribution pre_dist = ScoreDistribution::uniform(-1.0, 1.0);
  ScoreDistribution post_dist = ScoreDistribution::uniform(-1.0, 1.0);
  /// Per-applicant hidden types: firms' post-interview scores toward an
  /// applicant of type t are drawn from the t-th component.
  std::optional<std::vector<std::pair<double, ScoreDistribution>>>
      applicant_type_mixture;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Lexicographic preference key: utility first, then a per-pair jitter
/// that breaks exact ties under atomic score distributions.
struct PrefKey {
  double utility;
  double tie;

  friend bool operator>(const PrefKey& x, const PrefKey& y) {
    if (x.utility != y.utility) return x.utility > y.utility;
    return x.tie > y.tie;
  }
  friend bool operator>=(const PrefKey& x, const PrefKey& y) {
    return !(y > x);
  }
};

/// Immutable sampled market. Pre-interview scores are materialized as
/// full tables per direction; post-interview scores come lazily from
/// keyed streams, so only pairs that interview ever pay for them.
class MarketInstance {
 public:
  explicit MarketInstance(MarketConfig config);

  const MarketConfig& config() const { return config_; }
  int n_applicants() const { return config_.n_applicants; }
  int n_firms() const { return config_.n_firms; }
  int n_agents() const { return config_.n_applicants + config_.n_firms; }
  bool is_applicant(int v) const { return v < config_.n_applicants; }
  int firm_vertex(int j) const { return config_.n_applicants + j; }

  /// 1-based tier index of an agent.
  int tier_of(int v) const;
  /// Tier index in multi-tier markets, 0 in single-tier markets.
  double intrinsic_value(int v) const;
  /// Hidden type label in mixture markets, -1 otherwise.
  int type_of_applicant(int a) const;

  double pre_score(int viewer, int target) const;
  double post_score(int viewer, int target) const;

  double pre_utility(int viewer, int target) const;
  double post_utility(int viewer, int target) const;
  double interim_utility(int viewer, int target,
                         const InterviewGraph& graph) const;

  double jitter(int viewer, int target) const;
  PrefKey pre_key(int viewer, int target) const {
    return {pre_utility(viewer, target), jitter(viewer, target)};
  }
  PrefKey post_key(int viewer, int target) const {
    return {post_utility(viewer, target), jitter(viewer, target)};
  }
  PrefKey interim_key(int viewer, int target,
                      const InterviewGraph& graph) const {
    return {interim_utility(viewer, target, graph), jitter(viewer, target)};
  }

 private:
  void check_opposite(int viewer, int target) const;

  MarketConfig config_;
  std::vector<int> applicant_tier_;  // 1-based
  std::vector<int> firm_tier_;       // 1-based
  std::vector<int> applicant_type_;  // -1 when no mixture configured
  std::vector<double> pre_app_;      // B_{a,j}, row-major a*nJ+j
  std::vector<double> pre_firm_;     // B_{j,a}, row-major j*nA+a
};

MarketInstance sample_market(const MarketConfig& config);

}  // namespace matchmkt
