#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "matchmkt/market.hpp"

namespace matchmkt {

enum class Side { Applicant, Firm };

inline Side opposite(Side s) {
  return s == Side::Applicant ? Side::Firm : Side::Applicant;
}

struct Mechanism {
  enum class Kind {
    ApplicantSide,
    FirmSide,
    BothSide,
    MultiTiered,
    RestrictedMultiTiered,
  };

  Kind kind = Kind::ApplicantSide;
  int d = 1;
  /// Tiers with no target tier send no signals by default; this routes
  /// them to the lowest opposite tier instead.
  bool route_untargeted_to_lowest = false;
  /// RestrictedMultiTiered: for a mutual-target pair (applicant tier s,
  /// firm tier k), which side signals. Applicant side by default.
  std::map<std::pair<int, int>, Side> restricted_resolver;

  std::string tag() const;
};

Mechanism parse_mechanism(const std::string& name, int d);

/// Target tiers per the dominance relation; entries are 1-based tier
/// indices, nullopt when a tier dominates nothing.
struct TargetTierMap {
  std::vector<std::optional<int>> applicant_targets;  // indexed by s-1
  std::vector<std::optional<int>> firm_targets;       // indexed by k-1
};

TargetTierMap target_tiers(const TierSpec& tiers, int n_applicants,
                           int n_firms);

/// (min cumulative gap > 0, min over all tier pairs of
/// |cum applicants - cum firms|), the gap reported as gamma * n.
std::pair<bool, double> general_imbalance(const TierSpec& tiers,
                                          int n_applicants, int n_firms);

InterviewGraph build_interview_graph(const MarketInstance& inst,
                                     const Mechanism& mech);

}  // namespace matchmkt
