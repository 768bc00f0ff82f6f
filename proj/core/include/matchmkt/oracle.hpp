#pragma once

#include <vector>

#include "matchmkt/matching.hpp"

namespace matchmkt {

/// Every stable matching of an instance, found by exhaustive search.
struct StableSet {
  std::vector<Matching> matchings;
  int applicant_optimal = -1;  // index into matchings, -1 if ambiguous
  int firm_optimal = -1;
};

/// Enumerates all matchings of the graph, partial ones included, and
/// keeps the stable ones. Guarded to at most 12 agents in total.
StableSet enumerate_stable_matchings(const MarketInstance& inst,
                                     const InterviewGraph& graph);

/// Definitional availability: candidate weakly prefers beneficiary to
/// its partner in every enumerated stable matching.
bool available_bruteforce(const MarketInstance& inst,
                          const InterviewGraph& graph, int candidate,
                          int beneficiary);

/// True iff the set of matched agents is identical across the stable
/// set. Rejects a set containing an unstable matching.
bool rural_hospital_check(const MarketInstance& inst,
                          const InterviewGraph& graph, const StableSet& set);

}  // namespace matchmkt
