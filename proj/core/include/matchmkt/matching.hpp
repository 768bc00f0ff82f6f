#pragma once

#include <optional>
#include <vector>

#include "matchmkt/market.hpp"
#include "matchmkt/signaling.hpp"

namespace matchmkt {

struct Matching {
  std::vector<int> partner;  // indexed by vertex id, -1 unmatched
  Side proposing = Side::Applicant;

  int partner_of(int v) const { return partner[static_cast<std::size_t>(v)]; }
  bool matched(int v) const { return partner_of(v) >= 0; }
  std::vector<std::pair<int, int>> pairs() const;  // (a, firm vertex)
};

enum class ProposalOrder { LowestIdFirst, HighestIdFirst };

/// Proposing-side-optimal stable matching on the interview graph, with
/// preferences given by post-interview utilities over neighbors. The
/// proposal order does not change the result; the knob exists so tests
/// can assert that.
Matching deferred_acceptance(const MarketInstance& inst,
                             const InterviewGraph& graph, Side proposing,
                             ProposalOrder order = ProposalOrder::LowestIdFirst);

/// All on-graph blocking pairs of `matching`; empty iff stable.
std::vector<std::pair<int, int>> verify_stable(const MarketInstance& inst,
                                               const InterviewGraph& graph,
                                               const Matching& matching);

struct BlockingPair {
  int applicant;
  int firm;  // vertex id
  double applicant_gain;
  double firm_gain;
  bool interviewed;
};

struct BlockingReport {
  std::vector<BlockingPair> pairs;  // sorted by (applicant, firm)
  int applicants_blocked = 0;
  int firms_blocked = 0;
};

struct BlockingScanOptions {
  /// Count pairs where both sides are unmatched (they always block).
  bool include_unmatched_unmatched = true;
  /// Applicants to skip entirely (used by the witness verification).
  std::vector<char> excluded_applicants;
};

/// Scans every applicant-firm pair under interim utilities. The input
/// matching must be stable on the graph; an unstable input is rejected
/// with a blocking edge as evidence.
BlockingReport interim_blocking_report(const MarketInstance& inst,
                                       const InterviewGraph& graph,
                                       const Matching& matching,
                                       const BlockingScanOptions& opts = {});

bool is_perfect_interim_stable(const BlockingReport& report);

/// True iff `beneficiary` is weakly preferred by `candidate` to the
/// candidate's partner in the candidate-side-optimal stable matching
/// (hence in every stable matching). Requires (candidate, beneficiary)
/// to be an edge.
bool available(const MarketInstance& inst, const InterviewGraph& graph,
               int candidate, int beneficiary);

/// Same check against a precomputed candidate-side-optimal matching.
bool available_with(const MarketInstance& inst, const InterviewGraph& graph,
                    const Matching& candidate_side_optimal, int candidate,
                    int beneficiary);

struct WitnessResult {
  std::vector<int> witness;  // applicants, ascending
  bool verified = false;
};

/// Witness set of applicants with no available firm among their
/// non-negative post-score neighbors; verified by re-matching without
/// them and checking perfect interim stability of the rest.
WitnessResult almost_stable_witness(const MarketInstance& inst,
                                    const InterviewGraph& graph);

/// 1-based rank of the agent's partner within the agent's
/// post-interview order over its neighbors; nullopt if unmatched.
std::optional<int> side_rank(const MarketInstance& inst,
                             const InterviewGraph& graph,
                             const Matching& matching, int agent);

}  // namespace matchmkt
