#include "matchmkt/matching.hpp"

#include <algorithm>
#include <limits>
#include <set>
#include <string>

#include "matchmkt/errors.hpp"

namespace matchmkt {

std::vector<std::pair<int, int>> Matching::pairs() const {
  std::vector<std::pair<int, int>> out;
  for (int v = 0; v < static_cast<int>(partner.size()); ++v) {
    int p = partner_of(v);
    if (p > v) out.emplace_back(v, p);
  }
  return out;
}

Matching deferred_acceptance(const MarketInstance& inst,
                             const InterviewGraph& graph, Side proposing,
                             ProposalOrder order) {
  const int n = graph.n_vertices();
  Matching result;
  result.partner.assign(static_cast<std::size_t>(n), -1);
  result.proposing = proposing;

  auto is_proposer = [&](int v) {
    return (proposing == Side::Applicant) == graph.is_applicant(v);
  };

  // Per-proposer neighbor list, best first, consumed front to back.
  std::vector<std::vector<int>> prefs(static_cast<std::size_t>(n));
  std::vector<std::size_t> next(static_cast<std::size_t>(n), 0);
  std::set<int> free;
  for (int v = 0; v < n; ++v) {
    if (!is_proposer(v) || graph.degree(v) == 0) continue;
    auto nbrs = graph.neighbors(v);
    auto& list = prefs[static_cast<std::size_t>(v)];
    list.assign(nbrs.begin(), nbrs.end());
    std::sort(list.begin(), list.end(), [&](int x, int y) {
      return inst.post_key(v, x) > inst.post_key(v, y);
    });
    free.insert(v);
  }

  while (!free.empty()) {
    int p = order == ProposalOrder::LowestIdFirst ? *free.begin()
                                                  : *free.rbegin();
    auto& queue = prefs[static_cast<std::size_t>(p)];
    if (next[static_cast<std::size_t>(p)] >= queue.size()) {
      free.erase(p);
      continue;
    }
    int r = queue[next[static_cast<std::size_t>(p)]++];
    int held = result.partner_of(r);
    if (held < 0) {
      result.partner[static_cast<std::size_t>(r)] = p;
      result.partner[static_cast<std::size_t>(p)] = r;
      free.erase(p);
    } else if (inst.post_key(r, p) > inst.post_key(r, held)) {
      result.partner[static_cast<std::size_t>(held)] = -1;
      result.partner[static_cast<std::size_t>(r)] = p;
      result.partner[static_cast<std::size_t>(p)] = r;
      free.erase(p);
      free.insert(held);
    }
  }
  return result;
}

namespace {

void check_matching_edges(const InterviewGraph& graph,
                          const Matching& matching) {
  if (static_cast<int>(matching.partner.size()) != graph.n_vertices())
    throw ContractError("matching size does not match graph");
  for (int v = 0; v < graph.n_vertices(); ++v) {
    int p = matching.partner_of(v);
    if (p < 0) continue;
    if (matching.partner_of(p) != v)
      throw ContractError("matching partner map is not mutual at vertex " +
                          std::to_string(v));
    if (!graph.has_edge(v, p))
      throw ContractError("matched pair (" + std::to_string(v) + "," +
                          std::to_string(p) + ") is not an interview edge");
  }
}

}  // namespace

std::vector<std::pair<int, int>> verify_stable(const MarketInstance& inst,
                                               const InterviewGraph& graph,
                                               const Matching& matching) {
  check_matching_edges(graph, matching);
  auto prefers = [&](int v, int alt) {
    int cur = matching.partner_of(v);
    return cur < 0 || inst.post_key(v, alt) > inst.post_key(v, cur);
  };
  std::vector<std::pair<int, int>> blocking;
  for (int a = 0; a < graph.n_applicants(); ++a)
    for (int j : graph.neighbors(a))
      if (prefers(a, j) && prefers(j, a)) blocking.emplace_back(a, j);
  return blocking;
}

BlockingReport interim_blocking_report(const MarketInstance& inst,
                                       const InterviewGraph& graph,
                                       const Matching& matching,
                                       const BlockingScanOptions& opts) {
  auto on_graph = verify_stable(inst, graph, matching);
  if (!on_graph.empty())
    throw ContractError(
        "input matching is unstable; blocking edge (" +
        std::to_string(on_graph.front().first) + "," +
        std::to_string(on_graph.front().second - graph.n_applicants()) + ")");

  auto excluded = [&](int a) {
    return a < static_cast<int>(opts.excluded_applicants.size()) &&
           opts.excluded_applicants[static_cast<std::size_t>(a)];
  };

  constexpr double kNegInf = -std::numeric_limits<double>::infinity();
  auto matched_utility = [&](int v) {
    int p = matching.partner_of(v);
    return p < 0 ? kNegInf : inst.interim_utility(v, p, graph);
  };
  auto matched_key = [&](int v) {
    int p = matching.partner_of(v);
    return p < 0 ? PrefKey{kNegInf, 0.0} : inst.interim_key(v, p, graph);
  };

  // Off-edge utilities cannot exceed the top intrinsic value plus the
  // pre-score ceiling; rows already matched above that are skipped.
  double row_ceiling = std::numeric_limits<double>::infinity();
  if (inst.config().pre_dist.bounded_above()) {
    double top_tier =
        inst.config().tiers.single_tier()
            ? 0.0
            : static_cast<double>(inst.config().tiers.firm_fractions.size());
    row_ceiling = top_tier + inst.config().pre_dist.max_support();
  }

  BlockingReport report;
  std::vector<char> firm_hit(static_cast<std::size_t>(graph.n_firms()), 0);
  for (int a = 0; a < graph.n_applicants(); ++a) {
    if (excluded(a)) continue;
    PrefKey a_key = matched_key(a);
    double a_util = matched_utility(a);
    if (a_util > row_ceiling) continue;
    bool a_hit = false;
    for (int j = 0; j < graph.n_firms(); ++j) {
      int fv = graph.firm_vertex(j);
      int fp = matching.partner_of(fv);
      if (fp == a) continue;
      if (!opts.include_unmatched_unmatched && !matching.matched(a) &&
          fp < 0)
        continue;
      if (!(inst.interim_key(a, fv, graph) > a_key)) continue;
      if (!(inst.interim_key(fv, a, graph) > matched_key(fv))) continue;
      report.pairs.push_back({a, fv,
                              inst.interim_utility(a, fv, graph) - a_util,
                              inst.interim_utility(fv, a, graph) -
                                  matched_utility(fv),
                              graph.has_edge(a, fv)});
      a_hit = true;
      firm_hit[static_cast<std::size_t>(j)] = 1;
    }
    if (a_hit) ++report.applicants_blocked;
  }
  for (char h : firm_hit) report.firms_blocked += h;
  return report;
}

bool is_perfect_interim_stable(const BlockingReport& report) {
  return report.pairs.empty();
}

bool available_with(const MarketInstance& inst, const InterviewGraph& graph,
                    const Matching& candidate_side_optimal, int candidate,
                    int beneficiary) {
  if (!graph.has_edge(candidate, beneficiary))
    throw DomainError("availability is defined only between neighbors");
  int best = candidate_side_optimal.partner_of(candidate);
  return best < 0 ||
         inst.post_key(candidate, beneficiary) >= inst.post_key(candidate,
                                                                best);
}

bool available(const MarketInstance& inst, const InterviewGraph& graph,
               int candidate, int beneficiary) {
  Side side = graph.is_applicant(candidate) ? Side::Applicant : Side::Firm;
  auto opt = deferred_acceptance(inst, graph, side);
  return available_with(inst, graph, opt, candidate, beneficiary);
}

WitnessResult almost_stable_witness(const MarketInstance& inst,
                                    const InterviewGraph& graph) {
  auto firm_optimal = deferred_acceptance(inst, graph, Side::Firm);

  WitnessResult result;
  std::vector<char> in_witness(static_cast<std::size_t>(graph.n_applicants()),
                               0);
  for (int a = 0; a < graph.n_applicants(); ++a) {
    bool has_available = false;
    for (int fv : graph.neighbors(a)) {
      if (inst.post_score(a, fv) < 0.0) continue;
      if (available_with(inst, graph, firm_optimal, fv, a)) {
        has_available = true;
        break;
      }
    }
    if (!has_available) {
      result.witness.push_back(a);
      in_witness[static_cast<std::size_t>(a)] = 1;
    }
  }

  // Re-match without the witness applicants and confirm the rest has no
  // interim blocking pair.
  std::vector<std::pair<int, int>> kept;
  for (int a = 0; a < graph.n_applicants(); ++a) {
    if (in_witness[static_cast<std::size_t>(a)]) continue;
    for (int fv : graph.neighbors(a))
      kept.emplace_back(a, fv - graph.n_applicants());
  }
  InterviewGraph reduced(graph.n_applicants(), graph.n_firms(), kept);
  auto rematch = deferred_acceptance(inst, reduced, Side::Applicant);
  BlockingScanOptions opts;
  opts.excluded_applicants = in_witness;
  auto report = interim_blocking_report(inst, reduced, rematch, opts);
  result.verified = is_perfect_interim_stable(report);
  return result;
}

std::optional<int> side_rank(const MarketInstance& inst,
                             const InterviewGraph& graph,
                             const Matching& matching, int agent) {
  int p = matching.partner_of(agent);
  if (p < 0) return std::nullopt;
  int rank = 1;
  for (int nbr : graph.neighbors(agent))
    if (inst.post_key(agent, nbr) > inst.post_key(agent, p)) ++rank;
  return rank;
}

}  // namespace matchmkt
