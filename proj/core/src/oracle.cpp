#include "matchmkt/oracle.hpp"

#include <algorithm>

#include "matchmkt/errors.hpp"

namespace matchmkt {

namespace {

void enumerate_rec(const MarketInstance& inst, const InterviewGraph& graph,
                   int a, Matching& current, StableSet& out) {
  if (a == graph.n_applicants()) {
    if (verify_stable(inst, graph, current).empty())
      out.matchings.push_back(current);
    return;
  }
  // Applicant a stays unmatched.
  enumerate_rec(inst, graph, a + 1, current, out);
  for (int fv : graph.neighbors(a)) {
    if (current.partner_of(fv) >= 0) continue;
    current.partner[static_cast<std::size_t>(a)] = fv;
    current.partner[static_cast<std::size_t>(fv)] = a;
    enumerate_rec(inst, graph, a + 1, current, out);
    current.partner[static_cast<std::size_t>(a)] = -1;
    current.partner[static_cast<std::size_t>(fv)] = -1;
  }
}

// True iff every agent on `side` weakly prefers its partner in x to its
// partner in y.
bool side_weakly_prefers(const MarketInstance& inst, const InterviewGraph& g,
                         const Matching& x, const Matching& y, bool applicant) {
  for (int v = 0; v < g.n_vertices(); ++v) {
    if (g.is_applicant(v) != applicant) continue;
    int px = x.partner_of(v);
    int py = y.partner_of(v);
    if (px == py) continue;
    if (px < 0) return false;
    if (py >= 0 && inst.post_key(v, py) > inst.post_key(v, px)) return false;
  }
  return true;
}

}  // namespace

StableSet enumerate_stable_matchings(const MarketInstance& inst,
                                     const InterviewGraph& graph) {
  if (graph.n_applicants() + graph.n_firms() > 12)
    throw DomainError("exhaustive enumeration is limited to 12 agents");
  StableSet out;
  Matching current;
  current.partner.assign(static_cast<std::size_t>(graph.n_vertices()), -1);
  enumerate_rec(inst, graph, 0, current, out);

  for (std::size_t i = 0; i < out.matchings.size(); ++i) {
    bool app_best = true, firm_best = true;
    for (std::size_t k = 0; k < out.matchings.size(); ++k) {
      if (k == i) continue;
      app_best = app_best && side_weakly_prefers(inst, graph, out.matchings[i],
                                                 out.matchings[k], true);
      firm_best = firm_best && side_weakly_prefers(
                                   inst, graph, out.matchings[i],
                                   out.matchings[k], false);
    }
    if (app_best) out.applicant_optimal = static_cast<int>(i);
    if (firm_best) out.firm_optimal = static_cast<int>(i);
  }
  return out;
}

bool available_bruteforce(const MarketInstance& inst,
                          const InterviewGraph& graph, int candidate,
                          int beneficiary) {
  if (!graph.has_edge(candidate, beneficiary))
    throw DomainError("availability is defined only between neighbors");
  auto set = enumerate_stable_matchings(inst, graph);
  for (const auto& m : set.matchings) {
    int p = m.partner_of(candidate);
    if (p >= 0 && inst.post_key(candidate, p) >
                      inst.post_key(candidate, beneficiary))
      return false;
  }
  return true;
}

bool rural_hospital_check(const MarketInstance& inst,
                          const InterviewGraph& graph, const StableSet& set) {
  for (const auto& m : set.matchings)
    if (!verify_stable(inst, graph, m).empty())
      throw ContractError("stable set contains an unstable matching");
  if (set.matchings.empty()) return true;
  std::vector<char> first;
  for (std::size_t i = 0; i < set.matchings.size(); ++i) {
    std::vector<char> matched(
        static_cast<std::size_t>(graph.n_vertices()), 0);
    for (int v = 0; v < graph.n_vertices(); ++v)
      matched[static_cast<std::size_t>(v)] = set.matchings[i].matched(v);
    if (i == 0)
      first = matched;
    else if (matched != first)
      return false;
  }
  return true;
}

}  // namespace matchmkt
