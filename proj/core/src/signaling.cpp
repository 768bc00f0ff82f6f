#include "matchmkt/signaling.hpp"

#include <algorithm>
#include <cmath>

#include "matchmkt/errors.hpp"

namespace matchmkt {

std::string Mechanism::tag() const {
  switch (kind) {
    case Kind::ApplicantSide:
      return "applicant";
    case Kind::FirmSide:
      return "firm";
    case Kind::BothSide:
      return "both";
    case Kind::MultiTiered:
      return "multitier";
    case Kind::RestrictedMultiTiered:
      return "restricted";
  }
  return "?";
}

Mechanism parse_mechanism(const std::string& name, int d) {
  Mechanism m;
  m.d = d;
  if (name == "applicant")
    m.kind = Mechanism::Kind::ApplicantSide;
  else if (name == "firm")
    m.kind = Mechanism::Kind::FirmSide;
  else if (name == "both")
    m.kind = Mechanism::Kind::BothSide;
  else if (name == "multitier")
    m.kind = Mechanism::Kind::MultiTiered;
  else if (name == "restricted")
    m.kind = Mechanism::Kind::RestrictedMultiTiered;
  else
    throw ConfigError("unknown mechanism: " + name);
  if (d < 1) throw ConfigError("mechanism requires d >= 1");
  return m;
}

namespace {

std::vector<long> cumulative_from_top(const std::vector<double>& fractions,
                                      int n) {
  auto counts = apportion(fractions, n);
  std::vector<long> cum(counts.size());
  long acc = 0;
  for (std::size_t i = counts.size(); i-- > 0;) {
    acc += counts[i];
    cum[i] = acc;
  }
  return cum;
}

}  // namespace

TargetTierMap target_tiers(const TierSpec& tiers, int n_applicants,
                           int n_firms) {
  tiers.validate();
  auto cum_a = cumulative_from_top(tiers.applicant_fractions, n_applicants);
  auto cum_j = cumulative_from_top(tiers.firm_fractions, n_firms);
  TargetTierMap map;
  map.applicant_targets.assign(cum_a.size(), std::nullopt);
  map.firm_targets.assign(cum_j.size(), std::nullopt);
  for (std::size_t s = 0; s < cum_a.size(); ++s) {
    // Highest firm tier whose cumulative count still covers tier s.
    for (std::size_t k = cum_j.size(); k-- > 0;) {
      if (cum_a[s] <= cum_j[k]) {
        map.applicant_targets[s] = static_cast<int>(k) + 1;
        break;
      }
    }
  }
  for (std::size_t k = 0; k < cum_j.size(); ++k) {
    for (std::size_t s = cum_a.size(); s-- > 0;) {
      if (cum_j[k] <= cum_a[s]) {
        map.firm_targets[k] = static_cast<int>(s) + 1;
        break;
      }
    }
  }
  return map;
}

std::pair<bool, double> general_imbalance(const TierSpec& tiers,
                                          int n_applicants, int n_firms) {
  auto cum_a = cumulative_from_top(tiers.applicant_fractions, n_applicants);
  auto cum_j = cumulative_from_top(tiers.firm_fractions, n_firms);
  long min_gap = std::numeric_limits<long>::max();
  for (long ca : cum_a)
    for (long cj : cum_j) min_gap = std::min(min_gap, std::labs(ca - cj));
  return {min_gap > 0, static_cast<double>(min_gap)};
}

namespace {

// Top-d partners of `signaler` among `pool` by pre-interview utility,
// ties broken by the instance's jitter stream.
std::vector<int> top_d(const MarketInstance& inst, int signaler,
                       std::vector<int> pool, int d) {
  if (static_cast<std::size_t>(d) > pool.size())
    throw ConfigError("signal count d exceeds candidate pool size");
  auto better = [&](int x, int y) {
    return inst.pre_key(signaler, x) > inst.pre_key(signaler, y);
  };
  std::nth_element(pool.begin(), pool.begin() + (d - 1), pool.end(), better);
  pool.resize(static_cast<std::size_t>(d));
  return pool;
}

void add_signals(const MarketInstance& inst, int signaler,
                 const std::vector<int>& pool, int d,
                 std::vector<std::pair<int, int>>& edges) {
  for (int target : top_d(inst, signaler, pool, d)) {
    int a = inst.is_applicant(signaler) ? signaler : target;
    int j = inst.is_applicant(signaler) ? target : signaler;
    edges.emplace_back(a, j - inst.n_applicants());
  }
}

}  // namespace

InterviewGraph build_interview_graph(const MarketInstance& inst,
                                     const Mechanism& mech) {
  const int na = inst.n_applicants();
  const int nj = inst.n_firms();
  std::vector<std::pair<int, int>> edges;

  auto all_firms = [&] {
    std::vector<int> v(static_cast<std::size_t>(nj));
    for (int j = 0; j < nj; ++j) v[static_cast<std::size_t>(j)] = na + j;
    return v;
  };
  auto all_applicants = [&] {
    std::vector<int> v(static_cast<std::size_t>(na));
    for (int a = 0; a < na; ++a) v[static_cast<std::size_t>(a)] = a;
    return v;
  };

  switch (mech.kind) {
    case Mechanism::Kind::ApplicantSide: {
      auto firms = all_firms();
      for (int a = 0; a < na; ++a) add_signals(inst, a, firms, mech.d, edges);
      break;
    }
    case Mechanism::Kind::FirmSide: {
      auto applicants = all_applicants();
      for (int j = 0; j < nj; ++j)
        add_signals(inst, na + j, applicants, mech.d, edges);
      break;
    }
    case Mechanism::Kind::BothSide: {
      auto firms = all_firms();
      auto applicants = all_applicants();
      for (int a = 0; a < na; ++a) add_signals(inst, a, firms, mech.d, edges);
      for (int j = 0; j < nj; ++j)
        add_signals(inst, na + j, applicants, mech.d, edges);
      break;
    }
    case Mechanism::Kind::MultiTiered:
    case Mechanism::Kind::RestrictedMultiTiered: {
      const auto& tiers = inst.config().tiers;
      auto targets = target_tiers(tiers, na, nj);
      const int m = static_cast<int>(tiers.applicant_fractions.size());
      const int l = static_cast<int>(tiers.firm_fractions.size());

      std::vector<std::vector<int>> firms_in(static_cast<std::size_t>(l + 1));
      std::vector<std::vector<int>> apps_in(static_cast<std::size_t>(m + 1));
      for (int j = 0; j < nj; ++j)
        firms_in[static_cast<std::size_t>(inst.tier_of(na + j))].push_back(na +
                                                                           j);
      for (int a = 0; a < na; ++a)
        apps_in[static_cast<std::size_t>(inst.tier_of(a))].push_back(a);

      auto applicant_tier_signals = [&](int s) -> std::optional<int> {
        auto t = targets.applicant_targets[static_cast<std::size_t>(s - 1)];
        if (!t && mech.route_untargeted_to_lowest) t = 1;
        return t;
      };
      auto firm_tier_signals = [&](int k) -> std::optional<int> {
        auto t = targets.firm_targets[static_cast<std::size_t>(k - 1)];
        if (!t && mech.route_untargeted_to_lowest) t = 1;
        return t;
      };
      // Mutual-target pairs signal from one side only in the restricted
      // variant.
      auto restricted_side = [&](int s, int k) {
        auto it = mech.restricted_resolver.find({s, k});
        return it == mech.restricted_resolver.end() ? Side::Applicant
                                                    : it->second;
      };

      for (int s = 1; s <= m; ++s) {
        auto k = applicant_tier_signals(s);
        if (!k) continue;
        if (mech.kind == Mechanism::Kind::RestrictedMultiTiered) {
          auto back = firm_tier_signals(*k);
          if (back && *back == s && restricted_side(s, *k) != Side::Applicant)
            continue;
        }
        const auto& pool = firms_in[static_cast<std::size_t>(*k)];
        for (int a : apps_in[static_cast<std::size_t>(s)])
          add_signals(inst, a, pool, mech.d, edges);
      }
      for (int k = 1; k <= l; ++k) {
        auto s = firm_tier_signals(k);
        if (!s) continue;
        if (mech.kind == Mechanism::Kind::RestrictedMultiTiered) {
          auto back = applicant_tier_signals(*s);
          if (back && *back == k && restricted_side(*s, k) != Side::Firm)
            continue;
        }
        const auto& pool = apps_in[static_cast<std::size_t>(*s)];
        for (int j : firms_in[static_cast<std::size_t>(k)])
          add_signals(inst, j, pool, mech.d, edges);
      }
      break;
    }
  }
  return InterviewGraph(na, nj, edges);
}

}  // namespace matchmkt
