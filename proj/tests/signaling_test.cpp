#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "matchmkt/errors.hpp"
#include "matchmkt/signaling.hpp"

#include "helpers.hpp"

using namespace matchmkt;

namespace {

TierSpec three_tier_fig1() {
  // Tier sizes (low tier first): applicants (4,3,4), firms (1,5,5).
  TierSpec t;
  t.applicant_fractions = {4.0 / 11, 3.0 / 11, 4.0 / 11};
  t.firm_fractions = {1.0 / 11, 5.0 / 11, 5.0 / 11};
  return t;
}

}  // namespace

TEST_CASE("target tiers follow the dominance pattern") {
  auto map = target_tiers(three_tier_fig1(), 11, 11);
  REQUIRE(map.applicant_targets.size() == 3);
  REQUIRE(map.firm_targets.size() == 3);
  CHECK(map.applicant_targets[2] == 3);  // top applicants aim at top firms
  CHECK(map.applicant_targets[1] == 2);
  CHECK(map.applicant_targets[0] == 1);
  CHECK(map.firm_targets[2] == 2);  // top firms aim at middle applicants
  CHECK(map.firm_targets[1] == 1);
  CHECK(map.firm_targets[0] == 1);
}

TEST_CASE("single-tier target tiers") {
  TierSpec single;
  auto equal = target_tiers(single, 10, 10);
  CHECK(equal.applicant_targets[0] == 1);
  CHECK(equal.firm_targets[0] == 1);

  auto fewer_apps = target_tiers(single, 8, 10);
  CHECK(fewer_apps.applicant_targets[0] == 1);
  CHECK(!fewer_apps.firm_targets[0].has_value());
}

TEST_CASE("general imbalance") {
  TierSpec single;
  auto [flag_eq, gamma_eq] = general_imbalance(single, 1000, 1000);
  CHECK(!flag_eq);
  CHECK(gamma_eq == 0.0);

  auto [flag, gamma] = general_imbalance(single, 800, 1000);
  CHECK(flag);
  CHECK(gamma == 200.0);

  // Brute-force the 9 tier pairs of the three-tier layout at x100.
  auto tiers = three_tier_fig1();
  auto [flag3, gamma3] = general_imbalance(tiers, 1100, 1100);
  std::vector<long> cum_a{1100, 700, 400}, cum_j{1100, 1000, 500};
  long expect = std::numeric_limits<long>::max();
  for (long ca : cum_a)
    for (long cj : cum_j) expect = std::min(expect, std::labs(ca - cj));
  CHECK(gamma3 == static_cast<double>(expect));
  CHECK(flag3 == (expect > 0));
}

TEST_CASE("applicant-side signaling gives d-regular applicant degrees") {
  MarketInstance inst(testutil::small_market(30, 40, 8));
  auto g = build_interview_graph(inst, parse_mechanism("applicant", 6));
  for (int a = 0; a < 30; ++a) CHECK(g.degree(a) == 6);
  long firm_total = 0;
  for (int j = 0; j < 40; ++j) firm_total += g.degree(inst.firm_vertex(j));
  CHECK(firm_total == 30 * 6);
}

TEST_CASE("signals go to the top-d pre-utility partners") {
  MarketInstance inst(testutil::small_market(10, 10, 19));
  auto g = build_interview_graph(inst, parse_mechanism("applicant", 3));
  for (int a = 0; a < 10; ++a) {
    double worst_signaled = 1e18;
    for (int fv : g.neighbors(a))
      worst_signaled = std::min(worst_signaled, inst.pre_utility(a, fv));
    for (int j = 0; j < 10; ++j) {
      int fv = inst.firm_vertex(j);
      if (!g.has_edge(a, fv)) CHECK(inst.pre_utility(a, fv) < worst_signaled);
    }
  }
}

TEST_CASE("d equal to the pool gives the complete bipartite graph") {
  MarketInstance inst(testutil::small_market(4, 5, 3));
  auto g = build_interview_graph(inst, parse_mechanism("applicant", 5));
  CHECK(g.edge_count() == 20);
}

TEST_CASE("oversized d is rejected") {
  MarketInstance inst(testutil::small_market(4, 5, 3));
  CHECK_THROWS_AS(build_interview_graph(inst, parse_mechanism("applicant", 6)),
                  ConfigError);
  CHECK_THROWS_AS(build_interview_graph(inst, parse_mechanism("firm", 5)),
                  ConfigError);
  CHECK_THROWS_AS(parse_mechanism("applicant", 0), ConfigError);
  CHECK_THROWS_AS(parse_mechanism("bogus", 1), ConfigError);
}

TEST_CASE("both-side graph is the union of the one-sided graphs") {
  MarketInstance inst(testutil::small_market(12, 12, 77));
  auto ga = build_interview_graph(inst, parse_mechanism("applicant", 3));
  auto gf = build_interview_graph(inst, parse_mechanism("firm", 3));
  auto gb = build_interview_graph(inst, parse_mechanism("both", 3));
  for (int a = 0; a < 12; ++a)
    for (int j = 0; j < 12; ++j) {
      int fv = inst.firm_vertex(j);
      CHECK(gb.has_edge(a, fv) == (ga.has_edge(a, fv) || gf.has_edge(a, fv)));
    }
  for (int v = 0; v < 24; ++v) CHECK(gb.degree(v) >= 3);
}

TEST_CASE("the graph never depends on post-interview scores") {
  auto mc = testutil::small_market(15, 15, 4);
  mc.post_dist = ScoreDistribution::uniform(-1, 1);
  MarketInstance x(mc);
  mc.post_dist = ScoreDistribution::normal(0, 9);
  MarketInstance y(mc);
  for (const char* name : {"applicant", "firm", "both"}) {
    auto gx = build_interview_graph(x, parse_mechanism(name, 4));
    auto gy = build_interview_graph(y, parse_mechanism(name, 4));
    CHECK(gx.edge_list() == gy.edge_list());
  }
}

TEST_CASE("multi-tier signals stay inside target tiers") {
  auto mc = testutil::small_market(110, 110, 6);
  mc.tiers = three_tier_fig1();
  MarketInstance inst(mc);
  auto targets = target_tiers(mc.tiers, 110, 110);
  auto g = build_interview_graph(inst, parse_mechanism("multitier", 2));
  for (int a = 0; a < 110; ++a)
    for (int fv : g.neighbors(a)) {
      int s = inst.tier_of(a);
      int k = inst.tier_of(fv);
      bool applicant_signal = targets.applicant_targets[s - 1] == k;
      bool firm_signal = targets.firm_targets[k - 1] == s;
      CHECK((applicant_signal || firm_signal));
    }
}

TEST_CASE("restricted mechanism keeps one side per mutual pair") {
  // Single tier with equal sizes dominates mutually; the default
  // resolver keeps the applicant side, so the restricted graph equals
  // the applicant-side graph.
  MarketInstance inst(testutil::small_market(20, 20, 13));
  auto restricted =
      build_interview_graph(inst, parse_mechanism("restricted", 3));
  Mechanism app_mt = parse_mechanism("multitier", 3);
  auto multi = build_interview_graph(inst, app_mt);
  // Multi-tier single tier means both sides signal; restricted must be
  // strictly smaller and exactly the applicants' signal set.
  CHECK(restricted.edge_count() < multi.edge_count());
  for (int a = 0; a < 20; ++a) CHECK(restricted.degree(a) >= 3);
  long total = 0;
  for (int a = 0; a < 20; ++a) total += restricted.degree(a);
  CHECK(total == restricted.edge_count());
  CHECK(restricted.edge_count() == 20 * 3);

  Mechanism firm_side = parse_mechanism("restricted", 3);
  firm_side.restricted_resolver[{1, 1}] = Side::Firm;
  auto rf = build_interview_graph(inst, firm_side);
  for (int j = 0; j < 20; ++j)
    CHECK(rf.degree(inst.firm_vertex(j)) >= 3);
  CHECK(rf.edge_count() == 20 * 3);
  CHECK(rf.edge_list() != restricted.edge_list());
}

TEST_CASE("untargeted tiers can be routed to the lowest opposite tier") {
  TierSpec t;
  t.applicant_fractions = {1.0};
  t.firm_fractions = {1.0};
  auto mc = testutil::small_market(8, 10, 23);
  MarketInstance inst(mc);
  // Firms dominate nothing here (more firms than applicants).
  auto plain = build_interview_graph(inst, parse_mechanism("multitier", 2));
  Mechanism routed = parse_mechanism("multitier", 2);
  routed.route_untargeted_to_lowest = true;
  auto g = build_interview_graph(inst, routed);
  CHECK(plain.edge_count() == 8 * 2);  // applicants only
  CHECK(g.edge_count() > plain.edge_count());
}

TEST_CASE("firm degrees look binomial under applicant signaling") {
  // Under ApplicantSide(d) each applicant picks what amounts to a
  // uniform d-subset of firms, so a firm's degree is Binom(n_A, d/n_J).
  const int na = 50, nj = 50, d = 5, markets = 200;
  std::vector<long> observed(16, 0);  // degree 0..14, 15+ pooled
  for (int s = 0; s < markets; ++s) {
    MarketInstance inst(
        testutil::small_market(na, nj, 100000 + static_cast<std::uint64_t>(s)));
    auto g = build_interview_graph(inst, parse_mechanism("applicant", d));
    for (int j = 0; j < nj; ++j) {
      int deg = g.degree(inst.firm_vertex(j));
      ++observed[static_cast<std::size_t>(std::min(deg, 15))];
    }
  }
  double p = static_cast<double>(d) / nj;
  double total = static_cast<double>(markets) * nj;
  double chi2 = 0.0;
  double tail = 1.0;
  for (int k = 0; k < 15; ++k) {
    double logpmf = std::lgamma(na + 1.0) - std::lgamma(k + 1.0) -
                    std::lgamma(na - k + 1.0) + k * std::log(p) +
                    (na - k) * std::log1p(-p);
    double pk = std::exp(logpmf);
    tail -= pk;
    double expect = total * pk;
    double diff = static_cast<double>(observed[static_cast<std::size_t>(k)]) -
                  expect;
    chi2 += diff * diff / expect;
  }
  double tail_expect = total * std::max(tail, 1e-12);
  double tail_diff = static_cast<double>(observed[15]) - tail_expect;
  chi2 += tail_diff * tail_diff / tail_expect;
  // 15 degrees of freedom; the 99.9% critical value is 37.7.
  CHECK(chi2 < 37.7);
}
