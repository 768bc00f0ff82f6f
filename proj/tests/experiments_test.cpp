#include <doctest.h>

#include <sstream>
#include <string>

#include "matchmkt/errors.hpp"
#include "matchmkt/experiments.hpp"
#include "matchmkt/oracle.hpp"
#include "matchmkt/scenario_io.hpp"

#include "helpers.hpp"

using namespace matchmkt;

namespace {

ScenarioConfig tiny_scenario() {
  ScenarioConfig cfg;
  cfg.base = testutil::small_market(30, 30, 11);
  cfg.mechanism = parse_mechanism("applicant", 4);
  cfg.trials = 3;
  cfg.sweep.parameter = "d";
  cfg.sweep.values = {2, 4, 6};
  return cfg;
}

std::string csv_of(const ScenarioConfig& cfg) {
  auto records = run_scenario(cfg);
  std::ostringstream out;
  write_csv(records, out);
  return out.str();
}

}  // namespace

TEST_CASE("trial seeds are stable and collision-free") {
  CHECK(trial_seed(1, 0, 0) == trial_seed(1, 0, 0));
  CHECK(trial_seed(1, 0, 0) != trial_seed(1, 0, 1));
  CHECK(trial_seed(1, 0, 0) != trial_seed(1, 1, 0));
  CHECK(trial_seed(1, 0, 0) != trial_seed(2, 0, 0));
}

TEST_CASE("csv header is the exact contract") {
  CHECK(std::string(kCsvHeader) ==
        "trial,seed,n_applicants,n_firms,d,mechanism,dist_pre,dist_post,"
        "applicants_blocked,firms_blocked,blocking_pairs,perfect_stable,"
        "witness_size,unmatched_applicants,unmatched_firms,"
        "mean_applicant_rank,runtime_ms");
}

TEST_CASE("identical configs give byte-identical csv across threads") {
  auto cfg = tiny_scenario();
  cfg.threads = 1;
  auto once = csv_of(cfg);
  CHECK(once == csv_of(cfg));
  cfg.threads = 8;
  CHECK(once == csv_of(cfg));
}

TEST_CASE("records are ordered by sweep value then trial") {
  auto records = run_scenario(tiny_scenario());
  REQUIRE(records.size() == 9);
  int i = 0;
  for (long d : {2L, 4L, 6L})
    for (int t = 0; t < 3; ++t) {
      CHECK(records[static_cast<std::size_t>(i)].d == d);
      CHECK(records[static_cast<std::size_t>(i)].trial == t);
      ++i;
    }
}

TEST_CASE("record invariants hold") {
  for (const auto& r : run_scenario(tiny_scenario())) {
    REQUIRE(r.error.empty());
    CHECK(r.perfect_stable == (r.blocking_pairs == 0));
    CHECK(r.applicants_blocked <= r.n_applicants);
    CHECK(r.firms_blocked <= r.n_firms);
    CHECK(r.witness_size <= r.n_applicants);
    CHECK(r.unmatched_applicants <= r.n_applicants);
    CHECK(r.unmatched_firms <= r.n_firms);
    CHECK(r.runtime_ms == 0.0);  // timings off by default
  }
}

TEST_CASE("failed trials are recorded but excluded from csv") {
  auto cfg = tiny_scenario();
  cfg.sweep.values = {4, 50};  // 50 signals exceed the 30-firm pool
  auto records = run_scenario(cfg);
  int failed = 0;
  for (const auto& r : records) failed += r.error.empty() ? 0 : 1;
  CHECK(failed == 3);
  std::ostringstream out;
  write_csv(records, out);
  int lines = 0;
  std::string line;
  std::istringstream in(out.str());
  while (std::getline(in, line)) ++lines;
  CHECK(lines == 1 + 3);
}

TEST_CASE("adding sweep points never perturbs earlier trials") {
  auto cfg = tiny_scenario();
  auto records_small = run_scenario(cfg);
  cfg.sweep.values.push_back(8);
  auto records_big = run_scenario(cfg);
  for (std::size_t i = 0; i < records_small.size(); ++i)
    CHECK(records_small[i].seed == records_big[i].seed);
}

TEST_CASE("aggregate means and standard errors") {
  ScenarioConfig cfg = tiny_scenario();
  auto records = run_scenario(cfg);
  auto rows = aggregate(records, cfg);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].sweep_value == 2);
  CHECK(rows[2].sweep_value == 6);
  for (const auto& row : rows) {
    CHECK(row.trials == 3);
    CHECK(row.applicants_blocked.mean >= 0.0);
    CHECK(row.applicants_blocked.se >= 0.0);
  }

  // Single record: mean equals the value, SE is zero.
  std::vector<TrialRecord> one(records.begin(), records.begin() + 1);
  ScenarioConfig single = cfg;
  single.sweep.values = {2};
  auto agg1 = aggregate(one, single);
  REQUIRE(agg1.size() == 1);
  CHECK(agg1[0].applicants_blocked.mean ==
        static_cast<double>(one[0].applicants_blocked));
  CHECK(agg1[0].applicants_blocked.se == 0.0);

  // Two equal records: SE stays zero.
  std::vector<TrialRecord> two{one[0], one[0]};
  auto agg2 = aggregate(two, single);
  CHECK(agg2[0].applicants_blocked.se == 0.0);
}

TEST_CASE("scenario validation") {
  auto cfg = tiny_scenario();
  cfg.trials = 0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = tiny_scenario();
  cfg.sweep.parameter = "banana";
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = tiny_scenario();
  cfg.sweep.values = {0};
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = tiny_scenario();
  cfg.epsilon = -0.1;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

TEST_CASE("scenario json parses every field") {
  const char* text = R"({
    "n_applicants": 40,
    "n_firms": 50,
    "seed": 9,
    "trials": 2,
    "threads": 3,
    "mechanism": "both",
    "d": 5,
    "dist_pre": "normal:0,1",
    "dist_post": "uniform:-1,1",
    "tiers": "0.5,0.5;0.25,0.75",
    "proposing": "firm",
    "epsilon": 0.1,
    "include_unmatched_unmatched": false,
    "record_timings": true,
    "output": "out.csv",
    "sweep": {"parameter": "d", "values": [2, 5]},
    "applicant_type_mixture": [[0.5, "pointmass:1"], [0.5, "pointmass:-1"]]
  })";
  auto cfg = parse_scenario(text);
  CHECK(cfg.base.n_applicants == 40);
  CHECK(cfg.base.n_firms == 50);
  CHECK(cfg.base.seed == 9);
  CHECK(cfg.trials == 2);
  CHECK(cfg.threads == 3);
  CHECK(cfg.mechanism.kind == Mechanism::Kind::BothSide);
  CHECK(cfg.mechanism.d == 5);
  CHECK(cfg.base.pre_dist.tag() == "normal:0,1");
  CHECK(cfg.base.post_dist.tag() == "uniform:-1,1");
  CHECK(cfg.base.tiers.applicant_fractions == std::vector<double>{0.5, 0.5});
  CHECK(cfg.base.tiers.firm_fractions == std::vector<double>{0.25, 0.75});
  CHECK(cfg.proposing == Side::Firm);
  CHECK(cfg.epsilon == 0.1);
  CHECK(!cfg.include_unmatched_unmatched);
  CHECK(cfg.record_timings);
  CHECK(cfg.output_path == "out.csv");
  CHECK(cfg.sweep.parameter == "d");
  CHECK(cfg.sweep.values == std::vector<long>{2, 5});
  REQUIRE(cfg.base.applicant_type_mixture.has_value());
  CHECK(cfg.base.applicant_type_mixture->size() == 2);
}

TEST_CASE("scenario json rejects junk") {
  CHECK_THROWS_AS(parse_scenario("not json"), ConfigError);
  CHECK_THROWS_AS(parse_scenario("[1,2]"), ConfigError);
  CHECK_THROWS_AS(parse_scenario(R"({"frobnicate": 1})"), ConfigError);
  CHECK_THROWS_AS(parse_scenario(R"({"n_applicants": "many"})"), ConfigError);
  CHECK_THROWS_AS(parse_scenario(R"({"proposing": "sideways"})"), ConfigError);
  CHECK_THROWS_AS(parse_scenario(R"({"dist_pre": "poisson:3"})"), ConfigError);
  CHECK_THROWS_AS(load_scenario("/nonexistent/path.json"), ConfigError);
}

TEST_CASE("tier strings parse") {
  auto t = parse_tiers("0.3,0.7;1.0");
  CHECK(t.applicant_fractions == std::vector<double>{0.3, 0.7});
  CHECK(t.firm_fractions == std::vector<double>{1.0});
  CHECK_THROWS_AS(parse_tiers("0.3,0.7"), ConfigError);
  CHECK_THROWS_AS(parse_tiers("a,b;c"), ConfigError);
  CHECK_THROWS_AS(parse_tiers("0.5,0.4;1.0"), ConfigError);
}

TEST_CASE("miniature pipeline agrees with the oracle") {
  int scenarios = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    int na = 2 + static_cast<int>(seed % 4);
    int nj = 2 + static_cast<int>((seed / 4) % 4);
    MarketConfig mc = testutil::small_market(na, nj, seed);
    MarketInstance inst(mc);
    int d = 1 + static_cast<int>(seed % static_cast<std::uint64_t>(nj));
    auto g = build_interview_graph(inst, parse_mechanism("applicant", d));
    auto m = deferred_acceptance(inst, g, Side::Applicant);

    auto set = enumerate_stable_matchings(inst, g);
    bool in_set = false;
    for (const auto& sm : set.matchings) in_set |= sm.partner == m.partner;
    CHECK(in_set);
    CHECK(rural_hospital_check(inst, g, set));
    for (int a = 0; a < na; ++a)
      for (int fv : g.neighbors(a))
        CHECK(available(inst, g, fv, a) ==
              available_bruteforce(inst, g, fv, a));
    ++scenarios;
  }
  CHECK(scenarios == 100);
}
