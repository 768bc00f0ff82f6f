#include <benchmark/benchmark.h>

#include "matchmkt/matching.hpp"
#include "matchmkt/signaling.hpp"
#include "matchmkt/treealg.hpp"

namespace {

using namespace matchmkt;

MarketConfig bench_config(int n, std::uint64_t seed) {
  MarketConfig mc;
  mc.n_applicants = n;
  mc.n_firms = n;
  mc.pre_dist = ScoreDistribution::normal(0.0, 1.0);
  mc.post_dist = ScoreDistribution::uniform(-1.0, 1.0);
  mc.seed = seed;
  return mc;
}

void BM_BuildInterviewGraph(benchmark::State& state) {
  MarketInstance inst(bench_config(static_cast<int>(state.range(0)), 7));
  auto mech = parse_mechanism("applicant", 10);
  for (auto _ : state) {
    auto g = build_interview_graph(inst, mech);
    benchmark::DoNotOptimize(g.edge_count());
  }
}
BENCHMARK(BM_BuildInterviewGraph)->Arg(250)->Arg(1000);

void BM_DeferredAcceptance(benchmark::State& state) {
  MarketInstance inst(bench_config(static_cast<int>(state.range(0)), 7));
  auto mech = parse_mechanism("applicant", 10);
  auto g = build_interview_graph(inst, mech);
  for (auto _ : state) {
    auto m = deferred_acceptance(inst, g, Side::Applicant);
    benchmark::DoNotOptimize(m.partner.data());
  }
}
BENCHMARK(BM_DeferredAcceptance)->Arg(250)->Arg(1000);

void BM_InterimBlockingScan(benchmark::State& state) {
  MarketInstance inst(bench_config(static_cast<int>(state.range(0)), 7));
  auto mech = parse_mechanism("applicant", 10);
  auto g = build_interview_graph(inst, mech);
  auto m = deferred_acceptance(inst, g, Side::Applicant);
  for (auto _ : state) {
    auto report = interim_blocking_report(inst, g, m);
    benchmark::DoNotOptimize(report.pairs.size());
  }
}
BENCHMARK(BM_InterimBlockingScan)->Arg(250)->Arg(500);

void BM_FixedPoint(benchmark::State& state) {
  for (auto _ : state) {
    auto r = fixed_point(static_cast<double>(state.range(0)), 9.0, 0.1);
    benchmark::DoNotOptimize(r.x_star);
  }
}
BENCHMARK(BM_FixedPoint)->Arg(9)->Arg(99)->Arg(9999);

}  // namespace

BENCHMARK_MAIN();
