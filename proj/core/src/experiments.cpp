#include "matchmkt/experiments.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "matchmkt/errors.hpp"

namespace matchmkt {

void ScenarioConfig::validate() const {
  base.validate();
  if (trials < 1) throw ConfigError("trials must be >= 1");
  if (threads < 1) throw ConfigError("threads must be >= 1");
  if (epsilon < 0.0) throw ConfigError("epsilon must be non-negative");
  if (!sweep.parameter.empty()) {
    if (sweep.parameter != "d" && sweep.parameter != "n_applicants" &&
        sweep.parameter != "n_firms")
      throw ConfigError("unknown sweep parameter: " + sweep.parameter);
    if (sweep.values.empty())
      throw ConfigError("sweep value list must be nonempty");
    for (long v : sweep.values)
      if (v < 1) throw ConfigError("sweep values must be positive");
  }
}

std::uint64_t trial_seed(std::uint64_t base, std::size_t value_index,
                         int trial) {
  return mix64(combine(combine(base, value_index),
                       static_cast<std::uint64_t>(trial)));
}

namespace {

struct TrialTask {
  std::size_t value_index;
  long value;  // 0 when there is no sweep
  int trial;
};

TrialRecord run_one(const ScenarioConfig& cfg, const TrialTask& task) {
  MarketConfig mc = cfg.base;
  Mechanism mech = cfg.mechanism;
  if (cfg.sweep.parameter == "d")
    mech.d = static_cast<int>(task.value);
  else if (cfg.sweep.parameter == "n_applicants")
    mc.n_applicants = static_cast<int>(task.value);
  else if (cfg.sweep.parameter == "n_firms")
    mc.n_firms = static_cast<int>(task.value);
  mc.seed = trial_seed(cfg.base.seed, task.value_index, task.trial);

  TrialRecord rec;
  rec.trial = task.trial;
  rec.seed = mc.seed;
  rec.n_applicants = mc.n_applicants;
  rec.n_firms = mc.n_firms;
  rec.d = mech.d;
  rec.mechanism = mech.tag();
  rec.dist_pre = mc.pre_dist.tag();
  rec.dist_post = mc.post_dist.tag();

  auto start = std::chrono::steady_clock::now();
  try {
    MarketInstance inst(mc);
    auto graph = build_interview_graph(inst, mech);
    auto matching = deferred_acceptance(inst, graph, cfg.proposing);

    BlockingScanOptions opts;
    opts.include_unmatched_unmatched = cfg.include_unmatched_unmatched;
    auto report = interim_blocking_report(inst, graph, matching, opts);
    rec.applicants_blocked = report.applicants_blocked;
    rec.firms_blocked = report.firms_blocked;
    rec.blocking_pairs = static_cast<long>(report.pairs.size());
    rec.perfect_stable = is_perfect_interim_stable(report);

    auto witness = almost_stable_witness(inst, graph);
    rec.witness_size = static_cast<int>(witness.witness.size());

    double rank_sum = 0.0;
    int matched = 0;
    for (int a = 0; a < graph.n_applicants(); ++a) {
      if (auto r = side_rank(inst, graph, matching, a)) {
        rank_sum += *r;
        ++matched;
      }
    }
    rec.mean_applicant_rank = matched > 0 ? rank_sum / matched : 0.0;
    rec.unmatched_applicants = graph.n_applicants() - matched;
    int matched_firms = 0;
    for (int j = 0; j < graph.n_firms(); ++j)
      matched_firms += matching.matched(graph.firm_vertex(j)) ? 1 : 0;
    rec.unmatched_firms = graph.n_firms() - matched_firms;
  } catch (const std::exception& e) {
    rec.error = e.what();
  }
  if (cfg.record_timings) {
    auto end = std::chrono::steady_clock::now();
    rec.runtime_ms =
        std::chrono::duration<double, std::milli>(end - start).count();
  }
  return rec;
}

}  // namespace

std::vector<TrialRecord> run_scenario(const ScenarioConfig& cfg) {
  cfg.validate();
  std::vector<TrialTask> tasks;
  std::vector<long> values =
      cfg.sweep.parameter.empty() ? std::vector<long>{0} : cfg.sweep.values;
  for (std::size_t vi = 0; vi < values.size(); ++vi)
    for (int t = 0; t < cfg.trials; ++t) tasks.push_back({vi, values[vi], t});

  std::vector<TrialRecord> records(tasks.size());
  int workers = std::min<int>(cfg.threads, static_cast<int>(tasks.size()));
  if (workers <= 1) {
    for (std::size_t i = 0; i < tasks.size(); ++i)
      records[i] = run_one(cfg, tasks[i]);
  } else {
    std::atomic<std::size_t> next{0};
    auto work = [&] {
      for (;;) {
        std::size_t i = next.fetch_add(1);
        if (i >= tasks.size()) return;
        records[i] = run_one(cfg, tasks[i]);
      }
    };
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  return records;
}

const char* const kCsvHeader =
    "trial,seed,n_applicants,n_firms,d,mechanism,dist_pre,dist_post,"
    "applicants_blocked,firms_blocked,blocking_pairs,perfect_stable,"
    "witness_size,unmatched_applicants,unmatched_firms,mean_applicant_rank,"
    "runtime_ms";

namespace {

// Distribution tags carry commas ("normal:0,1"); quote such fields.
std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char c : s) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  quoted += '"';
  return quoted;
}

}  // namespace

void write_csv(const std::vector<TrialRecord>& records, std::ostream& out) {
  out << kCsvHeader << '\n';
  char buf[64];
  for (const auto& r : records) {
    if (!r.error.empty()) continue;
    out << r.trial << ',' << r.seed << ',' << r.n_applicants << ','
        << r.n_firms << ',' << r.d << ',' << csv_field(r.mechanism) << ','
        << csv_field(r.dist_pre) << ',' << csv_field(r.dist_post) << ','
        << r.applicants_blocked << ','
        << r.firms_blocked << ',' << r.blocking_pairs << ','
        << (r.perfect_stable ? 1 : 0) << ',' << r.witness_size << ','
        << r.unmatched_applicants << ',' << r.unmatched_firms << ',';
    std::snprintf(buf, sizeof(buf), "%.6f", r.mean_applicant_rank);
    out << buf << ',';
    std::snprintf(buf, sizeof(buf), "%.3f", r.runtime_ms);
    out << buf << '\n';
  }
}

namespace {

Stat stat_of(const std::vector<double>& xs) {
  Stat s;
  if (xs.empty()) return s;
  double sum = 0.0;
  for (double x : xs) sum += x;
  s.mean = sum / static_cast<double>(xs.size());
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - s.mean) * (x - s.mean);
    s.se = std::sqrt(ss / (static_cast<double>(xs.size()) - 1.0) /
                     static_cast<double>(xs.size()));
  }
  return s;
}

}  // namespace

std::vector<AggregateRow> aggregate(const std::vector<TrialRecord>& records,
                                    const ScenarioConfig& cfg) {
  std::vector<long> values =
      cfg.sweep.parameter.empty() ? std::vector<long>{0} : cfg.sweep.values;
  auto value_of = [&](const TrialRecord& r) -> long {
    if (cfg.sweep.parameter == "d") return r.d;
    if (cfg.sweep.parameter == "n_applicants") return r.n_applicants;
    if (cfg.sweep.parameter == "n_firms") return r.n_firms;
    return 0;
  };
  std::vector<AggregateRow> rows;
  for (long v : values) {
    std::vector<double> ab, fb, bp, pr, ws, ua, uf, mr;
    for (const auto& r : records) {
      if (!r.error.empty() || value_of(r) != v) continue;
      ab.push_back(r.applicants_blocked);
      fb.push_back(r.firms_blocked);
      bp.push_back(static_cast<double>(r.blocking_pairs));
      pr.push_back(r.perfect_stable ? 1.0 : 0.0);
      ws.push_back(r.witness_size);
      ua.push_back(r.unmatched_applicants);
      uf.push_back(r.unmatched_firms);
      mr.push_back(r.mean_applicant_rank);
    }
    AggregateRow row;
    row.sweep_value = v;
    row.trials = static_cast<int>(ab.size());
    row.applicants_blocked = stat_of(ab);
    row.firms_blocked = stat_of(fb);
    row.blocking_pairs = stat_of(bp);
    row.perfect_rate = stat_of(pr);
    row.witness_size = stat_of(ws);
    row.unmatched_applicants = stat_of(ua);
    row.unmatched_firms = stat_of(uf);
    row.mean_applicant_rank = stat_of(mr);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace matchmkt
