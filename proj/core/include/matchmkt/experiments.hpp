#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "matchmkt/market.hpp"
#include "matchmkt/matching.hpp"
#include "matchmkt/signaling.hpp"

namespace matchmkt {

/// One swept parameter; an empty parameter name means a single run at
/// the base configuration.
struct SweepAxis {
  std::string parameter;  // "d", "n_applicants" or "n_firms"
  std::vector<long> values;
};

struct ScenarioConfig {
  MarketConfig base;
  Mechanism mechanism;
  SweepAxis sweep;
  int trials = 1;
  Side proposing = Side::Applicant;
  /// Witness sets no larger than epsilon * n_applicants count as
  /// almost stable.
  double epsilon = 0.05;
  bool include_unmatched_unmatched = true;
  /// Real wall-clock per trial; off by default so output bytes do not
  /// depend on machine or thread count.
  bool record_timings = false;
  int threads = 1;
  std::string output_path;

  void validate() const;
};

struct TrialRecord {
  int trial = 0;
  std::uint64_t seed = 0;
  int n_applicants = 0;
  int n_firms = 0;
  int d = 0;
  std::string mechanism;
  std::string dist_pre;
  std::string dist_post;
  int applicants_blocked = 0;
  int firms_blocked = 0;
  long blocking_pairs = 0;
  bool perfect_stable = false;
  int witness_size = 0;
  int unmatched_applicants = 0;
  int unmatched_firms = 0;
  double mean_applicant_rank = 0.0;
  double runtime_ms = 0.0;
  std::string error;  // empty on success; errored rows skip the CSV
};

/// Stable 64-bit trial seed; adding sweep points never perturbs
/// existing trials because the value index and trial id are mixed in
/// independently of the value list length.
std::uint64_t trial_seed(std::uint64_t base, std::size_t value_index,
                         int trial);

/// Runs trials for every sweep value; rows ordered by (sweep value,
/// trial) regardless of thread count. Per-trial failures land in the
/// record's error field and never abort the sweep.
std::vector<TrialRecord> run_scenario(const ScenarioConfig& cfg);

/// Exact column contract used by the CLI and the tests.
extern const char* const kCsvHeader;

void write_csv(const std::vector<TrialRecord>& records, std::ostream& out);

struct Stat {
  double mean = 0.0;
  double se = 0.0;
};

struct AggregateRow {
  long sweep_value = 0;
  int trials = 0;
  Stat applicants_blocked;
  Stat firms_blocked;
  Stat blocking_pairs;
  Stat perfect_rate;
  Stat witness_size;
  Stat unmatched_applicants;
  Stat unmatched_firms;
  Stat mean_applicant_rank;
};

/// Groups successful records by sweep value, preserving value order.
std::vector<AggregateRow> aggregate(const std::vector<TrialRecord>& records,
                                    const ScenarioConfig& cfg);

}  // namespace matchmkt
