#include "matchmkt/market.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "matchmkt/errors.hpp"

namespace matchmkt {

void TierSpec::validate() const {
  for (const auto* fs : {&applicant_fractions, &firm_fractions}) {
    if (fs->empty()) throw ConfigError("tier fractions must be nonempty");
    double total = 0.0;
    for (double f : *fs) {
      if (f <= 0.0) throw ConfigError("tier fractions must be positive");
      total += f;
    }
    if (std::abs(total - 1.0) > 1e-9)
      throw ConfigError("tier fractions must sum to 1");
  }
}

std::vector<int> apportion(const std::vector<double>& fractions, int n) {
  std::size_t k = fractions.size();
  std::vector<int> counts(k);
  std::vector<std::pair<double, std::size_t>> remainders(k);
  int assigned = 0;
  for (std::size_t i = 0; i < k; ++i) {
    double exact = fractions[i] * n;
    counts[i] = static_cast<int>(std::floor(exact));
    assigned += counts[i];
    // Sort key: largest remainder first, lowest index breaking ties.
    remainders[i] = {-(exact - std::floor(exact)), i};
  }
  std::sort(remainders.begin(), remainders.end());
  for (int r = 0; r < n - assigned; ++r)
    ++counts[remainders[static_cast<std::size_t>(r) % k].second];
  return counts;
}

void MarketConfig::validate() const {
  if (n_applicants < 1 || n_firms < 1)
    throw ConfigError("market requires at least one agent per side");
  tiers.validate();
  pre_dist.validate();
  post_dist.validate();
  if (applicant_type_mixture) {
    double total = 0.0;
    for (const auto& [w, dist] : *applicant_type_mixture) {
      if (w < 0.0) throw ConfigError("type weight must be non-negative");
      total += w;
      dist.validate();
    }
    if (std::abs(total - 1.0) > 1e-12)
      throw ConfigError("applicant type weights must sum to 1");
  }
}

namespace {

std::vector<int> tier_labels(const std::vector<double>& fractions, int n) {
  auto counts = apportion(fractions, n);
  std::vector<int> labels;
  labels.reserve(static_cast<std::size_t>(n));
  for (std::size_t t = 0; t < counts.size(); ++t)
    labels.insert(labels.end(), static_cast<std::size_t>(counts[t]),
                  static_cast<int>(t) + 1);
  return labels;
}

}  // namespace

MarketInstance::MarketInstance(MarketConfig config)
    : config_(std::move(config)) {
  config_.validate();
  const int na = config_.n_applicants;
  const int nj = config_.n_firms;
  applicant_tier_ = tier_labels(config_.tiers.applicant_fractions, na);
  firm_tier_ = tier_labels(config_.tiers.firm_fractions, nj);

  applicant_type_.assign(static_cast<std::size_t>(na), -1);
  if (config_.applicant_type_mixture) {
    for (int a = 0; a < na; ++a) {
      Stream s(config_.seed, StreamRole::AgentType,
               static_cast<std::uint64_t>(a), 0);
      double u = s.next_double();
      double acc = 0.0;
      int label = static_cast<int>(config_.applicant_type_mixture->size()) - 1;
      for (std::size_t t = 0; t < config_.applicant_type_mixture->size(); ++t) {
        acc += (*config_.applicant_type_mixture)[t].first;
        if (u < acc) {
          label = static_cast<int>(t);
          break;
        }
      }
      applicant_type_[static_cast<std::size_t>(a)] = label;
    }
  }

  pre_app_.resize(static_cast<std::size_t>(na) * nj);
  pre_firm_.resize(static_cast<std::size_t>(nj) * na);
  for (int a = 0; a < na; ++a) {
    for (int j = 0; j < nj; ++j) {
      Stream sa(config_.seed, StreamRole::PreApplicant,
                static_cast<std::uint64_t>(a), static_cast<std::uint64_t>(j));
      pre_app_[static_cast<std::size_t>(a) * nj + j] =
          config_.pre_dist.sample(sa);
      Stream sj(config_.seed, StreamRole::PreFirm,
                static_cast<std::uint64_t>(a), static_cast<std::uint64_t>(j));
      pre_firm_[static_cast<std::size_t>(j) * na + a] =
          config_.pre_dist.sample(sj);
    }
  }
}

MarketInstance sample_market(const MarketConfig& config) {
  return MarketInstance(config);
}

int MarketInstance::tier_of(int v) const {
  return is_applicant(v)
             ? applicant_tier_[static_cast<std::size_t>(v)]
             : firm_tier_[static_cast<std::size_t>(v - n_applicants())];
}

double MarketInstance::intrinsic_value(int v) const {
  return config_.tiers.single_tier() ? 0.0 : static_cast<double>(tier_of(v));
}

int MarketInstance::type_of_applicant(int a) const {
  return applicant_type_[static_cast<std::size_t>(a)];
}

void MarketInstance::check_opposite(int viewer, int target) const {
  if (viewer < 0 || viewer >= n_agents() || target < 0 ||
      target >= n_agents() || is_applicant(viewer) == is_applicant(target))
    throw DomainError("utility queries require an applicant-firm pair");
}

double MarketInstance::pre_score(int viewer, int target) const {
  check_opposite(viewer, target);
  if (is_applicant(viewer))
    return pre_app_[static_cast<std::size_t>(viewer) * n_firms() +
                    (target - n_applicants())];
  return pre_firm_[static_cast<std::size_t>(viewer - n_applicants()) *
                       n_applicants() +
                   target];
}

double MarketInstance::post_score(int viewer, int target) const {
  check_opposite(viewer, target);
  if (is_applicant(viewer)) {
    Stream s(config_.seed, StreamRole::PostApplicant,
             static_cast<std::uint64_t>(viewer),
             static_cast<std::uint64_t>(target - n_applicants()));
    return config_.post_dist.sample(s);
  }
  int a = target;
  Stream s(config_.seed, StreamRole::PostFirm, static_cast<std::uint64_t>(a),
           static_cast<std::uint64_t>(viewer - n_applicants()));
  int type = applicant_type_[static_cast<std::size_t>(a)];
  if (type >= 0)
    return (*config_.applicant_type_mixture)[static_cast<std::size_t>(type)]
        .second.sample(s);
  return config_.post_dist.sample(s);
}

double MarketInstance::pre_utility(int viewer, int target) const {
  return intrinsic_value(target) + pre_score(viewer, target);
}

double MarketInstance::post_utility(int viewer, int target) const {
  return pre_utility(viewer, target) + post_score(viewer, target);
}

double MarketInstance::interim_utility(int viewer, int target,
                                       const InterviewGraph& graph) const {
  return graph.has_edge(viewer, target) ? post_utility(viewer, target)
                                        : pre_utility(viewer, target);
}

double MarketInstance::jitter(int viewer, int target) const {
  Stream s(config_.seed, StreamRole::Jitter,
           static_cast<std::uint64_t>(viewer),
           static_cast<std::uint64_t>(target));
  return s.next_double();
}

}  // namespace matchmkt
