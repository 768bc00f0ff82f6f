#pragma once

#include <string>
#include <utility>
#include <vector>

#include "matchmkt/rng.hpp"

namespace matchmkt {

/// Idiosyncratic score distribution. Sampling is a pure function of the
/// distribution and the stream handed in, so identical keys give
/// identical scores.
struct ScoreDistribution {
  enum class Kind { Uniform, Normal, PointMass, Rademacher, Mixture };

  Kind kind = Kind::PointMass;
  double a = 0.0;  // lo / mean / c
  double b = 0.0;  // hi / var
  std::vector<std::pair<double, ScoreDistribution>> components;

  static ScoreDistribution uniform(double lo, double hi);
  static ScoreDistribution normal(double mean, double var);
  static ScoreDistribution point_mass(double c);
  static ScoreDistribution rademacher();
  static ScoreDistribution mixture(
      std::vector<std::pair<double, ScoreDistribution>> comps);

  /// Throws ConfigError on invalid parameters.
  void validate() const;

  double sample(Stream& s) const;

  bool bounded_above() const;
  /// Maximum of the support; DomainError if unbounded.
  double max_support() const;
  /// True if the distribution has atoms (ties are possible).
  bool has_atoms() const;

  /// P[X >= 0]; closed form for every registered kind.
  double prob_nonneg() const;

  /// P[X <= x].
  double cdf(double x) const;

  /// Quantile. Closed form where one exists, otherwise a deterministic
  /// empirical estimate.
  double quantile(double q) const;
  bool has_closed_quantile() const;

  /// Short literal form, e.g. "normal:0,1".
  std::string tag() const;
};

/// Standard normal CDF and its inverse.
double normal_cdf(double x);
double normal_quantile(double q);

/// Deterministic empirical sample batch used by the quantile and
/// convolution estimators; fixed internal seed, independent of market
/// seeds.
std::vector<double> empirical_samples(const ScoreDistribution& dist,
                                      std::size_t n, std::uint64_t salt = 0);

/// True iff the k1/(k1+1)-quantile of the convolution post*pre is
/// strictly smaller than the k2/(k2+1)-quantile of pre.
bool outweighs(const ScoreDistribution& pre, const ScoreDistribution& post,
               long k1, long k2);

/// P[A + B > M_A + M_B - 1] for A ~ post, B ~ pre; both must be bounded
/// above.
double compute_q(const ScoreDistribution& pre, const ScoreDistribution& post);

/// Parses literals of the form "uniform:lo,hi", "normal:mean,var",
/// "pointmass:c", "rademacher". Throws ConfigError on anything else.
ScoreDistribution parse_distribution(const std::string& spec);

}  // namespace matchmkt
