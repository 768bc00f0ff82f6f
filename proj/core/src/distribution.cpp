#include "matchmkt/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "matchmkt/errors.hpp"

namespace matchmkt {

namespace {

constexpr std::size_t kEstimatorSamples = 1'000'000;
constexpr std::uint64_t kEstimatorSeed = 0x5eed0f00dULL;

}  // namespace

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

// Acklam's rational approximation for the inverse normal CDF, refined
// with one Halley step against erfc to get near machine precision.
double normal_quantile(double q) {
  if (q <= 0.0) return -std::numeric_limits<double>::infinity();
  if (q >= 1.0) return std::numeric_limits<double>::infinity();

  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};

  const double p_low = 0.02425;
  double x;
  if (q < p_low) {
    double u = std::sqrt(-2.0 * std::log(q));
    x = (((((c[0] * u + c[1]) * u + c[2]) * u + c[3]) * u + c[4]) * u + c[5]) /
        ((((d[0] * u + d[1]) * u + d[2]) * u + d[3]) * u + 1.0);
  } else if (q <= 1.0 - p_low) {
    double u = q - 0.5;
    double r = u * u;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) *
        u /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    double u = std::sqrt(-2.0 * std::log(1.0 - q));
    x = -(((((c[0] * u + c[1]) * u + c[2]) * u + c[3]) * u + c[4]) * u + c[5]) /
        ((((d[0] * u + d[1]) * u + d[2]) * u + d[3]) * u + 1.0);
  }

  // Halley refinement.
  double e = 0.5 * std::erfc(-x / std::sqrt(2.0)) - q;
  double u = e * std::sqrt(2.0 * M_PI) * std::exp(x * x / 2.0);
  x = x - u / (1.0 + x * u / 2.0);
  return x;
}

ScoreDistribution ScoreDistribution::uniform(double lo, double hi) {
  ScoreDistribution d;
  d.kind = Kind::Uniform;
  d.a = lo;
  d.b = hi;
  d.validate();
  return d;
}

ScoreDistribution ScoreDistribution::normal(double mean, double var) {
  ScoreDistribution d;
  d.kind = Kind::Normal;
  d.a = mean;
  d.b = var;
  d.validate();
  return d;
}

ScoreDistribution ScoreDistribution::point_mass(double c) {
  ScoreDistribution d;
  d.kind = Kind::PointMass;
  d.a = c;
  return d;
}

ScoreDistribution ScoreDistribution::rademacher() {
  ScoreDistribution d;
  d.kind = Kind::Rademacher;
  return d;
}

ScoreDistribution ScoreDistribution::mixture(
    std::vector<std::pair<double, ScoreDistribution>> comps) {
  ScoreDistribution d;
  d.kind = Kind::Mixture;
  d.components = std::move(comps);
  d.validate();
  return d;
}

void ScoreDistribution::validate() const {
  switch (kind) {
    case Kind::Uniform:
      if (!(a < b)) throw ConfigError("uniform distribution requires lo < hi");
      break;
    case Kind::Normal:
      if (!(b > 0.0)) throw ConfigError("normal distribution requires var > 0");
      break;
    case Kind::PointMass:
    case Kind::Rademacher:
      break;
    case Kind::Mixture: {
      if (components.empty())
        throw ConfigError("mixture requires at least one component");
      double total = 0.0;
      for (const auto& [w, comp] : components) {
        if (w < 0.0) throw ConfigError("mixture weight must be non-negative");
        total += w;
        comp.validate();
      }
      if (std::abs(total - 1.0) > 1e-12)
        throw ConfigError("mixture weights must sum to 1");
      break;
    }
  }
}

double ScoreDistribution::sample(Stream& s) const {
  switch (kind) {
    case Kind::Uniform:
      return a + s.next_double() * (b - a);
    case Kind::Normal:
      return a + std::sqrt(b) * normal_quantile(
                     std::max(s.next_double(), 0x1.0p-60));
    case Kind::PointMass:
      return a;
    case Kind::Rademacher:
      return s.next_double() < 0.5 ? -1.0 : 1.0;
    case Kind::Mixture: {
      double u = s.next_double();
      double acc = 0.0;
      for (const auto& [w, comp] : components) {
        acc += w;
        if (u < acc) return comp.sample(s);
      }
      return components.back().second.sample(s);
    }
  }
  return 0.0;
}

bool ScoreDistribution::bounded_above() const {
  switch (kind) {
    case Kind::Normal:
      return false;
    case Kind::Mixture:
      return std::all_of(components.begin(), components.end(),
                         [](const auto& c) { return c.second.bounded_above(); });
    default:
      return true;
  }
}

double ScoreDistribution::max_support() const {
  switch (kind) {
    case Kind::Uniform:
      return b;
    case Kind::PointMass:
      return a;
    case Kind::Rademacher:
      return 1.0;
    case Kind::Mixture: {
      double m = -std::numeric_limits<double>::infinity();
      for (const auto& [w, comp] : components)
        if (w > 0.0) m = std::max(m, comp.max_support());
      return m;
    }
    case Kind::Normal:
      break;
  }
  throw DomainError("distribution has unbounded support");
}

bool ScoreDistribution::has_atoms() const {
  switch (kind) {
    case Kind::PointMass:
    case Kind::Rademacher:
      return true;
    case Kind::Mixture:
      return std::any_of(components.begin(), components.end(),
                         [](const auto& c) { return c.second.has_atoms(); });
    default:
      return false;
  }
}

double ScoreDistribution::prob_nonneg() const {
  switch (kind) {
    case Kind::Uniform:
      if (b <= 0.0) return 0.0;
      if (a >= 0.0) return 1.0;
      return b / (b - a);
    case Kind::Normal:
      return 1.0 - normal_cdf(-a / std::sqrt(b));
    case Kind::PointMass:
      return a >= 0.0 ? 1.0 : 0.0;
    case Kind::Rademacher:
      return 0.5;
    case Kind::Mixture: {
      double p = 0.0;
      for (const auto& [w, comp] : components) p += w * comp.prob_nonneg();
      return p;
    }
  }
  return 0.0;
}

double ScoreDistribution::cdf(double x) const {
  switch (kind) {
    case Kind::Uniform:
      if (x <= a) return 0.0;
      if (x >= b) return 1.0;
      return (x - a) / (b - a);
    case Kind::Normal:
      return normal_cdf((x - a) / std::sqrt(b));
    case Kind::PointMass:
      return x >= a ? 1.0 : 0.0;
    case Kind::Rademacher:
      if (x < -1.0) return 0.0;
      if (x < 1.0) return 0.5;
      return 1.0;
    case Kind::Mixture: {
      double p = 0.0;
      for (const auto& [w, comp] : components) p += w * comp.cdf(x);
      return p;
    }
  }
  return 0.0;
}

bool ScoreDistribution::has_closed_quantile() const {
  switch (kind) {
    case Kind::Uniform:
    case Kind::Normal:
    case Kind::PointMass:
    case Kind::Rademacher:
      return true;
    case Kind::Mixture:
      return false;
  }
  return false;
}

std::vector<double> empirical_samples(const ScoreDistribution& dist,
                                      std::size_t n, std::uint64_t salt) {
  Stream s(kEstimatorSeed, StreamRole::Internal, salt, 0);
  std::vector<double> out(n);
  for (auto& v : out) v = dist.sample(s);
  return out;
}

namespace {

double empirical_quantile(std::vector<double> samples, double q) {
  std::size_t n = samples.size();
  std::size_t idx = static_cast<std::size_t>(
      std::clamp<double>(std::ceil(q * static_cast<double>(n)) - 1.0, 0.0,
                         static_cast<double>(n - 1)));
  std::nth_element(samples.begin(), samples.begin() + idx, samples.end());
  return samples[idx];
}

}  // namespace

double ScoreDistribution::quantile(double q) const {
  q = std::clamp(q, 0.0, 1.0);
  switch (kind) {
    case Kind::Uniform:
      return a + q * (b - a);
    case Kind::Normal:
      return a + std::sqrt(b) * normal_quantile(q);
    case Kind::PointMass:
      return a;
    case Kind::Rademacher:
      return q <= 0.5 ? -1.0 : 1.0;
    case Kind::Mixture:
      return empirical_quantile(empirical_samples(*this, kEstimatorSamples, 1),
                                q);
  }
  return 0.0;
}

bool outweighs(const ScoreDistribution& pre, const ScoreDistribution& post,
               long k1, long k2) {
  if (k1 < 1 || k2 < 1) throw DomainError("outweighs requires k1, k2 >= 1");
  double q1 = static_cast<double>(k1) / static_cast<double>(k1 + 1);
  double q2 = static_cast<double>(k2) / static_cast<double>(k2 + 1);

  double conv_q;
  if (post.kind == ScoreDistribution::Kind::PointMass &&
      pre.has_closed_quantile()) {
    conv_q = pre.quantile(q1) + post.a;
  } else if (pre.kind == ScoreDistribution::Kind::PointMass &&
             post.has_closed_quantile()) {
    conv_q = post.quantile(q1) + pre.a;
  } else {
    auto xs = empirical_samples(pre, kEstimatorSamples, 2);
    auto ys = empirical_samples(post, kEstimatorSamples, 3);
    for (std::size_t i = 0; i < xs.size(); ++i) xs[i] += ys[i];
    conv_q = empirical_quantile(std::move(xs), q1);
  }
  return conv_q < pre.quantile(q2);
}

double compute_q(const ScoreDistribution& pre, const ScoreDistribution& post) {
  if (!pre.bounded_above() || !post.bounded_above())
    throw DomainError("compute_q requires bounded distributions");
  double threshold = pre.max_support() + post.max_support() - 1.0;
  if (pre.kind == ScoreDistribution::Kind::PointMass)
    return 1.0 - post.cdf(threshold - pre.a);
  if (post.kind == ScoreDistribution::Kind::PointMass)
    return 1.0 - pre.cdf(threshold - post.a);
  auto xs = empirical_samples(pre, kEstimatorSamples, 4);
  auto ys = empirical_samples(post, kEstimatorSamples, 5);
  std::size_t count = 0;
  for (std::size_t i = 0; i < xs.size(); ++i)
    if (xs[i] + ys[i] > threshold) ++count;
  return static_cast<double>(count) / static_cast<double>(xs.size());
}

std::string ScoreDistribution::tag() const {
  char buf[96];
  switch (kind) {
    case Kind::Uniform:
      std::snprintf(buf, sizeof(buf), "uniform:%g,%g", a, b);
      return buf;
    case Kind::Normal:
      std::snprintf(buf, sizeof(buf), "normal:%g,%g", a, b);
      return buf;
    case Kind::PointMass:
      std::snprintf(buf, sizeof(buf), "pointmass:%g", a);
      return buf;
    case Kind::Rademacher:
      return "rademacher";
    case Kind::Mixture: {
      std::string s = "mixture";
      for (const auto& [w, comp] : components) {
        std::snprintf(buf, sizeof(buf), ":%g~", w);
        s += buf;
        s += comp.tag();
      }
      return s;
    }
  }
  return "?";
}

ScoreDistribution parse_distribution(const std::string& spec) {
  auto colon = spec.find(':');
  std::string name = spec.substr(0, colon);
  std::vector<double> args;
  if (colon != std::string::npos) {
    std::stringstream ss(spec.substr(colon + 1));
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      try {
        args.push_back(std::stod(tok));
      } catch (const std::exception&) {
        throw ConfigError("bad distribution literal: " + spec);
      }
    }
  }
  if (name == "uniform" && args.size() == 2)
    return ScoreDistribution::uniform(args[0], args[1]);
  if (name == "normal" && args.size() == 2)
    return ScoreDistribution::normal(args[0], args[1]);
  if (name == "pointmass" && args.size() == 1)
    return ScoreDistribution::point_mass(args[0]);
  if (name == "rademacher" && args.empty())
    return ScoreDistribution::rademacher();
  throw ConfigError("bad distribution literal: " + spec);
}

}  // namespace matchmkt
