#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "matchmkt/rng.hpp"

namespace matchmkt {

/// Rooted tree with a strict preference order per node over its tree
/// neighbors (parent and children).
struct RootedPrefTree {
  int root = 0;
  std::vector<int> parent;               // -1 for the root
  std::vector<std::vector<int>> children;
  /// prefs[i] is a permutation of {parent[i]} ∪ children[i], best first.
  std::vector<std::vector<int>> prefs;

  int size() const { return static_cast<int>(parent.size()); }
  /// Throws ContractError on a malformed tree or preference lists.
  void validate() const;
  /// True iff node i strictly prefers x to y.
  bool prefers(int i, int x, int y) const;
};

/// Tree with uniformly random preferences from a keyed stream;
/// `shape_children[i]` lists the children of node i.
RootedPrefTree random_pref_tree(const std::vector<std::vector<int>>& shape,
                                int root, std::uint64_t seed);

struct ProposalTrace {
  std::vector<char> proposed;             // X_{i,P(i)}; 0 at the root
  std::vector<std::vector<int>> received; // W(i), ascending
  std::vector<int> partner;               // -1 unmatched
};

/// Two-phase hierarchical proposal passing: bottom-up proposing, then
/// top-down clean-up. Returns the unique stable matching on the tree.
ProposalTrace proposal_passing(const RootedPrefTree& tree);

/// (1 - (1-p)^(d+1)) / ((d+1) p), the expectation E[1/(1+X)] for
/// X ~ Binom(d, p); continuous in p with f_d(0) = 1. d is any real >= 0.
double f_d(double d, double p);

/// Exact per-node probability that the node proposes to its parent when
/// preferences are uniformly random, via a bottom-up pmf convolution of
/// the children's Bernoulli proposal indicators. Leaves get 1.
std::vector<double> marginal_proposal_probabilities(
    const std::vector<std::vector<int>>& shape, int root);

/// g(a,b,m) = (f_a ∘ f_b)^m (1).
double iterate_composition(double a, double b, int m);

struct FixedPointResult {
  double a = 0.0;
  double b = 0.0;
  double x_star = 0.0;               // bisection root of f_a(f_b(x)) = x
  std::string regime;                // "F1", "F2", "F3"
  std::optional<double> asymptotic_x_star;
  std::optional<double> gamma_epsilon;
};

/// Unique fixed point of f_a ∘ f_b on (0,1), found by bisection to a
/// 1e-12 bracket. The regime tag keys off c = (a+1)/(b+1): F1 below 1,
/// F2 at 1, F3 above; each carries its large-parameter closed form, and
/// a contraction factor when epsilon is given.
FixedPointResult fixed_point(double a, double b,
                             std::optional<double> epsilon = std::nullopt);

/// Alternating-composition bounds on the proposal probability at depth
/// 1 of a depth-m tree whose out-degrees at odd/even depths lie in the
/// given [lo, hi] ranges.
std::pair<double, double> monotone_envelope(int m,
                                            std::pair<double, double> odd,
                                            std::pair<double, double> even);

}  // namespace matchmkt
