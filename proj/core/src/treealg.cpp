#include "matchmkt/treealg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "matchmkt/errors.hpp"

namespace matchmkt {

namespace {

// BFS order from the root; also checks connectivity and acyclicity.
std::vector<int> bfs_order(const std::vector<std::vector<int>>& children,
                           int root, std::vector<int>* depth_out = nullptr) {
  const int n = static_cast<int>(children.size());
  std::vector<int> order;
  std::vector<int> depth(static_cast<std::size_t>(n), -1);
  order.reserve(static_cast<std::size_t>(n));
  order.push_back(root);
  depth[static_cast<std::size_t>(root)] = 0;
  for (std::size_t head = 0; head < order.size(); ++head) {
    int i = order[head];
    for (int c : children[static_cast<std::size_t>(i)]) {
      if (c < 0 || c >= n || depth[static_cast<std::size_t>(c)] >= 0)
        throw ContractError("tree children form a cycle or invalid index");
      depth[static_cast<std::size_t>(c)] =
          depth[static_cast<std::size_t>(i)] + 1;
      order.push_back(c);
    }
  }
  if (static_cast<int>(order.size()) != n)
    throw ContractError("tree is not connected");
  if (depth_out) *depth_out = std::move(depth);
  return order;
}

}  // namespace

void RootedPrefTree::validate() const {
  const int n = size();
  if (root < 0 || root >= n) throw ContractError("tree root out of range");
  if (static_cast<int>(children.size()) != n ||
      static_cast<int>(prefs.size()) != n)
    throw ContractError("tree arrays disagree on size");
  if (parent[static_cast<std::size_t>(root)] != -1)
    throw ContractError("root must have parent -1");
  for (int i = 0; i < n; ++i)
    for (int c : children[static_cast<std::size_t>(i)])
      if (c < 0 || c >= n || parent[static_cast<std::size_t>(c)] != i)
        throw ContractError("parent/children arrays disagree");
  bfs_order(children, root);
  for (int i = 0; i < n; ++i) {
    std::vector<int> expected = children[static_cast<std::size_t>(i)];
    if (i != root) expected.push_back(parent[static_cast<std::size_t>(i)]);
    std::vector<int> got = prefs[static_cast<std::size_t>(i)];
    std::sort(expected.begin(), expected.end());
    std::sort(got.begin(), got.end());
    if (expected != got ||
        std::adjacent_find(got.begin(), got.end()) != got.end())
      throw ContractError("preference list of node " + std::to_string(i) +
                          " is not a permutation of its tree neighbors");
  }
}

bool RootedPrefTree::prefers(int i, int x, int y) const {
  for (int v : prefs[static_cast<std::size_t>(i)]) {
    if (v == x) return true;
    if (v == y) return false;
  }
  throw ContractError("preference query for a non-neighbor");
}

RootedPrefTree random_pref_tree(const std::vector<std::vector<int>>& shape,
                                int root, std::uint64_t seed) {
  RootedPrefTree tree;
  const int n = static_cast<int>(shape.size());
  tree.root = root;
  tree.children = shape;
  tree.parent.assign(static_cast<std::size_t>(n), -1);
  for (int i = 0; i < n; ++i)
    for (int c : shape[static_cast<std::size_t>(i)])
      tree.parent[static_cast<std::size_t>(c)] = i;
  tree.prefs.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    auto& list = tree.prefs[static_cast<std::size_t>(i)];
    list = shape[static_cast<std::size_t>(i)];
    if (i != root) list.push_back(tree.parent[static_cast<std::size_t>(i)]);
    Stream s(seed, StreamRole::Internal, static_cast<std::uint64_t>(i), 0);
    for (std::size_t k = list.size(); k > 1; --k)
      std::swap(list[k - 1], list[s.next_u64() % k]);
  }
  tree.validate();
  return tree;
}

ProposalTrace proposal_passing(const RootedPrefTree& tree) {
  tree.validate();
  const int n = tree.size();
  std::vector<int> depth;
  auto order = bfs_order(tree.children, tree.root, &depth);

  ProposalTrace trace;
  trace.proposed.assign(static_cast<std::size_t>(n), 0);
  trace.received.resize(static_cast<std::size_t>(n));
  trace.partner.assign(static_cast<std::size_t>(n), -1);

  // Proposing phase, deepest nodes first.
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    int i = *it;
    if (i == tree.root) continue;
    int p = tree.parent[static_cast<std::size_t>(i)];
    bool wants_parent = true;
    for (int w : trace.received[static_cast<std::size_t>(i)])
      if (tree.prefers(i, w, p)) {
        wants_parent = false;
        break;
      }
    if (wants_parent) {
      trace.proposed[static_cast<std::size_t>(i)] = 1;
      trace.received[static_cast<std::size_t>(p)].push_back(i);
    }
  }
  for (auto& w : trace.received) std::sort(w.begin(), w.end());

  // Clean-up phase, top down: accept the favorite proposal unless
  // already taken by the parent.
  for (int i : order) {
    const auto& w = trace.received[static_cast<std::size_t>(i)];
    if (w.empty()) continue;
    if (i != tree.root &&
        trace.partner[static_cast<std::size_t>(i)] ==
            tree.parent[static_cast<std::size_t>(i)])
      continue;
    int best = w.front();
    for (int v : w)
      if (tree.prefers(i, v, best)) best = v;
    trace.partner[static_cast<std::size_t>(i)] = best;
    trace.partner[static_cast<std::size_t>(best)] = i;
  }
  return trace;
}

double f_d(double d, double p) {
  if (d < 0.0 || p < 0.0 || p > 1.0)
    throw DomainError("f_d requires d >= 0 and p in [0,1]");
  if (p == 0.0) return 1.0;
  if (p == 1.0) return 1.0 / (d + 1.0);
  return -std::expm1((d + 1.0) * std::log1p(-p)) / ((d + 1.0) * p);
}

std::vector<double> marginal_proposal_probabilities(
    const std::vector<std::vector<int>>& shape, int root) {
  auto order = bfs_order(shape, root);
  std::vector<double> mu(shape.size(), 1.0);
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    int i = *it;
    const auto& kids = shape[static_cast<std::size_t>(i)];
    if (kids.empty()) continue;
    // Exact pmf of the number of children that propose to i.
    std::vector<double> pmf{1.0};
    for (int c : kids) {
      double q = mu[static_cast<std::size_t>(c)];
      std::vector<double> next(pmf.size() + 1, 0.0);
      for (std::size_t k = 0; k < pmf.size(); ++k) {
        next[k] += pmf[k] * (1.0 - q);
        next[k + 1] += pmf[k] * q;
      }
      pmf = std::move(next);
    }
    double e = 0.0;
    for (std::size_t s = 0; s < pmf.size(); ++s)
      e += pmf[s] / (1.0 + static_cast<double>(s));
    mu[static_cast<std::size_t>(i)] = e;
  }
  return mu;
}

double iterate_composition(double a, double b, int m) {
  if (m < 0) throw DomainError("iterate count must be non-negative");
  double x = 1.0;
  for (int k = 0; k < m; ++k) x = f_d(a, f_d(b, x));
  return x;
}

FixedPointResult fixed_point(double a, double b,
                             std::optional<double> epsilon) {
  if (a < 1.0 || b < 1.0) throw DomainError("fixed_point requires a, b >= 1");
  FixedPointResult r;
  r.a = a;
  r.b = b;

  const double c = (a + 1.0) / (b + 1.0);
  if (std::abs(c - 1.0) < 1e-12) {
    // Symmetric case: f_a(f_b(x)) - x flattens below double precision
    // once (b+1)x >> 1, so bisect the equivalent single-step equation
    // (b+1)x^2 - 1 + (1-x)^(b+1) = 0 instead; it keeps an O(sqrt(b))
    // slope through the root.
    auto u = [&](double x) {
      return (b + 1.0) * x * x - 1.0 + std::exp((b + 1.0) * std::log1p(-x));
    };
    double lo = 1e-15, hi = 1.0;  // u < 0 just above 0, u(1) = b > 0
    while (hi - lo > 1e-12) {
      double mid = 0.5 * (lo + hi);
      (u(mid) < 0.0 ? lo : hi) = mid;
    }
    r.x_star = 0.5 * (lo + hi);
  } else {
    auto h = [&](double x) { return f_d(a, f_d(b, x)) - x; };
    double lo = 0.0, hi = 1.0;  // h(0) = 1/(a+1) > 0 > h(1)
    while (hi - lo > 1e-12) {
      double mid = 0.5 * (lo + hi);
      (h(mid) > 0.0 ? lo : hi) = mid;
    }
    r.x_star = 0.5 * (lo + hi);
  }

  if (std::abs(c - 1.0) < 1e-12) {
    r.regime = "F2";
    double s = std::sqrt(b + 1.0);
    r.asymptotic_x_star = 1.0 / s;
    if (epsilon)
      r.gamma_epsilon = (1.0 - std::exp(-s / (1.0 + *epsilon / 2.0))) /
                        (1.0 - std::exp(-(1.0 + *epsilon) * s));
  } else if (c < 1.0) {
    r.regime = "F1";
    r.asymptotic_x_star = -c / std::log1p(-c);
    if (epsilon)
      r.gamma_epsilon =
          (1.0 - std::pow(1.0 - c, 1.0 / (1.0 + *epsilon / 2.0))) / c;
  } else {
    r.regime = "F3";
    r.asymptotic_x_star = -std::log1p(-1.0 / c) / (b + 1.0);
    if (epsilon) r.gamma_epsilon = 1.0 / (1.0 + *epsilon * (1.0 - 1.0 / c));
  }
  return r;
}

std::pair<double, double> monotone_envelope(int m,
                                            std::pair<double, double> odd,
                                            std::pair<double, double> even) {
  if (m < 1) throw DomainError("envelope requires depth m >= 1");
  auto [odd_lo, odd_hi] = odd;
  auto [even_lo, even_hi] = even;
  if (odd_lo > odd_hi || even_lo > even_hi)
    throw DomainError("degree bounds must satisfy lo <= hi");

  double lower, upper;
  if (m % 2 == 0) {
    lower = 1.0;
    upper = 1.0;
    for (int k = 0; k < m / 2 - 1; ++k) {
      lower = f_d(even_lo, f_d(odd_hi, lower));
      upper = f_d(even_hi, f_d(odd_lo, upper));
    }
    lower = f_d(odd_hi, lower);
    upper = f_d(odd_lo, upper);
  } else {
    lower = 1.0;
    upper = 1.0;
    for (int k = 0; k < (m - 1) / 2; ++k) {
      lower = f_d(odd_hi, f_d(even_lo, lower));
      upper = f_d(odd_lo, f_d(even_hi, upper));
    }
  }
  return {lower, upper};
}

}  // namespace matchmkt
