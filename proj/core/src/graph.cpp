#include "matchmkt/graph.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

#include "matchmkt/errors.hpp"

namespace matchmkt {

InterviewGraph::InterviewGraph(int n_applicants, int n_firms,
                               std::span<const std::pair<int, int>> edges)
    : n_applicants_(n_applicants), n_firms_(n_firms) {
  adj_.assign(static_cast<std::size_t>(n_applicants_ + n_firms_), {});
  for (const auto& [a, j] : edges) {
    if (a < 0 || a >= n_applicants_ || j < 0 || j >= n_firms_)
      throw DomainError("edge endpoint out of range");
    adj_[a].push_back(firm_vertex(j));
    adj_[firm_vertex(j)].push_back(a);
  }
  for (auto& nbrs : adj_) {
    std::sort(nbrs.begin(), nbrs.end());
    nbrs.erase(std::unique(nbrs.begin(), nbrs.end()), nbrs.end());
  }
  for (int a = 0; a < n_applicants_; ++a)
    edge_count_ += static_cast<long>(adj_[a].size());
}

bool InterviewGraph::has_edge(int u, int v) const {
  const auto& nbrs = adj_[u];
  return std::binary_search(nbrs.begin(), nbrs.end(), v);
}

std::string InterviewGraph::edge_list() const {
  std::ostringstream out;
  for (int a = 0; a < n_applicants_; ++a)
    for (int v : adj_[a]) out << a << ',' << (v - n_applicants_) << '\n';
  return out.str();
}

RootedSubgraph truncate_m_hop(const InterviewGraph& g, int root, int m) {
  if (root < 0 || root >= g.n_vertices())
    throw DomainError("truncate_m_hop: unknown root vertex");
  RootedSubgraph sub;
  sub.root = root;
  sub.hops = m;
  sub.depth.assign(static_cast<std::size_t>(g.n_vertices()), -1);
  sub.depth[root] = 0;
  std::deque<int> queue{root};
  while (!queue.empty()) {
    int v = queue.front();
    queue.pop_front();
    if (sub.depth[v] == m) continue;
    for (int w : g.neighbors(v)) {
      if (sub.depth[w] < 0) {
        sub.depth[w] = sub.depth[v] + 1;
        queue.push_back(w);
      }
    }
  }
  std::vector<std::pair<int, int>> edges;
  for (int v = 0; v < g.n_vertices(); ++v) {
    if (sub.depth[v] < 0) continue;
    sub.vertices.push_back(v);
    if (!g.is_applicant(v)) continue;
    for (int w : g.neighbors(v))
      if (sub.depth[w] >= 0) edges.emplace_back(v, w - g.n_applicants());
  }
  sub.graph = InterviewGraph(g.n_applicants(), g.n_firms(), edges);
  return sub;
}

int tree_excess(const InterviewGraph& g) {
  std::vector<int> comp(static_cast<std::size_t>(g.n_vertices()), -1);
  int best = 0;
  for (int s = 0; s < g.n_vertices(); ++s) {
    if (comp[s] >= 0) continue;
    long vertices = 0, half_edges = 0;
    comp[s] = s;
    std::deque<int> queue{s};
    while (!queue.empty()) {
      int v = queue.front();
      queue.pop_front();
      ++vertices;
      half_edges += g.degree(v);
      for (int w : g.neighbors(v)) {
        if (comp[w] < 0) {
          comp[w] = s;
          queue.push_back(w);
        }
      }
    }
    best = std::max(best, static_cast<int>(half_edges / 2 - vertices + 1));
  }
  return best;
}

bool is_tree(const InterviewGraph& g) {
  if (g.n_vertices() == 0) return false;
  // Connected iff one BFS from vertex 0 reaches everything.
  std::vector<char> seen(static_cast<std::size_t>(g.n_vertices()), 0);
  seen[0] = 1;
  std::deque<int> queue{0};
  int reached = 0;
  while (!queue.empty()) {
    int v = queue.front();
    queue.pop_front();
    ++reached;
    for (int w : g.neighbors(v)) {
      if (!seen[w]) {
        seen[w] = 1;
        queue.push_back(w);
      }
    }
  }
  return reached == g.n_vertices() && tree_excess(g) == 0;
}

TreeSkeleton bfs_spanning_tree(const InterviewGraph& g, int root, int m) {
  if (root < 0 || root >= g.n_vertices())
    throw DomainError("bfs_spanning_tree: unknown root vertex");
  TreeSkeleton t;
  t.root = root;
  int n = g.n_vertices();
  t.parent.assign(static_cast<std::size_t>(n), -1);
  t.children.assign(static_cast<std::size_t>(n), {});
  t.depth.assign(static_cast<std::size_t>(n), -1);
  t.depth[root] = 0;
  t.vertices.push_back(root);
  // Level-synchronous BFS; each level scanned in ascending id so every
  // vertex is attached to its lowest-id parent.
  std::vector<int> level{root};
  for (int depth = 0; depth < m && !level.empty(); ++depth) {
    std::vector<int> next;
    for (int v : level) {
      for (int w : g.neighbors(v)) {
        if (t.depth[w] < 0) {
          t.depth[w] = depth + 1;
          t.parent[w] = v;
          t.children[v].push_back(w);
          next.push_back(w);
        }
      }
    }
    std::sort(next.begin(), next.end());
    for (int w : next) t.vertices.push_back(w);
    level = std::move(next);
  }
  return t;
}

}  // namespace matchmkt
