#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace matchmkt {

// Vertex ids: applicants 0..n_A-1, firms n_A..n_A+n_J-1. All
// deterministic orderings use these ids.

/// Bipartite interview graph with sorted, deduplicated neighbor lists.
class InterviewGraph {
 public:
  InterviewGraph() = default;
  /// Edges given as (applicant index, firm index within the firm side).
  InterviewGraph(int n_applicants, int n_firms,
                 std::span<const std::pair<int, int>> edges);

  int n_applicants() const { return n_applicants_; }
  int n_firms() const { return n_firms_; }
  int n_vertices() const { return n_applicants_ + n_firms_; }
  long edge_count() const { return edge_count_; }

  bool is_applicant(int v) const { return v < n_applicants_; }
  int firm_vertex(int j) const { return n_applicants_ + j; }

  std::span<const int> neighbors(int v) const { return adj_[v]; }
  int degree(int v) const { return static_cast<int>(adj_[v].size()); }
  bool has_edge(int u, int v) const;

  /// "a_index,j_index" per line, ascending.
  std::string edge_list() const;

 private:
  int n_applicants_ = 0;
  int n_firms_ = 0;
  long edge_count_ = 0;
  std::vector<std::vector<int>> adj_;
};

/// Vertex-induced m-hop neighborhood of a root. The subgraph keeps the
/// parent graph's vertex id space; excluded vertices are simply
/// isolated in `graph` and have depth -1.
struct RootedSubgraph {
  InterviewGraph graph;
  int root = 0;
  int hops = 0;
  std::vector<int> depth;     // -1 for excluded vertices
  std::vector<int> vertices;  // included vertices, ascending

  bool contains(int v) const { return depth[v] >= 0; }
};

RootedSubgraph truncate_m_hop(const InterviewGraph& g, int root, int m);

/// max over connected components of |E| - |V| + 1 (isolated vertices
/// count as trivial components).
int tree_excess(const InterviewGraph& g);

bool is_tree(const InterviewGraph& g);

/// BFS tree skeleton over the m-hop neighborhood; children in ascending
/// vertex id, each vertex attached to its lowest-id parent.
struct TreeSkeleton {
  int root = 0;
  std::vector<int> vertices;            // BFS order
  std::vector<int> parent;              // -1 for root and excluded
  std::vector<std::vector<int>> children;
  std::vector<int> depth;               // -1 for excluded
};

TreeSkeleton bfs_spanning_tree(const InterviewGraph& g, int root, int m);

}  // namespace matchmkt
