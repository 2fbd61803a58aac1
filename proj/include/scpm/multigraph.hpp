#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "scpm/gf2.hpp"

namespace scpm {

struct Edge {
  int u = 0;
  int v = 0;
  bool is_loop() const { return u == v; }
  int other(int x) const { return x == u ? v : u; }
  bool operator==(const Edge&) const = default;
};

// Undirected multigraph. Loops and parallel edges are allowed; edge indices
// are stable for the lifetime of the object.
class MultiGraph {
 public:
  MultiGraph() = default;
  explicit MultiGraph(int n) : n_(n) {}
  MultiGraph(int n, std::vector<Edge> edges);

  int n() const { return n_; }
  int m() const { return static_cast<int>(edges_.size()); }
  int add_vertex() { return n_++; }
  int add_edge(int u, int v);
  const Edge& edge(int e) const { return edges_[e]; }
  const std::vector<Edge>& edges() const { return edges_; }

  // adjacency()[v] lists (neighbor, edge index); a loop appears once.
  std::vector<std::vector<std::pair<int, int>>> adjacency() const;
  std::vector<int> degrees() const;

  std::string to_text() const;
  static MultiGraph from_text(std::string_view text);

  bool operator==(const MultiGraph&) const = default;

 private:
  int n_ = 0;
  std::vector<Edge> edges_;
};

struct EdgeSeparation {
  std::vector<int> x;
  std::vector<int> y;
  std::vector<int> cross;
};

// Subgraph induced by `vertices` (in the given order). vertex_map receives
// old->new (or -1), edge_map new->old.
MultiGraph induced_subgraph(const MultiGraph& g, const std::vector<int>& vertices,
                            std::vector<int>* vertex_map = nullptr, std::vector<int>* edge_map = nullptr);

// Edge subgraph on the endpoints of `edge_ids`; vertices renumbered by first use.
MultiGraph edge_subgraph(const MultiGraph& g, const std::vector<int>& edge_ids,
                         std::vector<int>* vertex_of = nullptr);

Gf2Matrix incidence_matrix(const MultiGraph& g);
std::vector<std::vector<int>> connected_components(const MultiGraph& g);
// Components using only edges with keep[e] != 0.
std::vector<std::vector<int>> connected_components(const MultiGraph& g, const std::vector<char>& keep);
bool is_connected(const MultiGraph& g);
bool is_bipartite(const MultiGraph& g, std::vector<int>* side = nullptr);

long long count_simple_cycles(const MultiGraph& g);
std::vector<int> spanning_forest(const MultiGraph& g);

// nullopt means the graph is (q,p)-unbreakable.
std::optional<EdgeSeparation> good_edge_separation(const MultiGraph& g, long long q, long long p);

}  // namespace scpm
