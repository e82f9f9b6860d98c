#ifndef MPKIT_PATH_SPACE_HPP
#define MPKIT_PATH_SPACE_HPP

#include <compare>
#include <string>
#include <vector>

#include "mpkit/report.hpp"

namespace mpkit {

// Finite directed graph; every vertex must emit at least one edge so the
// infinite-path space is nonempty and compact.
class DirectedGraph {
 public:
  struct Edge {
    std::string name;
    int src;
    int tgt;
  };

  DirectedGraph(std::vector<std::string> vertices, std::vector<Edge> edges);

  // One vertex, one self-loop per letter.
  static DirectedGraph bouquet(const std::string &letters);

  int vertex_count() const { return static_cast<int>(vertices_.size()); }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  const std::string &vertex_name(int v) const { return vertices_[v]; }
  const Edge &edge(int e) const { return edges_[e]; }
  const std::vector<int> &out_edges(int v) const { return out_[v]; }
  int vertex_index(const std::string &name) const;
  int edge_index(const std::string &name) const;
  bool is_bouquet() const;

  bool operator==(const DirectedGraph &other) const;

 private:
  std::vector<std::string> vertices_;
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> out_;
};

// Finite path in traversal order: starts at `start`, follows edges left to
// right.  "Prefix" always means an initial segment in traversal order.
struct Path {
  int start = 0;
  std::vector<int> edges;

  int length() const { return static_cast<int>(edges.size()); }
  auto operator<=>(const Path &) const = default;
};

Path empty_path(int vertex);
int path_end(const DirectedGraph &g, const Path &p);
bool valid_path(const DirectedGraph &g, const Path &p);
// p is an initial segment of q.
bool is_prefix(const Path &p, const Path &q);
Path concat_paths(const DirectedGraph &g, const Path &p, const Path &q);
// Suffix of q after removing prefix p (requires is_prefix(p, q)).
Path strip_prefix(const DirectedGraph &g, const Path &p, const Path &q);

// Serialization: "v:" for the empty path at v, "v:e1.e2" in general;
// bouquets use plain letter strings ("lr", "" for the empty path).
std::string format_path(const DirectedGraph &g, const Path &p);
Path parse_path(const DirectedGraph &g, const std::string &text);

// Clopen subset of the infinite-path space, represented by the canonical
// basis of its finitely generated closed ideal of finite paths: prefix-free,
// fully sibling-collapsed, sorted.  Equality is syntactic.
struct Clopen {
  std::vector<Path> basis;

  bool is_zero() const { return basis.empty(); }
  auto operator<=>(const Clopen &) const = default;
};

// Canonical closed form of the ideal generated by arbitrary valid paths:
// drops prefix-redundant generators and collapses complete sibling families
// {u·e : e ∈ out(t(u))} to u, to fixpoint.
Clopen closure(const DirectedGraph &g, std::vector<Path> basis);

Clopen clopen_top(const DirectedGraph &g);   // all of path space
inline Clopen clopen_zero() { return {}; }

// True iff every infinite path has a prefix in the ideal; computed by
// breadth-first exploration of the ideal-avoiding path tree.
bool is_dense(const DirectedGraph &g, const std::vector<Path> &basis);

Clopen complement(const DirectedGraph &g, const Clopen &c);
Clopen clopen_meet(const DirectedGraph &g, const Clopen &c, const Clopen &d);
Clopen clopen_join(const DirectedGraph &g, const Clopen &c, const Clopen &d);
bool clopen_leq(const DirectedGraph &g, const Clopen &c, const Clopen &d);
bool is_partition_of_clopens(const DirectedGraph &g,
                             const std::vector<Clopen> &blocks,
                             const Clopen &base);

// v is cofinal iff every infinite path somewhere enters the set of vertices
// reachable from v; on a finite graph that fails exactly when the vertices
// not reachable from v contain a directed cycle.
std::vector<int> cofinal_vertices(const DirectedGraph &g);
bool is_minimal(const DirectedGraph &g);
bool reachable(const DirectedGraph &g, int from, int to);

// Eventually periodic infinite path tail·cycle·cycle·…, canonical form:
// primitive cycle, minimal tail.
struct PointSpec {
  Path tail;
  Path cycle;

  auto operator<=>(const PointSpec &) const = default;
};

PointSpec normalize_point(const DirectedGraph &g, PointSpec w);
bool valid_point(const DirectedGraph &g, const PointSpec &w);
// First n edges of the infinite path.
Path point_prefix(const DirectedGraph &g, const PointSpec &w, int n);
// The point with the first n edges removed (canonical form).
PointSpec point_shift(const DirectedGraph &g, const PointSpec &w, int n);
// prefix·w (canonical form); requires t(prefix) = start of w.
PointSpec point_prepend(const DirectedGraph &g, const Path &prefix,
                        const PointSpec &w);
bool point_in_clopen(const DirectedGraph &g, const PointSpec &w,
                     const Clopen &c);

// Serialization "tail;cycle" with path syntax as above.
std::string format_point(const DirectedGraph &g, const PointSpec &w);
PointSpec parse_point(const DirectedGraph &g, const std::string &text);

// All paths of exactly length n starting at v, lexicographic by edge index.
std::vector<Path> paths_from(const DirectedGraph &g, int v, int n);
// All paths of exactly length n ending at v.
std::vector<Path> paths_into(const DirectedGraph &g, int v, int n);

}  // namespace mpkit

#endif
