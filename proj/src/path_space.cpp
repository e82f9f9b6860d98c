#include "mpkit/path_space.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace mpkit {

DirectedGraph::DirectedGraph(std::vector<std::string> vertices,
                             std::vector<Edge> edges)
    : vertices_(std::move(vertices)), edges_(std::move(edges)) {
  if (vertices_.empty()) throw std::invalid_argument("graph needs a vertex");
  std::set<std::string> vnames(vertices_.begin(), vertices_.end());
  if (vnames.size() != vertices_.size())
    throw std::invalid_argument("duplicate vertex name");
  std::set<std::string> enames;
  out_.assign(vertices_.size(), {});
  for (size_t i = 0; i < edges_.size(); ++i) {
    const Edge &e = edges_[i];
    if (e.name.empty() || !enames.insert(e.name).second)
      throw std::invalid_argument("bad or duplicate edge name");
    if (e.src < 0 || e.src >= vertex_count() || e.tgt < 0 ||
        e.tgt >= vertex_count())
      throw std::invalid_argument("edge endpoint out of range");
    out_[e.src].push_back(static_cast<int>(i));
  }
  for (int v = 0; v < vertex_count(); ++v)
    if (out_[v].empty())
      throw std::invalid_argument("vertex " + vertices_[v] + " emits no edge");
}

DirectedGraph DirectedGraph::bouquet(const std::string &letters) {
  if (letters.empty()) throw std::invalid_argument("empty alphabet");
  std::vector<Edge> es;
  for (char c : letters) es.push_back({std::string(1, c), 0, 0});
  return DirectedGraph({"*"}, std::move(es));
}

int DirectedGraph::vertex_index(const std::string &name) const {
  for (int v = 0; v < vertex_count(); ++v)
    if (vertices_[v] == name) return v;
  return -1;
}

int DirectedGraph::edge_index(const std::string &name) const {
  for (int e = 0; e < edge_count(); ++e)
    if (edges_[e].name == name) return e;
  return -1;
}

bool DirectedGraph::is_bouquet() const {
  if (vertex_count() != 1) return false;
  for (const Edge &e : edges_)
    if (e.name.size() != 1) return false;
  return true;
}

bool DirectedGraph::operator==(const DirectedGraph &other) const {
  if (vertices_ != other.vertices_) return false;
  if (edges_.size() != other.edges_.size()) return false;
  for (size_t i = 0; i < edges_.size(); ++i)
    if (edges_[i].name != other.edges_[i].name ||
        edges_[i].src != other.edges_[i].src ||
        edges_[i].tgt != other.edges_[i].tgt)
      return false;
  return true;
}

Path empty_path(int vertex) { return Path{vertex, {}}; }

int path_end(const DirectedGraph &g, const Path &p) {
  return p.edges.empty() ? p.start : g.edge(p.edges.back()).tgt;
}

bool valid_path(const DirectedGraph &g, const Path &p) {
  if (p.start < 0 || p.start >= g.vertex_count()) return false;
  int at = p.start;
  for (int e : p.edges) {
    if (e < 0 || e >= g.edge_count() || g.edge(e).src != at) return false;
    at = g.edge(e).tgt;
  }
  return true;
}

bool is_prefix(const Path &p, const Path &q) {
  if (p.start != q.start || p.edges.size() > q.edges.size()) return false;
  return std::equal(p.edges.begin(), p.edges.end(), q.edges.begin());
}

Path concat_paths(const DirectedGraph &g, const Path &p, const Path &q) {
  if (path_end(g, p) != q.start)
    throw std::invalid_argument("paths do not compose");
  Path r = p;
  r.edges.insert(r.edges.end(), q.edges.begin(), q.edges.end());
  return r;
}

Path strip_prefix(const DirectedGraph &g, const Path &p, const Path &q) {
  if (!is_prefix(p, q)) throw std::invalid_argument("not a prefix");
  Path r;
  r.start = path_end(g, p);
  r.edges.assign(q.edges.begin() + p.length(), q.edges.end());
  return r;
}

std::string format_path(const DirectedGraph &g, const Path &p) {
  if (g.is_bouquet()) {
    std::string out;
    for (int e : p.edges) out += g.edge(e).name;
    return out;
  }
  std::string out = g.vertex_name(p.start) + ":";
  for (size_t i = 0; i < p.edges.size(); ++i) {
    if (i) out += '.';
    out += g.edge(p.edges[i]).name;
  }
  return out;
}

Path parse_path(const DirectedGraph &g, const std::string &text) {
  Path p;
  std::string body;
  auto colon = text.find(':');
  if (colon != std::string::npos) {
    int v = g.vertex_index(text.substr(0, colon));
    if (v < 0) throw std::invalid_argument("unknown vertex in path: " + text);
    p.start = v;
    body = text.substr(colon + 1);
  } else if (g.is_bouquet()) {
    p.start = 0;
    body = text;
  } else {
    throw std::invalid_argument("path needs a start vertex: " + text);
  }
  if (!body.empty()) {
    if (g.is_bouquet() && body.find('.') == std::string::npos) {
      for (char c : body) {
        int e = g.edge_index(std::string(1, c));
        if (e < 0) throw std::invalid_argument("unknown letter in path");
        p.edges.push_back(e);
      }
    } else {
      std::istringstream is(body);
      std::string tok;
      while (std::getline(is, tok, '.')) {
        int e = g.edge_index(tok);
        if (e < 0) throw std::invalid_argument("unknown edge in path: " + tok);
        p.edges.push_back(e);
      }
    }
  }
  if (!valid_path(g, p))
    throw std::invalid_argument("path does not compose: " + text);
  return p;
}

Clopen closure(const DirectedGraph &g, std::vector<Path> basis) {
  for (const Path &p : basis)
    if (!valid_path(g, p)) throw std::invalid_argument("invalid basis path");
  bool changed = true;
  while (changed) {
    changed = false;
    // drop duplicates and prefix-redundant generators
    std::sort(basis.begin(), basis.end());
    basis.erase(std::unique(basis.begin(), basis.end()), basis.end());
    std::vector<Path> kept;
    for (const Path &p : basis) {
      bool redundant = false;
      for (const Path &q : basis)
        if (q != p && is_prefix(q, p)) {
          redundant = true;
          break;
        }
      if (!redundant) kept.push_back(p);
    }
    if (kept.size() != basis.size()) changed = true;
    basis = std::move(kept);
    // collapse one complete sibling family per pass
    std::map<Path, std::set<int>> families;
    for (const Path &p : basis) {
      if (p.edges.empty()) continue;
      Path parent = p;
      int last = parent.edges.back();
      parent.edges.pop_back();
      families[parent].insert(last);
    }
    for (auto &[parent, lasts] : families) {
      const auto &out = g.out_edges(path_end(g, parent));
      if (lasts.size() == out.size()) {
        std::vector<Path> next;
        for (const Path &p : basis) {
          Path q = p;
          if (!q.edges.empty()) {
            q.edges.pop_back();
            if (q == parent) continue;
          }
          next.push_back(p);
        }
        next.push_back(parent);
        basis = std::move(next);
        changed = true;
        break;
      }
    }
  }
  std::sort(basis.begin(), basis.end());
  return Clopen{std::move(basis)};
}

Clopen clopen_top(const DirectedGraph &g) {
  std::vector<Path> b;
  for (int v = 0; v < g.vertex_count(); ++v) b.push_back(empty_path(v));
  return closure(g, std::move(b));
}

namespace {

bool has_basis_prefix(const std::vector<Path> &basis, const Path &p) {
  for (const Path &b : basis)
    if (is_prefix(b, p)) return true;
  return false;
}

}  // namespace

bool is_dense(const DirectedGraph &g, const std::vector<Path> &basis) {
  for (const Path &p : basis)
    if (!valid_path(g, p)) throw std::invalid_argument("invalid basis path");
  size_t depth_limit = 0;
  for (const Path &p : basis)
    depth_limit = std::max(depth_limit, p.edges.size());
  // breadth-first over ideal-avoiding paths; an avoider longer than every
  // basis path extends to an avoiding infinite path
  std::vector<Path> frontier;
  for (int v = 0; v < g.vertex_count(); ++v) {
    Path e = empty_path(v);
    if (!has_basis_prefix(basis, e)) frontier.push_back(e);
  }
  while (!frontier.empty()) {
    std::vector<Path> next;
    for (const Path &p : frontier) {
      if (p.edges.size() >= depth_limit) return false;
      for (int e : g.out_edges(path_end(g, p))) {
        Path q = p;
        q.edges.push_back(e);
        if (!has_basis_prefix(basis, q)) next.push_back(q);
      }
    }
    frontier = std::move(next);
  }
  return true;
}

Clopen complement(const DirectedGraph &g, const Clopen &c) {
  // walk the basis trie; paths that fall off it can never enter the ideal
  std::vector<Path> out;
  std::vector<Path> frontier;
  for (int v = 0; v < g.vertex_count(); ++v)
    frontier.push_back(empty_path(v));
  while (!frontier.empty()) {
    std::vector<Path> next;
    for (const Path &p : frontier) {
      if (has_basis_prefix(c.basis, p)) continue;  // inside the ideal
      bool internal = false;
      for (const Path &b : c.basis)
        if (is_prefix(p, b)) {
          internal = true;
          break;
        }
      if (!internal) {
        out.push_back(p);  // off the trie: all extensions avoid the ideal
        continue;
      }
      for (int e : g.out_edges(path_end(g, p))) {
        Path q = p;
        q.edges.push_back(e);
        next.push_back(q);
      }
    }
    frontier = std::move(next);
  }
  return closure(g, std::move(out));
}

Clopen clopen_meet(const DirectedGraph &g, const Clopen &c, const Clopen &d) {
  std::vector<Path> out;
  for (const Path &u : c.basis)
    for (const Path &v : d.basis) {
      if (is_prefix(u, v))
        out.push_back(v);
      else if (is_prefix(v, u))
        out.push_back(u);
    }
  return closure(g, std::move(out));
}

Clopen clopen_join(const DirectedGraph &g, const Clopen &c, const Clopen &d) {
  std::vector<Path> out = c.basis;
  out.insert(out.end(), d.basis.begin(), d.basis.end());
  return closure(g, std::move(out));
}

bool clopen_leq(const DirectedGraph &g, const Clopen &c, const Clopen &d) {
  return clopen_meet(g, c, d) == c;
}

bool is_partition_of_clopens(const DirectedGraph &g,
                             const std::vector<Clopen> &blocks,
                             const Clopen &base) {
  Clopen acc = clopen_zero();
  for (size_t i = 0; i < blocks.size(); ++i) {
    if (blocks[i].is_zero()) return false;
    for (size_t j = i + 1; j < blocks.size(); ++j)
      if (!clopen_meet(g, blocks[i], blocks[j]).is_zero()) return false;
    acc = clopen_join(g, acc, blocks[i]);
  }
  return acc == base;
}

bool reachable(const DirectedGraph &g, int from, int to) {
  std::vector<bool> seen(g.vertex_count(), false);
  std::vector<int> stack{from};
  seen[from] = true;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    if (v == to) return true;
    for (int e : g.out_edges(v)) {
      int w = g.edge(e).tgt;
      if (!seen[w]) {
        seen[w] = true;
        stack.push_back(w);
      }
    }
  }
  return false;
}

namespace {

// directed cycle within the induced subgraph on `allowed`, by repeatedly
// deleting vertices with no successor inside the subgraph
bool has_cycle_within(const DirectedGraph &g, std::vector<bool> allowed) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (int v = 0; v < g.vertex_count(); ++v) {
      if (!allowed[v]) continue;
      bool has_succ = false;
      for (int e : g.out_edges(v))
        if (allowed[g.edge(e).tgt]) {
          has_succ = true;
          break;
        }
      if (!has_succ) {
        allowed[v] = false;
        changed = true;
      }
    }
  }
  return std::find(allowed.begin(), allowed.end(), true) != allowed.end();
}

}  // namespace

std::vector<int> cofinal_vertices(const DirectedGraph &g) {
  std::vector<int> out;
  for (int v = 0; v < g.vertex_count(); ++v) {
    std::vector<bool> unreachable(g.vertex_count(), false);
    for (int w = 0; w < g.vertex_count(); ++w)
      unreachable[w] = !reachable(g, v, w);
    if (!has_cycle_within(g, unreachable)) out.push_back(v);
  }
  return out;
}

bool is_minimal(const DirectedGraph &g) {
  return static_cast<int>(cofinal_vertices(g).size()) == g.vertex_count();
}

bool valid_point(const DirectedGraph &g, const PointSpec &w) {
  if (!valid_path(g, w.tail) || !valid_path(g, w.cycle)) return false;
  if (w.cycle.edges.empty()) return false;
  return path_end(g, w.tail) == w.cycle.start &&
         path_end(g, w.cycle) == w.cycle.start;
}

PointSpec normalize_point(const DirectedGraph &g, PointSpec w) {
  if (!valid_point(g, w)) throw std::invalid_argument("invalid point");
  // primitive root of the cycle
  int n = w.cycle.length();
  for (int d = 1; d <= n; ++d) {
    if (n % d != 0) continue;
    bool periodic = true;
    for (int i = 0; i + d < n && periodic; ++i)
      periodic = w.cycle.edges[i] == w.cycle.edges[i + d];
    if (periodic) {
      w.cycle.edges.resize(d);
      break;
    }
  }
  // absorb tail letters matching the cycle's last edge: t·(c)^∞ with
  // t ending in the cycle's last edge equals t'·(rotated c)^∞
  while (!w.tail.edges.empty() &&
         w.tail.edges.back() == w.cycle.edges.back()) {
    w.tail.edges.pop_back();
    std::rotate(w.cycle.edges.begin(), w.cycle.edges.end() - 1,
                w.cycle.edges.end());
    w.cycle.start = g.edge(w.cycle.edges.front()).src;
  }
  return w;
}

Path point_prefix(const DirectedGraph &g, const PointSpec &w, int n) {
  Path p = w.tail;
  int i = 0;
  while (p.length() < n) {
    p.edges.push_back(w.cycle.edges[i % w.cycle.length()]);
    ++i;
  }
  p.edges.resize(n);
  (void)g;
  return p;
}

PointSpec point_shift(const DirectedGraph &g, const PointSpec &w, int n) {
  PointSpec r = w;
  if (n <= r.tail.length()) {
    r.tail = strip_prefix(g, point_prefix(g, w, n), w.tail);
  } else {
    int k = (n - w.tail.length()) % w.cycle.length();
    Path cyc = w.cycle;
    std::rotate(cyc.edges.begin(), cyc.edges.begin() + k, cyc.edges.end());
    cyc.start = g.edge(cyc.edges.front()).src;
    r.tail = empty_path(cyc.start);
    r.cycle = cyc;
  }
  return normalize_point(g, r);
}

PointSpec point_prepend(const DirectedGraph &g, const Path &prefix,
                        const PointSpec &w) {
  PointSpec r = w;
  r.tail = concat_paths(g, prefix, w.tail);
  return normalize_point(g, r);
}

bool point_in_clopen(const DirectedGraph &g, const PointSpec &w,
                     const Clopen &c) {
  for (const Path &b : c.basis)
    if (is_prefix(b, point_prefix(g, w, b.length()))) return true;
  return false;
}

std::string format_point(const DirectedGraph &g, const PointSpec &w) {
  return format_path(g, w.tail) + ";" + format_path(g, w.cycle);
}

PointSpec parse_point(const DirectedGraph &g, const std::string &text) {
  auto semi = text.find(';');
  if (semi == std::string::npos)
    throw std::invalid_argument("point needs 'tail;cycle': " + text);
  Path cycle = parse_path(g, text.substr(semi + 1));
  std::string tail_text = text.substr(0, semi);
  Path tail;
  if (tail_text.empty() && g.is_bouquet())
    tail = empty_path(0);
  else
    tail = parse_path(g, tail_text);
  PointSpec w{tail, cycle};
  if (!valid_point(g, w)) throw std::invalid_argument("invalid point: " + text);
  return normalize_point(g, w);
}

std::vector<Path> paths_from(const DirectedGraph &g, int v, int n) {
  std::vector<Path> out{empty_path(v)};
  for (int i = 0; i < n; ++i) {
    std::vector<Path> next;
    for (const Path &p : out)
      for (int e : g.out_edges(path_end(g, p))) {
        Path q = p;
        q.edges.push_back(e);
        next.push_back(q);
      }
    out = std::move(next);
  }
  return out;
}

std::vector<Path> paths_into(const DirectedGraph &g, int v, int n) {
  std::vector<Path> out;
  for (int u = 0; u < g.vertex_count(); ++u)
    for (const Path &p : paths_from(g, u, n))
      if (path_end(g, p) == v) out.push_back(p);
  return out;
}

}  // namespace mpkit
