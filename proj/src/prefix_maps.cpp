#include "mpkit/prefix_maps.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>

namespace mpkit {

namespace {

int max_domain_depth(const PrefixMap &f) {
  int d = 0;
  for (const auto &e : f.table) d = std::max(d, e.u.length());
  return d;
}

// entry whose domain prefix matches the point, or -1
int entry_at_point(const DirectedGraph &g, const PrefixMap &f,
                   const PointSpec &w) {
  for (size_t i = 0; i < f.table.size(); ++i)
    if (is_prefix(f.table[i].u, point_prefix(g, w, f.table[i].u.length())))
      return static_cast<int>(i);
  return -1;
}

}  // namespace

PrefixMap normalize(const DirectedGraph &g,
                    std::vector<PrefixMap::Entry> raw) {
  for (const auto &e : raw) {
    if (!valid_path(g, e.u) || !valid_path(g, e.v))
      throw std::invalid_argument("invalid path in map entry");
    if (path_end(g, e.u) != path_end(g, e.v))
      throw std::invalid_argument("entry end vertices differ");
  }
  std::sort(raw.begin(), raw.end());
  raw.erase(std::unique(raw.begin(), raw.end()), raw.end());
  for (size_t i = 0; i < raw.size(); ++i)
    for (size_t j = 0; j < raw.size(); ++j)
      if (i != j && is_prefix(raw[i].u, raw[j].u))
        throw std::invalid_argument("domains not prefix-free");

  bool changed = true;
  while (changed) {
    changed = false;
    // group entries by domain parent; a family collapses when every
    // out-edge e of the parent's end occurs as (pu·e → w·e) for one w
    std::map<Path, std::vector<size_t>> families;
    for (size_t i = 0; i < raw.size(); ++i) {
      if (raw[i].u.edges.empty()) continue;
      Path pu = raw[i].u;
      pu.edges.pop_back();
      families[pu].push_back(i);
    }
    for (auto &[pu, members] : families) {
      const auto &out = g.out_edges(path_end(g, pu));
      if (members.size() != out.size()) continue;
      bool collapsible = true;
      Path w;
      bool have_w = false;
      for (size_t i : members) {
        const auto &e = raw[i];
        int last = e.u.edges.back();
        if (e.v.edges.empty() || e.v.edges.back() != last) {
          collapsible = false;
          break;
        }
        Path wi = e.v;
        wi.edges.pop_back();
        if (!have_w) {
          w = wi;
          have_w = true;
        } else if (w != wi) {
          collapsible = false;
          break;
        }
      }
      if (!collapsible) continue;
      std::vector<PrefixMap::Entry> next;
      for (size_t i = 0; i < raw.size(); ++i)
        if (std::find(members.begin(), members.end(), i) == members.end())
          next.push_back(raw[i]);
      next.push_back({pu, w});
      raw = std::move(next);
      std::sort(raw.begin(), raw.end());
      changed = true;
      break;
    }
  }
  return PrefixMap{std::move(raw)};
}

PrefixMap identity_map(const DirectedGraph &g) {
  std::vector<PrefixMap::Entry> t;
  for (int v = 0; v < g.vertex_count(); ++v)
    t.push_back({empty_path(v), empty_path(v)});
  return normalize(g, std::move(t));
}

PrefixMap clopen_idem(const DirectedGraph &g, const Clopen &b) {
  std::vector<PrefixMap::Entry> t;
  for (const Path &p : b.basis) t.push_back({p, p});
  return normalize(g, std::move(t));
}

PrefixMap compose(const DirectedGraph &g, const PrefixMap &f,
                  const PrefixMap &h) {
  std::vector<PrefixMap::Entry> out;
  for (const auto &a : f.table)
    for (const auto &b : h.table) {
      if (is_prefix(b.u, a.v)) {
        // f lands inside h's domain cylinder
        out.push_back({a.u, concat_paths(g, b.v, strip_prefix(g, b.u, a.v))});
      } else if (is_prefix(a.v, b.u)) {
        // only the continuations entering h's cylinder survive
        out.push_back(
            {concat_paths(g, a.u, strip_prefix(g, a.v, b.u)), b.v});
      }
    }
  return normalize(g, std::move(out));
}

PrefixMap restriction(const DirectedGraph &g, const PrefixMap &f) {
  std::vector<PrefixMap::Entry> t;
  for (const auto &e : f.table) t.push_back({e.u, e.u});
  return normalize(g, std::move(t));
}

Clopen domain_clopen(const DirectedGraph &g, const PrefixMap &f) {
  std::vector<Path> b;
  for (const auto &e : f.table) b.push_back(e.u);
  return closure(g, std::move(b));
}

bool is_total(const DirectedGraph &g, const PrefixMap &f) {
  return domain_clopen(g, f) == clopen_top(g);
}

bool map_leq(const DirectedGraph &g, const PrefixMap &s, const PrefixMap &t) {
  return compose(g, restriction(g, s), t) == s;
}

PrefixMap join_disjoint(const DirectedGraph &g,
                        const std::vector<PrefixMap> &fs) {
  std::vector<Clopen> doms;
  std::vector<PrefixMap::Entry> t;
  for (const auto &f : fs) {
    doms.push_back(domain_clopen(g, f));
    for (const auto &e : f.table) t.push_back(e);
  }
  for (size_t i = 0; i < doms.size(); ++i)
    for (size_t j = i + 1; j < doms.size(); ++j)
      if (!clopen_meet(g, doms[i], doms[j]).is_zero())
        throw std::invalid_argument("join of non-disjoint maps");
  return normalize(g, std::move(t));
}

std::optional<PrefixMap> partial_inverse(const DirectedGraph &g,
                                         const PrefixMap &f) {
  for (size_t i = 0; i < f.table.size(); ++i)
    for (size_t j = 0; j < f.table.size(); ++j)
      if (i != j && is_prefix(f.table[i].v, f.table[j].v)) return std::nullopt;
  for (size_t i = 0; i < f.table.size(); ++i)
    for (size_t j = i + 1; j < f.table.size(); ++j)
      if (f.table[i].v == f.table[j].v) return std::nullopt;
  std::vector<PrefixMap::Entry> t;
  for (const auto &e : f.table) t.push_back({e.v, e.u});
  return normalize(g, std::move(t));
}

std::vector<PrefixMap> etale_decomposition(const DirectedGraph &g,
                                           const PrefixMap &f) {
  std::vector<PrefixMap> out;
  for (const auto &e : f.table) out.push_back(normalize(g, {e}));
  return out;
}

Clopen act_clopen(const DirectedGraph &g, const PrefixMap &s,
                  const Clopen &b) {
  return domain_clopen(g, compose(g, s, clopen_idem(g, b)));
}

PrefixMap glue_maps(const DirectedGraph &g, const Clopen &b,
                    const PrefixMap &m, const PrefixMap &n) {
  PrefixMap on_b = compose(g, clopen_idem(g, b), m);
  PrefixMap on_bc = compose(g, clopen_idem(g, complement(g, b)), n);
  return join_disjoint(g, {on_b, on_bc});
}

PointSpec apply_point(const DirectedGraph &g, const PrefixMap &f,
                      const PointSpec &w) {
  int i = entry_at_point(g, f, w);
  if (i < 0) throw std::invalid_argument("point outside map domain");
  const auto &e = f.table[i];
  return point_prepend(g, e.v, point_shift(g, w, e.u.length()));
}

ToposWitness topos_witness(const DirectedGraph &g, const Clopen &b) {
  if (b.is_zero()) throw std::invalid_argument("topos witness of 0");
  const Path &p = b.basis.front();
  int hub = path_end(g, p);
  std::vector<bool> reach(g.vertex_count());
  for (int v = 0; v < g.vertex_count(); ++v) reach[v] = reachable(g, hub, v);

  // minimal paths whose end has become reachable from the hub; if some
  // avoider survives past |V| steps it has looped in unreachable country
  std::vector<PrefixMap::Entry> entries;
  std::vector<Path> frontier;
  for (int v = 0; v < g.vertex_count(); ++v) frontier.push_back(empty_path(v));
  for (int step = 0; step <= g.vertex_count() + 1; ++step) {
    std::vector<Path> next;
    for (const Path &q : frontier) {
      int endv = path_end(g, q);
      if (reach[endv]) {
        // shortest r: hub -> endv by breadth-first search
        std::vector<int> prev_edge(g.vertex_count(), -1);
        std::vector<int> prev_vertex(g.vertex_count(), -1);
        std::vector<bool> seen(g.vertex_count(), false);
        std::vector<int> queue{hub};
        seen[hub] = true;
        for (size_t qi = 0; qi < queue.size(); ++qi) {
          int v = queue[qi];
          for (int e : g.out_edges(v))
            if (!seen[g.edge(e).tgt]) {
              seen[g.edge(e).tgt] = true;
              prev_edge[g.edge(e).tgt] = e;
              prev_vertex[g.edge(e).tgt] = v;
              queue.push_back(g.edge(e).tgt);
            }
        }
        Path r = empty_path(hub);
        std::vector<int> back;
        for (int v = endv; v != hub; v = prev_vertex[v])
          back.push_back(prev_edge[v]);
        r.edges.assign(back.rbegin(), back.rend());
        entries.push_back({q, concat_paths(g, p, r)});
        continue;
      }
      if (step > g.vertex_count()) {
        ToposWitness w;
        w.ok = false;
        w.bad_vertex = hub;
        return w;
      }
      for (int e : g.out_edges(endv)) {
        Path q2 = q;
        q2.edges.push_back(e);
        next.push_back(q2);
      }
    }
    frontier = std::move(next);
    if (frontier.empty()) break;
  }
  ToposWitness w;
  w.ok = true;
  w.map = normalize(g, std::move(entries));
  if (act_clopen(g, w.map, b) != clopen_top(g))
    throw std::logic_error("topos witness does not pull b to 1");
  return w;
}

Germ germ_at(const DirectedGraph &g, const PrefixMap &f, const PointSpec &w) {
  PointSpec at = normalize_point(g, w);
  if (entry_at_point(g, f, at) < 0)
    throw std::invalid_argument("germ at point outside domain");
  return Germ{at, f};
}

PointSpec germ_target(const DirectedGraph &g, const Germ &gm) {
  return apply_point(g, gm.rep, gm.at);
}

bool germ_equal(const DirectedGraph &g, const Germ &a, const Germ &b) {
  if (a.at != b.at) return false;
  int depth = std::max(max_domain_depth(a.rep), max_domain_depth(b.rep));
  Path p = point_prefix(g, a.at, depth);
  auto image = [&](const PrefixMap &f) {
    int i = entry_at_point(g, f, a.at);
    return concat_paths(g, f.table[i].v,
                        strip_prefix(g, f.table[i].u, p));
  };
  return image(a.rep) == image(b.rep);
}

Germ germ_compose(const DirectedGraph &g, const Germ &a, const Germ &b) {
  if (germ_target(g, a) != b.at)
    throw std::invalid_argument("germs not composable");
  return germ_at(g, compose(g, a.rep, b.rep), a.at);
}

int germ_degree(const DirectedGraph &g, const Germ &gm) {
  int i = entry_at_point(g, gm.rep, gm.at);
  return gm.rep.table[i].v.length() - gm.rep.table[i].u.length();
}

CheckReport check_presentation(const DirectedGraph &g) {
  CheckReport rep;
  if (!g.is_bouquet()) {
    rep.fail("presentation check requires a bouquet");
    return rep;
  }
  PrefixMap one = identity_map(g);
  auto gen = [&](int e) {
    return normalize(g, {{empty_path(0), Path{0, {e}}}});
  };
  auto cogen = [&](int e) {
    return normalize(g, {{Path{0, {e}}, empty_path(0)}});
  };
  std::vector<PrefixMap> idems;
  for (int e = 0; e < g.edge_count(); ++e) {
    std::string a = g.edge(e).name;
    if (compose(g, gen(e), cogen(e)) != one)
      rep.fail(a + "·" + a + "* != 1");
    for (int e2 = 0; e2 < g.edge_count(); ++e2)
      if (e2 != e && !compose(g, gen(e), cogen(e2)).is_zero())
        rep.fail(a + "·" + g.edge(e2).name + "* != 0");
    idems.push_back(compose(g, cogen(e), gen(e)));
  }
  if (join_disjoint(g, idems) != one) rep.fail("⋁ a*a != 1");
  return rep;
}

Clopen sample_clopen(const DirectedGraph &g, std::mt19937_64 &rng, int depth) {
  std::vector<Path> b;
  int n = 1 + static_cast<int>(rng() % 4);
  for (int i = 0; i < n; ++i) {
    Path p = empty_path(static_cast<int>(rng() % g.vertex_count()));
    int len = static_cast<int>(rng() % (depth + 1));
    for (int j = 0; j < len; ++j) {
      const auto &out = g.out_edges(path_end(g, p));
      p.edges.push_back(out[rng() % out.size()]);
    }
    b.push_back(p);
  }
  return closure(g, std::move(b));
}

namespace {

// random image path ending at the same vertex as u, length ≤ depth
Path sample_image(const DirectedGraph &g, std::mt19937_64 &rng, const Path &u,
                  int depth) {
  int want = static_cast<int>(rng() % (depth + 1));
  for (int len = want; len >= 0; --len) {
    auto pool = paths_into(g, path_end(g, u), len);
    if (!pool.empty()) return pool[rng() % pool.size()];
  }
  return empty_path(path_end(g, u));
}

void sample_domain_tree(const DirectedGraph &g, std::mt19937_64 &rng,
                        const Path &p, int depth, std::vector<Path> &leaves) {
  if (depth > 0 && rng() % 2 == 0) {
    for (int e : g.out_edges(path_end(g, p))) {
      Path q = p;
      q.edges.push_back(e);
      sample_domain_tree(g, rng, q, depth - 1, leaves);
    }
  } else {
    leaves.push_back(p);
  }
}

}  // namespace

PrefixMap sample_total_map(const DirectedGraph &g, std::mt19937_64 &rng,
                           int depth) {
  std::vector<Path> leaves;
  for (int v = 0; v < g.vertex_count(); ++v)
    sample_domain_tree(g, rng, empty_path(v), depth, leaves);
  std::vector<PrefixMap::Entry> t;
  for (const Path &u : leaves) t.push_back({u, sample_image(g, rng, u, depth)});
  return normalize(g, std::move(t));
}

PrefixMap sample_map(const DirectedGraph &g, std::mt19937_64 &rng, int depth) {
  std::vector<Path> leaves;
  for (int v = 0; v < g.vertex_count(); ++v)
    sample_domain_tree(g, rng, empty_path(v), depth, leaves);
  std::vector<PrefixMap::Entry> t;
  for (const Path &u : leaves)
    if (rng() % 3 != 0) t.push_back({u, sample_image(g, rng, u, depth)});
  return normalize(g, std::move(t));
}

PointSpec sample_point(const DirectedGraph &g, std::mt19937_64 &rng,
                       int depth) {
  // random walk for the tail, then a cycle found from its end
  for (int attempt = 0; attempt < 64; ++attempt) {
    Path tail = empty_path(static_cast<int>(rng() % g.vertex_count()));
    int len = static_cast<int>(rng() % (depth + 1));
    for (int j = 0; j < len; ++j) {
      const auto &out = g.out_edges(path_end(g, tail));
      tail.edges.push_back(out[rng() % out.size()]);
    }
    int base = path_end(g, tail);
    // random walk until the base vertex recurs
    Path cyc = empty_path(base);
    bool found = false;
    for (int j = 0; j < depth + 2 * g.vertex_count(); ++j) {
      const auto &out = g.out_edges(path_end(g, cyc));
      cyc.edges.push_back(out[rng() % out.size()]);
      if (path_end(g, cyc) == base) {
        found = true;
        break;
      }
    }
    if (found) return normalize_point(g, {tail, cyc});
  }
  throw std::runtime_error("could not sample a point");
}

CheckReport check_matched_pair_sampled(const DirectedGraph &g,
                                       std::uint64_t seed, int samples,
                                       int depth) {
  CheckReport rep;
  std::mt19937_64 rng(seed);
  PrefixMap one = identity_map(g);
  for (int i = 0; i < samples && rep.failures.size() < 10; ++i) {
    Clopen b = sample_clopen(g, rng, depth);
    Clopen c = sample_clopen(g, rng, depth);
    PrefixMap m = sample_total_map(g, rng, depth);
    PrefixMap q = sample_total_map(g, rng, depth);
    PrefixMap p = sample_total_map(g, rng, depth);
    // n agrees with m on b by construction
    PrefixMap n = glue_maps(g, b, m, q);
    PrefixMap bi = clopen_idem(g, b);
    if (compose(g, bi, m) != compose(g, bi, n))
      rep.fail("glue does not agree with m on b");
    if (compose(g, bi, compose(g, m, p)) != compose(g, bi, compose(g, n, p)))
      rep.fail("m ≡_b n but mp !≡_b np");
    // middle axiom: q ≡_b p' forces mq ≡_{m*b} mp'
    PrefixMap p2 = glue_maps(g, b, q, p);
    PrefixMap mb_idem = clopen_idem(g, act_clopen(g, m, b));
    if (compose(g, mb_idem, compose(g, m, q)) !=
        compose(g, mb_idem, compose(g, m, p2)))
      rep.fail("q ≡_b p but mq !≡_{m*b} mp");
    if (clopen_meet(g, b, act_clopen(g, m, c)) !=
        clopen_meet(g, b, act_clopen(g, n, c)))
      rep.fail("m ≡_b n but b∧m*c != b∧n*c");
    // conditioned-disjunction compatibilities
    PrefixMap glued = glue_maps(g, b, m, q);
    if (compose(g, glued, p) != glue_maps(g, b, compose(g, m, p),
                                          compose(g, q, p)))
      rep.fail("b(m,n)p != b(mp,np)");
    Clopen lhs = act_clopen(g, glued, c);
    Clopen rhs = clopen_join(
        g, clopen_meet(g, b, act_clopen(g, m, c)),
        clopen_meet(g, complement(g, b), act_clopen(g, q, c)));
    if (lhs != rhs) rep.fail("b(m,n)*c != b(m*c,n*c)");
    // action laws
    if (act_clopen(g, one, b) != b) rep.fail("1*b != b");
    if (act_clopen(g, compose(g, m, q), b) !=
        act_clopen(g, m, act_clopen(g, q, b)))
      rep.fail("(mq)*b != m*(q*b)");
  }
  return rep;
}

std::string format_map(const DirectedGraph &g, const PrefixMap &f) {
  std::ostringstream os;
  if (f.table.empty()) {
    os << "(zero)\n";
    return os.str();
  }
  for (const auto &e : f.table)
    os << "entry: " << format_path(g, e.u) << " -> " << format_path(g, e.v)
       << "\n";
  return os.str();
}

}  // namespace mpkit
