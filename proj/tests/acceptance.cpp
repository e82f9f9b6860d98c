// Acceptance gate: ten checks, one verdict line each.  Every check carries
// its own wall-clock budget; exceeding the budget fails the check even when
// all properties hold.  Oracles here are coded independently of the library
// routines they validate.
#include <algorithm>
#include <chrono>
#include <cstdio>
#include <exception>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "mpkit/matched_finite.hpp"
#include "mpkit/path_space.hpp"
#include "mpkit/prefix_maps.hpp"
#include "mpkit/selfsimilar.hpp"
#include "oracles.hpp"

using namespace mpkit;

namespace {

constexpr std::uint64_t kSeed = 20240817;

struct Check {
  bool ok = true;
  std::string detail;

  void fail(const std::string &msg) {
    if (ok) detail = msg;
    ok = false;
  }
  void require(bool cond, const std::string &msg) {
    if (!cond) fail(msg);
  }
};

// ---------------------------------------------------------------- fixtures

DirectedGraph graph3() {
  return DirectedGraph({"u", "v", "w"},
                       {{"a", 0, 1},
                        {"b", 1, 2},
                        {"c", 2, 0},
                        {"d", 0, 0},
                        {"e", 1, 0}});
}

FiniteMonoid monoid_z2() { return FiniteMonoid{0, {{0, 1}, {1, 0}}}; }
FiniteMonoid monoid_idem2() { return FiniteMonoid{0, {{0, 1}, {1, 1}}}; }

FiniteMonoid monoid_cyclic(int n) {
  FiniteMonoid m;
  m.mult.assign(n, std::vector<int>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m.mult[i][j] = (i + j) % n;
  return m;
}

// All self-maps of a 2-point set acting on its powerset.
MatchedPair pair_end2() {
  auto val = [](int m, int a) { return a == 0 ? m / 2 : m % 2; };
  FiniteMonoid mon;
  mon.mult.assign(4, std::vector<int>(4));
  for (int m = 0; m < 4; ++m)
    for (int n = 0; n < 4; ++n)
      mon.mult[m][n] = 2 * val(n, val(m, 0)) + val(n, val(m, 1));
  mon.unit = 1;
  std::vector<std::vector<int>> act(4, std::vector<int>(2));
  std::vector<std::vector<int>> cls(2, std::vector<int>(4));
  for (int m = 0; m < 4; ++m)
    for (int a = 0; a < 2; ++a) {
      act[m][a] = val(m, a);
      cls[a][m] = val(m, a);
    }
  return MatchedPair{BooleanAlgebra({"a1", "a2"}), std::move(mon),
                     std::move(act), BSet(2, 4, std::move(cls))};
}

MealyMachine odometer() {
  return MealyMachine("01", {"e", "a"}, 0, {{0, 0}, {0, 1}},
                      {{0, 1}, {1, 0}});
}

// ------------------------------------------------------- small hom oracle

// All structure-preserving maps x -> y found by backtracking: a candidate
// value is rejected as soon as it violates an agreement or action equation
// against the already-assigned elements.  Returns nullopt past `limit`.
std::optional<std::vector<std::vector<int>>> hom_search(const MatchedPair &p,
                                                        const BJMSet &x,
                                                        const BJMSet &y,
                                                        std::size_t limit) {
  int n = x.size(), k = p.alg.arity(), msz = p.monoid.size();
  std::vector<std::vector<int>> out;
  std::vector<int> f(n, -1);
  bool over = false;
  auto rec = [&](auto &&self, int i) -> void {
    if (over) return;
    if (i == n) {
      if (out.size() == limit) {
        over = true;
        return;
      }
      out.push_back(f);
      return;
    }
    for (int v = 0; v < y.size() && !over; ++v) {
      bool good = true;
      for (int a = 0; a < k && good; ++a)
        for (int j = 0; j < i && good; ++j)
          if (x.bset.equiv(p.alg.atom(a), i, j))
            good = y.bset.equiv(p.alg.atom(a), v, f[j]);
      for (int m = 0; m < msz && good; ++m) {
        int im = x.act(m, i);
        if (im == i)
          good = y.act(m, v) == v;
        else if (im < i)
          good = y.act(m, v) == f[im];
        for (int j = 0; j < i && good; ++j)
          if (x.act(m, j) == i) good = y.act(m, f[j]) == v;
      }
      if (good) {
        f[i] = v;
        self(self, i + 1);
        f[i] = -1;
      }
    }
  };
  rec(rec, 0);
  if (over) return std::nullopt;
  return out;
}

// Canonical serialization of a carrier up to relabelling, used to avoid
// re-checking isomorphic copies in the exhaustive sweeps.
std::string bjm_key(const MatchedPair &p, const BJMSet &x) {
  int n = x.size(), k = p.alg.arity(), msz = p.monoid.size();
  std::vector<int> perm(n);
  for (int i = 0; i < n; ++i) perm[i] = i;
  std::string best;
  do {
    std::string s;
    for (int a = 0; a < k; ++a) {
      std::map<int, int> relabel;
      for (int i = 0; i < n; ++i) {
        int c = x.bset.atom_class(a, perm[i]);
        auto [it, fresh] = relabel.emplace(c, (int)relabel.size());
        s += char('0' + it->second);
      }
      s += '|';
    }
    std::vector<int> inv(n);
    for (int i = 0; i < n; ++i) inv[perm[i]] = i;
    for (int m = 0; m < msz; ++m) {
      for (int i = 0; i < n; ++i) s += char('0' + inv[x.act(m, perm[i])]);
      s += '/';
    }
    if (best.empty() || s < best) best = s;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

std::vector<BJMSet> dedupe_bjm(const MatchedPair &p,
                               std::vector<BJMSet> sets) {
  std::set<std::string> seen;
  std::vector<BJMSet> out;
  for (auto &x : sets)
    if (seen.insert(bjm_key(p, x)).second) out.push_back(std::move(x));
  return out;
}

bool is_group(const FiniteMonoid &m) {
  for (int a = 0; a < m.size(); ++a) {
    bool inv = false;
    for (int b = 0; b < m.size() && !inv; ++b)
      inv = m.mul(a, b) == m.unit && m.mul(b, a) == m.unit;
    if (!inv) return false;
  }
  return true;
}

// ------------------------------------------------------------ criterion 1

// Restriction axioms, the derived law (st+)+ = (st)+, and the Boolean
// structure (zero, idempotent algebra, disjoint joins as least upper
// bounds, distributivity on both sides) on seeded random maps.
Check criterion_restriction_laws() {
  Check c;
  std::vector<DirectedGraph> graphs{DirectedGraph::bouquet("lr"), graph3()};
  std::mt19937_64 rng(kSeed);
  for (int rep = 0; rep < 1000 && c.ok; ++rep) {
    const DirectedGraph &g = graphs[rep % 2];
    int depth = 1 + rep % 4;
    PrefixMap s = sample_map(g, rng, depth);
    PrefixMap t = sample_map(g, rng, depth);
    PrefixMap u = sample_map(g, rng, depth);
    auto plus = [&](const PrefixMap &f) { return restriction(g, f); };
    auto mul = [&](const PrefixMap &f, const PrefixMap &h) {
      return compose(g, f, h);
    };

    c.require(mul(plus(s), s) == s, "s+s = s fails");
    c.require(plus(mul(plus(s), t)) == mul(plus(s), plus(t)),
              "(s+t)+ = s+t+ fails");
    c.require(mul(plus(s), plus(t)) == mul(plus(t), plus(s)),
              "s+t+ = t+s+ fails");
    c.require(mul(s, plus(t)) == mul(plus(mul(s, t)), s),
              "st+ = (st)+s fails");
    c.require(plus(mul(s, plus(t))) == plus(mul(s, t)),
              "(st+)+ = (st)+ fails");

    c.require(mul(s, zero_map()).is_zero() && mul(zero_map(), s).is_zero(),
              "zero is not absorbing");
    c.require(plus(zero_map()).is_zero() && map_leq(g, zero_map(), s),
              "zero is not the least element");

    Clopen b = sample_clopen(g, rng, depth);
    Clopen d = sample_clopen(g, rng, depth);
    PrefixMap eb = clopen_idem(g, b), ed = clopen_idem(g, d);
    c.require(mul(eb, ed) == clopen_idem(g, clopen_meet(g, b, d)),
              "idempotent meet is not the product");
    PrefixMap ebc = clopen_idem(g, complement(g, b));
    c.require(mul(eb, ebc).is_zero(), "complementary idempotents overlap");
    c.require(join_disjoint(g, {eb, ebc}) == identity_map(g),
              "complementary idempotents do not join to 1");

    // force u disjoint from t, then test joins and distributivity
    PrefixMap u2 =
        mul(clopen_idem(g, complement(g, domain_clopen(g, t))), u);
    c.require(mul(plus(t), plus(u2)).is_zero(), "disjointification failed");
    PrefixMap j = join_disjoint(g, {t, u2});
    c.require(mul(plus(t), j) == t && mul(plus(u2), j) == u2,
              "join does not restrict to its parts");
    c.require(map_leq(g, t, j) && map_leq(g, u2, j),
              "join is not an upper bound");
    c.require(plus(j) == join_disjoint(g, {plus(t), plus(u2)}),
              "(s v t)+ = s+ v t+ fails");
    c.require(mul(s, j) == join_disjoint(g, {mul(s, t), mul(s, u2)}),
              "left distributivity fails");
    c.require(mul(j, s) == join_disjoint(g, {mul(t, s), mul(u2, s)}),
              "right distributivity fails");
  }
  return c;
}

// ------------------------------------------------------------ criterion 2

// Generator relations on bouquets of 1 to 4 letters, checked by direct
// map arithmetic, plus the etale-decomposition rejoin property.
Check criterion_presentation() {
  Check c;
  std::mt19937_64 rng(kSeed);
  for (int k = 1; k <= 4 && c.ok; ++k) {
    DirectedGraph g = DirectedGraph::bouquet(std::string("abcd").substr(0, k));
    std::vector<PrefixMap> gen(k), genstar(k);
    for (int a = 0; a < k; ++a) {
      Path pa{0, {a}};
      gen[a] = normalize(g, {{empty_path(0), pa}});
      genstar[a] = normalize(g, {{pa, empty_path(0)}});
    }
    for (int a = 0; a < k; ++a)
      for (int b = 0; b < k; ++b) {
        PrefixMap prod = compose(g, gen[a], genstar[b]);
        if (a == b)
          c.require(prod == identity_map(g), "a a* = 1 fails");
        else
          c.require(prod.is_zero(), "a b* = 0 fails");
      }
    std::vector<PrefixMap> pieces;
    for (int a = 0; a < k; ++a)
      pieces.push_back(compose(g, genstar[a], gen[a]));
    c.require(join_disjoint(g, pieces) == identity_map(g),
              "join of a*a over the alphabet is not 1");
    c.require(check_presentation(g).ok(), "presentation report not clean");

    for (int rep = 0; rep < 50 && c.ok; ++rep) {
      PrefixMap f = sample_map(g, rng, 3);
      c.require(join_disjoint(g, etale_decomposition(g, f)) == f,
                "element differs from the join of its decomposition");
    }
  }
  return c;
}

// ------------------------------------------------------------ criterion 3

// Section pairs of small categories survive the round trip through the
// restriction monoid and back, via the explicit unit maps.
Check criterion_roundtrip() {
  Check c;
  std::vector<FiniteCategory> cats;
  {
    FiniteCategory one;
    one.objects = 1;
    one.src = {0};
    one.tgt = {0};
    one.identity = {0};
    one.comp = {{0}};
    cats.push_back(one);

    FiniteCategory idem = one;  // one object, an extra idempotent arrow
    idem.src = {0, 0};
    idem.tgt = {0, 0};
    idem.comp = {{0, 1}, {1, 1}};
    cats.push_back(idem);

    FiniteCategory z2 = idem;  // one object, an involution
    z2.comp = {{0, 1}, {1, 0}};
    cats.push_back(z2);

    FiniteCategory arrow;  // two objects, one arrow across
    arrow.objects = 2;
    arrow.src = {0, 1, 0};
    arrow.tgt = {0, 1, 1};
    arrow.identity = {0, 1};
    arrow.comp.assign(3, std::vector<int>(3, -1));
    arrow.comp[0][0] = 0;
    arrow.comp[1][1] = 1;
    arrow.comp[2][0] = 2;
    arrow.comp[1][2] = 2;
    cats.push_back(arrow);

    FiniteCategory par;  // two objects, a parallel pair
    par.objects = 2;
    par.src = {0, 1, 0, 0};
    par.tgt = {0, 1, 1, 1};
    par.identity = {0, 1};
    par.comp.assign(4, std::vector<int>(4, -1));
    par.comp[0][0] = 0;
    par.comp[1][1] = 1;
    par.comp[2][0] = 2;
    par.comp[1][2] = 2;
    par.comp[3][0] = 3;
    par.comp[1][3] = 3;
    cats.push_back(par);

    FiniteCategory chain;  // three objects, a composable chain
    chain.objects = 3;
    chain.src = {0, 1, 2, 0, 1, 0};
    chain.tgt = {0, 1, 2, 1, 2, 2};
    chain.identity = {0, 1, 2};
    chain.comp.assign(6, std::vector<int>(6, -1));
    auto set = [&](int gg, int ff, int h) { chain.comp[gg][ff] = h; };
    set(0, 0, 0);
    set(1, 1, 1);
    set(2, 2, 2);
    set(3, 0, 3);
    set(1, 3, 3);
    set(4, 1, 4);
    set(2, 4, 4);
    set(5, 0, 5);
    set(2, 5, 5);
    set(4, 3, 5);
    cats.push_back(chain);
  }
  int done = 0;
  for (const auto &cat : cats) {
    if (!c.ok) break;
    c.require(cat.check().ok(), "category table is invalid");
    if (!c.ok) break;
    CategoryPair cp = from_finite_category(cat);
    c.require(check_matched_pair(cp.pair).ok(),
              "section pair is not a matched pair");
    auto report = roundtrip_check(cp.pair);
    if (!report.ok()) c.fail("round trip: " + report.failures.front());
    ++done;
  }
  c.require(done >= 5, "fewer than five category pairs checked");
  return c;
}

// ------------------------------------------------------------ criterion 4

// A nonzero clopen of bounded depth contains a cylinder of that depth, and
// a witness for a cylinder serves every superset, so quantifying over all
// cylinders of depth <= 3 decides the quantification over all nonzero
// clopens of depth <= 3 exactly.
bool witness_everywhere(const DirectedGraph &g) {
  for (int v = 0; v < g.vertex_count(); ++v)
    for (int d = 0; d <= 3; ++d)
      for (const Path &p : paths_from(g, v, d)) {
        Clopen b = closure(g, {p});
        ToposWitness w = topos_witness(g, b);
        if (!w.ok) return false;
        if (!is_total(g, w.map) ||
            act_clopen(g, w.map, b) != clopen_top(g))
          return false;  // claimed witness does not actually work
      }
  return true;
}

// Independent verdict for a finite pair: a proper sieve is a set of masks,
// downward closed, closed under disjoint joins and under every m*, that
// contains a nonzero mask but not the top.  The pair fails the criterion
// exactly when one exists.
bool sieve_oracle_topos(const MatchedPair &p) {
  int masks = p.alg.full() + 1;
  for (std::uint32_t set = 0; set < (1u << masks); ++set) {
    auto has = [&](Mask b) { return (set >> b) & 1u; };
    if (has(p.alg.full())) continue;
    bool nontrivial = false;
    for (Mask b = 1; b < (Mask)masks; ++b) nontrivial = nontrivial || has(b);
    if (!nontrivial) continue;
    bool closed = true;
    for (Mask b = 0; b < (Mask)masks && closed; ++b) {
      if (!has(b)) continue;
      for (Mask sub = b; closed; sub = (sub - 1) & b) {
        closed = has(sub);
        if (sub == 0) break;
      }
      for (int m = 0; m < p.monoid.size() && closed; ++m)
        closed = has(p.star(m, b));
      for (Mask d = 0; d < (Mask)masks && closed; ++d)
        if (has(d) && !(b & d)) closed = has(b | d);
    }
    if (closed) return false;  // a proper sieve exists
  }
  return true;
}

Check criterion_topos_crosscheck() {
  Check c;
  std::mt19937_64 rng(kSeed);
  for (int rep = 0; rep < 100 && c.ok; ++rep) {
    int nv = 1 + (int)(rng() % 5);
    int ne = nv + (int)(rng() % (8 - nv + 1));
    std::vector<std::string> names(nv);
    for (int v = 0; v < nv; ++v) names[v] = "v" + std::to_string(v);
    std::vector<DirectedGraph::Edge> edges;
    for (int e = 0; e < ne; ++e) {
      int src = e < nv ? e : (int)(rng() % nv);  // every vertex emits
      edges.push_back({"e" + std::to_string(e), src, (int)(rng() % nv)});
    }
    DirectedGraph g(names, edges);
    bool all_cofinal =
        (int)cofinal_vertices(g).size() == g.vertex_count();
    c.require(witness_everywhere(g) == all_cofinal,
              "clopen witnesses disagree with cofinality");
  }

  std::vector<MatchedPair> pairs = enumerate_pairs(3, 2);
  pairs.push_back(trivial_pair(monoid_cyclic(5)));
  pairs.push_back(trivial_pair(monoid_idem2()));
  pairs.push_back(pair_end2());
  {
    FiniteCategory d4;  // four objects: discrete, and with one arrow across
    d4.objects = 4;
    d4.src = {0, 1, 2, 3};
    d4.tgt = {0, 1, 2, 3};
    d4.identity = {0, 1, 2, 3};
    d4.comp.assign(4, std::vector<int>(4, -1));
    for (int i = 0; i < 4; ++i) d4.comp[i][i] = i;
    pairs.push_back(from_finite_category(d4).pair);

    FiniteCategory a4 = d4;
    a4.src.push_back(0);
    a4.tgt.push_back(1);
    a4.comp.assign(5, std::vector<int>(5, -1));
    for (int i = 0; i < 4; ++i) a4.comp[i][i] = i;
    a4.comp[4][0] = 4;
    a4.comp[1][4] = 4;
    pairs.push_back(from_finite_category(a4).pair);
  }
  for (const auto &p : pairs) {
    if (!c.ok) break;
    if (!check_matched_pair(p).ok()) continue;
    ToposVerdict v = is_topos(p);
    c.require(v.topos == sieve_oracle_topos(p),
              "is_topos disagrees with the sieve enumeration");
    if (v.topos)
      for (int a = 0; a < p.alg.arity(); ++a)
        c.require(p.star(v.witness[a], p.alg.atom(a)) == p.alg.full(),
                  "topos witness element does not cover the atom");
  }
  return c;
}

// ------------------------------------------------------------ criterion 5

Check criterion_groupoidality() {
  Check c;
  c.require(is_groupoidal(trivial_pair(monoid_z2())).groupoidal,
            "one-atom group pair should be groupoidal");
  c.require(!is_groupoidal(trivial_pair(monoid_idem2())).groupoidal,
            "one-atom idempotent pair should not be groupoidal");
  for (const auto &p : enumerate_pairs(4, 3)) {
    if (!c.ok) break;
    if (!check_matched_pair(p).ok()) continue;
    bool g = is_groupoidal(p).groupoidal;
    auto bijective = [&](const BJMSet &x) {
      ThetaResult t = theta(p, x);
      return t.injective && t.surjective;
    };
    bool all = bijective(regular_bjm(p));
    if (all)
      for (const auto &x : enumerate_bjm_sets(p, 3)) {
        all = bijective(x);
        if (!all) break;
      }
    c.require(g == all,
              "groupoidality disagrees with theta invertibility");
  }
  return c;
}

// ------------------------------------------------------------ criterion 6

Check criterion_exponentials() {
  Check c;
  constexpr std::size_t kHomLimit = 2'000'000;
  for (const auto &p : enumerate_pairs(3, 2)) {
    if (!c.ok) break;
    auto sets = dedupe_bjm(p, enumerate_bjm_sets(p, 3));
    for (std::size_t yi = 0; yi < sets.size() && c.ok; ++yi)
      for (std::size_t zi = 0; zi < sets.size() && c.ok; ++zi) {
        Exponential e = exponential(p, sets[yi], sets[zi]);
        for (std::size_t xi = 0; xi < sets.size() && c.ok; ++xi) {
          const BJMSet &x = sets[xi];
          BJMSet prod = product_bjm(p, x, sets[yi]);
          auto h1 = hom_search(p, prod, sets[zi], kHomLimit);
          auto h2 = hom_search(p, x, e.set, kHomLimit);
          if (!h1 || !h2) {
            c.fail("hom enumeration exceeded its budget");
            break;
          }
          c.require(h1->size() == h2->size(),
                    "hom sets differ in size across the adjunction");
          std::set<std::vector<int>> expect(h2->begin(), h2->end());
          std::set<std::vector<int>> image;
          for (const auto &f : *h1) {
            std::vector<int> t = transpose(p, e, x, f);
            c.require(expect.count(t) == 1,
                      "transpose leaves the hom set");
            c.require(image.insert(t).second, "transpose is not injective");
            if (!c.ok) break;
          }
        }
      }
  }

  // naturality in the first argument, on the small curated pairs
  for (const auto &p :
       {trivial_pair(monoid_z2()), trivial_pair(monoid_idem2())}) {
    if (!c.ok) break;
    auto sets = dedupe_bjm(p, enumerate_bjm_sets(p, 2));
    for (const auto &x2 : sets)
      for (const auto &x : sets)
        for (const auto &y : sets)
          for (const auto &z : sets) {
            if (!c.ok) return c;
            Exponential e = exponential(p, y, z);
            BJMSet prod = product_bjm(p, x, y);
            auto homs = hom_search(p, prod, z, kHomLimit);
            auto gs = hom_search(p, x2, x, kHomLimit);
            for (const auto &f : *homs)
              for (const auto &gmap : *gs) {
                std::vector<int> pulled(x2.size() * y.size());
                for (int u = 0; u < x2.size(); ++u)
                  for (int v = 0; v < y.size(); ++v)
                    pulled[u * y.size() + v] = f[gmap[u] * y.size() + v];
                std::vector<int> lhs = transpose(p, e, x2, pulled);
                std::vector<int> tf = transpose(p, e, x, f);
                std::vector<int> rhs(x2.size());
                for (int u = 0; u < x2.size(); ++u) rhs[u] = tf[gmap[u]];
                c.require(lhs == rhs, "transpose is not natural");
              }
          }
  }

  // on group pairs the conjugation exponential is isomorphic
  for (const auto &p : enumerate_pairs(3, 2)) {
    if (!c.ok) break;
    if (!is_group(p.monoid)) continue;
    GroupoidalVerdict w = is_groupoidal(p);
    c.require(w.groupoidal, "group pair is not groupoidal");
    if (!c.ok) break;
    auto sets = dedupe_bjm(p, enumerate_bjm_sets(p, 3));
    for (const auto &y : sets)
      for (const auto &z : sets) {
        if (!c.ok) return c;
        Exponential e = exponential(p, y, z);
        ConjExponential ce = exponential_conjugation(p, y, z, w);
        c.require(e.set.size() == ce.set.size(),
                  "conjugation exponential has a different size");
        if (!c.ok) break;
        std::vector<int> to_conj(e.set.size(), -1);
        std::vector<bool> hit(ce.set.size(), false);
        for (int i = 0; i < e.set.size() && c.ok; ++i) {
          std::vector<int> tab(e.ysize);
          for (int v = 0; v < e.ysize; ++v) tab[v] = e.eval(i, v);
          auto it = std::find(ce.homs.begin(), ce.homs.end(), tab);
          c.require(it != ce.homs.end(),
                    "evaluation table missing from the conjugation side");
          if (!c.ok) break;
          to_conj[i] = (int)(it - ce.homs.begin());
          c.require(!hit[to_conj[i]], "evaluation map is not injective");
          hit[to_conj[i]] = true;
        }
        for (int i = 0; i < e.set.size() && c.ok; ++i) {
          for (int m = 0; m < p.monoid.size(); ++m)
            c.require(
                to_conj[e.set.act(m, i)] == ce.set.act(m, to_conj[i]),
                "evaluation map does not intertwine the actions");
          for (int j = 0; j < e.set.size(); ++j)
            c.require(e.set.bset.agreement(i, j) ==
                          ce.set.bset.agreement(to_conj[i], to_conj[j]),
                      "evaluation map does not preserve agreement");
        }
      }
  }
  return c;
}

// ------------------------------------------------------------ criterion 7

Check criterion_sheaf_collapse() {
  Check c;
  MatchedPair p = pair_end2();
  for (const auto &x : enumerate_bjm_sets(p, 4)) {
    if (!c.ok) break;
    BJMSheaf sh = sheafify(p, x);
    auto report = check_sheaf(p, sh);
    if (!report.ok()) {
      c.fail("sheaf axioms: " + report.failures.front());
      break;
    }
    BJMSet back = collapse(p, sh);
    c.require(back.size() == x.size(), "collapse changes the carrier size");
    auto homs = hom_search(p, back, x, 1u << 20);
    bool iso = false;
    for (const auto &f : *homs) {
      std::vector<bool> hit(x.size(), false);
      bool bij = true;
      for (int v : f) {
        if (hit[v]) bij = false;
        hit[v] = true;
      }
      if (bij) iso = true;
    }
    c.require(iso, "collapse of the sheafification is not isomorphic");
  }
  return c;
}

// ------------------------------------------------------------ criterion 8

Check criterion_selfsimilar() {
  Check c;
  MealyMachine m = odometer();
  DirectedGraph g = m.bouquet();
  StateWord a{1};
  c.require(star_word(m, "10", a) == "11", "odometer word action is wrong");
  PointSpec all_ones = normalize_point(g, {empty_path(0), Path{0, {1}}});
  PointSpec all_zeros = normalize_point(g, {empty_path(0), Path{0, {0}}});
  c.require(apply_point(m, a, all_ones) == all_zeros,
            "odometer fixed point action is wrong");

  std::vector<ZSElement> elems;
  std::vector<std::string> words{""};
  for (int len = 1; len <= 3; ++len) {
    std::vector<std::string> next;
    for (const auto &w : words)
      if ((int)w.size() == len - 1)
        for (char ch : m.alphabet()) next.push_back(w + ch);
    words.insert(words.end(), next.begin(), next.end());
  }
  for (const auto &p : state_words(m, 3))
    for (const auto &u : words) elems.push_back({p, u});
  for (const auto &x : elems) {
    c.require(zappa_szep_mul(m, x, zs_unit()) == x &&
                  zappa_szep_mul(m, zs_unit(), x) == x,
              "unit law fails");
    if (!c.ok) return c;
  }
  for (const auto &x : elems) {
    for (const auto &y : elems)
      for (const auto &z : elems)
        if (zappa_szep_mul(m, zappa_szep_mul(m, x, y), z) !=
            zappa_szep_mul(m, x, zappa_szep_mul(m, y, z))) {
          c.fail("associativity fails");
          return c;
        }
  }
  for (const auto &p : state_words(m, 3))
    for (int ai = 0; ai < m.letter_count(); ++ai) {
      std::string la(1, m.letter(ai));
      ZSElement lhs = zappa_szep_mul(m, {{}, la}, {p, ""});
      ZSElement rhs = zappa_szep_mul(m, {restrict_letter(m, p, ai), ""},
                                     {{}, star_word(m, la, p)});
      c.require(lhs == rhs, "generator relation fails");
      if (!c.ok) return c;
    }

  std::mt19937_64 rng(kSeed);
  auto random_elem = [&] {
    StateWord p(rng() % 5);
    for (int &q : p) q = (int)(rng() % m.state_count());
    std::string u;
    int len = (int)(rng() % 5);
    for (int i = 0; i < len; ++i) u += m.letter((int)(rng() % 2));
    return ZSElement{p, u};
  };
  for (int rep = 0; rep < 1000 && c.ok; ++rep) {
    ZSElement x = random_elem(), y = random_elem(), z = random_elem();
    c.require(zappa_szep_mul(m, zappa_szep_mul(m, x, y), z) ==
                  zappa_szep_mul(m, x, zappa_szep_mul(m, y, z)),
              "random associativity fails");
  }

  auto random_word = [&](int maxlen) {
    std::string w;
    int len = (int)(rng() % (maxlen + 1));
    for (int i = 0; i < len; ++i) w += m.letter((int)(rng() % 2));
    return w;
  };
  auto random_nek = [&] {
    std::vector<NekEntry> raw;
    auto split = [&](auto &&self, const std::string &u, int d) -> void {
      if (d < 2 && rng() % 2) {
        for (char ch : m.alphabet()) self(self, ch + u, d + 1);
        return;
      }
      StateWord p(rng() % 3);
      for (int &q : p) q = (int)(rng() % m.state_count());
      raw.push_back({u, p, random_word(2)});
    };
    split(split, "", 0);
    return nek_normalize(m, raw);
  };
  auto random_point = [&] {
    Path tail{0, {}}, cycle{0, {}};
    int tl = (int)(rng() % 4);
    for (int i = 0; i < tl; ++i) tail.edges.push_back((int)(rng() % 2));
    int cl = 1 + (int)(rng() % 2);
    for (int i = 0; i < cl; ++i) cycle.edges.push_back((int)(rng() % 2));
    return normalize_point(g, {tail, cycle});
  };
  int oracle_samples = 0;
  while (oracle_samples < 200 && c.ok) {
    NekrashevychMap f = random_nek(), h = random_nek();
    NekrashevychMap comp = nek_compose(m, f, h);
    for (int i = 0; i < 10; ++i, ++oracle_samples) {
      PointSpec w = random_point();
      std::optional<PointSpec> expect;
      if (nek_entry_at(m, f, w)) {
        PointSpec mid = nek_apply(m, f, w);
        if (nek_entry_at(m, h, mid)) expect = nek_apply(m, h, mid);
      }
      if (expect) {
        c.require(nek_entry_at(m, comp, w) != nullptr &&
                      nek_apply(m, comp, w) == *expect,
                  "composite misses a point the oracle maps");
      } else {
        c.require(nek_entry_at(m, comp, w) == nullptr,
                  "composite maps a point the oracle rejects");
      }
      if (!c.ok) break;
    }
  }
  return c;
}

// ------------------------------------------------------------ criterion 9

Check criterion_germs() {
  Check c;
  std::vector<DirectedGraph> graphs{DirectedGraph::bouquet("lr"), graph3()};
  std::mt19937_64 rng(kSeed);

  auto in_domain = [](const DirectedGraph &g, const PrefixMap &f,
                      const PointSpec &w) {
    return point_in_clopen(g, w, domain_clopen(g, f));
  };

  int additive = 0;
  while (additive < 500 && c.ok) {
    const DirectedGraph &g = graphs[additive % 2];
    PrefixMap f = sample_map(g, rng, 3);
    PointSpec w = sample_point(g, rng, 3);
    if (!in_domain(g, f, w)) continue;
    Germ ga = germ_at(g, f, w);
    PointSpec mid = germ_target(g, ga);
    PrefixMap h = sample_map(g, rng, 3);
    if (!in_domain(g, h, mid)) continue;
    Germ gb = germ_at(g, h, mid);
    Germ gc = germ_compose(g, ga, gb);
    c.require(germ_degree(g, gc) ==
                  germ_degree(g, ga) + germ_degree(g, gb),
              "degree is not additive");
    ++additive;
  }

  int equality = 0, agreed = 0, differed = 0;
  while (equality < 500 && c.ok) {
    const DirectedGraph &g = graphs[equality % 2];
    PrefixMap f = sample_map(g, rng, 3);
    PointSpec w = sample_point(g, rng, 3);
    if (!in_domain(g, f, w)) continue;
    PrefixMap h;
    switch (equality % 3) {
      case 0:
        h = f;
        break;
      case 1: {
        // same germ at w, different map elsewhere
        auto parts = etale_decomposition(g, f);
        std::vector<PrefixMap> kept;
        for (auto &part : parts)
          if (point_in_clopen(g, w, domain_clopen(g, part)) || rng() % 2)
            kept.push_back(part);
        h = join_disjoint(g, kept);
        break;
      }
      default:
        h = sample_map(g, rng, 3);
        if (!in_domain(g, h, w)) continue;
    }
    Germ ga = germ_at(g, f, w), gb = germ_at(g, h, w);
    int depth =
        std::max(oracle::table_depth(f), oracle::table_depth(h)) + 3;
    Path cyl = point_prefix(g, w, depth);
    bool expect = oracle::cylinder_image(g, f, cyl) ==
                  oracle::cylinder_image(g, h, cyl);
    c.require(germ_equal(g, ga, gb) == expect,
              "germ equality disagrees with the cylinder oracle");
    (expect ? agreed : differed)++;
    ++equality;
  }
  c.require(agreed > 0 && differed > 0,
            "equality samples are one-sided");

  int inverses = 0;
  while (inverses < 200 && c.ok) {
    const DirectedGraph &g = graphs[inverses % 2];
    PrefixMap f = sample_map(g, rng, 3);
    auto parts = etale_decomposition(g, f);
    if (parts.empty()) continue;
    PrefixMap s = parts[rng() % parts.size()];
    auto inv = partial_inverse(g, s);
    c.require(inv.has_value(), "single entries must be invertible");
    if (!c.ok) break;
    PointSpec w = sample_point(g, rng, 3);
    if (!in_domain(g, s, w)) continue;
    Germ ga = germ_at(g, s, w);
    PointSpec mid = germ_target(g, ga);
    Germ gb = germ_at(g, *inv, mid);
    c.require(germ_equal(g, germ_compose(g, ga, gb),
                         germ_at(g, identity_map(g), w)),
              "left composite with the inverse is not the identity germ");
    c.require(germ_equal(g, germ_compose(g, gb, ga),
                         germ_at(g, identity_map(g), mid)),
              "right composite with the inverse is not the identity germ");
    ++inverses;
  }
  return c;
}

// ----------------------------------------------------------- criterion 10

Check criterion_oracle_equivalence() {
  Check c;
  std::vector<DirectedGraph> graphs{DirectedGraph::bouquet("lr"), graph3()};
  std::mt19937_64 rng(kSeed);
  for (int rep = 0; rep < 1000 && c.ok; ++rep) {
    const DirectedGraph &g = graphs[rep % 2];
    PrefixMap f = sample_map(g, rng, 3);
    PrefixMap h = sample_map(g, rng, 3);
    c.require(oracle::compose_matches(g, f, h, compose(g, f, h)),
              "compose disagrees with cylinder evaluation");
  }
  for (int rep = 0; rep < 1000 && c.ok; ++rep) {
    const DirectedGraph &g = graphs[rep % 2];
    PrefixMap f = sample_map(g, rng, 3);
    // blow entries up into complete sibling families, then renormalize
    std::vector<PrefixMap::Entry> raw;
    for (const auto &entry : f.table) {
      if (rng() % 2) {
        raw.push_back(entry);
        continue;
      }
      for (int e : g.out_edges(path_end(g, entry.u))) {
        PrefixMap::Entry child = entry;
        child.u.edges.push_back(e);
        child.v.edges.push_back(e);
        raw.push_back(child);
      }
    }
    std::shuffle(raw.begin(), raw.end(), rng);
    PrefixMap loose{raw};  // unnormalized but prefix-free, evaluable
    PrefixMap renorm = normalize(g, raw);
    c.require(renorm == f, "normalization does not restore the canon");
    int depth = std::max(oracle::table_depth(loose),
                         oracle::table_depth(renorm)) +
                2;
    c.require(oracle::agree_on_cylinders(g, loose, renorm, depth),
              "normalize disagrees with cylinder evaluation");
  }
  return c;
}

}  // namespace

int main() {
  struct Entry {
    const char *name;
    double limit;
    Check (*run)();
  };
  const Entry entries[] = {
      {"restriction-monoid laws", 10.0, criterion_restriction_laws},
      {"presentation relations", 1.0, criterion_presentation},
      {"pair round trip", 5.0, criterion_roundtrip},
      {"topos cross-check", 60.0, criterion_topos_crosscheck},
      {"groupoidality cross-check", 60.0, criterion_groupoidality},
      {"exponential adjunction", 30.0, criterion_exponentials},
      {"sheaf collapse", 10.0, criterion_sheaf_collapse},
      {"self-similar actions", 20.0, criterion_selfsimilar},
      {"germ calculus", 20.0, criterion_germs},
      {"oracle equivalence", 20.0, criterion_oracle_equivalence},
  };
  int failures = 0;
  int index = 0;
  for (const auto &entry : entries) {
    ++index;
    auto start = std::chrono::steady_clock::now();
    Check c;
    try {
      c = entry.run();
    } catch (const std::exception &e) {
      c.fail(std::string("exception: ") + e.what());
    }
    double secs = std::chrono::duration<double>(
                      std::chrono::steady_clock::now() - start)
                      .count();
    if (secs > entry.limit)
      c.fail("exceeded the time budget of " + std::to_string(entry.limit) +
             "s");
    std::printf("%2d %-28s %s  %6.2fs (limit %.0fs)\n", index, entry.name,
                c.ok ? "PASS" : "FAIL", secs, entry.limit);
    if (!c.ok) {
      std::printf("   %s\n", c.detail.c_str());
      ++failures;
    }
  }
  return failures;
}
