#include "mpkit/matched_finite.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace mpkit {

namespace {

std::string istr(int v) { return std::to_string(v); }

std::vector<std::string> atom_names(int arity) {
  std::vector<std::string> names;
  for (int i = 0; i < arity; ++i) names.push_back("a" + istr(i + 1));
  return names;
}

// Relabels class ids to first-seen order so partitions compare as vectors.
std::vector<int> densify(const std::vector<int> &raw) {
  std::vector<int> order, out;
  for (int v : raw) {
    auto it = std::find(order.begin(), order.end(), v);
    if (it == order.end()) {
      order.push_back(v);
      out.push_back(static_cast<int>(order.size()) - 1);
    } else {
      out.push_back(static_cast<int>(it - order.begin()));
    }
  }
  return out;
}

Partition atom_partition(const BooleanAlgebra &alg) {
  std::vector<Mask> blocks;
  for (int a = 0; a < alg.arity(); ++a) blocks.push_back(alg.atom(a));
  return partition_of(alg, alg.full(), blocks);
}

}  // namespace

CheckReport FiniteMonoid::check() const {
  CheckReport rep;
  int n = size();
  if (n == 0) {
    rep.fail("empty monoid");
    return rep;
  }
  if (unit < 0 || unit >= n) rep.fail("unit out of range");
  for (const auto &row : mult) {
    if (static_cast<int>(row.size()) != n) rep.fail("mult row size mismatch");
    for (int v : row)
      if (v < 0 || v >= n) rep.fail("mult entry out of range");
  }
  if (!rep.ok()) return rep;
  for (int m = 0; m < n; ++m) {
    if (mul(unit, m) != m || mul(m, unit) != m)
      rep.fail("unit law fails at " + istr(m));
    for (int p = 0; p < n; ++p)
      for (int q = 0; q < n; ++q)
        if (mul(mul(m, p), q) != mul(m, mul(p, q)))
          rep.fail("associativity fails at (" + istr(m) + "," + istr(p) +
                   "," + istr(q) + ")");
  }
  return rep;
}

Mask MatchedPair::star(int m, Mask b) const {
  Mask out = 0;
  for (int a = 0; a < alg.arity(); ++a)
    if ((b >> act[m][a]) & 1) out |= Mask{1} << a;
  return out;
}

CheckReport check_matched_pair(const MatchedPair &p) {
  CheckReport rep;
  rep.merge(p.monoid.check());
  int n = p.monoid.size(), k = p.alg.arity();
  if (p.bset.size() != n) rep.fail("bset carrier is not the monoid");
  if (p.bset.arity() != k) rep.fail("bset arity is not the atom count");
  if (static_cast<int>(p.act.size()) != n) rep.fail("one act row per element");
  if (!rep.ok()) return rep;
  for (const auto &row : p.act) {
    if (static_cast<int>(row.size()) != k) rep.fail("act row size mismatch");
    for (int a : row)
      if (a < 0 || a >= k) rep.fail("act entry out of range");
  }
  if (!rep.ok()) return rep;
  rep.merge(p.bset.check());
  if (!rep.ok()) return rep;

  // act is a contravariant action on atoms: star is then a unital monoid
  // action by Boolean endomorphisms (meets and complements come free from
  // the preimage form, verified below anyway).
  for (int a = 0; a < k; ++a)
    if (p.act[p.monoid.unit][a] != a) rep.fail("unit does not fix atoms");
  for (int m = 0; m < n; ++m)
    for (int q = 0; q < n; ++q)
      for (int a = 0; a < k; ++a)
        if (p.act[p.monoid.mul(m, q)][a] != p.act[q][p.act[m][a]])
          rep.fail("atom action fails at (" + istr(m) + "," + istr(q) +
                   ") atom " + istr(a));
  for (int m = 0; m < n; ++m) {
    if (p.star(m, p.alg.full()) != p.alg.full()) rep.fail("m*1 != 1");
    for (Mask b = 0; b <= p.alg.full(); ++b) {
      if (p.star(m, p.alg.complement(b)) !=
          p.alg.complement(p.star(m, b)))
        rep.fail("m* does not preserve complements");
      for (Mask c = 0; c <= b; ++c)
        if (p.star(m, b & c) != (p.star(m, b) & p.star(m, c)))
          rep.fail("m* does not preserve meets");
    }
  }
  if (!rep.ok()) return rep;

  // The three compatibility axioms, quantified over atoms (enough, since
  // every ≡_b is the meet of its atom components and star preserves joins).
  for (int a = 0; a < k; ++a) {
    Mask at = p.alg.atom(a);
    for (int m = 0; m < n; ++m)
      for (int q = 0; q < n; ++q) {
        if (p.bset.equiv(at, m, q)) {
          for (int r = 0; r < n; ++r)
            if (!p.bset.equiv(at, p.monoid.mul(m, r), p.monoid.mul(q, r)))
              rep.fail("m ≡_b n but mp !≡_b np at (" + istr(m) + "," +
                       istr(q) + "," + istr(r) + ") atom " + istr(a));
          if (p.act[m][a] != p.act[q][a])
            rep.fail("m ≡_b n but b∧m*c != b∧n*c at (" + istr(m) + "," +
                     istr(q) + ") atom " + istr(a));
        }
        for (int r = 0; r < n; ++r)
          if (p.bset.equiv(at, q, r) &&
              !p.bset.equiv(p.star(m, at), p.monoid.mul(m, q),
                            p.monoid.mul(m, r)))
            rep.fail("n ≡_b p but mn !≡_{m*b} mp at (" + istr(m) + "," +
                     istr(q) + "," + istr(r) + ") atom " + istr(a));
        if (rep.failures.size() > 20) {
          rep.fail("... further checks skipped");
          return rep;
        }
      }
  }
  return rep;
}

MatchedPair trivial_pair(FiniteMonoid m) {
  int n = m.size();
  std::vector<int> cls(n);
  for (int i = 0; i < n; ++i) cls[i] = i;
  return MatchedPair{BooleanAlgebra({"a1"}), std::move(m),
                     std::vector<std::vector<int>>(n, {0}),
                     BSet(1, n, {cls})};
}

CheckReport FiniteCategory::check() const {
  CheckReport rep;
  int na = arrow_count();
  if (objects <= 0) rep.fail("empty object set");
  if (static_cast<int>(tgt.size()) != na || static_cast<int>(src.size()) != na)
    rep.fail("arrow endpoint table size mismatch");
  if (static_cast<int>(identity.size()) != objects)
    rep.fail("one identity per object required");
  if (static_cast<int>(comp.size()) != na) rep.fail("comp table size mismatch");
  if (!rep.ok()) return rep;
  for (int o = 0; o < objects; ++o) {
    int e = identity[o];
    if (e < 0 || e >= na || src[e] != o || tgt[e] != o)
      rep.fail("identity of object " + istr(o) + " is not an endo-arrow");
  }
  for (int g = 0; g < na; ++g)
    for (int f = 0; f < na; ++f) {
      int h = comp[g][f];
      bool composable = tgt[f] == src[g];
      if (composable != (h >= 0))
        rep.fail("composability mismatch at (" + istr(g) + "," + istr(f) + ")");
      if (h >= 0 && (h >= na || src[h] != src[f] || tgt[h] != tgt[g]))
        rep.fail("composite endpoints wrong at (" + istr(g) + "," + istr(f) +
                 ")");
    }
  if (!rep.ok()) return rep;
  for (int f = 0; f < na; ++f) {
    if (comp[identity[tgt[f]]][f] != f || comp[f][identity[src[f]]] != f)
      rep.fail("identity law fails at arrow " + istr(f));
    for (int g = 0; g < na; ++g) {
      if (tgt[f] != src[g]) continue;
      for (int h = 0; h < na; ++h)
        if (tgt[g] == src[h] &&
            comp[comp[h][g]][f] != comp[h][comp[g][f]])
          rep.fail("associativity fails at (" + istr(h) + "," + istr(g) + "," +
                   istr(f) + ")");
    }
  }
  return rep;
}

bool strongly_connected(const FiniteCategory &a) {
  std::vector<std::vector<bool>> reach(a.objects,
                                       std::vector<bool>(a.objects, false));
  for (int o = 0; o < a.objects; ++o) reach[o][o] = true;
  for (int f = 0; f < a.arrow_count(); ++f) reach[a.src[f]][a.tgt[f]] = true;
  for (int k = 0; k < a.objects; ++k)
    for (int i = 0; i < a.objects; ++i)
      for (int j = 0; j < a.objects; ++j)
        if (reach[i][k] && reach[k][j]) reach[i][j] = true;
  for (int i = 0; i < a.objects; ++i)
    for (int j = 0; j < a.objects; ++j)
      if (!reach[i][j]) return false;
  return true;
}

CategoryPair from_finite_category(const FiniteCategory &a) {
  if (!a.check().ok()) throw std::invalid_argument("not a category");
  int no = a.objects;
  std::vector<std::vector<int>> into(no);
  for (int f = 0; f < a.arrow_count(); ++f) into[a.tgt[f]].push_back(f);

  // Sections: one incoming arrow per object, enumerated in mixed radix.
  std::vector<std::vector<int>> sections;
  std::vector<int> cur(no, 0);
  for (;;) {
    std::vector<int> sec(no);
    for (int o = 0; o < no; ++o) sec[o] = into[o][cur[o]];
    sections.push_back(sec);
    int o = 0;
    while (o < no && ++cur[o] == static_cast<int>(into[o].size()))
      cur[o++] = 0;
    if (o == no) break;
  }
  std::map<std::vector<int>, int> idx;
  for (size_t i = 0; i < sections.size(); ++i)
    idx[sections[i]] = static_cast<int>(i);

  int n = static_cast<int>(sections.size());
  FiniteMonoid mon;
  mon.unit = idx.at(a.identity);
  mon.mult.assign(n, std::vector<int>(n));
  std::vector<std::vector<int>> act(n, std::vector<int>(no));
  for (int f = 0; f < n; ++f) {
    for (int o = 0; o < no; ++o) act[f][o] = a.src[sections[f][o]];
    for (int g = 0; g < n; ++g) {
      std::vector<int> sec(no);
      for (int o = 0; o < no; ++o)
        sec[o] = a.comp[sections[f][o]][sections[g][act[f][o]]];
      mon.mult[f][g] = idx.at(sec);
    }
  }
  std::vector<std::vector<int>> cls(no);
  for (int o = 0; o < no; ++o) {
    std::vector<int> raw(n);
    for (int f = 0; f < n; ++f) raw[f] = sections[f][o];
    cls[o] = densify(raw);
  }
  MatchedPair pair{BooleanAlgebra(atom_names(no)), std::move(mon),
                   std::move(act), BSet(no, n, std::move(cls))};
  return CategoryPair{std::move(pair), std::move(sections)};
}

FiniteBRM::FiniteBRM(MatchedPair p) : pair_(std::move(p)) {
  auto rep = check_matched_pair(pair_);
  if (!rep.ok())
    throw std::invalid_argument(rep.summary("matched pair"));
  int n = pair_.monoid.size();
  for (Mask b = 0; b <= pair_.alg.full(); ++b)
    for (int m = 0; m < n; ++m)
      if (canon(b, m) == m) elements_.push_back(BrmElement{b, m});
  unit_ = index(pair_.alg.full(), pair_.monoid.unit);
  zero_ = index(0, pair_.monoid.unit);
}

int FiniteBRM::canon(Mask b, int m) const {
  for (int q = 0; q < m; ++q)
    if (pair_.bset.equiv(b, q, m)) return q;
  return m;
}

int FiniteBRM::index(Mask b, int m) const {
  BrmElement key{b, canon(b, m)};
  auto it = std::lower_bound(elements_.begin(), elements_.end(), key);
  if (it == elements_.end() || *it != key)
    throw std::logic_error("element lookup failed");
  return static_cast<int>(it - elements_.begin());
}

int FiniteBRM::mul(int s, int t) const {
  const auto &x = elements_[s], &y = elements_[t];
  return index(x.b & pair_.star(x.m, y.b), pair_.monoid.mul(x.m, y.m));
}

int FiniteBRM::plus(int s) const {
  return index(elements_[s].b, pair_.monoid.unit);
}

bool FiniteBRM::leq(int s, int t) const { return s == mul(plus(s), t); }

std::optional<int> FiniteBRM::join(int s, int t) const {
  const auto &x = elements_[s], &y = elements_[t];
  if (x.b & y.b) return std::nullopt;
  // Glue picks a value agreeing with x.m on x.b and with y.m off it; only
  // its behaviour on x.b | y.b survives the restriction.
  return index(x.b | y.b, pair_.bset.glue(x.b, x.m, y.m));
}

int FiniteBRM::complement_idem(int e) const {
  const auto &x = elements_[e];
  if (plus(e) != e) throw std::invalid_argument("not a restriction idempotent");
  return index(pair_.alg.complement(x.b), pair_.monoid.unit);
}

std::pair<int, int> FiniteBRM::decompose_total(int s) const {
  const auto &x = elements_[s];
  int tot = index(pair_.alg.full(),
                  pair_.bset.glue(x.b, x.m, pair_.monoid.unit));
  return {plus(s), tot};
}

CheckReport check_restriction_axioms(const FiniteBRM &s) {
  CheckReport rep;
  for (int x = 0; x < s.size(); ++x) {
    if (s.mul(s.plus(x), x) != x) rep.fail("s+s != s at " + istr(x));
    for (int y = 0; y < s.size(); ++y) {
      int px = s.plus(x), py = s.plus(y);
      if (s.mul(px, py) != s.mul(py, px))
        rep.fail("idempotents do not commute at (" + istr(x) + "," + istr(y) +
                 ")");
      if (s.plus(s.mul(px, y)) != s.mul(px, s.plus(y)))
        rep.fail("(s+t)+ != s+t+ at (" + istr(x) + "," + istr(y) + ")");
      if (s.mul(x, py) != s.mul(s.plus(s.mul(x, y)), x))
        rep.fail("st+ != (st)+s at (" + istr(x) + "," + istr(y) + ")");
      if (s.plus(s.mul(x, py)) != s.plus(s.mul(x, y)))
        rep.fail("(st+)+ != (st)+ at (" + istr(x) + "," + istr(y) + ")");
      if (rep.failures.size() > 20) {
        rep.fail("... further checks skipped");
        return rep;
      }
    }
  }
  return rep;
}

CheckReport check_brm_axioms(const FiniteBRM &s) {
  CheckReport rep = check_restriction_axioms(s);
  if (!rep.ok()) return rep;
  int zero = s.zero(), unit = s.unit();
  if (s.plus(zero) != zero) rep.fail("0+ != 0");
  for (int x = 0; x < s.size(); ++x)
    if (s.mul(zero, x) != zero || s.mul(x, zero) != zero)
      rep.fail("0 is not absorbing at " + istr(x));

  std::vector<int> idems;
  for (int x = 0; x < s.size(); ++x)
    if (s.is_idempotent(x)) idems.push_back(x);
  for (int e : idems) {
    int c = s.complement_idem(e);
    if (s.mul(e, c) != zero) rep.fail("e ∧ e' != 0 at " + istr(e));
    auto j = s.join(e, c);
    if (!j || *j != unit) rep.fail("e ∨ e' != 1 at " + istr(e));
  }

  for (int x = 0; x < s.size(); ++x)
    for (int y = 0; y < s.size(); ++y) {
      if (s.mul(s.plus(x), s.plus(y)) != zero) continue;
      auto j = s.join(x, y);
      if (!j) {
        rep.fail("missing disjoint join at (" + istr(x) + "," + istr(y) + ")");
        continue;
      }
      if (!s.leq(x, *j) || !s.leq(y, *j))
        rep.fail("join is not an upper bound at (" + istr(x) + "," + istr(y) +
                 ")");
      for (int u = 0; u < s.size(); ++u)
        if (s.leq(x, u) && s.leq(y, u) && !s.leq(*j, u))
          rep.fail("join is not least at (" + istr(x) + "," + istr(y) + ")");
      if (s.plus(*j) != s.join(s.plus(x), s.plus(y)).value_or(-1))
        rep.fail("(s∨t)+ != s+∨t+ at (" + istr(x) + "," + istr(y) + ")");
      for (int u = 0; u < s.size(); ++u) {
        auto l = s.join(s.mul(u, x), s.mul(u, y));
        if (!l || *l != s.mul(u, *j))
          rep.fail("u(s∨t) != us∨ut at (" + istr(u) + "," + istr(x) + "," +
                   istr(y) + ")");
        auto r = s.join(s.mul(x, u), s.mul(y, u));
        if (!r || *r != s.mul(*j, u))
          rep.fail("(s∨t)u != su∨tu at (" + istr(u) + "," + istr(x) + "," +
                   istr(y) + ")");
      }
      if (rep.failures.size() > 20) {
        rep.fail("... further checks skipped");
        return rep;
      }
    }
  return rep;
}

DownarrowResult brm_downarrow(const FiniteBRM &s) {
  DownarrowResult out;
  auto &rep = out.report;
  int zero = s.zero(), unit = s.unit();

  std::vector<int> idems;
  for (int x = 0; x < s.size(); ++x)
    if (s.is_idempotent(x)) idems.push_back(x);
  auto below = [&](int e, int f) { return s.mul(e, f) == e; };
  for (int e : idems) {
    if (e == zero) continue;
    bool minimal = true;
    for (int f : idems)
      if (f != zero && f != e && below(f, e)) minimal = false;
    if (minimal) out.atom_elem.push_back(e);
  }
  int k = static_cast<int>(out.atom_elem.size());
  if ((size_t{1} << k) != idems.size())
    rep.fail("idempotents are not the powerset of their atoms");

  for (int x = 0; x < s.size(); ++x)
    if (s.is_total(x)) out.tot_elem.push_back(x);
  int n = static_cast<int>(out.tot_elem.size());
  std::vector<int> tot_pos(s.size(), -1);
  for (int i = 0; i < n; ++i) tot_pos[out.tot_elem[i]] = i;

  FiniteMonoid mon;
  mon.unit = tot_pos[unit];
  mon.mult.assign(n, std::vector<int>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      int v = tot_pos[s.mul(out.tot_elem[i], out.tot_elem[j])];
      if (v < 0) rep.fail("product of totals is not total");
      mon.mult[i][j] = std::max(v, 0);
    }

  // m*e = (me)+; on atoms the preimage function is read off from which
  // atom's star contains each atom.
  std::vector<std::vector<int>> act(n, std::vector<int>(k, 0));
  for (int i = 0; i < n; ++i)
    for (int a = 0; a < k; ++a) {
      int hits = 0;
      for (int a2 = 0; a2 < k; ++a2) {
        int st = s.plus(s.mul(out.tot_elem[i], out.atom_elem[a2]));
        if (below(out.atom_elem[a], st)) {
          act[i][a] = a2;
          ++hits;
        }
      }
      if (hits != 1)
        rep.fail("star of element " + istr(i) + " is not an atom preimage");
    }

  std::vector<std::vector<int>> cls(std::max(k, 1));
  for (int a = 0; a < k; ++a) {
    std::vector<int> raw(n);
    for (int i = 0; i < n; ++i)
      raw[i] = s.mul(out.atom_elem[a], out.tot_elem[i]);
    cls[a] = densify(raw);
  }
  if (k == 0 || n == 0) {
    rep.fail("degenerate recovery");
    out.pair = trivial_pair(FiniteMonoid{0, {{0}}});
    return out;
  }
  out.pair = MatchedPair{BooleanAlgebra(atom_names(k)), std::move(mon),
                         std::move(act), BSet(k, n, std::move(cls))};
  rep.merge(check_matched_pair(out.pair));
  return out;
}

CheckReport roundtrip_check(const MatchedPair &p) {
  CheckReport rep = check_matched_pair(p);
  if (!rep.ok()) return rep;
  FiniteBRM s(p);
  DownarrowResult d = brm_downarrow(s);
  rep.merge(d.report);
  if (!rep.ok()) return rep;

  int k = p.alg.arity(), n = p.monoid.size();
  const auto &q = d.pair;
  if (q.alg.arity() != k || q.monoid.size() != n) {
    rep.fail("recovered pair has different size");
    return rep;
  }
  // b ↦ 1|_b on atoms, m ↦ m|_1 on elements.
  std::vector<int> phi(k, -1), f(n, -1);
  for (int a = 0; a < k; ++a) {
    int e = s.index(p.alg.atom(a), p.monoid.unit);
    for (int j = 0; j < k; ++j)
      if (d.atom_elem[j] == e) phi[a] = j;
    if (phi[a] < 0) rep.fail("atom " + istr(a) + " not hit by 1|_b");
  }
  for (int m = 0; m < n; ++m) {
    int e = s.index(p.alg.full(), m);
    for (int j = 0; j < n; ++j)
      if (d.tot_elem[j] == e) f[m] = j;
    if (f[m] < 0) rep.fail("element " + istr(m) + " not hit by m|_1");
  }
  if (!rep.ok()) return rep;
  // Injectivity makes both maps bijections (equal finite sizes).
  for (int a = 0; a < k; ++a)
    for (int a2 = a + 1; a2 < k; ++a2)
      if (phi[a] == phi[a2]) rep.fail("atom map not injective");
  for (int m = 0; m < n; ++m)
    for (int m2 = m + 1; m2 < n; ++m2)
      if (f[m] == f[m2]) rep.fail("monoid map not injective");

  if (f[p.monoid.unit] != q.monoid.unit) rep.fail("unit not preserved");
  for (int m = 0; m < n; ++m)
    for (int m2 = 0; m2 < n; ++m2)
      if (f[p.monoid.mul(m, m2)] != q.monoid.mul(f[m], f[m2]))
        rep.fail("product not preserved at (" + istr(m) + "," + istr(m2) +
                 ")");
  for (int m = 0; m < n; ++m)
    for (int a = 0; a < k; ++a)
      if (q.act[f[m]][phi[a]] != phi[p.act[m][a]])
        rep.fail("atom action not preserved at (" + istr(m) + "," + istr(a) +
                 ")");
  for (int a = 0; a < k; ++a)
    for (int m = 0; m < n; ++m)
      for (int m2 = 0; m2 < n; ++m2)
        if (p.bset.equiv(p.alg.atom(a), m, m2) !=
            q.bset.equiv(q.alg.atom(phi[a]), f[m], f[m2]))
          rep.fail("glueing not preserved at atom " + istr(a) + " (" +
                   istr(m) + "," + istr(m2) + ")");
  return rep;
}

Mask hom_mask(const PairHom &h, const MatchedPair &tgt, Mask b) {
  Mask out = 0;
  for (int a = 0; a < tgt.alg.arity(); ++a)
    if ((b >> h.atom_map[a]) & 1) out |= tgt.alg.atom(a);
  return out;
}

CheckReport check_pair_hom(const MatchedPair &src, const MatchedPair &tgt,
                           const PairHom &h) {
  CheckReport rep;
  int ks = src.alg.arity(), kt = tgt.alg.arity();
  int ns = src.monoid.size();
  if (static_cast<int>(h.atom_map.size()) != kt)
    rep.fail("one source atom per target atom required");
  if (static_cast<int>(h.monoid_map.size()) != ns)
    rep.fail("one target element per source element required");
  if (!rep.ok()) return rep;
  for (int a : h.atom_map)
    if (a < 0 || a >= ks) rep.fail("atom map out of range");
  for (int m : h.monoid_map)
    if (m < 0 || m >= tgt.monoid.size()) rep.fail("monoid map out of range");
  if (!rep.ok()) return rep;

  if (h.monoid_map[src.monoid.unit] != tgt.monoid.unit)
    rep.fail("monoid map does not preserve the unit");
  for (int m = 0; m < ns; ++m)
    for (int n = 0; n < ns; ++n)
      if (h.monoid_map[src.monoid.mul(m, n)] !=
          tgt.monoid.mul(h.monoid_map[m], h.monoid_map[n]))
        rep.fail("monoid map not multiplicative at (" + istr(m) + "," +
                 istr(n) + ")");

  // m ≡_b n ⟹ f(m) ≡_{φ(b)} f(n), atom by atom.
  for (int a = 0; a < ks; ++a)
    for (int m = 0; m < ns; ++m)
      for (int n = 0; n < ns; ++n)
        if (src.bset.equiv(src.alg.atom(a), m, n) &&
            !tgt.bset.equiv(hom_mask(h, tgt, src.alg.atom(a)),
                            h.monoid_map[m], h.monoid_map[n]))
          rep.fail("glueing condition fails at atom " + istr(a) + " (" +
                   istr(m) + "," + istr(n) + ")");
  // f(m)*(φ(b)) = φ(m*b), checked on target atoms.
  for (int d = 0; d < kt; ++d)
    for (int m = 0; m < ns; ++m)
      if (h.atom_map[tgt.act[h.monoid_map[m]][d]] !=
          src.act[m][h.atom_map[d]])
        rep.fail("star condition fails at target atom " + istr(d) +
                 " element " + istr(m));
  return rep;
}

ExtendResult extend_hom(const PairHom &h, const FiniteBRM &s,
                        const FiniteBRM &t) {
  ExtendResult out;
  out.report = check_pair_hom(s.pair(), t.pair(), h);
  if (!out.report.ok()) return out;
  const auto &sp = s.pair();
  const auto &tp = t.pair();
  out.map.resize(s.size());
  for (int i = 0; i < s.size(); ++i) {
    const auto &e = s.element(i);
    int sh = sp.bset.glue(e.b, e.m, sp.monoid.unit);  // š as a total element
    int idem = t.index(hom_mask(h, tp, e.b), tp.monoid.unit);
    int tot = t.index(tp.alg.full(), h.monoid_map[sh]);
    out.map[i] = t.mul(idem, tot);
  }
  auto &rep = out.report;
  if (out.map[s.unit()] != t.unit()) rep.fail("unit not preserved");
  if (out.map[s.zero()] != t.zero()) rep.fail("zero not preserved");
  for (int x = 0; x < s.size(); ++x) {
    if (out.map[s.plus(x)] != t.plus(out.map[x]))
      rep.fail("restriction not preserved at " + istr(x));
    for (int y = 0; y < s.size(); ++y) {
      if (out.map[s.mul(x, y)] != t.mul(out.map[x], out.map[y]))
        rep.fail("product not preserved at (" + istr(x) + "," + istr(y) + ")");
      auto j = s.join(x, y);
      if (j) {
        auto tj = t.join(out.map[x], out.map[y]);
        if (!tj || out.map[*j] != *tj)
          rep.fail("disjoint join not preserved at (" + istr(x) + "," +
                   istr(y) + ")");
      }
    }
  }
  return out;
}

CofunctorResult classifying_cofunctor(const MatchedPair &src,
                                      const MatchedPair &tgt,
                                      const PairHom &h) {
  CofunctorResult out;
  out.report = check_pair_hom(src, tgt, h);
  if (!out.report.ok()) return out;
  out.object_map = h.atom_map;
  auto &rep = out.report;
  int kt = tgt.alg.arity(), ns = src.monoid.size();
  for (int d = 0; d < kt; ++d) {
    Mask at = tgt.alg.atom(d);
    // Lifting the identity gives the identity germ.
    if (!tgt.bset.equiv(at, h.monoid_map[src.monoid.unit], tgt.monoid.unit))
      rep.fail("identity lift fails at atom " + istr(d));
    for (int m = 0; m < ns; ++m) {
      // Lift target: the source arrow at object_map[d] must land where the
      // lifted arrow's target pulls back to.
      if (src.act[m][out.object_map[d]] !=
          out.object_map[tgt.act[h.monoid_map[m]][d]])
        rep.fail("lift target fails at atom " + istr(d) + " element " +
                 istr(m));
      for (int n = 0; n < ns; ++n)
        if (!tgt.bset.equiv(at, h.monoid_map[src.monoid.mul(m, n)],
                            tgt.monoid.mul(h.monoid_map[m], h.monoid_map[n])))
          rep.fail("lift composition fails at atom " + istr(d) + " (" +
                   istr(m) + "," + istr(n) + ")");
    }
  }
  return out;
}

CheckReport check_bjm(const MatchedPair &p, const BJMSet &x) {
  CheckReport rep;
  int n = p.monoid.size(), k = p.alg.arity(), sz = x.size();
  if (x.bset.arity() != k) rep.fail("bset arity mismatch");
  if (static_cast<int>(x.maction.size()) != n)
    rep.fail("one action row per monoid element required");
  if (!rep.ok()) return rep;
  for (const auto &row : x.maction) {
    if (static_cast<int>(row.size()) != sz) rep.fail("action row size");
    for (int v : row)
      if (v < 0 || v >= sz) rep.fail("action value out of range");
  }
  if (!rep.ok()) return rep;
  rep.merge(x.bset.check());
  if (!rep.ok()) return rep;
  for (int e = 0; e < sz; ++e)
    if (x.act(p.monoid.unit, e) != e) rep.fail("unit does not act trivially");
  for (int m = 0; m < n; ++m)
    for (int q = 0; q < n; ++q)
      for (int e = 0; e < sz; ++e)
        if (x.act(p.monoid.mul(m, q), e) != x.act(m, x.act(q, e)))
          rep.fail("action associativity fails at (" + istr(m) + "," +
                   istr(q) + "," + istr(e) + ")");
  for (int a = 0; a < k; ++a) {
    Mask at = p.alg.atom(a);
    for (int m = 0; m < n; ++m) {
      for (int e = 0; e < sz; ++e)
        for (int e2 = 0; e2 < sz; ++e2)
          if (x.bset.equiv(at, e, e2) &&
              !x.bset.equiv(p.star(m, at), x.act(m, e), x.act(m, e2)))
            rep.fail("x ≡_b y but m·x !≡_{m*b} m·y at atom " + istr(a));
      for (int q = 0; q < n; ++q)
        if (p.bset.equiv(at, m, q))
          for (int e = 0; e < sz; ++e)
            if (!x.bset.equiv(at, x.act(m, e), x.act(q, e)))
              rep.fail("m ≡_b n but m·x !≡_b n·x at atom " + istr(a));
    }
    if (rep.failures.size() > 20) {
      rep.fail("... further checks skipped");
      return rep;
    }
  }
  return rep;
}

BJMSet regular_bjm(const MatchedPair &p) {
  return BJMSet{p.bset, p.monoid.mult};
}

BJMSet singleton_bjm(const MatchedPair &p) {
  int k = p.alg.arity();
  return BJMSet{BSet(k, 1, std::vector<std::vector<int>>(k, {0})),
                std::vector<std::vector<int>>(p.monoid.size(), {0})};
}

BJMSet algebra_bjm(const MatchedPair &p) {
  int k = p.alg.arity();
  int sz = static_cast<int>(p.alg.full()) + 1;
  std::vector<std::vector<int>> cls(k, std::vector<int>(sz));
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < sz; ++b) cls[a][b] = (b >> a) & 1;
  std::vector<std::vector<int>> maction(p.monoid.size(),
                                        std::vector<int>(sz));
  for (int m = 0; m < p.monoid.size(); ++m)
    for (int b = 0; b < sz; ++b)
      maction[m][b] = static_cast<int>(p.star(m, static_cast<Mask>(b)));
  return BJMSet{BSet(k, sz, std::move(cls)), std::move(maction)};
}

Mask m_equiv(const MatchedPair &p, int m, int x, int y, const BSet &xs) {
  return p.star(m, xs.agreement(x, y));
}

int FreeBJM::index(int m, const std::vector<int> &omega) const {
  int code = 0;
  for (int a = arity - 1; a >= 0; --a) code = code * gsize + omega[a];
  int pw = 1;
  for (int a = 0; a < arity; ++a) pw *= gsize;
  return m * pw + code;
}

std::pair<int, std::vector<int>> FreeBJM::decode(int idx) const {
  int pw = 1;
  for (int a = 0; a < arity; ++a) pw *= gsize;
  std::vector<int> omega(arity);
  int code = idx % pw;
  for (int a = 0; a < arity; ++a) {
    omega[a] = code % gsize;
    code /= gsize;
  }
  return {idx / pw, omega};
}

int FreeBJM::unit_map(int g) const {
  return index(munit, std::vector<int>(arity, g));
}

FreeBJM free_bjm(const MatchedPair &p, int gsize) {
  if (gsize <= 0) throw std::invalid_argument("empty generating set");
  FreeBJM out;
  out.gsize = gsize;
  out.arity = p.alg.arity();
  int n = p.monoid.size(), k = out.arity;
  int pw = 1;
  for (int a = 0; a < k; ++a) pw *= gsize;
  int sz = n * pw;
  std::vector<std::vector<int>> cls(k, std::vector<int>(sz));
  std::vector<std::vector<int>> maction(n, std::vector<int>(sz));
  for (int idx = 0; idx < sz; ++idx) {
    auto [m, omega] = out.decode(idx);
    for (int a = 0; a < k; ++a)
      cls[a][idx] = p.bset.atom_class(a, m) * gsize + omega[a];
    for (int q = 0; q < n; ++q) {
      std::vector<int> moved(k);
      for (int a = 0; a < k; ++a) moved[a] = omega[p.act[q][a]];
      maction[q][idx] = out.index(p.monoid.mul(q, m), moved);
    }
  }
  out.set = BJMSet{BSet(k, sz, std::move(cls)), std::move(maction)};
  out.munit = p.monoid.unit;
  return out;
}

std::vector<int> free_extend(const MatchedPair &p, const FreeBJM &f,
                             const BJMSet &y, const std::vector<int> &h) {
  auto blocks = atom_partition(p.alg);
  std::vector<int> out(f.set.size());
  for (int idx = 0; idx < f.set.size(); ++idx) {
    auto [m, omega] = f.decode(idx);
    std::vector<int> pieces(f.arity);
    for (int a = 0; a < f.arity; ++a) pieces[a] = y.act(m, h[omega[a]]);
    out[idx] = y.bset.patch(blocks, pieces);
  }
  return out;
}

int TensorResult::code(const std::vector<int> &omega) const {
  int c = 0;
  for (int a = arity - 1; a >= 0; --a) c = c * xsize + omega[a];
  return c;
}

std::vector<int> TensorResult::decode_omega(int c) const {
  std::vector<int> omega(arity);
  for (int a = 0; a < arity; ++a) {
    omega[a] = c % xsize;
    c /= xsize;
  }
  return omega;
}

TensorResult tensor(const MatchedPair &p, const BSet &x) {
  TensorResult out;
  out.arity = p.alg.arity();
  out.xsize = x.size();
  int n = p.monoid.size(), k = out.arity;
  int pw = 1;
  for (int a = 0; a < k; ++a) pw *= out.xsize;

  // (m, ω) ~ (m, γ) when ω and γ agree at every atom a up to glueing at
  // the image atom act[m][a].
  auto related = [&](int m, const std::vector<int> &om,
                     const std::vector<int> &ga) {
    for (int a = 0; a < k; ++a)
      if (!x.equiv(p.alg.atom(p.act[m][a]), om[a], ga[a])) return false;
    return true;
  };
  out.cls.assign(n, std::vector<int>(pw, -1));
  for (int m = 0; m < n; ++m)
    for (int c = 0; c < pw; ++c) {
      auto omega = out.decode_omega(c);
      for (size_t r = 0; r < out.reps.size(); ++r)
        if (out.reps[r].first == m && related(m, out.reps[r].second, omega)) {
          out.cls[m][c] = static_cast<int>(r);
          break;
        }
      if (out.cls[m][c] < 0) {
        out.cls[m][c] = static_cast<int>(out.reps.size());
        out.reps.emplace_back(m, omega);
      }
    }

  int sz = static_cast<int>(out.reps.size());
  std::vector<std::vector<int>> cls(k, std::vector<int>(sz));
  for (int a = 0; a < k; ++a) {
    // Classes under the quotient glueing at atom a: same monoid class and
    // glue-equal distribution value at a (at the common image atom).
    std::vector<int> raw(sz, -1);
    std::vector<int> firsts;
    for (int i = 0; i < sz; ++i) {
      int m = out.reps[i].first;
      const auto &omega = out.reps[i].second;
      for (int j : firsts) {
        int m2 = out.reps[j].first;
        const auto &gamma = out.reps[j].second;
        if (p.bset.equiv(p.alg.atom(a), m, m2) &&
            x.equiv(p.alg.atom(p.act[m][a]), omega[a], gamma[a])) {
          raw[i] = raw[j];
          break;
        }
      }
      if (raw[i] < 0) {
        raw[i] = static_cast<int>(firsts.size());
        firsts.push_back(i);
      }
    }
    cls[a] = raw;
  }

  std::vector<std::vector<int>> maction(n, std::vector<int>(sz));
  for (int q = 0; q < n; ++q)
    for (int i = 0; i < sz; ++i) {
      int m = out.reps[i].first;
      const auto &omega = out.reps[i].second;
      std::vector<int> moved(k);
      for (int a = 0; a < k; ++a) moved[a] = omega[p.act[q][a]];
      maction[q][i] = out.cls[p.monoid.mul(q, m)][out.code(moved)];
    }

  out.unit_map.resize(out.xsize);
  for (int e = 0; e < out.xsize; ++e)
    out.unit_map[e] =
        out.cls[p.monoid.unit][out.code(std::vector<int>(k, e))];
  out.set = BJMSet{BSet(k, sz, std::move(cls)), std::move(maction)};
  return out;
}

ThetaResult theta(const MatchedPair &p, const BJMSet &x) {
  ThetaResult out;
  out.tensor = tensor(p, x.bset);
  auto blocks = atom_partition(p.alg);
  int k = p.alg.arity();
  out.image.resize(out.tensor.reps.size());
  for (size_t i = 0; i < out.tensor.reps.size(); ++i) {
    int m = out.tensor.reps[i].first;
    const auto &omega = out.tensor.reps[i].second;
    std::vector<int> pieces(k);
    for (int a = 0; a < k; ++a) pieces[a] = x.act(m, omega[a]);
    out.image[i] = {m, x.bset.patch(blocks, pieces)};
  }
  out.injective = true;
  std::map<std::pair<int, int>, int> seen;
  for (size_t i = 0; i < out.image.size(); ++i)
    if (!seen.emplace(out.image[i], static_cast<int>(i)).second)
      out.injective = false;
  out.surjective =
      seen.size() == static_cast<size_t>(p.monoid.size()) * x.size();
  return out;
}

ToposVerdict is_topos(const MatchedPair &p) {
  ToposVerdict out;
  int k = p.alg.arity(), n = p.monoid.size();
  out.witness.assign(k, -1);
  for (int a = 0; a < k; ++a)
    for (int m = 0; m < n && out.witness[a] < 0; ++m)
      if (p.star(m, p.alg.atom(a)) == p.alg.full()) out.witness[a] = m;
  out.topos = std::find(out.witness.begin(), out.witness.end(), -1) ==
              out.witness.end();

  // Independent verdict: proper invariant down-sets (star(m,u) ≤ u for all
  // m) exist exactly when the criterion fails.
  bool proper_invariant = false;
  for (Mask u = 1; u < p.alg.full(); ++u) {
    bool inv = true;
    for (int m = 0; m < n && inv; ++m)
      if (p.star(m, u) & ~u) inv = false;
    if (inv) proper_invariant = true;
  }
  if (out.topos == proper_invariant)
    throw std::logic_error("invariant-set verdict disagrees");
  return out;
}

GroupoidalVerdict is_groupoidal(const MatchedPair &p) {
  GroupoidalVerdict out;
  int n = p.monoid.size();
  out.witnesses.resize(n);
  out.groupoidal = true;
  auto maxfix = [&](int m) { return p.bset.agreement(m, p.monoid.unit); };
  for (int m = 0; m < n; ++m) {
    Mask covered = 0;
    for (int q = 0; q < n; ++q) {
      Mask c = maxfix(p.monoid.mul(q, m));
      Mask contrib = maxfix(p.monoid.mul(m, q)) & p.star(m, c);
      Mask fresh = contrib & ~covered;
      if (fresh) {
        out.witnesses[m].push_back(GroupoidalWitness{fresh, q, c});
        covered |= fresh;
      }
    }
    if (covered != p.alg.full()) {
      out.groupoidal = false;
      if (out.bad_m < 0) out.bad_m = m;
    }
  }
  return out;
}

BJMSet product_bjm(const MatchedPair &p, const BJMSet &x, const BJMSet &y) {
  int k = p.alg.arity(), nx = x.size(), ny = y.size();
  int sz = nx * ny;
  std::vector<std::vector<int>> cls(k, std::vector<int>(sz));
  std::vector<std::vector<int>> maction(p.monoid.size(),
                                        std::vector<int>(sz));
  for (int u = 0; u < nx; ++u)
    for (int v = 0; v < ny; ++v) {
      int idx = u * ny + v;
      for (int a = 0; a < k; ++a)
        cls[a][idx] =
            x.bset.atom_class(a, u) * y.bset.class_count(a) +
            y.bset.atom_class(a, v);
      for (int m = 0; m < p.monoid.size(); ++m)
        maction[m][idx] = x.act(m, u) * ny + y.act(m, v);
    }
  return BJMSet{BSet(k, sz, std::move(cls)), std::move(maction)};
}

std::vector<std::vector<int>> bjm_homs(const MatchedPair &p, const BJMSet &x,
                                       const BJMSet &y) {
  int nx = x.size(), n = p.monoid.size(), k = p.alg.arity();
  std::vector<std::vector<int>> out;
  std::vector<int> f(nx, -1);
  auto consistent = [&](int i) {
    for (int j = 0; j <= i; ++j) {
      if (f[j] < 0) continue;
      for (int a = 0; a < k; ++a)
        if (x.bset.equiv(p.alg.atom(a), i, j) &&
            !y.bset.equiv(p.alg.atom(a), f[i], f[j]))
          return false;
      for (int m = 0; m < n; ++m) {
        int t = x.act(m, j);
        if (t <= i && f[t] >= 0 && f[t] != y.act(m, f[j])) return false;
      }
    }
    return true;
  };
  auto rec = [&](auto &&self, int i) -> void {
    if (i == nx) {
      out.push_back(f);
      return;
    }
    for (int v = 0; v < y.size(); ++v) {
      f[i] = v;
      if (consistent(i)) self(self, i + 1);
    }
    f[i] = -1;
  };
  rec(rec, 0);
  return out;
}

int Exponential::hom_index(const std::vector<int> &table) const {
  auto it = std::find(homs.begin(), homs.end(), table);
  if (it == homs.end()) throw std::logic_error("not an exponential element");
  return static_cast<int>(it - homs.begin());
}

Exponential exponential(const MatchedPair &p, const BJMSet &y,
                        const BJMSet &z) {
  Exponential out;
  out.ysize = y.size();
  out.unit = p.monoid.unit;
  BJMSet my = product_bjm(p, regular_bjm(p), y);
  out.homs = bjm_homs(p, my, z);
  int sz = static_cast<int>(out.homs.size());
  int k = p.alg.arity(), n = p.monoid.size();
  if (sz == 0) throw std::logic_error("no homomorphisms into the exponential");

  // f ≡_a g when f(n,y) and g(n,y) glue over n*{a} for all arguments.
  std::vector<std::vector<int>> cls(k, std::vector<int>(sz, -1));
  for (int a = 0; a < k; ++a) {
    std::vector<int> firsts;
    for (int i = 0; i < sz; ++i) {
      for (int j : firsts) {
        bool eq = true;
        for (int m = 0; m < n && eq; ++m) {
          Mask b = p.star(m, p.alg.atom(a));
          for (int v = 0; v < out.ysize && eq; ++v)
            eq = z.bset.equiv(b, out.homs[i][m * out.ysize + v],
                              out.homs[j][m * out.ysize + v]);
        }
        if (eq) {
          cls[a][i] = cls[a][j];
          break;
        }
      }
      if (cls[a][i] < 0) {
        cls[a][i] = static_cast<int>(firsts.size());
        firsts.push_back(i);
      }
    }
  }

  std::map<std::vector<int>, int> idx;
  for (int i = 0; i < sz; ++i) idx[out.homs[i]] = i;
  std::vector<std::vector<int>> maction(n, std::vector<int>(sz));
  for (int m = 0; m < n; ++m)
    for (int i = 0; i < sz; ++i) {
      std::vector<int> t(n * out.ysize);
      for (int q = 0; q < n; ++q)
        for (int v = 0; v < out.ysize; ++v)
          t[q * out.ysize + v] =
              out.homs[i][p.monoid.mul(q, m) * out.ysize + v];
      auto it = idx.find(t);
      if (it == idx.end())
        throw std::logic_error("exponential action leaves the carrier");
      maction[m][i] = it->second;
    }
  out.set = BJMSet{BSet(k, sz, std::move(cls)), std::move(maction)};
  return out;
}

std::vector<int> transpose(const MatchedPair &p, const Exponential &e,
                           const BJMSet &x, const std::vector<int> &f) {
  int n = p.monoid.size();
  std::vector<int> out(x.size());
  for (int u = 0; u < x.size(); ++u) {
    std::vector<int> t(n * e.ysize);
    for (int m = 0; m < n; ++m)
      for (int v = 0; v < e.ysize; ++v)
        t[m * e.ysize + v] = f[x.act(m, u) * e.ysize + v];
    out[u] = e.hom_index(t);
  }
  return out;
}

ConjExponential exponential_conjugation(const MatchedPair &p, const BJMSet &y,
                                        const BJMSet &z,
                                        const GroupoidalVerdict &w) {
  if (!w.groupoidal)
    throw std::invalid_argument("pair is not groupoidal");
  ConjExponential out;
  int k = p.alg.arity(), n = p.monoid.size(), ny = y.size();

  // Carrier: maps preserving the glueing structure only.
  std::vector<int> f(ny, -1);
  auto consistent = [&](int i) {
    for (int j = 0; j < i; ++j)
      for (int a = 0; a < k; ++a)
        if (y.bset.equiv(p.alg.atom(a), i, j) &&
            !z.bset.equiv(p.alg.atom(a), f[i], f[j]))
          return false;
    return true;
  };
  auto rec = [&](auto &&self, int i) -> void {
    if (i == ny) {
      out.homs.push_back(f);
      return;
    }
    for (int v = 0; v < z.size(); ++v) {
      f[i] = v;
      if (consistent(i)) self(self, i + 1);
    }
    f[i] = -1;
  };
  rec(rec, 0);
  int sz = static_cast<int>(out.homs.size());

  std::vector<std::vector<int>> cls(k, std::vector<int>(sz));
  for (int a = 0; a < k; ++a) {
    std::vector<int> firsts;
    std::vector<int> raw(sz, -1);
    for (int i = 0; i < sz; ++i) {
      for (int j : firsts) {
        bool eq = true;
        for (int v = 0; v < ny && eq; ++v)
          eq = z.bset.equiv(p.alg.atom(a), out.homs[i][v], out.homs[j][v]);
        if (eq) {
          raw[i] = raw[j];
          break;
        }
      }
      if (raw[i] < 0) {
        raw[i] = static_cast<int>(firsts.size());
        firsts.push_back(i);
      }
    }
    cls[a] = raw;
  }

  // (m·f)(v) glued blockwise from m·f(nᵢ·v) over the witness partition.
  std::vector<std::vector<int>> maction(n, std::vector<int>(sz));
  for (int m = 0; m < n; ++m) {
    std::vector<Mask> blocks;
    for (const auto &wit : w.witnesses[m]) blocks.push_back(wit.b);
    auto part = partition_of(p.alg, p.alg.full(), blocks);
    for (int i = 0; i < sz; ++i) {
      std::vector<int> t(ny);
      for (int v = 0; v < ny; ++v) {
        std::vector<int> pieces;
        for (const auto &wit : w.witnesses[m])
          pieces.push_back(z.act(m, out.homs[i][y.act(wit.n, v)]));
        t[v] = z.bset.patch(part, pieces);
      }
      auto it = std::find(out.homs.begin(), out.homs.end(), t);
      if (it == out.homs.end())
        throw std::logic_error("conjugation action leaves the carrier");
      maction[m][i] = static_cast<int>(it - out.homs.begin());
    }
  }
  out.set = BJMSet{BSet(k, sz, std::move(cls)), std::move(maction)};
  return out;
}

BJMSheaf sheafify(const MatchedPair &p, const BJMSet &x) {
  BJMSheaf out;
  out.arity = p.alg.arity();
  out.msize = p.monoid.size();
  Mask full = p.alg.full();
  int nb = static_cast<int>(full) + 1;
  out.sizes.assign(nb, 0);

  // Quotient by ≡_b, class ids in first-seen order (so the quotient at 1
  // is the identity relabelling).
  std::vector<std::vector<int>> quot(nb);
  std::vector<std::vector<int>> rep(nb);
  for (Mask b = 1; b <= full; ++b) {
    std::vector<int> q(x.size(), -1);
    for (int e = 0; e < x.size(); ++e) {
      for (int r : rep[b])
        if (x.bset.equiv(b, e, r)) {
          q[e] = q[r];
          break;
        }
      if (q[e] < 0) {
        q[e] = static_cast<int>(rep[b].size());
        rep[b].push_back(e);
      }
    }
    quot[b] = q;
    out.sizes[b] = static_cast<int>(rep[b].size());
  }

  out.meet.assign(nb, std::vector<std::vector<int>>(nb));
  for (Mask b = 1; b <= full; ++b)
    for (Mask c = 1; c <= full; ++c) {
      if (!(b & c)) continue;
      auto &tab = out.meet[b][c];
      tab.resize(out.sizes[c]);
      for (int i = 0; i < out.sizes[c]; ++i) tab[i] = quot[b & c][rep[c][i]];
    }
  out.star.assign(out.msize, std::vector<Mask>(nb, 0));
  out.action.assign(out.msize, std::vector<std::vector<int>>(nb));
  for (int m = 0; m < out.msize; ++m)
    for (Mask c = 1; c <= full; ++c) {
      Mask s = p.star(m, c);
      out.star[m][c] = s;
      if (!s) continue;
      auto &tab = out.action[m][c];
      tab.resize(out.sizes[c]);
      for (int i = 0; i < out.sizes[c]; ++i)
        tab[i] = quot[s][x.act(m, rep[c][i])];
    }
  return out;
}

CheckReport check_sheaf(const MatchedPair &p, const BJMSheaf &y) {
  CheckReport rep;
  Mask full = p.alg.full();
  int n = p.monoid.size();
  if (y.arity != p.alg.arity() || y.msize != n) {
    rep.fail("sheaf shape mismatch");
    return rep;
  }
  auto meet_ok = [&](Mask b, Mask c) {
    return (b & c) &&
           static_cast<int>(y.meet[b][c].size()) == y.sizes[c];
  };
  for (Mask b = 1; b <= full; ++b)
    for (Mask c = 1; c <= full; ++c)
      if ((b & c) && !meet_ok(b, c))
        rep.fail("missing meet map (" + istr(static_cast<int>(b)) + "," +
                 istr(static_cast<int>(c)) + ")");
  if (!rep.ok()) return rep;

  for (Mask c = 1; c <= full; ++c)
    for (int i = 0; i < y.sizes[c]; ++i) {
      if (y.meet[c][c][i] != i)
        rep.fail("c∧x != x at " + istr(static_cast<int>(c)));
      for (Mask a = 1; a <= full; ++a)
        for (Mask b = 1; b <= full; ++b)
          if ((a & b & c) &&
              y.meet[a & b][c][i] != y.meet[a][b & c][y.meet[b][c][i]])
            rep.fail("meet maps do not compose at (" +
                     istr(static_cast<int>(a)) + "," +
                     istr(static_cast<int>(b)) + "," +
                     istr(static_cast<int>(c)) + ")");
    }

  for (Mask c = 1; c <= full; ++c)
    for (int i = 0; i < y.sizes[c]; ++i) {
      if (y.action[p.monoid.unit][c][i] != i) rep.fail("1·x != x");
      for (int m = 0; m < n; ++m) {
        for (int q = 0; q < n; ++q) {
          int mq = p.monoid.mul(m, q);
          if (!y.star[mq][c]) continue;
          if (y.action[mq][c][i] !=
              y.action[m][y.star[q][c]][y.action[q][c][i]])
            rep.fail("action does not compose at (" + istr(m) + "," +
                     istr(q) + ")");
        }
        // m·(b∧x) = (m*b)∧(m·x)
        for (Mask b = 1; b <= full; ++b) {
          if (!(b & c) || !y.star[m][b & c]) continue;
          if (y.action[m][b & c][y.meet[b][c][i]] !=
              y.meet[y.star[m][b]][y.star[m][c]][y.action[m][c][i]])
            rep.fail("action and meet do not commute at element " + istr(m));
        }
        // m ≡_b n forces agreement below b.
        for (int q = 0; q < n; ++q)
          for (Mask b = 1; b <= full; ++b) {
            if (!p.bset.equiv(b, m, q)) continue;
            Mask d = b & y.star[m][c];
            if (!d) continue;
            if (y.meet[b][y.star[m][c]][y.action[m][c][i]] !=
                y.meet[b][y.star[q][c]][y.action[q][c][i]])
              rep.fail("glue-equal elements act differently below " +
                       istr(static_cast<int>(b)));
          }
      }
      if (rep.failures.size() > 20) {
        rep.fail("... further checks skipped");
        return rep;
      }
    }

  // Patching: families over a partition of 1 glue uniquely, and every
  // global element restricts back to itself.
  for (const auto &blocks : mask_partitions(full)) {
    std::vector<int> count;
    bool empty_block = false;
    for (Mask b : blocks) {
      count.push_back(y.sizes[b]);
      if (y.sizes[b] == 0) empty_block = true;
    }
    if (empty_block) continue;
    std::vector<int> pick(blocks.size(), 0);
    for (;;) {
      int hits = 0;
      for (int zc = 0; zc < y.sizes[full]; ++zc) {
        bool all = true;
        for (size_t i = 0; i < blocks.size() && all; ++i)
          all = y.meet[blocks[i]][full][zc] == pick[i];
        if (all) ++hits;
      }
      if (hits != 1) rep.fail("family does not patch to a unique element");
      size_t i = 0;
      while (i < blocks.size() && ++pick[i] == count[i]) pick[i++] = 0;
      if (i == blocks.size()) break;
    }
    for (int zc = 0; zc < y.sizes[full]; ++zc) {
      int hits = 0;
      for (int z2 = 0; z2 < y.sizes[full]; ++z2) {
        bool all = true;
        for (Mask b : blocks)
          if (y.meet[b][full][z2] != y.meet[b][full][zc]) all = false;
        if (all) ++hits;
      }
      if (hits != 1) rep.fail("restriction family does not recover uniquely");
    }
  }
  return rep;
}

BJMSet collapse(const MatchedPair &p, const BJMSheaf &y) {
  Mask full = p.alg.full();
  for (Mask b = 1; b <= full; ++b)
    if (y.sizes[b] == 0)
      throw std::invalid_argument("collapse of a partly empty sheaf");
  int sz = y.sizes[full], k = p.alg.arity();
  std::vector<std::vector<int>> cls(k);
  for (int a = 0; a < k; ++a) cls[a] = y.meet[p.alg.atom(a)][full];
  std::vector<std::vector<int>> maction(p.monoid.size());
  for (int m = 0; m < p.monoid.size(); ++m) maction[m] = y.action[m][full];
  return BJMSet{BSet(k, sz, std::move(cls)), std::move(maction)};
}

std::vector<std::vector<Mask>> mask_partitions(Mask base) {
  std::vector<std::vector<Mask>> out;
  if (!base) return {{}};
  Mask low = base & (~base + 1);
  Mask rest = base & ~low;
  // Enumerate the block containing the lowest atom as low | (subset of the
  // rest), then recurse.
  for (Mask sub = rest;; sub = (sub - 1) & rest) {
    Mask block = low | sub;
    for (auto &tail : mask_partitions(base & ~block)) {
      tail.insert(tail.begin(), block);
      out.push_back(std::move(tail));
    }
    if (!sub) break;
  }
  return out;
}

std::vector<FiniteMonoid> enumerate_monoids(int n) {
  std::vector<FiniteMonoid> out;
  if (n <= 0) return out;
  FiniteMonoid m;
  m.unit = 0;
  m.mult.assign(n, std::vector<int>(n));
  for (int i = 0; i < n; ++i) m.mult[0][i] = m.mult[i][0] = i;
  int cells = (n - 1) * (n - 1);
  std::vector<int> v(cells, 0);
  for (;;) {
    for (int c = 0; c < cells; ++c)
      m.mult[1 + c / (n - 1)][1 + c % (n - 1)] = v[c];
    bool assoc = true;
    for (int a = 1; a < n && assoc; ++a)
      for (int b = 1; b < n && assoc; ++b)
        for (int c = 1; c < n && assoc; ++c)
          assoc = m.mul(m.mul(a, b), c) == m.mul(a, m.mul(b, c));
    if (assoc) out.push_back(m);
    int c = 0;
    while (c < cells && ++v[c] == n) v[c++] = 0;
    if (c == cells) break;
  }
  return out;
}

namespace {

// All partitions of {0..n-1} as class vectors in first-seen order.
std::vector<std::vector<int>> set_partitions(int n) {
  std::vector<std::vector<int>> out;
  std::vector<int> cls(n, 0);
  auto rec = [&](auto &&self, int i, int used) -> void {
    if (i == n) {
      out.push_back(cls);
      return;
    }
    for (int c = 0; c <= used; ++c) {
      cls[i] = c;
      self(self, i + 1, std::max(used, c + 1));
    }
  };
  rec(rec, 0, 0);
  return out;
}

int class_count_of(const std::vector<int> &cls) {
  int m = 0;
  for (int c : cls) m = std::max(m, c + 1);
  return m;
}

}  // namespace

std::vector<MatchedPair> enumerate_pairs(int max_m, int max_atoms) {
  std::vector<MatchedPair> out;
  for (int n = 1; n <= max_m; ++n) {
    auto parts = set_partitions(n);
    for (const auto &mon : enumerate_monoids(n)) {
      // Atom-wise glueing classes must be right congruences.
      std::vector<const std::vector<int> *> congs;
      for (const auto &cls : parts) {
        bool cong = true;
        for (int a = 0; a < n && cong; ++a)
          for (int b = 0; b < n && cong; ++b) {
            if (cls[a] != cls[b]) continue;
            for (int c = 0; c < n && cong; ++c)
              cong = cls[mon.mul(a, c)] == cls[mon.mul(b, c)];
          }
        if (cong) congs.push_back(&cls);
      }
      for (int k = 1; k <= max_atoms; ++k) {
        // Pick one congruence per atom so that the carrier is the product
        // of its quotients.
        std::vector<int> choice(k, 0);
        auto build = [&](auto &&self, int a, long long prod) -> void {
          if (prod > n) return;
          if (a == k) {
            if (prod != n) return;
            std::map<std::vector<int>, int> seen;
            for (int e = 0; e < n; ++e) {
              std::vector<int> t(k);
              for (int i = 0; i < k; ++i) t[i] = (*congs[choice[i]])[e];
              if (!seen.emplace(t, e).second) return;
            }
            std::vector<std::vector<int>> cls(k);
            for (int i = 0; i < k; ++i) cls[i] = *congs[choice[i]];
            BSet bset(k, n, cls);

            // Atom actions: per element, all maps respecting the forced
            // identities, assembled under the composition law.
            std::vector<std::vector<std::vector<int>>> cand(n);
            int maps = 1;
            for (int i = 0; i < k; ++i) maps *= k;
            for (int m = 0; m < n; ++m) {
              for (int code = 0; code < maps; ++code) {
                std::vector<int> f(k);
                int c = code;
                for (int i = 0; i < k; ++i) {
                  f[i] = c % k;
                  c /= k;
                }
                bool ok = true;
                for (int a2 = 0; a2 < k && ok; ++a2)
                  if (bset.equiv(Mask{1} << a2, m, mon.unit) && f[a2] != a2)
                    ok = false;
                if (ok) cand[m].push_back(std::move(f));
              }
              if (cand[m].empty()) return;
            }
            std::vector<int> pick(n, 0);
            std::vector<std::vector<int>> act(n);
            auto assemble = [&](auto &&inner, int m) -> void {
              if (m == n) {
                MatchedPair p{BooleanAlgebra(atom_names(k)), mon, act, bset};
                if (check_matched_pair(p).ok()) out.push_back(std::move(p));
                return;
              }
              for (const auto &f : cand[m]) {
                act[m] = f;
                bool ok = true;
                // Glue-equal elements must act equally on each shared atom.
                for (int m2 = 0; m2 < m && ok; ++m2)
                  for (int a2 = 0; a2 < k && ok; ++a2)
                    if (bset.equiv(Mask{1} << a2, m, m2) &&
                        act[m][a2] != act[m2][a2])
                      ok = false;
                // Composition where all three factors are placed.
                for (int m2 = 0; m2 <= m && ok; ++m2) {
                  int v = mon.mul(m, m2);
                  if (v <= m)
                    for (int a2 = 0; a2 < k && ok; ++a2)
                      ok = act[v][a2] == act[m2][act[m][a2]];
                  if (!ok) break;
                  v = mon.mul(m2, m);
                  if (v <= m)
                    for (int a2 = 0; a2 < k && ok; ++a2)
                      ok = act[v][a2] == act[m][act[m2][a2]];
                }
                if (ok) inner(inner, m + 1);
              }
            };
            assemble(assemble, 0);
            return;
          }
          for (int i = 0; i < static_cast<int>(congs.size()); ++i) {
            choice[a] = i;
            self(self, a + 1, prod * class_count_of(*congs[i]));
          }
        };
        build(build, 0, 1);
      }
    }
  }
  return out;
}

std::vector<BJMSet> enumerate_bjm_sets(const MatchedPair &p, int max_carrier) {
  std::vector<BJMSet> out;
  int k = p.alg.arity(), n = p.monoid.size();
  for (int sz = 1; sz <= max_carrier; ++sz) {
    auto parts = set_partitions(sz);
    std::vector<int> choice(k, 0);
    auto build = [&](auto &&self, int a, long long prod) -> void {
      if (prod > sz) return;
      if (a == k) {
        if (prod != sz) return;
        std::map<std::vector<int>, int> seen;
        for (int e = 0; e < sz; ++e) {
          std::vector<int> t(k);
          for (int i = 0; i < k; ++i) t[i] = parts[choice[i]][e];
          if (!seen.emplace(t, e).second) return;
        }
        std::vector<std::vector<int>> cls(k);
        for (int i = 0; i < k; ++i) cls[i] = parts[choice[i]];
        BSet bset(k, sz, cls);

        // Candidate action maps per monoid element, filtered by the first
        // compatibility axiom.
        std::vector<std::vector<std::vector<int>>> cand(n);
        int maps = 1;
        for (int i = 0; i < sz; ++i) maps *= sz;
        for (int m = 0; m < n; ++m) {
          if (m == p.monoid.unit) {
            std::vector<int> id(sz);
            for (int i = 0; i < sz; ++i) id[i] = i;
            cand[m].push_back(std::move(id));
            continue;
          }
          for (int code = 0; code < maps; ++code) {
            std::vector<int> g(sz);
            int c = code;
            for (int i = 0; i < sz; ++i) {
              g[i] = c % sz;
              c /= sz;
            }
            bool ok = true;
            for (int a2 = 0; a2 < k && ok; ++a2)
              for (int e = 0; e < sz && ok; ++e)
                for (int e2 = e + 1; e2 < sz && ok; ++e2)
                  if (bset.equiv(p.alg.atom(a2), e, e2) &&
                      !bset.equiv(p.star(m, p.alg.atom(a2)), g[e], g[e2]))
                    ok = false;
            if (ok) cand[m].push_back(std::move(g));
          }
          if (cand[m].empty()) return;
        }
        std::vector<std::vector<int>> maction(n);
        auto assemble = [&](auto &&inner, int m) -> void {
          if (m == n) {
            BJMSet x{bset, maction};
            if (check_bjm(p, x).ok()) out.push_back(std::move(x));
            return;
          }
          for (const auto &g : cand[m]) {
            maction[m] = g;
            bool ok = true;
            for (int m2 = 0; m2 <= m && ok; ++m2) {
              // Glue-equal monoid elements act glue-equally.
              for (int a2 = 0; a2 < k && ok; ++a2)
                if (p.bset.equiv(p.alg.atom(a2), m, m2))
                  for (int e = 0; e < sz && ok; ++e)
                    ok = bset.equiv(p.alg.atom(a2), maction[m][e],
                                    maction[m2][e]);
              if (!ok) break;
              int v = p.monoid.mul(m, m2);
              if (v <= m)
                for (int e = 0; e < sz && ok; ++e)
                  ok = maction[v][e] == maction[m][maction[m2][e]];
              if (!ok) break;
              v = p.monoid.mul(m2, m);
              if (v <= m)
                for (int e = 0; e < sz && ok; ++e)
                  ok = maction[v][e] == maction[m2][maction[m][e]];
            }
            if (ok) inner(inner, m + 1);
          }
        };
        assemble(assemble, 0);
        return;
      }
      for (int i = 0; i < static_cast<int>(parts.size()); ++i) {
        choice[a] = i;
        self(self, a + 1, prod * class_count_of(parts[i]));
      }
    };
    build(build, 0, 1);
  }
  return out;
}

}  // namespace mpkit
