#ifndef MPKIT_MATCHED_FINITE_HPP
#define MPKIT_MATCHED_FINITE_HPP

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mpkit/boolean_core.hpp"
#include "mpkit/report.hpp"

namespace mpkit {

struct FiniteMonoid {
  int unit = 0;
  std::vector<std::vector<int>> mult;  // mult[m][n] = m·n

  int size() const { return static_cast<int>(mult.size()); }
  int mul(int m, int n) const { return mult[m][n]; }
  CheckReport check() const;

  bool operator==(const FiniteMonoid &other) const = default;
};

// A Boolean algebra and a monoid acting on one another: the monoid moves
// atoms (act[m][a]), inducing the Boolean endomorphism star(m,-) by
// preimage, while the algebra glues monoid elements through `bset`, whose
// carrier is the monoid's element set.
struct MatchedPair {
  BooleanAlgebra alg;
  FiniteMonoid monoid;
  std::vector<std::vector<int>> act;  // act[m][atom] = image atom
  BSet bset;

  // m*b = {a : act[m][a] ∈ b}
  Mask star(int m, Mask b) const;
};

// Exhaustive verification: monoid laws, bset laws, act is a contravariant
// monoid action on atoms, and the three compatibility axioms
//   m ≡_b n ⟹ mp ≡_b np
//   n ≡_b p ⟹ mn ≡_{m*b} mp
//   m ≡_b n ⟹ b ∧ m*c = b ∧ n*c
CheckReport check_matched_pair(const MatchedPair &p);

// One atom, discrete glueing, trivial atom action; valid for any monoid.
MatchedPair trivial_pair(FiniteMonoid m);

// Finite category with explicit composition; comp[g][f] = g∘f or -1 when
// tgt(f) != src(g).
struct FiniteCategory {
  int objects = 0;
  std::vector<int> src, tgt;      // per arrow
  std::vector<int> identity;      // per object
  std::vector<std::vector<int>> comp;

  int arrow_count() const { return static_cast<int>(src.size()); }
  CheckReport check() const;
};

// Every object reaches every object through arrows.
bool strongly_connected(const FiniteCategory &a);

// The pair of admissible sections: a monoid element picks one incoming
// arrow per object, B is the powerset of the object set.
struct CategoryPair {
  MatchedPair pair;
  std::vector<std::vector<int>> sections;  // sections[m][obj] = arrow into obj
};
CategoryPair from_finite_category(const FiniteCategory &a);

// Element m|_b of the restriction monoid built from a pair: a domain and a
// representative of its ≡_b class (canonically the least one).
struct BrmElement {
  Mask b = 0;
  int m = 0;

  auto operator<=>(const BrmElement &) const = default;
};

// The Boolean restriction monoid with elements m|_b, product
// m|_b · n|_c = (mn)|_{b ∧ m*c}, restriction (m|_b)⁺ = 1|_b, and joins of
// disjointly supported elements by glueing.
class FiniteBRM {
 public:
  explicit FiniteBRM(MatchedPair p);

  const MatchedPair &pair() const { return pair_; }
  int size() const { return static_cast<int>(elements_.size()); }
  const BrmElement &element(int i) const { return elements_[i]; }
  int index(Mask b, int m) const;  // canonicalizes the representative

  int unit() const { return unit_; }
  int zero() const { return zero_; }
  int mul(int s, int t) const;
  int plus(int s) const;  // s⁺
  bool is_idempotent(int s) const { return plus(s) == s; }
  bool is_total(int s) const { return plus(s) == unit_; }
  bool leq(int s, int t) const;  // natural order s = s⁺·t
  // Defined when s⁺t⁺ = 0.
  std::optional<int> join(int s, int t) const;
  int complement_idem(int e) const;
  // (s⁺, š) with š total and s = s⁺·š.
  std::pair<int, int> decompose_total(int s) const;

 private:
  int canon(Mask b, int m) const;

  MatchedPair pair_;
  std::vector<BrmElement> elements_;
  int unit_ = 0, zero_ = 0;
};

inline FiniteBRM build_brm(const MatchedPair &p) { return FiniteBRM(p); }

// Four restriction axioms plus the derived law (st⁺)⁺ = (st)⁺.
CheckReport check_restriction_axioms(const FiniteBRM &s);
// Restriction axioms plus zero, the Boolean algebra of idempotents,
// disjoint joins as least upper bounds, and both distributivity families.
CheckReport check_brm_axioms(const FiniteBRM &s);

// Recovers a pair from a restriction monoid: B = idempotents, M = total
// elements, m*b = (mb)⁺, m ≡_b n ⟺ bm = bn.
struct DownarrowResult {
  MatchedPair pair;
  std::vector<int> atom_elem;  // source element per recovered atom
  std::vector<int> tot_elem;   // source element per recovered monoid element
  CheckReport report;
};
DownarrowResult brm_downarrow(const FiniteBRM &s);

// Builds the restriction monoid of p, recovers a pair from it, and checks
// that b ↦ 1|_b, m ↦ m|_1 is an isomorphism of pairs.
CheckReport roundtrip_check(const MatchedPair &p);

// Homomorphism of pairs: a Boolean map given by its atom preimage function
// (atom of the target ↦ atom of the source) and a monoid map.
struct PairHom {
  std::vector<int> atom_map;    // target atom -> source atom
  std::vector<int> monoid_map;  // source element -> target element
};

Mask hom_mask(const PairHom &h, const MatchedPair &tgt, Mask b);
CheckReport check_pair_hom(const MatchedPair &src, const MatchedPair &tgt,
                           const PairHom &h);

// Extends a pair homomorphism to the restriction monoids by
// ψ(s) = φ(s⁺)·f(š); verifies preservation of unit, product, restriction,
// zero, and disjoint joins.
struct ExtendResult {
  std::vector<int> map;  // element of S -> element of T
  CheckReport report;
};
ExtendResult extend_hom(const PairHom &h, const FiniteBRM &s,
                        const FiniteBRM &t);

// Object map of the classifying cofunctor (atoms of the target pulled back
// along the Boolean map) with the lifting laws checked germwise.
struct CofunctorResult {
  std::vector<int> object_map;  // target atom -> source atom
  CheckReport report;
};
CofunctorResult classifying_cofunctor(const MatchedPair &src,
                                      const MatchedPair &tgt,
                                      const PairHom &h);

// A carrier with both structures: glueing through `bset` and a monoid
// action table.
struct BJMSet {
  BSet bset;
  std::vector<std::vector<int>> maction;  // maction[m][x]

  int size() const { return bset.size(); }
  int act(int m, int x) const { return maction[m][x]; }

  bool operator==(const BJMSet &other) const = default;
};

// Monoid-action and bset laws plus the two compatibility axioms
//   x ≡_b y ⟹ m·x ≡_{m*b} m·y   and   m ≡_b n ⟹ m·x ≡_b n·x.
CheckReport check_bjm(const MatchedPair &p, const BJMSet &x);

BJMSet regular_bjm(const MatchedPair &p);    // M acting on itself
BJMSet singleton_bjm(const MatchedPair &p);  // one point
BJMSet algebra_bjm(const MatchedPair &p);    // B with glueing and m*

// Largest b with x ≡^m_b y, namely m*(largest agreement of x and y).
Mask m_equiv(const MatchedPair &p, int m, int x, int y, const BSet &xs);

// Free construction on a plain set of size gsize: carrier M × (atoms → G)
// with n·(m,ω) = (nm, ω∘f_n) and pointwise glueing.
struct FreeBJM {
  BJMSet set;
  int gsize = 0;
  int arity = 0;
  int munit = 0;

  int index(int m, const std::vector<int> &omega) const;
  std::pair<int, std::vector<int>> decode(int idx) const;
  int unit_map(int g) const;  // η(g) = (1, constantly g)
};
FreeBJM free_bjm(const MatchedPair &p, int gsize);
// The induced map extending h : G -> Y along η, one value per carrier
// element of the free set.
std::vector<int> free_extend(const MatchedPair &p, const FreeBJM &f,
                             const BJMSet &y, const std::vector<int> &h);

// M ⊗ X for a plain glueing carrier X: pairs (m, ω : atoms → X) modulo
// ωfun(a) ≡_{f_m(a)} γfun(a) at every atom.
struct TensorResult {
  BJMSet set;  // on congruence classes
  int arity = 0, xsize = 0;
  std::vector<std::vector<int>> cls;  // cls[m][code(ω)] = class
  std::vector<std::pair<int, std::vector<int>>> reps;
  std::vector<int> unit_map;  // η : X -> class of (1, constantly x)

  int code(const std::vector<int> &omega) const;
  std::vector<int> decode_omega(int code) const;
};
TensorResult tensor(const MatchedPair &p, const BSet &x);

// θ : M ⊗ X → M × X, (m, ω) ↦ (m, patch of m·ω(a) over the atoms).
struct ThetaResult {
  TensorResult tensor;
  std::vector<std::pair<int, int>> image;  // per tensor class
  bool injective = false, surjective = false;
};
ThetaResult theta(const MatchedPair &p, const BJMSet &x);

// True iff every atom is hit by some constant atom action; the witness
// gives such an m per atom.  Cross-checked internally against the
// enumeration of proper invariant down-sets.
struct ToposVerdict {
  bool topos = false;
  std::vector<int> witness;  // per atom: m with m*{a} = 1, or -1
};
ToposVerdict is_topos(const MatchedPair &p);

// Witness block for one m: on b, the element n satisfies mn ≡_b 1, and
// nm ≡_c 1 with b ≤ m*c.
struct GroupoidalWitness {
  Mask b = 0;
  int n = 0;
  Mask c = 0;
};
struct GroupoidalVerdict {
  bool groupoidal = false;
  int bad_m = -1;
  std::vector<std::vector<GroupoidalWitness>> witnesses;  // per m, blocks
};
GroupoidalVerdict is_groupoidal(const MatchedPair &p);

// Product carrier x*|Y|+y with componentwise structures.
BJMSet product_bjm(const MatchedPair &p, const BJMSet &x, const BJMSet &y);
// All structure-preserving maps X -> Y, each a value table over X.
std::vector<std::vector<int>> bjm_homs(const MatchedPair &p, const BJMSet &x,
                                       const BJMSet &y);

// Z^Y: carrier = homomorphisms M×Y → Z with (m·f)(n,y) = f(nm,y).
struct Exponential {
  BJMSet set;
  std::vector<std::vector<int>> homs;  // tables over M×Y, index n*|Y|+y
  int ysize = 0;
  int unit = 0;

  int eval(int f, int y) const { return homs[f][unit * ysize + y]; }
  int hom_index(const std::vector<int> &table) const;
};
Exponential exponential(const MatchedPair &p, const BJMSet &y,
                        const BJMSet &z);
// Transpose of f : X×Y → Z (table over x*|Y|+y): per x, the hom index of
// (m,y) ↦ f(m·x, y).
std::vector<int> transpose(const MatchedPair &p, const Exponential &e,
                           const BJMSet &x, const std::vector<int> &f);

// Alternative exponential for groupoidal pairs: plain glueing maps Y → Z
// with the action patched blockwise from the groupoidality witnesses.
struct ConjExponential {
  BJMSet set;
  std::vector<std::vector<int>> homs;  // tables over Y
};
ConjExponential exponential_conjugation(const MatchedPair &p, const BJMSet &y,
                                        const BJMSet &z,
                                        const GroupoidalVerdict &w);

// Presheaf form of a carrier: a set per nonzero b with meet and action
// maps between them.
struct BJMSheaf {
  int arity = 0;
  int msize = 0;
  std::vector<int> sizes;  // per mask, sizes[0] = 0
  // meet[b][c] : Y(c) -> Y(b∧c), stored when b∧c != 0
  std::vector<std::vector<std::vector<int>>> meet;
  // action[m][c] : Y(c) -> Y(m*c), stored when m*c != 0
  std::vector<std::vector<std::vector<int>>> action;
  std::vector<std::vector<Mask>> star;  // star[m][c]
};
BJMSheaf sheafify(const MatchedPair &p, const BJMSet &x);
CheckReport check_sheaf(const MatchedPair &p, const BJMSheaf &y);
// Y(1) with atom classes from the meet maps and the action at 1; throws
// when some level is empty.
BJMSet collapse(const MatchedPair &p, const BJMSheaf &y);

// All partitions of `base` into disjoint nonzero blocks.
std::vector<std::vector<Mask>> mask_partitions(Mask base);

// Exhaustive enumeration, unit fixed as element 0.
std::vector<FiniteMonoid> enumerate_monoids(int n);
std::vector<MatchedPair> enumerate_pairs(int max_m, int max_atoms);
std::vector<BJMSet> enumerate_bjm_sets(const MatchedPair &p, int max_carrier);

}  // namespace mpkit

#endif
