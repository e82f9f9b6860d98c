#ifndef MPKIT_PREFIX_MAPS_HPP
#define MPKIT_PREFIX_MAPS_HPP

#include <optional>
#include <random>
#include <string>
#include <vector>

#include "mpkit/path_space.hpp"
#include "mpkit/report.hpp"

namespace mpkit {

// Partial self-map of the infinite-path space acting by prefix exchange:
// each entry replaces domain prefix u by image v (equal end vertices, so
// every continuation composes with both).  Composition throughout this
// module is diagrammatic: compose(f, g) applies f first, then g.
struct PrefixMap {
  struct Entry {
    Path u;
    Path v;
    auto operator<=>(const Entry &) const = default;
  };

  // sorted, prefix-free domains, sibling-collapsed
  std::vector<Entry> table;

  bool is_zero() const { return table.empty(); }
  auto operator<=>(const PrefixMap &) const = default;
};

// Validates entries (composability, end vertices, prefix-free domains) and
// collapses complete sibling entry families {(u·e → v·e)} to fixpoint.
PrefixMap normalize(const DirectedGraph &g, std::vector<PrefixMap::Entry> raw);

PrefixMap identity_map(const DirectedGraph &g);
inline PrefixMap zero_map() { return {}; }
// Identity restricted to a clopen.
PrefixMap clopen_idem(const DirectedGraph &g, const Clopen &b);

PrefixMap compose(const DirectedGraph &g, const PrefixMap &f,
                  const PrefixMap &h);

PrefixMap restriction(const DirectedGraph &g, const PrefixMap &f);
Clopen domain_clopen(const DirectedGraph &g, const PrefixMap &f);
bool is_total(const DirectedGraph &g, const PrefixMap &f);
// s ≤ t iff s⁺t = s.
bool map_leq(const DirectedGraph &g, const PrefixMap &s, const PrefixMap &t);

// Least upper bound of maps with pairwise disjoint domains; throws on
// overlap.
PrefixMap join_disjoint(const DirectedGraph &g,
                        const std::vector<PrefixMap> &fs);

// Defined iff the images are pairwise prefix-free (f injective on
// cylinders); then f'·f = f⁺ and f·f' = f'⁺.
std::optional<PrefixMap> partial_inverse(const DirectedGraph &g,
                                         const PrefixMap &f);

// f's single-entry maps; each is a partial isomorphism and their disjoint
// join is f.
std::vector<PrefixMap> etale_decomposition(const DirectedGraph &g,
                                           const PrefixMap &f);

// (s·b)⁺: the matched-pair action of a total map on a clopen.
Clopen act_clopen(const DirectedGraph &g, const PrefixMap &s, const Clopen &b);

// The map agreeing with m on b and with n on b'.
PrefixMap glue_maps(const DirectedGraph &g, const Clopen &b,
                    const PrefixMap &m, const PrefixMap &n);

// Throws when W is outside the domain.
PointSpec apply_point(const DirectedGraph &g, const PrefixMap &f,
                      const PointSpec &w);

// A total map m with m*b = 1, when one exists; otherwise the vertex whose
// failed cofinality obstructs it.
struct ToposWitness {
  bool ok = false;
  PrefixMap map;       // valid when ok
  int bad_vertex = -1; // valid when !ok
};
ToposWitness topos_witness(const DirectedGraph &g, const Clopen &b);

// Germ of a prefix map at an eventually periodic point.
struct Germ {
  PointSpec at;
  PrefixMap rep;
  auto operator<=>(const Germ &) const = default;
};

Germ germ_at(const DirectedGraph &g, const PrefixMap &f, const PointSpec &w);
PointSpec germ_target(const DirectedGraph &g, const Germ &gm);
// Exact: beyond the larger table depth both restrictions are single
// entries whose disagreement persists under every extension.
bool germ_equal(const DirectedGraph &g, const Germ &a, const Germ &b);
Germ germ_compose(const DirectedGraph &g, const Germ &a, const Germ &b);
// |image prefix| − |domain prefix| of the entry used at the point.
int germ_degree(const DirectedGraph &g, const Germ &gm);

// Relations of the path-space presentation on a bouquet: a·a* = 1,
// a·b* = 0 for a ≠ b, and ⋁_a a*a = 1.
CheckReport check_presentation(const DirectedGraph &g);

// Sampled verification of the matched-pair axioms for (Clopens, total
// PrefixMaps); both carriers are infinite so checking is randomized.
CheckReport check_matched_pair_sampled(const DirectedGraph &g,
                                       std::uint64_t seed, int samples,
                                       int depth);

// Samplers shared by the randomized harnesses, the CLI self-test, and the
// acceptance suite.
Clopen sample_clopen(const DirectedGraph &g, std::mt19937_64 &rng, int depth);
PrefixMap sample_total_map(const DirectedGraph &g, std::mt19937_64 &rng,
                           int depth);
PrefixMap sample_map(const DirectedGraph &g, std::mt19937_64 &rng, int depth);
PointSpec sample_point(const DirectedGraph &g, std::mt19937_64 &rng,
                       int depth);

std::string format_map(const DirectedGraph &g, const PrefixMap &f);

}  // namespace mpkit

#endif
