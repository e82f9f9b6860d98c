#ifndef MPKIT_SELFSIMILAR_HPP
#define MPKIT_SELFSIMILAR_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "mpkit/path_space.hpp"
#include "mpkit/report.hpp"

namespace mpkit {

// Letter-in/letter-out transducer over single-character letters.  The
// transition table sends (letter a, state q) to (restriction q|_a, output
// a⋆q); the designated identity state fixes every letter and restricts to
// itself.
class MealyMachine {
 public:
  MealyMachine(std::string alphabet, std::vector<std::string> state_names,
               int identity, std::vector<std::vector<int>> next,
               std::vector<std::vector<int>> out);

  int letter_count() const { return static_cast<int>(alphabet_.size()); }
  int state_count() const { return static_cast<int>(state_names_.size()); }
  const std::string &alphabet() const { return alphabet_; }
  char letter(int i) const { return alphabet_[i]; }
  // -1 when the character is not a letter.
  int letter_index(char c) const;
  const std::string &state_name(int q) const { return state_names_[q]; }
  int state_index(const std::string &name) const;
  int identity() const { return identity_; }

  // q|_a and a⋆q.
  int restrict_state(int q, int a) const { return next_[q][a]; }
  int out_letter(int a, int q) const { return out_[q][a]; }

  // One-vertex graph with a loop per letter, edge order = letter order.
  DirectedGraph bouquet() const;

  bool operator==(const MealyMachine &other) const;

 private:
  std::string alphabet_;
  std::vector<std::string> state_names_;
  int identity_;
  std::vector<std::vector<int>> next_;  // next_[q][a] = q|_a
  std::vector<std::vector<int>> out_;   // out_[q][a] = a⋆q
};

// Element of the free monoid on the states; entry 0 acts first, the empty
// word is the identity.  No kernel quotient is taken: equality of actions
// is only ever tested to a depth.
using StateWord = std::vector<int>;

// Finite words over the alphabet are strings read right to left: the
// rightmost character is consumed first, matching the display convention
// for left-infinite points ...a3a2a1.  PointSpec stays in traversal order,
// so converting a finite word to a path prefix reverses the string.

// a⋆p and p|_a for a single letter index.
int star_letter(const MealyMachine &m, int a, const StateWord &p);
StateWord restrict_letter(const MealyMachine &m, const StateWord &p, int a);

// p|_w and w⋆p for a finite word, rightmost letter consumed first.
StateWord restrict_word(const MealyMachine &m, const StateWord &p,
                        const std::string &w);
std::string star_word(const MealyMachine &m, const std::string &w,
                      const StateWord &p);

// Action on an eventually periodic point of the bouquet: consumes the tail,
// then runs the cycle until the (cycle position, restricted word) pair
// repeats, which happens within |Q|^|p| × |cycle| steps.
PointSpec apply_point(const MealyMachine &m, const StateWord &p,
                      const PointSpec &w);

// Identity-state laws plus both self-similar action axioms for all letters
// and all state words of length ≤ depth.
CheckReport check_machine(const MealyMachine &m, int depth);

// Partition of the identity-free state words of length ≤ depth by their
// action on words of length ≤ depth.  Collisions may still separate at
// greater depth, so separated = true is a certificate only down to this
// depth.
struct FaithfulnessReport {
  bool separated = true;
  std::vector<std::pair<StateWord, StateWord>> collisions;
};
FaithfulnessReport faithful_to_depth(const MealyMachine &m, int depth);

// All state words of length ≤ max_len, shortest first, lexicographic.
std::vector<StateWord> state_words(const MealyMachine &m, int max_len);

// Element (p, u) of the Zappa-Szép product of the state monoid with the
// free monoid on the alphabet.
struct ZSElement {
  StateWord p;
  std::string u;
  auto operator<=>(const ZSElement &) const = default;
};

inline ZSElement zs_unit() { return {}; }
// (p,u)(q,v) = (p·(q|_u), (u⋆q)·v).
ZSElement zappa_szep_mul(const MealyMachine &m, const ZSElement &x,
                         const ZSElement &y);

// Partial self-map of the point space: each entry consumes domain word u,
// applies the state word p to the remainder, and emits v.  Domains are
// suffix-free as strings (the consumed-first ends never nest).
struct NekEntry {
  std::string u;
  StateWord p;
  std::string v;
  auto operator<=>(const NekEntry &) const = default;
};

struct NekrashevychMap {
  std::vector<NekEntry> table;  // sorted, domains suffix-free

  bool is_zero() const { return table.empty(); }
  auto operator<=>(const NekrashevychMap &) const = default;
};

// Validates entries, strips identity states from the state words, collapses
// complete one-step expansion families back to their common ancestor, and
// sorts.  Throws std::invalid_argument on overlapping domains or bad
// letters/states.
NekrashevychMap nek_normalize(const MealyMachine &m, std::vector<NekEntry> raw);

NekrashevychMap nek_identity();

// Entry whose domain word matches the consumed-first letters of w, or
// nullptr when w is outside the domain.
const NekEntry *nek_entry_at(const MealyMachine &m, const NekrashevychMap &f,
                             const PointSpec &w);
// Throws std::domain_error outside the domain.
PointSpec nek_apply(const MealyMachine &m, const NekrashevychMap &f,
                    const PointSpec &w);

// Diagrammatic composite (f first, then g): each f-entry is expanded one
// consumed letter at a time until its output word aligns with a g-domain;
// branches that leave g's domain are dropped.
NekrashevychMap nek_compose(const MealyMachine &m, const NekrashevychMap &f,
                            const NekrashevychMap &g);

// Greatest set of states with bijective output maps that is closed under
// restriction; always contains the identity state.
std::vector<int> invertible_states(const MealyMachine &m);
// The machine restricted to the invertible states.
MealyMachine restrict_to_group(const MealyMachine &m);

// Depth-bounded search for a suffix-free set of words, generating a dense
// ideal, on which every restriction of p lands in the invertible states.
// decided = false means no verdict at this depth, not a refutation.
struct GroupoidalSearch {
  bool decided = false;
  std::vector<std::string> basis;
};
GroupoidalSearch groupoidal_witness(const MealyMachine &m, const StateWord &p,
                                    int depth);

// Samples pairs (p,u) ≠ (q,v), distinguished at the given depth, and checks
// that some generator (1,a) separates their left translates.
CheckReport separatedness_check(const MealyMachine &m, int depth,
                                std::uint64_t seed, int samples);

std::string format_state_word(const MealyMachine &m, const StateWord &p);
// Whitespace-separated state names; throws on unknown states.
StateWord parse_state_word(const MealyMachine &m, const std::string &text);

}  // namespace mpkit

#endif
