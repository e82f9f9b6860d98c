#ifndef MPKIT_BOOLEAN_CORE_HPP
#define MPKIT_BOOLEAN_CORE_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "mpkit/report.hpp"

namespace mpkit {

// Subset of the atom set, one bit per atom.
using Mask = std::uint32_t;

// Finite Boolean algebra presented as the powerset of a named atom set.
class BooleanAlgebra {
 public:
  BooleanAlgebra() : BooleanAlgebra(std::vector<std::string>{"a1"}) {}
  explicit BooleanAlgebra(std::vector<std::string> atoms);

  int arity() const { return static_cast<int>(atoms_.size()); }
  Mask full() const {
    return arity() == 32 ? ~Mask{0} : (Mask{1} << arity()) - 1;
  }
  Mask atom(int i) const { return Mask{1} << i; }
  Mask complement(Mask b) const { return full() & ~b; }

  const std::string &atom_name(int i) const { return atoms_[i]; }
  // Returns -1 when no atom has that name.
  int atom_index(const std::string &name) const;

  // Parses "a1+a2", "0", "1"; throws std::invalid_argument on unknown atoms.
  Mask parse(const std::string &text) const;
  std::string format(Mask b) const;

  bool operator==(const BooleanAlgebra &other) const {
    return atoms_ == other.atoms_;
  }

 private:
  std::vector<std::string> atoms_;
};

// Indices of atoms below b, ascending.
std::vector<int> atoms_of(const BooleanAlgebra &alg, Mask b);

// (b ∧ c) ∨ (b' ∧ d).
inline Mask conditioned_disjunction(const BooleanAlgebra &alg, Mask b, Mask c,
                                    Mask d) {
  return (b & c) | (alg.complement(b) & d);
}

// Partition of `base` into disjoint nonzero blocks joining to `base`.
struct Partition {
  Mask base = 0;
  std::vector<Mask> blocks;
};

// Validates and builds a partition; throws std::invalid_argument on
// overlapping, zero, or non-covering blocks.
Partition partition_of(const BooleanAlgebra &alg, Mask base,
                       std::vector<Mask> blocks);

// Common refinement: for each block p.blocks[i], sub[i] partitions it; the
// result has all the sub-blocks.  Throws when sub[i] does not partition
// p.blocks[i].
Partition refine_partition(const BooleanAlgebra &alg, const Partition &p,
                           const std::vector<Partition> &sub);

// Coarsening: blocks with the same label are joined.  labels[i] labels
// p.blocks[i]; any label values work, only equality matters.
Partition pushforward_partition(const BooleanAlgebra &alg, const Partition &p,
                                const std::vector<int> &labels);

// B-set on carrier {0, ..., size-1}: for each atom, a partition of the
// carrier into congruence classes, encoded as class ids per element.  The
// defining invariant is that the carrier is the product of its per-atom
// quotients: the tuple of atom classes determines the element and every
// tuple occurs.
class BSet {
 public:
  BSet() : BSet(1, 1, {{0}}) {}
  BSet(int arity, int size, std::vector<std::vector<int>> atom_classes);

  int arity() const { return arity_; }
  int size() const { return size_; }
  int atom_class(int atom, int x) const { return atom_classes_[atom][x]; }
  int class_count(int atom) const;

  // x ≡_b y: agreement under every atom below b.
  bool equiv(Mask b, int x, int y) const;
  // Largest b with x ≡_b y.
  Mask agreement(int x, int y) const;

  // Conditioned disjunction b(x,y): the unique z with z ≡_b x, z ≡_b' y.
  int glue(Mask b, int x, int y) const;

  // The unique z with z ≡_{p.blocks[i]} pieces[i], for p a partition of 1.
  int patch(const Partition &p, const std::vector<int> &pieces) const;

  // Verifies the product invariant, the six conditioned-disjunction
  // equations, and the compatibility laws of the ≡ family.
  CheckReport check() const;

  bool operator==(const BSet &other) const {
    return size_ == other.size_ && atom_classes_ == other.atom_classes_;
  }

 private:
  Mask full_mask() const {
    return arity_ == 32 ? ~Mask{0} : (Mask{1} << arity_) - 1;
  }

  int arity_;
  int size_;
  std::vector<std::vector<int>> atom_classes_;
};

}  // namespace mpkit

#endif
