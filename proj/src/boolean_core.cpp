#include "mpkit/boolean_core.hpp"

#include <algorithm>
#include <bit>
#include <set>
#include <sstream>
#include <stdexcept>

namespace mpkit {

std::string CheckReport::summary(const std::string &what) const {
  std::ostringstream os;
  if (ok()) {
    os << what << ": ok";
  } else {
    os << what << ": " << failures.size() << " failure(s)";
    for (const auto &f : failures) os << "\n  " << f;
  }
  return os.str();
}

BooleanAlgebra::BooleanAlgebra(std::vector<std::string> atoms)
    : atoms_(std::move(atoms)) {
  if (atoms_.empty()) throw std::invalid_argument("algebra needs an atom");
  if (atoms_.size() > 32) throw std::invalid_argument("too many atoms");
  std::set<std::string> seen(atoms_.begin(), atoms_.end());
  if (seen.size() != atoms_.size())
    throw std::invalid_argument("duplicate atom name");
}

int BooleanAlgebra::atom_index(const std::string &name) const {
  for (int i = 0; i < arity(); ++i)
    if (atoms_[i] == name) return i;
  return -1;
}

Mask BooleanAlgebra::parse(const std::string &text) const {
  if (text == "0") return 0;
  if (text == "1") return full();
  Mask b = 0;
  std::string tok;
  std::istringstream is(text);
  while (std::getline(is, tok, '+')) {
    if (tok.empty()) continue;
    int i = atom_index(tok);
    if (i < 0) throw std::invalid_argument("unknown atom: " + tok);
    b |= atom(i);
  }
  return b;
}

std::string BooleanAlgebra::format(Mask b) const {
  if (b == 0) return "0";
  if (b == full()) return "1";
  std::string out;
  for (int i = 0; i < arity(); ++i)
    if (b & atom(i)) {
      if (!out.empty()) out += '+';
      out += atoms_[i];
    }
  return out;
}

std::vector<int> atoms_of(const BooleanAlgebra &alg, Mask b) {
  std::vector<int> out;
  for (int i = 0; i < alg.arity(); ++i)
    if (b & alg.atom(i)) out.push_back(i);
  return out;
}

Partition partition_of(const BooleanAlgebra &alg, Mask base,
                       std::vector<Mask> blocks) {
  Mask seen = 0;
  for (Mask c : blocks) {
    if (c == 0) throw std::invalid_argument("partition block is 0");
    if (c & seen) throw std::invalid_argument("partition blocks overlap");
    if (c & ~alg.full()) throw std::invalid_argument("block outside algebra");
    seen |= c;
  }
  if (seen != base) throw std::invalid_argument("blocks do not cover base");
  return Partition{base, std::move(blocks)};
}

Partition refine_partition(const BooleanAlgebra &alg, const Partition &p,
                           const std::vector<Partition> &sub) {
  if (sub.size() != p.blocks.size())
    throw std::invalid_argument("refinement missing a block");
  std::vector<Mask> out;
  for (size_t i = 0; i < p.blocks.size(); ++i) {
    if (sub[i].base != p.blocks[i])
      throw std::invalid_argument("refinement of the wrong block");
    for (Mask c : sub[i].blocks) out.push_back(c);
  }
  return partition_of(alg, p.base, std::move(out));
}

Partition pushforward_partition(const BooleanAlgebra &alg, const Partition &p,
                                const std::vector<int> &labels) {
  if (labels.size() != p.blocks.size())
    throw std::invalid_argument("one label per block required");
  std::vector<int> order;  // distinct labels in first-seen order
  std::vector<Mask> out;
  for (size_t i = 0; i < p.blocks.size(); ++i) {
    auto it = std::find(order.begin(), order.end(), labels[i]);
    if (it == order.end()) {
      order.push_back(labels[i]);
      out.push_back(p.blocks[i]);
    } else {
      out[static_cast<size_t>(it - order.begin())] |= p.blocks[i];
    }
  }
  return partition_of(alg, p.base, std::move(out));
}

BSet::BSet(int arity, int size, std::vector<std::vector<int>> atom_classes)
    : arity_(arity), size_(size), atom_classes_(std::move(atom_classes)) {
  if (size_ <= 0) throw std::invalid_argument("empty carrier");
  if (arity_ <= 0) throw std::invalid_argument("no atoms");
  if (static_cast<int>(atom_classes_.size()) != arity_)
    throw std::invalid_argument("one class vector per atom required");
  for (auto &cls : atom_classes_) {
    if (static_cast<int>(cls.size()) != size_)
      throw std::invalid_argument("class vector size mismatch");
    for (int c : cls)
      if (c < 0) throw std::invalid_argument("negative class id");
  }
}

int BSet::class_count(int atom) const {
  int m = 0;
  for (int c : atom_classes_[atom]) m = std::max(m, c + 1);
  return m;
}

bool BSet::equiv(Mask b, int x, int y) const {
  for (int a = 0; a < arity_; ++a)
    if ((b & (Mask{1} << a)) && atom_classes_[a][x] != atom_classes_[a][y])
      return false;
  return true;
}

Mask BSet::agreement(int x, int y) const {
  Mask b = 0;
  for (int a = 0; a < arity_; ++a)
    if (atom_classes_[a][x] == atom_classes_[a][y]) b |= Mask{1} << a;
  return b;
}

int BSet::glue(Mask b, int x, int y) const {
  for (int z = 0; z < size_; ++z)
    if (equiv(b, z, x) && equiv(full_mask() & ~b, z, y)) return z;
  throw std::logic_error("glue: no candidate (carrier is not a product)");
}

int BSet::patch(const Partition &p, const std::vector<int> &pieces) const {
  if (p.base != full_mask())
    throw std::invalid_argument("patch needs a partition of 1");
  if (pieces.size() != p.blocks.size())
    throw std::invalid_argument("one piece per block required");
  for (int z = 0; z < size_; ++z) {
    bool all = true;
    for (size_t i = 0; i < p.blocks.size() && all; ++i)
      all = equiv(p.blocks[i], z, pieces[i]);
    if (all) return z;
  }
  throw std::logic_error("patch: no candidate (carrier is not a product)");
}

CheckReport BSet::check() const {
  CheckReport rep;
  // Product invariant: atom-class tuples hit every combination exactly once.
  long long prod = 1;
  for (int a = 0; a < arity_; ++a) {
    prod *= class_count(a);
    if (prod > size_) break;
  }
  if (prod != size_) {
    rep.fail("carrier size " + std::to_string(size_) +
             " is not the product of its atom-quotient sizes");
    return rep;  // glue/patch are partial without it; stop here
  }
  std::set<std::vector<int>> tuples;
  for (int x = 0; x < size_; ++x) {
    std::vector<int> t;
    for (int a = 0; a < arity_; ++a) t.push_back(atom_classes_[a][x]);
    if (!tuples.insert(t).second)
      rep.fail("elements " + std::to_string(x) +
               " and an earlier one share all atom classes");
  }
  if (!rep.ok()) return rep;

  const Mask one = full_mask();
  auto nm = [&](Mask b) { return std::to_string(b); };
  // Conditioned-disjunction equations, quantified over all b and elements.
  for (Mask b = 0; b <= one; ++b) {
    Mask bc = one & ~b;
    for (int x = 0; x < size_; ++x) {
      if (glue(b, x, x) != x)
        rep.fail("b(x,x) != x at b=" + nm(b) + " x=" + std::to_string(x));
      if (glue(one, x, 0) != x) rep.fail("1(x,y) != x");
      for (int y = 0; y < size_; ++y) {
        int bxy = glue(b, x, y);
        if (glue(bc, x, y) != glue(b, y, x))
          rep.fail("b'(x,y) != b(y,x) at b=" + nm(b));
        for (int z = 0; z < size_; ++z) {
          if (glue(b, bxy, z) != glue(b, x, z))
            rep.fail("b(b(x,y),z) != b(x,z) at b=" + nm(b));
          if (glue(b, x, glue(b, y, z)) != glue(b, x, z))
            rep.fail("b(x,b(y,z)) != b(x,z) at b=" + nm(b));
        }
        for (Mask c = 0; c <= one; ++c)
          if (glue(b & c, x, y) != glue(b, glue(c, x, y), y))
            rep.fail("(b∧c)(x,y) != b(c(x,y),y) at b=" + nm(b) +
                     " c=" + nm(c));
        // ≡ laws: downward closure, join rule, discreteness at 1.
        for (Mask c = 0; c <= one; ++c) {
          if ((c & ~b) == 0 && equiv(b, x, y) && !equiv(c, x, y))
            rep.fail("≡ not downward closed");
          if (equiv(b, x, y) && equiv(c, x, y) && !equiv(b | c, x, y))
            rep.fail("≡ join rule fails");
        }
        if (equiv(one, x, y) && x != y) rep.fail("≡_1 is not equality");
        if ((glue(b, x, y) == y) != equiv(b, x, y))
          rep.fail("b(x,y)=y ⟺ x≡_b y fails at b=" + nm(b));
      }
    }
    if (rep.failures.size() > 20) {
      rep.fail("... further checks skipped");
      return rep;
    }
  }
  return rep;
}

}  // namespace mpkit
