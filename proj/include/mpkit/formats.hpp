#ifndef MPKIT_FORMATS_HPP
#define MPKIT_FORMATS_HPP

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mpkit/matched_finite.hpp"
#include "mpkit/path_space.hpp"
#include "mpkit/prefix_maps.hpp"
#include "mpkit/selfsimilar.hpp"

namespace mpkit {

// Input error with a 1-based source location.
class ParseError : public std::runtime_error {
 public:
  ParseError(int line, int column, const std::string &message)
      : std::runtime_error("line " + std::to_string(line) + ", column " +
                           std::to_string(column) + ": " + message),
        line_(line),
        column_(column) {}

  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_, column_;
};

// Graph file: `vertices: u v` then `edge e: u -> v` lines; alternatively a
// single `bouquet: lr` line.
DirectedGraph parse_graph_text(const std::string &text);
// Letters of an inline "bouquet:xy" spec, or nullopt when the spec is a
// file reference.
std::optional<std::string> bouquet_letters(const std::string &spec);

// Map file: `on: <graph spec>` header, then `entry: u -> v` lines.  The
// resolver turns the header spec into a graph (inline bouquet or file).
struct ParsedMap {
  DirectedGraph graph;
  PrefixMap map;
};
ParsedMap parse_map_text(
    const std::string &text,
    const std::function<DirectedGraph(const std::string &)> &resolve_graph);

// Pair file: `atoms:`, `monoid:` (first element is the unit), `mult m:`
// rows, `act m:` atom images, `equiv a:` partitions of the monoid with
// blocks separated by `|`.
struct ParsedPair {
  MatchedPair pair;
  std::vector<std::string> elem_names;
};
ParsedPair parse_pair_text(const std::string &text);

// Category file: `objects: a b`, `arrow f: a -> b`, `compose g f = h`.
// Identity arrows are implicit, one per object, ordered before the
// declared arrows.
struct ParsedCategory {
  FiniteCategory cat;
  std::vector<std::string> object_names;
  std::vector<std::string> arrow_names;
};
ParsedCategory parse_category_text(const std::string &text);

// Carrier file: `atoms: a1 a2`, then `elem x: class(a1)=0 class(a2)=1`
// per element.
struct ParsedBSet {
  BSet set;
  std::vector<std::string> atom_names;
  std::vector<std::string> elem_names;
};
ParsedBSet parse_bset_text(const std::string &text);

// Carrier file plus `act m: x y ...` rows, one per monoid element of the
// pair, giving the image of each carrier element.
struct ParsedBJM {
  BJMSet set;
  std::vector<std::string> elem_names;
};
ParsedBJM parse_bjm_text(const std::string &text, const ParsedPair &p);

// Machine file: `alphabet: 0 1`, then `state q: in -> next/out, ...` rows;
// the state named `e` is the identity.
MealyMachine parse_machine_text(const std::string &text);

// Entries `entry: u | p | v`; `-` (or nothing) spells the empty word, p is
// a space-separated state word or `1`.
NekrashevychMap parse_nek_text(const MealyMachine &m, const std::string &text);
std::string format_nek(const MealyMachine &m, const NekrashevychMap &f);

}  // namespace mpkit

#endif
