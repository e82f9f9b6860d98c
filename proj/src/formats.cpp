#include "mpkit/formats.hpp"

#include <algorithm>
#include <sstream>

namespace mpkit {

namespace {

struct Line {
  int number;
  std::string text;
};

// Content lines with their 1-based numbers; blanks and '#' comments are
// dropped.
std::vector<Line> content_lines(const std::string &text) {
  std::vector<Line> lines;
  std::istringstream in(text);
  std::string raw;
  int number = 0;
  while (std::getline(in, raw)) {
    ++number;
    auto hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    if (raw.find_first_not_of(" \t\r") == std::string::npos) continue;
    lines.push_back({number, raw});
  }
  return lines;
}

struct Token {
  std::string text;
  int column;  // 1-based
};

std::vector<Token> tokenize(const std::string &text, int offset = 0) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    if (text[i] == ' ' || text[i] == '\t' || text[i] == '\r') {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < text.size() && text[j] != ' ' && text[j] != '\t' &&
           text[j] != '\r')
      ++j;
    tokens.push_back(
        {text.substr(i, j - i), static_cast<int>(i) + 1 + offset});
    i = j;
  }
  return tokens;
}

// Splits "keyword rest: payload" at the first ':'; the keyword is the
// first token before it.
struct Header {
  std::string keyword;
  std::string label;  // tokens between keyword and ':'
  std::string payload;
  int payload_column;
};

Header split_header(const Line &line) {
  auto colon = line.text.find(':');
  if (colon == std::string::npos)
    throw ParseError(line.number, 1, "expected ':' in line");
  auto head = tokenize(line.text.substr(0, colon));
  if (head.empty())
    throw ParseError(line.number, 1, "missing keyword before ':'");
  Header h;
  h.keyword = head[0].text;
  for (std::size_t i = 1; i < head.size(); ++i) {
    if (i > 1) h.label += " ";
    h.label += head[i].text;
  }
  h.payload = line.text.substr(colon + 1);
  h.payload_column = static_cast<int>(colon) + 2;
  return h;
}

int find_name(const std::vector<std::string> &names, const std::string &name) {
  auto it = std::find(names.begin(), names.end(), name);
  return it == names.end() ? -1 : static_cast<int>(it - names.begin());
}

int require_name(const std::vector<std::string> &names, const Token &token,
                 int line, const char *kind) {
  int i = find_name(names, token.text);
  if (i < 0)
    throw ParseError(line, token.column,
                     std::string("unknown ") + kind + " '" + token.text + "'");
  return i;
}

std::string trim(const std::string &s) {
  auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

}  // namespace

std::optional<std::string> bouquet_letters(const std::string &spec) {
  if (spec.rfind("bouquet:", 0) == 0) return trim(spec.substr(8));
  return std::nullopt;
}

DirectedGraph parse_graph_text(const std::string &text) {
  auto lines = content_lines(text);
  if (lines.empty()) throw ParseError(1, 1, "empty graph file");
  std::vector<std::string> vertices;
  std::vector<DirectedGraph::Edge> edges;
  bool have_vertices = false;
  for (const auto &line : lines) {
    Header h = split_header(line);
    auto payload = tokenize(h.payload, h.payload_column - 1);
    if (h.keyword == "bouquet") {
      if (lines.size() != 1)
        throw ParseError(line.number, 1,
                         "bouquet shorthand must be the only line");
      if (payload.size() != 1)
        throw ParseError(line.number, h.payload_column,
                         "expected one letter group after 'bouquet:'");
      return DirectedGraph::bouquet(payload[0].text);
    }
    if (h.keyword == "vertices") {
      if (have_vertices)
        throw ParseError(line.number, 1, "duplicate 'vertices:' line");
      have_vertices = true;
      for (const auto &t : payload) vertices.push_back(t.text);
    } else if (h.keyword == "edge") {
      if (!have_vertices)
        throw ParseError(line.number, 1, "'edge' before 'vertices:'");
      if (h.label.empty())
        throw ParseError(line.number, 1, "edge needs a name");
      if (payload.size() != 3 || payload[1].text != "->")
        throw ParseError(line.number, h.payload_column,
                         "expected 'edge name: u -> v'");
      int u = require_name(vertices, payload[0], line.number, "vertex");
      int v = require_name(vertices, payload[2], line.number, "vertex");
      edges.push_back({h.label, u, v});
    } else {
      throw ParseError(line.number, 1, "unknown keyword '" + h.keyword + "'");
    }
  }
  try {
    return DirectedGraph(std::move(vertices), std::move(edges));
  } catch (const std::invalid_argument &e) {
    throw ParseError(lines.back().number, 1, e.what());
  }
}

ParsedMap parse_map_text(
    const std::string &text,
    const std::function<DirectedGraph(const std::string &)> &resolve_graph) {
  auto lines = content_lines(text);
  if (lines.empty()) throw ParseError(1, 1, "empty map file");
  Header head = split_header(lines[0]);
  if (head.keyword != "on")
    throw ParseError(lines[0].number, 1, "map file must start with 'on:'");
  DirectedGraph g = resolve_graph(trim(head.payload));
  std::vector<PrefixMap::Entry> entries;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    Header h = split_header(lines[i]);
    if (h.keyword != "entry")
      throw ParseError(lines[i].number, 1,
                       "unknown keyword '" + h.keyword + "'");
    auto payload = tokenize(h.payload, h.payload_column - 1);
    // the empty bouquet path serializes as nothing, so allow 2 tokens
    std::vector<std::string> parts;
    int arrow = -1;
    for (std::size_t k = 0; k < payload.size(); ++k)
      if (payload[k].text == "->") arrow = static_cast<int>(k);
    if (arrow < 0 || payload.size() > 3)
      throw ParseError(lines[i].number, h.payload_column,
                       "expected 'entry: u -> v'");
    std::string u = arrow == 1 ? payload[0].text : "";
    std::string v =
        static_cast<int>(payload.size()) == arrow + 2 ? payload.back().text
                                                      : "";
    try {
      entries.push_back({parse_path(g, u), parse_path(g, v)});
    } catch (const std::invalid_argument &e) {
      throw ParseError(lines[i].number, h.payload_column, e.what());
    }
  }
  try {
    return {g, normalize(g, std::move(entries))};
  } catch (const std::invalid_argument &e) {
    throw ParseError(lines.back().number, 1, e.what());
  }
}

ParsedPair parse_pair_text(const std::string &text) {
  auto lines = content_lines(text);
  std::vector<std::string> atoms, elems;
  std::vector<std::vector<int>> mult, act, cls;
  std::vector<bool> have_mult, have_act;
  std::vector<Mask> have_equiv_atoms;
  bool ready = false;
  for (const auto &line : lines) {
    Header h = split_header(line);
    auto payload = tokenize(h.payload, h.payload_column - 1);
    if (h.keyword == "atoms") {
      if (!atoms.empty())
        throw ParseError(line.number, 1, "duplicate 'atoms:' line");
      for (const auto &t : payload) atoms.push_back(t.text);
      if (atoms.empty())
        throw ParseError(line.number, h.payload_column, "no atoms listed");
    } else if (h.keyword == "monoid") {
      if (!elems.empty())
        throw ParseError(line.number, 1, "duplicate 'monoid:' line");
      for (const auto &t : payload) elems.push_back(t.text);
      if (elems.empty())
        throw ParseError(line.number, h.payload_column, "no elements listed");
      int n = static_cast<int>(elems.size());
      int k = static_cast<int>(atoms.size());
      mult.assign(n, {});
      act.assign(n, {});
      cls.assign(k, std::vector<int>(n, -1));
      have_mult.assign(n, false);
      have_act.assign(n, false);
      ready = true;
    } else if (h.keyword == "mult" || h.keyword == "act") {
      if (!ready)
        throw ParseError(line.number, 1,
                         "'" + h.keyword + "' before 'monoid:'");
      Token label{h.label, 1};
      int m = require_name(elems, label, line.number, "element");
      bool is_mult = h.keyword == "mult";
      auto &flag = is_mult ? have_mult : have_act;
      if (flag[m])
        throw ParseError(line.number, 1,
                         "duplicate '" + h.keyword + " " + h.label + ":'");
      flag[m] = true;
      const auto &names = is_mult ? elems : atoms;
      std::size_t expected = is_mult ? elems.size() : atoms.size();
      if (payload.size() != expected)
        throw ParseError(line.number, h.payload_column,
                         "expected " + std::to_string(expected) +
                             " entries in '" + h.keyword + "' row");
      auto &row = is_mult ? mult[m] : act[m];
      for (const auto &t : payload)
        row.push_back(require_name(names, t, line.number,
                                   is_mult ? "element" : "atom"));
    } else if (h.keyword == "equiv") {
      if (!ready)
        throw ParseError(line.number, 1, "'equiv' before 'monoid:'");
      Token label{h.label, 1};
      int a = require_name(atoms, label, line.number, "atom");
      int next_class = 0;
      for (auto &c : cls[a])
        if (c >= 0)
          throw ParseError(line.number, 1,
                           "duplicate 'equiv " + h.label + ":'");
      std::string block;
      std::istringstream blocks(h.payload);
      while (std::getline(blocks, block, '|')) {
        auto names = tokenize(block);
        if (names.empty())
          throw ParseError(line.number, h.payload_column,
                           "empty block in 'equiv' partition");
        for (const auto &t : names) {
          int m = require_name(elems, {t.text, h.payload_column},
                               line.number, "element");
          if (cls[a][m] >= 0)
            throw ParseError(line.number, h.payload_column,
                             "element '" + t.text +
                                 "' appears in two blocks");
          cls[a][m] = next_class;
        }
        ++next_class;
      }
      for (std::size_t m = 0; m < elems.size(); ++m)
        if (cls[a][m] < 0)
          throw ParseError(line.number, h.payload_column,
                           "element '" + elems[m] +
                               "' missing from 'equiv " + h.label + ":'");
    } else {
      throw ParseError(line.number, 1, "unknown keyword '" + h.keyword + "'");
    }
  }
  if (atoms.empty()) throw ParseError(1, 1, "missing 'atoms:' line");
  if (elems.empty()) throw ParseError(1, 1, "missing 'monoid:' line");
  int last = lines.empty() ? 1 : lines.back().number;
  for (std::size_t m = 0; m < elems.size(); ++m) {
    if (!have_mult[m])
      throw ParseError(last, 1, "missing 'mult " + elems[m] + ":' row");
    if (!have_act[m])
      throw ParseError(last, 1, "missing 'act " + elems[m] + ":' row");
  }
  for (std::size_t a = 0; a < atoms.size(); ++a)
    if (cls[a].empty() || cls[a][0] < 0)
      throw ParseError(last, 1, "missing 'equiv " + atoms[a] + ":' row");
  ParsedPair result;
  try {
    result.pair.alg = BooleanAlgebra(atoms);
    result.pair.monoid = FiniteMonoid{0, std::move(mult)};
    result.pair.act = std::move(act);
    result.pair.bset = BSet(static_cast<int>(atoms.size()),
                            static_cast<int>(elems.size()), std::move(cls));
  } catch (const std::invalid_argument &e) {
    throw ParseError(last, 1, e.what());
  }
  result.elem_names = std::move(elems);
  return result;
}

ParsedCategory parse_category_text(const std::string &text) {
  auto lines = content_lines(text);
  std::vector<std::string> objects, arrows;
  std::vector<int> src, tgt;
  struct ComposeLine {
    int line;
    Token g, f, h;
  };
  std::vector<ComposeLine> composes;
  for (const auto &line : lines) {
    // compose lines carry no ':' and are handled in a second pass
    auto first = tokenize(line.text);
    if (!first.empty() && first[0].text == "compose") continue;
    Header h = split_header(line);
    auto payload = tokenize(h.payload, h.payload_column - 1);
    if (h.keyword == "objects") {
      if (!objects.empty())
        throw ParseError(line.number, 1, "duplicate 'objects:' line");
      for (const auto &t : payload) objects.push_back(t.text);
      if (objects.empty())
        throw ParseError(line.number, h.payload_column, "no objects listed");
      for (const auto &name : objects) {
        arrows.push_back("id_" + name);
        src.push_back(static_cast<int>(src.size()));
        tgt.push_back(static_cast<int>(tgt.size()));
      }
    } else if (h.keyword == "arrow") {
      if (objects.empty())
        throw ParseError(line.number, 1, "'arrow' before 'objects:'");
      if (h.label.empty())
        throw ParseError(line.number, 1, "arrow needs a name");
      if (find_name(arrows, h.label) >= 0)
        throw ParseError(line.number, 1,
                         "duplicate arrow '" + h.label + "'");
      if (payload.size() != 3 || payload[1].text != "->")
        throw ParseError(line.number, h.payload_column,
                         "expected 'arrow name: a -> b'");
      src.push_back(require_name(objects, payload[0], line.number, "object"));
      tgt.push_back(require_name(objects, payload[2], line.number, "object"));
      arrows.push_back(h.label);
    } else {
      throw ParseError(line.number, 1, "unknown keyword '" + h.keyword + "'");
    }
  }
  // second pass for compose lines, which have no ':'
  for (const auto &line : content_lines(text)) {
    auto tokens = tokenize(line.text);
    if (tokens.empty() || tokens[0].text != "compose") continue;
    if (tokens.size() != 5 || tokens[3].text != "=")
      throw ParseError(line.number, tokens[0].column,
                       "expected 'compose g f = h'");
    composes.push_back({line.number, tokens[1], tokens[2], tokens[4]});
  }
  if (objects.empty()) throw ParseError(1, 1, "missing 'objects:' line");
  int n = static_cast<int>(arrows.size());
  FiniteCategory cat;
  cat.objects = static_cast<int>(objects.size());
  cat.src = src;
  cat.tgt = tgt;
  for (int o = 0; o < cat.objects; ++o) cat.identity.push_back(o);
  cat.comp.assign(n, std::vector<int>(n, -1));
  for (int g = 0; g < n; ++g)
    for (int f = 0; f < n; ++f) {
      if (tgt[f] != src[g]) continue;
      if (f < cat.objects)
        cat.comp[g][f] = g;  // f is an identity
      else if (g < cat.objects)
        cat.comp[g][f] = f;  // g is an identity
    }
  for (const auto &c : composes) {
    int g = require_name(arrows, c.g, c.line, "arrow");
    int f = require_name(arrows, c.f, c.line, "arrow");
    int h = require_name(arrows, c.h, c.line, "arrow");
    if (tgt[f] != src[g])
      throw ParseError(c.line, c.g.column, "arrows '" + c.g.text + "' and '" +
                                               c.f.text +
                                               "' are not composable");
    if (src[h] != src[f] || tgt[h] != tgt[g])
      throw ParseError(c.line, c.h.column,
                       "composite '" + c.h.text + "' has the wrong type");
    cat.comp[g][f] = h;
  }
  return {std::move(cat), std::move(objects), std::move(arrows)};
}

namespace {

// Shared by the carrier formats: `atoms:` + `elem x: class(a)=i ...` lines.
ParsedBSet parse_carrier(const std::vector<Line> &lines,
                         std::vector<const Line *> *leftover) {
  std::vector<std::string> atoms, elems;
  std::vector<std::vector<int>> cls;  // per atom, per element
  for (const auto &line : lines) {
    Header h = split_header(line);
    auto payload = tokenize(h.payload, h.payload_column - 1);
    if (h.keyword == "atoms") {
      if (!atoms.empty())
        throw ParseError(line.number, 1, "duplicate 'atoms:' line");
      for (const auto &t : payload) atoms.push_back(t.text);
      if (atoms.empty())
        throw ParseError(line.number, h.payload_column, "no atoms listed");
      cls.assign(atoms.size(), {});
    } else if (h.keyword == "elem") {
      if (atoms.empty())
        throw ParseError(line.number, 1, "'elem' before 'atoms:'");
      if (h.label.empty())
        throw ParseError(line.number, 1, "elem needs a name");
      if (find_name(elems, h.label) >= 0)
        throw ParseError(line.number, 1,
                         "duplicate element '" + h.label + "'");
      std::vector<int> classes(atoms.size(), -1);
      for (const auto &t : payload) {
        auto open = t.text.find("class(");
        auto close = t.text.find(")=");
        if (open != 0 || close == std::string::npos)
          throw ParseError(line.number, t.column,
                           "expected 'class(atom)=index'");
        std::string atom = t.text.substr(6, close - 6);
        int a = find_name(atoms, atom);
        if (a < 0)
          throw ParseError(line.number, t.column,
                           "unknown atom '" + atom + "'");
        if (classes[a] >= 0)
          throw ParseError(line.number, t.column,
                           "duplicate class for atom '" + atom + "'");
        try {
          classes[a] = std::stoi(t.text.substr(close + 2));
        } catch (const std::exception &) {
          throw ParseError(line.number, t.column, "bad class index");
        }
        if (classes[a] < 0)
          throw ParseError(line.number, t.column, "bad class index");
      }
      for (std::size_t a = 0; a < atoms.size(); ++a)
        if (classes[a] < 0)
          throw ParseError(line.number, h.payload_column,
                           "missing class for atom '" + atoms[a] + "'");
      elems.push_back(h.label);
      for (std::size_t a = 0; a < atoms.size(); ++a)
        cls[a].push_back(classes[a]);
    } else if (leftover) {
      leftover->push_back(&line);
    } else {
      throw ParseError(line.number, 1, "unknown keyword '" + h.keyword + "'");
    }
  }
  if (atoms.empty()) throw ParseError(1, 1, "missing 'atoms:' line");
  if (elems.empty()) throw ParseError(1, 1, "no 'elem' lines");
  ParsedBSet result;
  try {
    result.set = BSet(static_cast<int>(atoms.size()),
                      static_cast<int>(elems.size()), cls);
  } catch (const std::invalid_argument &e) {
    throw ParseError(lines.back().number, 1, e.what());
  }
  result.atom_names = std::move(atoms);
  result.elem_names = std::move(elems);
  return result;
}

}  // namespace

ParsedBSet parse_bset_text(const std::string &text) {
  return parse_carrier(content_lines(text), nullptr);
}

ParsedBJM parse_bjm_text(const std::string &text, const ParsedPair &p) {
  std::vector<const Line *> action_lines;
  auto carrier = parse_carrier(content_lines(text), &action_lines);
  for (std::size_t a = 0; a < carrier.atom_names.size(); ++a)
    if (a >= static_cast<std::size_t>(p.pair.alg.arity()) ||
        carrier.atom_names[a] != p.pair.alg.atom_name(static_cast<int>(a)))
      throw ParseError(1, 1, "carrier atoms do not match the pair's atoms");
  int msize = p.pair.monoid.size();
  std::vector<std::vector<int>> maction(msize);
  std::vector<bool> have(msize, false);
  for (const Line *line : action_lines) {
    Header h = split_header(*line);
    if (h.keyword != "act")
      throw ParseError(line->number, 1,
                       "unknown keyword '" + h.keyword + "'");
    Token label{h.label, 1};
    int m = require_name(p.elem_names, label, line->number, "element");
    if (have[m])
      throw ParseError(line->number, 1,
                       "duplicate 'act " + h.label + ":' row");
    have[m] = true;
    auto payload = tokenize(h.payload, h.payload_column - 1);
    if (payload.size() != carrier.elem_names.size())
      throw ParseError(line->number, h.payload_column,
                       "expected " +
                           std::to_string(carrier.elem_names.size()) +
                           " entries in 'act' row");
    for (const auto &t : payload)
      maction[m].push_back(
          require_name(carrier.elem_names, t, line->number, "element"));
  }
  for (int m = 0; m < msize; ++m)
    if (!have[m])
      throw ParseError(1, 1,
                       "missing 'act " + p.elem_names[m] + ":' row");
  return {{carrier.set, std::move(maction)}, std::move(carrier.elem_names)};
}

MealyMachine parse_machine_text(const std::string &text) {
  auto lines = content_lines(text);
  std::string alphabet;
  std::vector<std::string> names;
  int alphabet_line = 0;
  for (const auto &line : lines) {
    Header h = split_header(line);
    if (h.keyword == "alphabet") {
      if (!alphabet.empty())
        throw ParseError(line.number, 1, "duplicate 'alphabet:' line");
      auto payload = tokenize(h.payload, h.payload_column - 1);
      for (const auto &t : payload) {
        if (t.text.size() != 1)
          throw ParseError(line.number, t.column,
                           "letters must be single characters");
        alphabet += t.text;
      }
      if (alphabet.empty())
        throw ParseError(line.number, h.payload_column, "no letters listed");
      alphabet_line = line.number;
    } else if (h.keyword == "state") {
      if (h.label.empty())
        throw ParseError(line.number, 1, "state needs a name");
      names.push_back(h.label);
    } else {
      throw ParseError(line.number, 1, "unknown keyword '" + h.keyword + "'");
    }
  }
  if (alphabet.empty()) throw ParseError(1, 1, "missing 'alphabet:' line");
  if (names.empty()) throw ParseError(alphabet_line, 1, "no 'state' lines");
  int identity = find_name(names, "e");
  if (identity < 0)
    throw ParseError(alphabet_line, 1, "no state named 'e'");
  int na = static_cast<int>(alphabet.size());
  std::vector<std::vector<int>> next(names.size(), std::vector<int>(na, -1));
  std::vector<std::vector<int>> out(names.size(), std::vector<int>(na, -1));
  int q = -1;
  for (const auto &line : lines) {
    Header h = split_header(line);
    if (h.keyword != "state") continue;
    ++q;
    std::string clause;
    std::istringstream clauses(h.payload);
    while (std::getline(clauses, clause, ',')) {
      auto tokens = tokenize(clause, h.payload_column - 1);
      if (tokens.size() != 3 || tokens[1].text != "->" ||
          tokens[0].text.size() != 1)
        throw ParseError(line.number, h.payload_column,
                         "expected 'in -> next/out' clauses");
      auto slash = tokens[2].text.rfind('/');
      if (slash == std::string::npos ||
          slash + 2 != tokens[2].text.size())
        throw ParseError(line.number, tokens[2].column,
                         "expected 'next/out' with a single output letter");
      auto apos = alphabet.find(tokens[0].text[0]);
      if (apos == std::string::npos)
        throw ParseError(line.number, tokens[0].column,
                         "unknown letter '" + tokens[0].text + "'");
      int a = static_cast<int>(apos);
      std::string target = tokens[2].text.substr(0, slash);
      int nq = find_name(names, target);
      if (nq < 0)
        throw ParseError(line.number, tokens[2].column,
                         "unknown state '" + target + "'");
      auto b = alphabet.find(tokens[2].text[slash + 1]);
      if (b == std::string::npos)
        throw ParseError(line.number, tokens[2].column,
                         "unknown output letter");
      if (next[q][a] >= 0)
        throw ParseError(line.number, tokens[0].column,
                         "duplicate clause for letter '" + tokens[0].text +
                             "'");
      next[q][a] = nq;
      out[q][a] = static_cast<int>(b);
    }
    for (int a = 0; a < na; ++a)
      if (next[q][a] < 0)
        throw ParseError(line.number, 1,
                         std::string("missing clause for letter '") +
                             alphabet[a] + "'");
  }
  try {
    return MealyMachine(alphabet, names, identity, std::move(next),
                        std::move(out));
  } catch (const std::invalid_argument &e) {
    throw ParseError(lines.back().number, 1, e.what());
  }
}

NekrashevychMap parse_nek_text(const MealyMachine &m,
                               const std::string &text) {
  auto lines = content_lines(text);
  std::vector<NekEntry> entries;
  for (const auto &line : lines) {
    Header h = split_header(line);
    if (h.keyword != "entry")
      throw ParseError(line.number, 1, "unknown keyword '" + h.keyword + "'");
    std::vector<std::string> parts;
    std::string part;
    std::istringstream segs(h.payload);
    while (std::getline(segs, part, '|')) parts.push_back(trim(part));
    if (parts.size() != 3)
      throw ParseError(line.number, h.payload_column,
                       "expected 'entry: u | p | v'");
    auto word = [&](const std::string &s) {
      if (s == "-") return std::string();
      return s;
    };
    NekEntry entry;
    entry.u = word(parts[0]);
    entry.v = word(parts[2]);
    try {
      entry.p = parse_state_word(m, parts[1]);
      for (char c : entry.u + entry.v)
        if (m.letter_index(c) < 0)
          throw std::invalid_argument(std::string("unknown letter '") + c +
                                      "'");
    } catch (const std::invalid_argument &e) {
      throw ParseError(line.number, h.payload_column, e.what());
    }
    entries.push_back(std::move(entry));
  }
  try {
    return nek_normalize(m, std::move(entries));
  } catch (const std::invalid_argument &e) {
    int last = lines.empty() ? 1 : lines.back().number;
    throw ParseError(last, 1, e.what());
  }
}

std::string format_nek(const MealyMachine &m, const NekrashevychMap &f) {
  std::string text;
  auto word = [](const std::string &w) { return w.empty() ? "-" : w; };
  for (const auto &entry : f.table)
    text += "entry: " + word(entry.u) + " | " +
            format_state_word(m, entry.p) + " | " + word(entry.v) + "\n";
  return text;
}

}  // namespace mpkit
