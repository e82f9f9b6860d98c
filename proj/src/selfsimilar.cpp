#include "mpkit/selfsimilar.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

namespace mpkit {

namespace {

std::string word_str(const std::string &w) { return w.empty() ? "ε" : w; }

void require_word(const MealyMachine &m, const std::string &w,
                  const char *what) {
  for (char c : w)
    if (m.letter_index(c) < 0)
      throw std::invalid_argument(std::string(what) + ": unknown letter '" +
                                  c + "'");
}

void require_states(const MealyMachine &m, const StateWord &p,
                    const char *what) {
  for (int q : p)
    if (q < 0 || q >= m.state_count())
      throw std::invalid_argument(std::string(what) +
                                  ": state index out of range");
}

// Traversal-order path of the bouquet for a consumed-first word string
// (reversal, chars to edge indices).
Path word_to_path(const MealyMachine &m, const std::string &w) {
  Path p = empty_path(0);
  for (auto it = w.rbegin(); it != w.rend(); ++it)
    p.edges.push_back(m.letter_index(*it));
  return p;
}

std::string path_to_word(const MealyMachine &m, const Path &p) {
  std::string w;
  for (auto it = p.edges.rbegin(); it != p.edges.rend(); ++it)
    w.push_back(m.letter(*it));
  return w;
}

// w ends with suffix (right-aligned), i.e. suffix's letters are consumed
// first among w's.
bool ends_with(const std::string &w, const std::string &suffix) {
  return w.size() >= suffix.size() &&
         std::equal(suffix.rbegin(), suffix.rend(), w.rbegin());
}

StateWord strip_identity(const MealyMachine &m, StateWord p) {
  std::erase(p, m.identity());
  return p;
}

StateWord concat_words(StateWord a, const StateWord &b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

}  // namespace

MealyMachine::MealyMachine(std::string alphabet,
                           std::vector<std::string> state_names, int identity,
                           std::vector<std::vector<int>> next,
                           std::vector<std::vector<int>> out)
    : alphabet_(std::move(alphabet)),
      state_names_(std::move(state_names)),
      identity_(identity),
      next_(std::move(next)),
      out_(std::move(out)) {
  int na = letter_count(), nq = state_count();
  if (na == 0) throw std::invalid_argument("machine: empty alphabet");
  if (nq == 0) throw std::invalid_argument("machine: no states");
  for (int i = 0; i < na; ++i)
    for (int j = i + 1; j < na; ++j)
      if (alphabet_[i] == alphabet_[j])
        throw std::invalid_argument("machine: duplicate letter");
  for (int i = 0; i < nq; ++i)
    for (int j = i + 1; j < nq; ++j)
      if (state_names_[i] == state_names_[j])
        throw std::invalid_argument("machine: duplicate state name");
  if (identity_ < 0 || identity_ >= nq)
    throw std::invalid_argument("machine: identity state out of range");
  if (static_cast<int>(next_.size()) != nq ||
      static_cast<int>(out_.size()) != nq)
    throw std::invalid_argument("machine: transition table has wrong height");
  for (int q = 0; q < nq; ++q) {
    if (static_cast<int>(next_[q].size()) != na ||
        static_cast<int>(out_[q].size()) != na)
      throw std::invalid_argument("machine: transition row has wrong width");
    for (int a = 0; a < na; ++a) {
      if (next_[q][a] < 0 || next_[q][a] >= nq)
        throw std::invalid_argument("machine: next state out of range");
      if (out_[q][a] < 0 || out_[q][a] >= na)
        throw std::invalid_argument("machine: output letter out of range");
    }
  }
  for (int a = 0; a < na; ++a)
    if (next_[identity_][a] != identity_ || out_[identity_][a] != a)
      throw std::invalid_argument(
          "machine: identity state does not act trivially");
}

int MealyMachine::letter_index(char c) const {
  auto pos = alphabet_.find(c);
  return pos == std::string::npos ? -1 : static_cast<int>(pos);
}

int MealyMachine::state_index(const std::string &name) const {
  for (int q = 0; q < state_count(); ++q)
    if (state_names_[q] == name) return q;
  return -1;
}

DirectedGraph MealyMachine::bouquet() const {
  return DirectedGraph::bouquet(alphabet_);
}

bool MealyMachine::operator==(const MealyMachine &other) const {
  return alphabet_ == other.alphabet_ &&
         state_names_ == other.state_names_ &&
         identity_ == other.identity_ && next_ == other.next_ &&
         out_ == other.out_;
}

int star_letter(const MealyMachine &m, int a, const StateWord &p) {
  for (int q : p) a = m.out_letter(a, q);
  return a;
}

StateWord restrict_letter(const MealyMachine &m, const StateWord &p, int a) {
  StateWord r;
  r.reserve(p.size());
  for (int q : p) {
    r.push_back(m.restrict_state(q, a));
    a = m.out_letter(a, q);
  }
  return r;
}

StateWord restrict_word(const MealyMachine &m, const StateWord &p,
                        const std::string &w) {
  StateWord r = p;
  for (auto it = w.rbegin(); it != w.rend(); ++it)
    r = restrict_letter(m, r, m.letter_index(*it));
  return r;
}

std::string star_word(const MealyMachine &m, const std::string &w,
                      const StateWord &p) {
  std::string result = w;
  StateWord cur = p;
  for (int i = static_cast<int>(w.size()) - 1; i >= 0; --i) {
    int a = m.letter_index(w[i]);
    result[i] = m.letter(star_letter(m, a, cur));
    cur = restrict_letter(m, cur, a);
  }
  return result;
}

PointSpec apply_point(const MealyMachine &m, const StateWord &p,
                      const PointSpec &w) {
  auto g = m.bouquet();
  PointSpec in = normalize_point(g, w);
  StateWord cur = p;
  std::vector<int> head;
  for (int e : in.tail.edges) {
    head.push_back(star_letter(m, e, cur));
    cur = restrict_letter(m, cur, e);
  }
  int len = in.cycle.length();
  std::map<std::pair<int, StateWord>, int> seen;
  std::vector<int> emitted;
  int pos = 0;
  std::size_t bound = static_cast<std::size_t>(len);
  for (std::size_t i = 0; i < p.size(); ++i) bound *= m.state_count();
  int cycle_from;
  while (true) {
    auto key = std::make_pair(pos, cur);
    auto it = seen.find(key);
    if (it != seen.end()) {
      cycle_from = it->second;
      break;
    }
    assert(seen.size() <= bound);
    seen.emplace(key, static_cast<int>(emitted.size()));
    int e = in.cycle.edges[pos];
    emitted.push_back(star_letter(m, e, cur));
    cur = restrict_letter(m, cur, e);
    pos = (pos + 1) % len;
  }
  PointSpec out;
  out.tail = empty_path(0);
  out.tail.edges = head;
  out.tail.edges.insert(out.tail.edges.end(), emitted.begin(),
                        emitted.begin() + cycle_from);
  out.cycle = empty_path(0);
  out.cycle.edges.assign(emitted.begin() + cycle_from, emitted.end());
  return normalize_point(g, out);
}

CheckReport check_machine(const MealyMachine &m, int depth) {
  CheckReport report;
  int e = m.identity();
  for (int a = 0; a < m.letter_count(); ++a) {
    if (m.restrict_state(e, a) != e)
      report.fail("identity state has nontrivial restriction at letter " +
                  std::string(1, m.letter(a)));
    if (m.out_letter(a, e) != a)
      report.fail("identity state moves letter " +
                  std::string(1, m.letter(a)));
  }
  auto words = state_words(m, depth);
  for (const auto &p : words)
    for (const auto &q : words) {
      StateWord pq = concat_words(p, q);
      for (int a = 0; a < m.letter_count(); ++a) {
        int lhs_star = star_letter(m, a, pq);
        int rhs_star = star_letter(m, star_letter(m, a, p), q);
        if (lhs_star != rhs_star)
          report.fail("a⋆(pq) ≠ (a⋆p)⋆q at a=" +
                      std::string(1, m.letter(a)) + ", p=" +
                      format_state_word(m, p) + ", q=" +
                      format_state_word(m, q));
        StateWord lhs_res = restrict_letter(m, pq, a);
        StateWord rhs_res = concat_words(
            restrict_letter(m, p, a),
            restrict_letter(m, q, star_letter(m, a, p)));
        if (lhs_res != rhs_res)
          report.fail("(pq)|_a ≠ p|_a · q|_{a⋆p} at a=" +
                      std::string(1, m.letter(a)) + ", p=" +
                      format_state_word(m, p) + ", q=" +
                      format_state_word(m, q));
      }
    }
  return report;
}

std::vector<StateWord> state_words(const MealyMachine &m, int max_len) {
  std::vector<StateWord> result{{}};
  std::size_t level_begin = 0;
  for (int len = 1; len <= max_len; ++len) {
    std::size_t level_end = result.size();
    for (std::size_t i = level_begin; i < level_end; ++i)
      for (int q = 0; q < m.state_count(); ++q) {
        StateWord w = result[i];
        w.push_back(q);
        result.push_back(std::move(w));
      }
    level_begin = level_end;
  }
  return result;
}

FaithfulnessReport faithful_to_depth(const MealyMachine &m, int depth) {
  std::vector<std::string> probes{""};
  std::size_t level_begin = 0;
  for (int len = 1; len <= depth; ++len) {
    std::size_t level_end = probes.size();
    for (std::size_t i = level_begin; i < level_end; ++i)
      for (int a = 0; a < m.letter_count(); ++a)
        probes.push_back(std::string(1, m.letter(a)) + probes[i]);
    level_begin = level_end;
  }
  FaithfulnessReport report;
  std::map<std::vector<std::string>, StateWord> first;
  for (const auto &p : state_words(m, depth)) {
    // words differing only by identity letters act equally by definition
    if (std::find(p.begin(), p.end(), m.identity()) != p.end()) continue;
    std::vector<std::string> signature;
    signature.reserve(probes.size());
    for (const auto &w : probes) signature.push_back(star_word(m, w, p));
    auto [it, fresh] = first.emplace(std::move(signature), p);
    if (!fresh) {
      report.separated = false;
      report.collisions.emplace_back(it->second, p);
    }
  }
  return report;
}

ZSElement zappa_szep_mul(const MealyMachine &m, const ZSElement &x,
                         const ZSElement &y) {
  ZSElement r;
  r.p = concat_words(x.p, restrict_word(m, y.p, x.u));
  r.u = star_word(m, x.u, y.p) + y.u;
  return r;
}

namespace {

// Inverts a one-step expansion family: finds a state word p with
// p|_a = branch[a].p (identities stripped) and a⋆p = the emitted letter,
// for every letter a.  Words of length ≤ max_len are searched shortest
// first, lexicographically, with per-position pruning.
bool find_ancestor(const MealyMachine &m,
                   const std::vector<const NekEntry *> &branch, int max_len,
                   StateWord &found) {
  int na = m.letter_count();
  struct Frame {
    std::vector<int> cur;          // current letter per branch
    std::vector<std::size_t> pos;  // matched length of branch word
  };
  StateWord word;
  auto search = [&](auto &&self, const Frame &frame, int remaining) -> bool {
    if (remaining == 0) {
      for (int a = 0; a < na; ++a)
        if (frame.pos[a] != branch[a]->p.size() ||
            m.letter(frame.cur[a]) != branch[a]->v.front())
          return false;
      found = word;
      return true;
    }
    for (int t = 0; t < m.state_count(); ++t) {
      Frame next = frame;
      bool ok = true;
      for (int a = 0; a < na && ok; ++a) {
        int r = m.restrict_state(t, next.cur[a]);
        if (r != m.identity()) {
          if (next.pos[a] < branch[a]->p.size() &&
              branch[a]->p[next.pos[a]] == r)
            ++next.pos[a];
          else
            ok = false;
        }
        next.cur[a] = m.out_letter(next.cur[a], t);
      }
      if (!ok) continue;
      word.push_back(t);
      if (self(self, next, remaining - 1)) return true;
      word.pop_back();
    }
    return false;
  };
  Frame root;
  root.cur.resize(na);
  root.pos.assign(na, 0);
  for (int a = 0; a < na; ++a) root.cur[a] = a;
  for (int len = 0; len <= max_len; ++len) {
    word.clear();
    if (search(search, root, len)) return true;
  }
  return false;
}

}  // namespace

NekrashevychMap nek_normalize(const MealyMachine &m,
                              std::vector<NekEntry> raw) {
  for (auto &entry : raw) {
    require_word(m, entry.u, "map entry domain");
    require_word(m, entry.v, "map entry image");
    require_states(m, entry.p, "map entry");
    entry.p = strip_identity(m, entry.p);
  }
  std::sort(raw.begin(), raw.end());
  raw.erase(std::unique(raw.begin(), raw.end()), raw.end());
  bool changed = true;
  while (changed) {
    changed = false;
    // collapse families {(a·u, p_a, c_a·v) : a ∈ A} back to (u, p, v)
    int na = m.letter_count();
    for (std::size_t i = 0; i < raw.size() && !changed; ++i) {
      if (raw[i].u.empty() || raw[i].v.empty()) continue;
      std::string u = raw[i].u.substr(1);
      std::string v = raw[i].v.substr(1);
      std::vector<const NekEntry *> branch(na, nullptr);
      int found_branches = 0;
      int max_len = 0;
      for (const auto &entry : raw) {
        if (entry.u.size() != u.size() + 1 || entry.u.substr(1) != u) continue;
        if (entry.v.empty() || entry.v.substr(1) != v) continue;
        int a = m.letter_index(entry.u.front());
        if (branch[a]) continue;
        branch[a] = &entry;
        ++found_branches;
        max_len = std::max(max_len, static_cast<int>(entry.p.size()));
      }
      if (found_branches != na) continue;
      StateWord ancestor;
      if (!find_ancestor(m, branch, max_len + 1, ancestor)) continue;
      std::vector<NekEntry> next;
      for (const auto &entry : raw) {
        bool member = false;
        for (int a = 0; a < na; ++a) member = member || branch[a] == &entry;
        if (!member) next.push_back(entry);
      }
      next.push_back({u, strip_identity(m, ancestor), v});
      raw = std::move(next);
      std::sort(raw.begin(), raw.end());
      changed = true;
    }
  }
  for (std::size_t i = 0; i < raw.size(); ++i)
    for (std::size_t j = i + 1; j < raw.size(); ++j)
      if (ends_with(raw[i].u, raw[j].u) || ends_with(raw[j].u, raw[i].u))
        throw std::invalid_argument("map entry domains overlap: " +
                                    word_str(raw[i].u) + " and " +
                                    word_str(raw[j].u));
  return {std::move(raw)};
}

NekrashevychMap nek_identity() { return {{{"", {}, ""}}}; }

const NekEntry *nek_entry_at(const MealyMachine &m, const NekrashevychMap &f,
                             const PointSpec &w) {
  auto g = m.bouquet();
  for (const auto &entry : f.table) {
    Path prefix = point_prefix(g, w, static_cast<int>(entry.u.size()));
    if (prefix == word_to_path(m, entry.u)) return &entry;
  }
  return nullptr;
}

PointSpec nek_apply(const MealyMachine &m, const NekrashevychMap &f,
                    const PointSpec &w) {
  const NekEntry *entry = nek_entry_at(m, f, w);
  if (!entry) throw std::domain_error("point outside the map's domain");
  auto g = m.bouquet();
  PointSpec rest = point_shift(g, w, static_cast<int>(entry->u.size()));
  PointSpec image = apply_point(m, entry->p, rest);
  return point_prepend(g, word_to_path(m, entry->v), image);
}

NekrashevychMap nek_compose(const MealyMachine &m, const NekrashevychMap &f,
                            const NekrashevychMap &g) {
  std::vector<NekEntry> work = f.table, out;
  while (!work.empty()) {
    NekEntry e = std::move(work.back());
    work.pop_back();
    const NekEntry *match = nullptr;
    bool needs_more = false;
    for (const auto &ge : g.table) {
      if (ends_with(e.v, ge.u)) {
        match = &ge;
        break;
      }
      if (ends_with(ge.u, e.v)) needs_more = true;
    }
    if (match) {
      std::string left = e.v.substr(0, e.v.size() - match->u.size());
      NekEntry composed;
      composed.u = e.u;
      composed.p = concat_words(e.p, restrict_word(m, match->p, left));
      composed.v = star_word(m, left, match->p) + match->v;
      out.push_back(std::move(composed));
    } else if (needs_more) {
      // image word too short to decide; expand one consumed letter
      for (int a = 0; a < m.letter_count(); ++a) {
        NekEntry ex;
        ex.u = std::string(1, m.letter(a)) + e.u;
        ex.p = restrict_letter(m, e.p, a);
        ex.v = std::string(1, m.letter(star_letter(m, a, e.p))) + e.v;
        work.push_back(std::move(ex));
      }
    }
    // otherwise the branch leaves g's domain and is dropped
  }
  return nek_normalize(m, std::move(out));
}

std::vector<int> invertible_states(const MealyMachine &m) {
  std::vector<bool> in(m.state_count(), true);
  for (int q = 0; q < m.state_count(); ++q) {
    std::vector<bool> hit(m.letter_count(), false);
    for (int a = 0; a < m.letter_count(); ++a) hit[m.out_letter(a, q)] = true;
    for (int a = 0; a < m.letter_count(); ++a)
      if (!hit[a]) in[q] = false;
  }
  bool changed = true;
  while (changed) {
    changed = false;
    for (int q = 0; q < m.state_count(); ++q) {
      if (!in[q]) continue;
      for (int a = 0; a < m.letter_count(); ++a)
        if (!in[m.restrict_state(q, a)]) {
          in[q] = false;
          changed = true;
          break;
        }
    }
  }
  std::vector<int> result;
  for (int q = 0; q < m.state_count(); ++q)
    if (in[q]) result.push_back(q);
  return result;
}

MealyMachine restrict_to_group(const MealyMachine &m) {
  auto keep = invertible_states(m);
  std::vector<int> newindex(m.state_count(), -1);
  for (std::size_t i = 0; i < keep.size(); ++i) newindex[keep[i]] = i;
  std::vector<std::string> names;
  std::vector<std::vector<int>> next, out;
  for (int q : keep) {
    names.push_back(m.state_name(q));
    std::vector<int> nrow, orow;
    for (int a = 0; a < m.letter_count(); ++a) {
      nrow.push_back(newindex[m.restrict_state(q, a)]);
      orow.push_back(m.out_letter(a, q));
    }
    next.push_back(std::move(nrow));
    out.push_back(std::move(orow));
  }
  return MealyMachine(m.alphabet(), std::move(names),
                      newindex[m.identity()], std::move(next),
                      std::move(out));
}

GroupoidalSearch groupoidal_witness(const MealyMachine &m, const StateWord &p,
                                    int depth) {
  auto keep = invertible_states(m);
  std::vector<bool> inv(m.state_count(), false);
  for (int q : keep) inv[q] = true;
  auto all_invertible = [&](const StateWord &w) {
    for (int q : w)
      if (!inv[q]) return false;
    return true;
  };
  // minimal words (consumed-first order) whose restriction of p lands in
  // the invertible states; the set of all such words is extension-closed
  GroupoidalSearch result;
  std::vector<std::pair<std::string, StateWord>> frontier{{"", p}};
  for (int len = 0; len <= depth; ++len) {
    std::vector<std::pair<std::string, StateWord>> next;
    for (auto &[w, r] : frontier) {
      if (all_invertible(r))
        result.basis.push_back(w);
      else if (len < depth)
        for (int a = 0; a < m.letter_count(); ++a)
          next.emplace_back(std::string(1, m.letter(a)) + w,
                            restrict_letter(m, r, a));
    }
    frontier = std::move(next);
  }
  auto g = m.bouquet();
  std::vector<Path> basis_paths;
  for (const auto &w : result.basis) basis_paths.push_back(word_to_path(m, w));
  if (is_dense(g, basis_paths)) {
    result.decided = true;
    std::sort(result.basis.begin(), result.basis.end());
  } else {
    result.basis.clear();
  }
  return result;
}

CheckReport separatedness_check(const MealyMachine &m, int depth,
                                std::uint64_t seed, int samples) {
  CheckReport report;
  std::mt19937_64 rng(seed);
  auto probes = [&] {
    std::vector<std::string> ws{""};
    std::size_t begin = 0;
    for (int len = 1; len <= depth; ++len) {
      std::size_t end = ws.size();
      for (std::size_t i = begin; i < end; ++i)
        for (int a = 0; a < m.letter_count(); ++a)
          ws.push_back(std::string(1, m.letter(a)) + ws[i]);
      begin = end;
    }
    return ws;
  }();
  auto acts_equal = [&](const StateWord &p, const StateWord &q) {
    for (const auto &w : probes)
      if (star_word(m, w, p) != star_word(m, w, q)) return false;
    return true;
  };
  int tested = 0;
  while (tested < samples) {
    ZSElement x, y;
    int lp = static_cast<int>(rng() % (depth + 1));
    int lq = static_cast<int>(rng() % (depth + 1));
    int lu = static_cast<int>(rng() % (depth + 1));
    int lv = static_cast<int>(rng() % (depth + 1));
    for (int i = 0; i < lp; ++i)
      x.p.push_back(static_cast<int>(rng() % m.state_count()));
    for (int i = 0; i < lq; ++i)
      y.p.push_back(static_cast<int>(rng() % m.state_count()));
    for (int i = 0; i < lu; ++i)
      x.u.push_back(m.letter(static_cast<int>(rng() % m.letter_count())));
    for (int i = 0; i < lv; ++i)
      y.u.push_back(m.letter(static_cast<int>(rng() % m.letter_count())));
    if (x.u == y.u && acts_equal(x.p, y.p)) continue;
    ++tested;
    bool distinguished = false;
    for (int a = 0; a < m.letter_count() && !distinguished; ++a) {
      ZSElement gen{{}, std::string(1, m.letter(a))};
      ZSElement xa = zappa_szep_mul(m, gen, x);
      ZSElement ya = zappa_szep_mul(m, gen, y);
      distinguished = xa.u != ya.u || !acts_equal(xa.p, ya.p);
    }
    if (!distinguished)
      report.fail("no generator separates (" + format_state_word(m, x.p) +
                  ", " + word_str(x.u) + ") from (" +
                  format_state_word(m, y.p) + ", " + word_str(y.u) + ")");
  }
  return report;
}

std::string format_state_word(const MealyMachine &m, const StateWord &p) {
  if (p.empty()) return "1";
  std::string text;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) text += " ";
    text += m.state_name(p[i]);
  }
  return text;
}

StateWord parse_state_word(const MealyMachine &m, const std::string &text) {
  StateWord p;
  std::istringstream in(text);
  std::string token;
  while (in >> token) {
    if (token == "1" && m.state_index("1") < 0) continue;
    int q = m.state_index(token);
    if (q < 0)
      throw std::invalid_argument("unknown state '" + token + "'");
    p.push_back(q);
  }
  return p;
}

}  // namespace mpkit
