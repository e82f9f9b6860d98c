#include "mpkit/dispatch.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <optional>
#include <random>
#include <sstream>

#include "mpkit/formats.hpp"
#include "mpkit/matched_finite.hpp"
#include "mpkit/path_space.hpp"
#include "mpkit/prefix_maps.hpp"
#include "mpkit/selfsimilar.hpp"

namespace mpkit {

namespace {

struct CommandError {
  int code;
  std::string message;
};

[[noreturn]] void input_error(const std::string &message) {
  throw CommandError{2, message};
}

struct Options {
  std::string verb;
  std::vector<std::string> positional;
  std::uint64_t seed = 20240817;
  int depth = 3;
  std::string point;
  std::string format = "plain";
  std::string graph, pair, category, machine, word;
  bool negative_control = false;

  char sep() const { return format == "tsv" ? '\t' : ' '; }
};

Options parse_options(const std::vector<std::string> &args) {
  Options opt;
  if (args.empty()) input_error("no verb given");
  opt.verb = args[0];
  auto value = [&](std::size_t &i) -> const std::string & {
    if (i + 1 >= args.size())
      input_error("flag " + args[i] + " needs a value");
    return args[++i];
  };
  for (std::size_t i = 1; i < args.size(); ++i) {
    const std::string &a = args[i];
    if (a == "--seed") {
      try {
        opt.seed = std::stoull(value(i));
      } catch (const std::exception &) {
        input_error("bad --seed value");
      }
    } else if (a == "--depth") {
      try {
        opt.depth = std::stoi(value(i));
      } catch (const std::exception &) {
        input_error("bad --depth value");
      }
      if (opt.depth < 1) input_error("--depth must be at least 1");
    } else if (a == "--point") {
      opt.point = value(i);
    } else if (a == "--format") {
      opt.format = value(i);
      if (opt.format != "plain" && opt.format != "tsv")
        input_error("--format must be plain or tsv");
    } else if (a == "--graph") {
      opt.graph = value(i);
    } else if (a == "--pair") {
      opt.pair = value(i);
    } else if (a == "--category") {
      opt.category = value(i);
    } else if (a == "--machine") {
      opt.machine = value(i);
    } else if (a == "--word") {
      opt.word = value(i);
    } else if (a == "--negative-control") {
      opt.negative_control = true;
    } else if (a.rfind("--", 0) == 0) {
      input_error("unknown flag " + a);
    } else {
      opt.positional.push_back(a);
    }
  }
  return opt;
}

std::string read_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) input_error("cannot open file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

DirectedGraph resolve_graph(const std::string &spec) {
  if (auto letters = bouquet_letters(spec)) {
    if (letters->empty()) input_error("bouquet spec has no letters");
    try {
      return DirectedGraph::bouquet(*letters);
    } catch (const std::invalid_argument &e) {
      input_error(e.what());
    }
  }
  return parse_graph_text(read_file(spec));
}

DirectedGraph graph_from(const Options &opt) {
  if (opt.graph.empty()) input_error("this verb needs --graph");
  return resolve_graph(opt.graph);
}

std::string graph_spec_of(const Options &opt, const DirectedGraph &g) {
  if (!opt.graph.empty()) return opt.graph;
  if (g.is_bouquet()) {
    std::string letters;
    for (int e = 0; e < g.edge_count(); ++e) letters += g.edge(e).name;
    return "bouquet:" + letters;
  }
  return "<graph>";
}

struct LoadedMap {
  ParsedMap parsed;
  std::string spec;  // the on: header, for reprinting
};

LoadedMap load_map(const std::string &path) {
  std::string text = read_file(path);
  LoadedMap loaded{parse_map_text(text,
                                  [](const std::string &spec) {
                                    return resolve_graph(spec);
                                  }),
                   ""};
  // recover the header spec for deterministic reprinting
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    auto pos = line.find("on:");
    if (pos != std::string::npos) {
      loaded.spec = line.substr(pos + 3);
      auto a = loaded.spec.find_first_not_of(" \t\r");
      loaded.spec = a == std::string::npos ? "" : loaded.spec.substr(a);
      auto b = loaded.spec.find_last_not_of(" \t\r");
      if (b != std::string::npos) loaded.spec.resize(b + 1);
      break;
    }
  }
  return loaded;
}

// Monoid element names for a pair loaded from --pair or --category.
struct LoadedPair {
  MatchedPair pair;
  std::vector<std::string> elem_names;
};

LoadedPair load_pair(const Options &opt) {
  if (!opt.pair.empty() && !opt.category.empty())
    input_error("give either --pair or --category, not both");
  if (!opt.pair.empty()) {
    ParsedPair p = parse_pair_text(read_file(opt.pair));
    return {std::move(p.pair), std::move(p.elem_names)};
  }
  if (!opt.category.empty()) {
    ParsedCategory c = parse_category_text(read_file(opt.category));
    auto report = c.cat.check();
    if (!report.ok())
      input_error("invalid category: " + report.failures.front());
    CategoryPair cp = from_finite_category(c.cat);
    LoadedPair result;
    result.pair = std::move(cp.pair);
    for (const auto &section : cp.sections) {
      std::string name = "[";
      for (std::size_t o = 0; o < section.size(); ++o) {
        if (o) name += ",";
        name += c.arrow_names[section[o]];
      }
      name += "]";
      result.elem_names.push_back(std::move(name));
    }
    return result;
  }
  input_error("this verb needs --pair or --category");
}

Clopen clopen_from_args(const DirectedGraph &g, const Options &opt) {
  std::vector<Path> basis;
  for (const auto &text : opt.positional) {
    try {
      basis.push_back(parse_path(g, text));
    } catch (const std::invalid_argument &e) {
      input_error(std::string("bad path '") + text + "': " + e.what());
    }
  }
  return closure(g, std::move(basis));
}

void print_map(std::ostringstream &out, const std::string &spec,
               const DirectedGraph &g, const PrefixMap &f) {
  out << "on: " << spec << "\n";
  for (const auto &entry : f.table)
    out << "entry: " << format_path(g, entry.u) << " -> "
        << format_path(g, entry.v) << "\n";
}

int report_verdict(std::ostringstream &out, const CheckReport &report,
                   const std::string &label) {
  if (report.ok()) {
    out << label << ": ok\n";
    return 0;
  }
  out << label << ": failed\n";
  for (const auto &f : report.failures) out << "fail: " << f << "\n";
  return 1;
}

// ---------------------------------------------------------------- verbs --

int cmd_check_pair(const Options &opt, std::ostringstream &out) {
  LoadedPair p = load_pair(opt);
  out << "atoms: " << p.pair.alg.arity() << "\n";
  out << "elements: " << p.pair.monoid.size() << "\n";
  return report_verdict(out, check_matched_pair(p.pair), "pair");
}

int cmd_brm(const Options &opt, std::ostringstream &out) {
  LoadedPair p = load_pair(opt);
  auto pre = check_matched_pair(p.pair);
  if (!pre.ok())
    input_error("not a matched pair: " + pre.failures.front());
  FiniteBRM s(p.pair);
  char sep = opt.sep();
  out << "elements: " << s.size() << "\n";
  for (int i = 0; i < s.size(); ++i) {
    const auto &el = s.element(i);
    out << i << sep << p.pair.alg.format(el.b) << sep
        << p.elem_names[el.m] << "\n";
  }
  out << "unit: " << s.unit() << "\n";
  out << "zero: " << s.zero() << "\n";
  return report_verdict(out, check_brm_axioms(s), "axioms");
}

int cmd_compose(const Options &opt, std::ostringstream &out) {
  if (opt.positional.size() != 2)
    input_error("compose needs two map files");
  LoadedMap f = load_map(opt.positional[0]);
  LoadedMap h = load_map(opt.positional[1]);
  if (!(f.parsed.graph == h.parsed.graph))
    input_error("maps are over different graphs");
  PrefixMap composed = compose(f.parsed.graph, f.parsed.map, h.parsed.map);
  print_map(out, f.spec, f.parsed.graph, composed);
  return 0;
}

int cmd_normalize(const Options &opt, std::ostringstream &out) {
  if (opt.positional.size() != 1)
    input_error("normalize needs one map file");
  LoadedMap f = load_map(opt.positional[0]);
  print_map(out, f.spec, f.parsed.graph, f.parsed.map);
  return 0;
}

int cmd_clopen(const Options &opt, std::ostringstream &out) {
  DirectedGraph g = graph_from(opt);
  Clopen c = clopen_from_args(g, opt);
  out << "basis: " << c.basis.size() << "\n";
  for (const auto &p : c.basis) out << format_path(g, p) << "\n";
  return 0;
}

int cmd_dense(const Options &opt, std::ostringstream &out) {
  DirectedGraph g = graph_from(opt);
  std::vector<Path> basis;
  for (const auto &text : opt.positional) {
    try {
      basis.push_back(parse_path(g, text));
    } catch (const std::invalid_argument &e) {
      input_error(std::string("bad path '") + text + "': " + e.what());
    }
  }
  if (is_dense(g, basis)) {
    out << "dense\n";
    return 0;
  }
  out << "not dense\n";
  return 1;
}

int cmd_complement(const Options &opt, std::ostringstream &out) {
  DirectedGraph g = graph_from(opt);
  Clopen c = complement(g, clopen_from_args(g, opt));
  out << "basis: " << c.basis.size() << "\n";
  for (const auto &p : c.basis) out << format_path(g, p) << "\n";
  return 0;
}

int cmd_cofinal(const Options &opt, std::ostringstream &out) {
  DirectedGraph g = graph_from(opt);
  auto cofinal = cofinal_vertices(g);
  char sep = opt.sep();
  bool all = true;
  for (int v = 0; v < g.vertex_count(); ++v) {
    bool yes = std::find(cofinal.begin(), cofinal.end(), v) != cofinal.end();
    all = all && yes;
    out << g.vertex_name(v) << sep << (yes ? "cofinal" : "not-cofinal")
        << "\n";
  }
  return all ? 0 : 1;
}

int cmd_topos(const Options &opt, std::ostringstream &out) {
  if (!opt.graph.empty()) {
    DirectedGraph g = graph_from(opt);
    auto cofinal = cofinal_vertices(g);
    if (!opt.positional.empty()) {
      Clopen c = clopen_from_args(g, opt);
      if (c.is_zero()) input_error("the zero clopen has no witness");
      ToposWitness w = topos_witness(g, c);
      if (w.ok) {
        out << "witness:\n";
        print_map(out, graph_spec_of(opt, g), g, w.map);
        return 0;
      }
      out << "no witness: vertex " << g.vertex_name(w.bad_vertex)
          << " is not cofinal\n";
      return 1;
    }
    if (static_cast<int>(cofinal.size()) == g.vertex_count()) {
      out << "topos: yes\n";
      return 0;
    }
    out << "topos: no\n";
    for (int v = 0; v < g.vertex_count(); ++v)
      if (std::find(cofinal.begin(), cofinal.end(), v) == cofinal.end()) {
        out << "vertex " << g.vertex_name(v) << " is not cofinal\n";
        break;
      }
    return 1;
  }
  LoadedPair p = load_pair(opt);
  auto pre = check_matched_pair(p.pair);
  if (!pre.ok())
    input_error("not a matched pair: " + pre.failures.front());
  ToposVerdict v = is_topos(p.pair);
  char sep = opt.sep();
  if (v.topos) {
    out << "topos: yes\n";
    for (int a = 0; a < p.pair.alg.arity(); ++a)
      out << p.pair.alg.atom_name(a) << sep << p.elem_names[v.witness[a]]
          << "\n";
    return 0;
  }
  out << "topos: no\n";
  for (int a = 0; a < p.pair.alg.arity(); ++a)
    if (v.witness[a] < 0) {
      out << "atom " << p.pair.alg.atom_name(a)
          << " is hit by no constant action\n";
      break;
    }
  return 1;
}

int cmd_groupoidal(const Options &opt, std::ostringstream &out) {
  if (!opt.machine.empty()) {
    MealyMachine m = parse_machine_text(read_file(opt.machine));
    StateWord p;
    try {
      p = parse_state_word(m, opt.word);
    } catch (const std::invalid_argument &e) {
      input_error(e.what());
    }
    GroupoidalSearch s = groupoidal_witness(m, p, opt.depth);
    if (s.decided) {
      out << "witness basis:\n";
      for (const auto &w : s.basis) out << (w.empty() ? "-" : w) << "\n";
      return 0;
    }
    out << "undecided at depth " << opt.depth << "\n";
    return 1;
  }
  LoadedPair p = load_pair(opt);
  auto pre = check_matched_pair(p.pair);
  if (!pre.ok())
    input_error("not a matched pair: " + pre.failures.front());
  GroupoidalVerdict v = is_groupoidal(p.pair);
  if (v.groupoidal) {
    out << "groupoidal: yes\n";
    return 0;
  }
  out << "groupoidal: no\n";
  out << "element " << p.elem_names[v.bad_m]
      << " has no covering inverse family\n";
  return 1;
}

int cmd_germ(const Options &opt, std::ostringstream &out) {
  if (opt.positional.size() != 1) input_error("germ needs one map file");
  if (opt.point.empty()) input_error("germ needs --point");
  LoadedMap f = load_map(opt.positional[0]);
  const DirectedGraph &g = f.parsed.graph;
  PointSpec w;
  try {
    w = parse_point(g, opt.point);
  } catch (const std::invalid_argument &e) {
    input_error(std::string("bad --point: ") + e.what());
  }
  try {
    Germ germ = germ_at(g, f.parsed.map, w);
    out << "(" << format_point(g, germ.at) << ", "
        << germ_degree(g, germ) << ", "
        << format_point(g, germ_target(g, germ)) << ")\n";
    return 0;
  } catch (const std::invalid_argument &) {
    out << "point outside the domain\n";
    return 1;
  }
}

int cmd_exp(const Options &opt, std::ostringstream &out) {
  if (opt.positional.size() != 2)
    input_error("exp needs two carrier files (Y then Z)");
  LoadedPair lp = load_pair(opt);
  auto pre = check_matched_pair(lp.pair);
  if (!pre.ok())
    input_error("not a matched pair: " + pre.failures.front());
  ParsedPair pp{lp.pair, lp.elem_names};
  ParsedBJM y = parse_bjm_text(read_file(opt.positional[0]), pp);
  ParsedBJM z = parse_bjm_text(read_file(opt.positional[1]), pp);
  auto ry = check_bjm(lp.pair, y.set);
  if (!ry.ok()) input_error("Y is not a valid carrier: " + ry.failures[0]);
  auto rz = check_bjm(lp.pair, z.set);
  if (!rz.ok()) input_error("Z is not a valid carrier: " + rz.failures[0]);
  Exponential e = exponential(lp.pair, y.set, z.set);
  char sep = opt.sep();
  out << "carrier: " << e.set.size() << "\n";
  for (int f = 0; f < e.set.size(); ++f) {
    out << f << ":";
    for (int yy = 0; yy < e.ysize; ++yy)
      out << sep << z.elem_names[e.eval(f, yy)];
    out << "\n";
  }
  return report_verdict(out, check_bjm(lp.pair, e.set), "structure");
}

int cmd_tensor(const Options &opt, std::ostringstream &out) {
  if (opt.positional.size() != 1)
    input_error("tensor needs one carrier file");
  LoadedPair lp = load_pair(opt);
  auto pre = check_matched_pair(lp.pair);
  if (!pre.ok())
    input_error("not a matched pair: " + pre.failures.front());
  ParsedBSet x = parse_bset_text(read_file(opt.positional[0]));
  auto rx = x.set.check();
  if (!rx.ok()) input_error("invalid carrier: " + rx.failures[0]);
  TensorResult t = tensor(lp.pair, x.set);
  char sep = opt.sep();
  out << "classes: " << t.set.size() << "\n";
  for (int c = 0; c < t.set.size(); ++c) {
    const auto &[m, omega] = t.reps[c];
    out << c << ":" << sep << lp.elem_names[m];
    for (int v : omega) out << sep << x.elem_names[v];
    out << "\n";
  }
  out << "unit:";
  for (int x0 = 0; x0 < x.set.size(); ++x0) out << sep << t.unit_map[x0];
  out << "\n";
  return report_verdict(out, check_bjm(lp.pair, t.set), "structure");
}

int cmd_mealy(const Options &opt, std::ostringstream &out) {
  if (opt.positional.size() != 1)
    input_error("mealy needs one machine file");
  MealyMachine m = parse_machine_text(read_file(opt.positional[0]));
  out << "letters: " << m.letter_count() << "\n";
  out << "states: " << m.state_count() << "\n";
  int code = report_verdict(out, check_machine(m, opt.depth), "axioms");
  auto faithful = faithful_to_depth(m, opt.depth);
  out << "separated to depth " << opt.depth << ": "
      << (faithful.separated ? "yes" : "no") << "\n";
  for (const auto &[p, q] : faithful.collisions)
    out << "collision: " << format_state_word(m, p) << " vs "
        << format_state_word(m, q) << "\n";
  auto invertible = invertible_states(m);
  out << "invertible states:";
  for (int q : invertible) out << " " << m.state_name(q);
  out << "\n";
  return (code == 0 && faithful.separated) ? 0 : 1;
}

int cmd_nek(const Options &opt, std::ostringstream &out) {
  if (opt.machine.empty()) input_error("nek needs --machine");
  MealyMachine m = parse_machine_text(read_file(opt.machine));
  if (opt.positional.empty() || opt.positional.size() > 2)
    input_error("nek needs one or two map files");
  NekrashevychMap f = parse_nek_text(m, read_file(opt.positional[0]));
  if (opt.positional.size() == 2) {
    NekrashevychMap h = parse_nek_text(m, read_file(opt.positional[1]));
    f = nek_compose(m, f, h);
  }
  out << format_nek(m, f);
  return 0;
}

int cmd_presentation(const Options &opt, std::ostringstream &out) {
  DirectedGraph g = graph_from(opt);
  return report_verdict(out, check_presentation(g), "relations");
}

// ------------------------------------------------------------- selftest --

CheckReport suite_boolean_core() {
  CheckReport report;
  BooleanAlgebra alg({"a1", "a2"});
  BSet xs(2, 6, {{0, 0, 0, 1, 1, 1}, {0, 1, 2, 0, 1, 2}});
  report.merge(xs.check());
  for (int x = 0; x < xs.size(); ++x)
    for (int y = 0; y < xs.size(); ++y) {
      Mask best = xs.agreement(x, y);
      for (Mask b = 0; b <= alg.full(); ++b)
        if (xs.equiv(b, x, y) != ((b & ~best) == 0))
          report.fail("agreement mask is not the largest witness");
    }
  return report;
}

CheckReport suite_presentation() {
  CheckReport report;
  report.merge(check_presentation(DirectedGraph::bouquet("lr")));
  report.merge(check_presentation(DirectedGraph::bouquet("xyz")));
  return report;
}

CheckReport suite_prefix_maps(std::uint64_t seed, int depth) {
  CheckReport report;
  auto g = DirectedGraph::bouquet("lr");
  report.merge(check_matched_pair_sampled(g, seed, 60 * depth, depth));
  std::mt19937_64 rng(seed + 1);
  for (int trial = 0; trial < 40 * depth; ++trial) {
    PrefixMap s = sample_map(g, rng, depth);
    if (compose(g, restriction(g, s), s) != s)
      report.fail("s⁺s = s fails on a sampled map");
    auto parts = etale_decomposition(g, s);
    if (join_disjoint(g, parts) != s)
      report.fail("étale decomposition does not rejoin to the map");
  }
  return report;
}

CheckReport suite_restriction_monoids() {
  CheckReport report;
  for (const auto &p : enumerate_pairs(3, 2)) {
    FiniteBRM s(p);
    report.merge(check_brm_axioms(s));
    report.merge(roundtrip_check(p));
  }
  return report;
}

CheckReport suite_topos_groupoidal() {
  CheckReport report;
  for (const auto &p : enumerate_pairs(3, 2)) {
    is_topos(p);  // throws if the two criteria disagree
    GroupoidalVerdict v = is_groupoidal(p);
    ThetaResult t = theta(p, regular_bjm(p));
    if (v.groupoidal != (t.injective && t.surjective))
      report.fail("groupoidality formula disagrees with theta on M");
  }
  return report;
}

CheckReport suite_sheaves() {
  CheckReport report;
  for (const auto &p : enumerate_pairs(2, 2)) {
    for (const auto &x : enumerate_bjm_sets(p, 2)) {
      BJMSheaf y = sheafify(p, x);
      report.merge(check_sheaf(p, y));
      BJMSet back = collapse(p, y);
      if (back.size() != x.size())
        report.fail("collapse changed the carrier size");
      report.merge(check_bjm(p, back));
    }
  }
  return report;
}

CheckReport suite_self_similar(std::uint64_t seed, int depth,
                               bool corrupt) {
  CheckReport report;
  MealyMachine m("01", {"e", "a"}, 0, {{0, 0}, {0, 1}}, {{0, 1}, {1, 0}});
  int a = m.state_index("a");
  std::string expect = corrupt ? "10" : "11";
  if (star_word(m, "10", {a}) != expect)
    report.fail("odometer fixture: \"10\"⋆a gave the wrong word");
  auto g = m.bouquet();
  PointSpec ones{empty_path(0), parse_path(g, "1")};
  PointSpec zeros{empty_path(0), parse_path(g, "0")};
  if (apply_point(m, {a}, ones) != normalize_point(g, zeros))
    report.fail("odometer fixture: all ones did not go to all zeros");
  std::mt19937_64 rng(seed + 2);
  auto random_zs = [&] {
    ZSElement x;
    int lp = static_cast<int>(rng() % (depth + 1));
    int lu = static_cast<int>(rng() % (depth + 1));
    for (int i = 0; i < lp; ++i)
      x.p.push_back(static_cast<int>(rng() % m.state_count()));
    for (int i = 0; i < lu; ++i)
      x.u.push_back(m.letter(static_cast<int>(rng() % m.letter_count())));
    return x;
  };
  for (int trial = 0; trial < 70 * depth; ++trial) {
    ZSElement x = random_zs(), y = random_zs(), z = random_zs();
    if (zappa_szep_mul(m, zappa_szep_mul(m, x, y), z) !=
        zappa_szep_mul(m, x, zappa_szep_mul(m, y, z)))
      report.fail("Zappa-Szép product is not associative");
  }
  NekrashevychMap add1 = nek_normalize(m, {{"", {a}, ""}});
  NekrashevychMap split = nek_normalize(m, {{"0", {}, "0"}, {"1", {}, "1"}});
  if (nek_compose(m, add1, split) != add1)
    report.fail("composition with a split identity changed the map");
  for (int trial = 0; trial < 20 * depth; ++trial) {
    auto fh = nek_compose(m, add1, add1);
    PointSpec w{empty_path(0), parse_path(g, trial % 2 ? "1" : "10")};
    if (nek_apply(m, fh, w) !=
        nek_apply(m, add1, nek_apply(m, add1, w)))
      report.fail("nek_compose disagrees with pointwise application");
  }
  return report;
}

int cmd_selftest(const Options &opt, std::ostringstream &out) {
  struct Suite {
    std::string name;
    CheckReport report;
  };
  std::vector<Suite> suites;
  suites.push_back({"boolean-core", suite_boolean_core()});
  suites.push_back({"presentation", suite_presentation()});
  suites.push_back({"prefix-maps", suite_prefix_maps(opt.seed, opt.depth)});
  suites.push_back({"restriction-monoids", suite_restriction_monoids()});
  suites.push_back({"topos-groupoidal", suite_topos_groupoidal()});
  suites.push_back({"sheaves", suite_sheaves()});
  suites.push_back({"self-similar",
                    suite_self_similar(opt.seed, opt.depth,
                                       opt.negative_control)});
  bool all_ok = true;
  for (const auto &suite : suites) {
    out << "suite " << suite.name << ": "
        << (suite.report.ok() ? "ok" : "FAIL") << "\n";
    int shown = 0;
    for (const auto &f : suite.report.failures) {
      if (++shown > 3) {
        out << "  ... " << suite.report.failures.size() - 3 << " more\n";
        break;
      }
      out << "  " << f << "\n";
    }
    all_ok = all_ok && suite.report.ok();
  }
  return all_ok ? 0 : 1;
}

}  // namespace

int run_command(const std::vector<std::string> &args, std::string &output) {
  std::ostringstream out;
  int code;
  try {
    Options opt = parse_options(args);
    if (opt.verb == "check-pair")
      code = cmd_check_pair(opt, out);
    else if (opt.verb == "brm")
      code = cmd_brm(opt, out);
    else if (opt.verb == "compose")
      code = cmd_compose(opt, out);
    else if (opt.verb == "normalize")
      code = cmd_normalize(opt, out);
    else if (opt.verb == "clopen")
      code = cmd_clopen(opt, out);
    else if (opt.verb == "dense")
      code = cmd_dense(opt, out);
    else if (opt.verb == "complement")
      code = cmd_complement(opt, out);
    else if (opt.verb == "cofinal")
      code = cmd_cofinal(opt, out);
    else if (opt.verb == "topos")
      code = cmd_topos(opt, out);
    else if (opt.verb == "groupoidal")
      code = cmd_groupoidal(opt, out);
    else if (opt.verb == "germ")
      code = cmd_germ(opt, out);
    else if (opt.verb == "exp")
      code = cmd_exp(opt, out);
    else if (opt.verb == "tensor")
      code = cmd_tensor(opt, out);
    else if (opt.verb == "mealy")
      code = cmd_mealy(opt, out);
    else if (opt.verb == "nek")
      code = cmd_nek(opt, out);
    else if (opt.verb == "presentation")
      code = cmd_presentation(opt, out);
    else if (opt.verb == "selftest")
      code = cmd_selftest(opt, out);
    else
      input_error("unknown verb '" + opt.verb + "'");
  } catch (const ParseError &e) {
    out << "error: " << e.what() << "\n";
    code = 2;
  } catch (const CommandError &e) {
    out << "error: " << e.message << "\n";
    code = e.code;
  } catch (const std::exception &e) {
    out << "error: " << e.what() << "\n";
    code = 2;
  }
  output = out.str();
  return code;
}

}  // namespace mpkit
