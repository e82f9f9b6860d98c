#include "mpkit.h"

#include <cstring>
#include <new>
#include <string>
#include <vector>

#include "mpkit/dispatch.hpp"
#include "mpkit/formats.hpp"
#include "mpkit/matched_finite.hpp"
#include "mpkit/path_space.hpp"
#include "mpkit/prefix_maps.hpp"
#include "mpkit/selfsimilar.hpp"

using namespace mpkit;

struct mpkit_graph {
  DirectedGraph graph;
};
struct mpkit_map {
  DirectedGraph graph;
  PrefixMap map;
};
struct mpkit_pair {
  ParsedPair parsed;
};
struct mpkit_machine {
  MealyMachine machine;
};

namespace {

char *dup_string(const std::string &s) {
  char *out = static_cast<char *>(::operator new(s.size() + 1,
                                                 std::nothrow));
  if (!out) return nullptr;
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void set_error(char **error, const std::string &message) {
  if (error) *error = dup_string(message);
}

// Converts exceptions from a parser/computation into status codes.
template <typename Fn>
mpkit_status guarded(char **error, Fn &&fn) {
  if (error) *error = nullptr;
  try {
    return fn();
  } catch (const ParseError &e) {
    set_error(error, e.what());
    return MPKIT_INPUT_ERROR;
  } catch (const std::invalid_argument &e) {
    set_error(error, e.what());
    return MPKIT_INPUT_ERROR;
  } catch (const std::exception &e) {
    set_error(error, e.what());
    return MPKIT_INTERNAL_ERROR;
  }
}

DirectedGraph graph_from_spec_or_text(const std::string &text) {
  if (auto letters = bouquet_letters(text)) {
    if (letters->empty()) throw std::invalid_argument("empty bouquet spec");
    return DirectedGraph::bouquet(*letters);
  }
  return parse_graph_text(text);
}

}  // namespace

extern "C" {

void mpkit_free(char *ptr) { ::operator delete(ptr); }

int mpkit_run(int argc, const char *const *argv, char **output) {
  if (output) *output = nullptr;
  if (argc < 0 || (argc > 0 && !argv)) return MPKIT_BAD_ARGUMENT;
  std::vector<std::string> args;
  for (int i = 0; i < argc; ++i) {
    if (!argv[i]) return MPKIT_BAD_ARGUMENT;
    args.emplace_back(argv[i]);
  }
  std::string text;
  int code = run_command(args, text);
  if (output) *output = dup_string(text);
  return code;
}

mpkit_status mpkit_graph_parse(const char *text, mpkit_graph **out,
                               char **error) {
  if (!text || !out) return MPKIT_BAD_ARGUMENT;
  *out = nullptr;
  return guarded(error, [&] {
    *out = new mpkit_graph{graph_from_spec_or_text(text)};
    return MPKIT_OK;
  });
}

void mpkit_graph_free(mpkit_graph *g) { delete g; }

int mpkit_graph_vertex_count(const mpkit_graph *g) {
  return g ? g->graph.vertex_count() : -1;
}

mpkit_status mpkit_graph_vertex_cofinal(const mpkit_graph *g, int vertex,
                                        int *cofinal) {
  if (!g || !cofinal) return MPKIT_BAD_ARGUMENT;
  if (vertex < 0 || vertex >= g->graph.vertex_count())
    return MPKIT_BAD_ARGUMENT;
  auto all = cofinal_vertices(g->graph);
  *cofinal = 0;
  for (int v : all)
    if (v == vertex) *cofinal = 1;
  return MPKIT_OK;
}

mpkit_status mpkit_map_parse(const char *text, mpkit_map **out,
                             char **error) {
  if (!text || !out) return MPKIT_BAD_ARGUMENT;
  *out = nullptr;
  return guarded(error, [&] {
    ParsedMap parsed =
        parse_map_text(text, [](const std::string &spec) {
          if (auto letters = bouquet_letters(spec))
            return DirectedGraph::bouquet(*letters);
          throw std::invalid_argument(
              "graph references are not resolved by the library; use an "
              "inline bouquet spec");
        });
    *out = new mpkit_map{std::move(parsed.graph), std::move(parsed.map)};
    return MPKIT_OK;
  });
}

void mpkit_map_free(mpkit_map *f) { delete f; }

int mpkit_map_is_total(const mpkit_map *f) {
  return f ? (is_total(f->graph, f->map) ? 1 : 0) : -1;
}

mpkit_status mpkit_map_compose(const mpkit_map *f, const mpkit_map *g,
                               mpkit_map **out, char **error) {
  if (!f || !g || !out) return MPKIT_BAD_ARGUMENT;
  *out = nullptr;
  return guarded(error, [&] {
    if (!(f->graph == g->graph)) {
      set_error(error, "maps are over different graphs");
      return MPKIT_INPUT_ERROR;
    }
    *out = new mpkit_map{f->graph, compose(f->graph, f->map, g->map)};
    return MPKIT_OK;
  });
}

mpkit_status mpkit_map_format(const mpkit_map *f, char **out) {
  if (!f || !out) return MPKIT_BAD_ARGUMENT;
  *out = dup_string(format_map(f->graph, f->map));
  return MPKIT_OK;
}

mpkit_status mpkit_pair_parse(const char *text, mpkit_pair **out,
                              char **error) {
  if (!text || !out) return MPKIT_BAD_ARGUMENT;
  *out = nullptr;
  return guarded(error, [&] {
    *out = new mpkit_pair{parse_pair_text(text)};
    return MPKIT_OK;
  });
}

void mpkit_pair_free(mpkit_pair *p) { delete p; }

mpkit_status mpkit_pair_check(const mpkit_pair *p, char **report) {
  if (!p) return MPKIT_BAD_ARGUMENT;
  return guarded(report, [&] {
    CheckReport r = check_matched_pair(p->parsed.pair);
    if (report) {
      std::string text;
      for (const auto &f : r.failures) text += f + "\n";
      *report = dup_string(text);
    }
    return r.ok() ? MPKIT_OK : MPKIT_VERDICT_FALSE;
  });
}

mpkit_status mpkit_pair_is_topos(const mpkit_pair *p, int *verdict) {
  if (!p || !verdict) return MPKIT_BAD_ARGUMENT;
  return guarded(nullptr, [&] {
    if (!check_matched_pair(p->parsed.pair).ok()) return MPKIT_INPUT_ERROR;
    *verdict = is_topos(p->parsed.pair).topos ? 1 : 0;
    return MPKIT_OK;
  });
}

mpkit_status mpkit_pair_is_groupoidal(const mpkit_pair *p, int *verdict) {
  if (!p || !verdict) return MPKIT_BAD_ARGUMENT;
  return guarded(nullptr, [&] {
    if (!check_matched_pair(p->parsed.pair).ok()) return MPKIT_INPUT_ERROR;
    *verdict = is_groupoidal(p->parsed.pair).groupoidal ? 1 : 0;
    return MPKIT_OK;
  });
}

mpkit_status mpkit_machine_parse(const char *text, mpkit_machine **out,
                                 char **error) {
  if (!text || !out) return MPKIT_BAD_ARGUMENT;
  *out = nullptr;
  return guarded(error, [&] {
    *out = new mpkit_machine{parse_machine_text(text)};
    return MPKIT_OK;
  });
}

void mpkit_machine_free(mpkit_machine *m) { delete m; }

mpkit_status mpkit_machine_check(const mpkit_machine *m, int depth,
                                 char **report) {
  if (!m || depth < 1) return MPKIT_BAD_ARGUMENT;
  return guarded(report, [&] {
    CheckReport r = check_machine(m->machine, depth);
    if (report) {
      std::string text;
      for (const auto &f : r.failures) text += f + "\n";
      *report = dup_string(text);
    }
    return r.ok() ? MPKIT_OK : MPKIT_VERDICT_FALSE;
  });
}

mpkit_status mpkit_machine_invertible_count(const mpkit_machine *m,
                                            int *count) {
  if (!m || !count) return MPKIT_BAD_ARGUMENT;
  return guarded(nullptr, [&] {
    *count = static_cast<int>(invertible_states(m->machine).size());
    return MPKIT_OK;
  });
}

}  // extern "C"
