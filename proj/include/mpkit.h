#ifndef MPKIT_H
#define MPKIT_H

/* C interface to the mpkit shared library.  All functions returning
 * mpkit_status follow the CLI's exit-code convention: 0 success / verdict
 * holds, 1 verdict false, 2 input error, 3 bad argument (null handle and
 * the like), 4 internal error.  Strings handed out through char** are
 * heap-allocated; release them with mpkit_free. */

#ifdef __cplusplus
extern "C" {
#endif

typedef enum {
  MPKIT_OK = 0,
  MPKIT_VERDICT_FALSE = 1,
  MPKIT_INPUT_ERROR = 2,
  MPKIT_BAD_ARGUMENT = 3,
  MPKIT_INTERNAL_ERROR = 4
} mpkit_status;

void mpkit_free(char *ptr);

/* Runs one CLI command (verb plus flags, no program name) and captures the
 * report text.  The return value is the CLI exit code. */
int mpkit_run(int argc, const char *const *argv, char **output);

typedef struct mpkit_graph mpkit_graph;
typedef struct mpkit_map mpkit_map;
typedef struct mpkit_pair mpkit_pair;
typedef struct mpkit_machine mpkit_machine;

/* Graph file text, or an inline "bouquet:xy" spec. */
mpkit_status mpkit_graph_parse(const char *text, mpkit_graph **out,
                               char **error);
void mpkit_graph_free(mpkit_graph *g);
int mpkit_graph_vertex_count(const mpkit_graph *g);
/* *cofinal is set to 1 or 0. */
mpkit_status mpkit_graph_vertex_cofinal(const mpkit_graph *g, int vertex,
                                        int *cofinal);

/* Map file text; the `on:` header must be an inline bouquet spec (the
 * library does no file I/O). */
mpkit_status mpkit_map_parse(const char *text, mpkit_map **out, char **error);
void mpkit_map_free(mpkit_map *f);
int mpkit_map_is_total(const mpkit_map *f);
/* Maps must live over equal graphs; composition applies f first. */
mpkit_status mpkit_map_compose(const mpkit_map *f, const mpkit_map *g,
                               mpkit_map **out, char **error);
mpkit_status mpkit_map_format(const mpkit_map *f, char **out);

/* Pair file text. */
mpkit_status mpkit_pair_parse(const char *text, mpkit_pair **out,
                              char **error);
void mpkit_pair_free(mpkit_pair *p);
/* MPKIT_OK when all axioms hold, MPKIT_VERDICT_FALSE otherwise; the report
 * lists the violated laws. */
mpkit_status mpkit_pair_check(const mpkit_pair *p, char **report);
mpkit_status mpkit_pair_is_topos(const mpkit_pair *p, int *verdict);
mpkit_status mpkit_pair_is_groupoidal(const mpkit_pair *p, int *verdict);

/* Machine file text. */
mpkit_status mpkit_machine_parse(const char *text, mpkit_machine **out,
                                 char **error);
void mpkit_machine_free(mpkit_machine *m);
mpkit_status mpkit_machine_check(const mpkit_machine *m, int depth,
                                 char **report);
/* *count receives the number of invertible states. */
mpkit_status mpkit_machine_invertible_count(const mpkit_machine *m,
                                            int *count);

#ifdef __cplusplus
}
#endif

#endif
