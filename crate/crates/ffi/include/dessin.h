#ifndef DESSIN_H
#define DESSIN_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result code of every call.
typedef enum DessinStatus {
  DESSIN_STATUS_OK = 0,
  // A required pointer argument was null.
  DESSIN_STATUS_NULL_POINTER = 1,
  // Malformed input: zero degree, bad profile string, non-UTF-8 text.
  DESSIN_STATUS_INVALID_ARGUMENT = 2,
  // Degree beyond the engine's computed range.
  DESSIN_STATUS_OUT_OF_RANGE = 3,
  // An internal consistency check failed.
  DESSIN_STATUS_CHECK_FAILED = 4,
  // The library panicked; the handle should be discarded.
  DESSIN_STATUS_PANIC = 5,
} DessinStatus;

// Opaque engine holding `F_1..F_dmax` and its genus table.
typedef struct DessinEngine DessinEngine;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Computes `F_1..F_dmax` and stores a new engine in `*out`.
//
// # Safety
// `out` must be valid for writes. The engine must be released with
// [`dessin_engine_free`].
enum DessinStatus dessin_engine_new(uint32_t dmax, struct DessinEngine **out);

// Releases an engine. Null is ignored.
//
// # Safety
// `engine` must come from [`dessin_engine_new`] and not be used afterwards.
void dessin_engine_free(struct DessinEngine *engine);

// # Safety
// `engine` must be a live engine and `out` valid for writes.
enum DessinStatus dessin_engine_dmax(const struct DessinEngine *engine, uint32_t *out);

// Weighted count `N_{k,l}(m)` as `num/den` (or an integer), with the
// ramification profile written as `part^multiplicity` pairs, e.g. `1^2,3^1`.
//
// # Safety
// `engine` must be a live engine, `profile` a NUL-terminated string and
// `out` valid for writes.
enum DessinStatus dessin_engine_coefficient(const struct DessinEngine *engine,
                                            uint32_t k,
                                            uint32_t l,
                                            const char *profile,
                                            char **out);

// Marked count `d * G_{d,g}` as a decimal string; `"0"` for genera
// beyond the largest one possible in degree `d`.
//
// # Safety
// `engine` must be a live engine and `out` valid for writes.
enum DessinStatus dessin_engine_marked(const struct DessinEngine *engine,
                                       uint32_t d,
                                       uint32_t g,
                                       char **out);

// Weighted count `G_{d,g}` as `num/den` (or an integer).
//
// # Safety
// `engine` must be a live engine and `out` valid for writes.
enum DessinStatus dessin_engine_weighted(const struct DessinEngine *engine,
                                         uint32_t d,
                                         uint32_t g,
                                         char **out);

// Genus table as CSV, `d,g,G_marked` or `d,g,G_num,G_den` rows for
// `g <= gmax`.
//
// # Safety
// `engine` must be a live engine and `out` valid for writes.
enum DessinStatus dessin_engine_table_csv(const struct DessinEngine *engine,
                                          uint32_t gmax,
                                          bool marked,
                                          char **out);

// Sets `*passed` to whether the four KP equations hold for every
// s-degree `1..=nmax`.
//
// # Safety
// `engine` must be a live engine and `passed` valid for writes.
enum DessinStatus dessin_engine_kp_check(const struct DessinEngine *engine,
                                         uint32_t nmax,
                                         bool *passed);

// Rooted planar hypermaps on `d` darts, from the closed formula.
//
// # Safety
// `out` must be valid for writes.
enum DessinStatus dessin_closed_genus0(uint32_t d, char **out);

// Rooted genus-1 hypermaps on `d` darts, from the closed formula.
//
// # Safety
// `out` must be valid for writes.
enum DessinStatus dessin_closed_genus1(uint32_t d, char **out);

// Releases a string returned by this library. Null is ignored.
//
// # Safety
// `s` must come from this library and not be used afterwards.
void dessin_string_free(char *s);

// Static description of a status code; never null, never freed.
const char *dessin_status_message(enum DessinStatus status);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* DESSIN_H */
