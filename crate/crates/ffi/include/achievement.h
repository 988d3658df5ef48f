/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#ifndef ACHIEVEMENT_H
#define ACHIEVEMENT_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result code of every fallible call.
typedef enum AgStatus {
  AG_STATUS_OK = 0,
  // A required pointer argument was null.
  AG_STATUS_NULL_POINTER = 1,
  // A string argument was not valid UTF-8.
  AG_STATUS_INVALID_UTF8 = 2,
  // Malformed JSON, rational literal or group label.
  AG_STATUS_PARSE = 3,
  // The game or an argument violates a model constraint.
  AG_STATUS_INVALID_ARGUMENT = 4,
  // The computation would exceed a work cap.
  AG_STATUS_CAP_EXCEEDED = 5,
  // The requested score is undefined because a goal has no equilibrium.
  AG_STATUS_NO_EQUILIBRIUM = 6,
  // A result does not fit the output type.
  AG_STATUS_OVERFLOW = 7,
  // An internal panic was caught at the boundary.
  AG_STATUS_PANIC = 8,
} AgStatus;

// Selects one score for `ag_game_score_exact`.
typedef enum AgScore {
  AG_SCORE_MGA = 0,
  AG_SCORE_ALL = 1,
  AG_SCORE_DD = 2,
  AG_SCORE_VL = 3,
} AgScore;

// Opaque game handle.
typedef struct AgGame AgGame;

// Scores as doubles. When `defined` is false the base game has a goal
// without equilibria and all four values are NaN.
typedef struct AgScores {
  bool defined;
  double mga;
  double all;
  double dd;
  double vl;
} AgScores;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread, or null after a
// successful call. Valid until the next call into this library on the
// same thread.
const char *ag_last_error_message(void);

// Library version as a static string.
const char *ag_version(void);

// Parses a game document (the JSON accepted by `achievement analyze`).
//
// # Safety
// `json` must be a nul-terminated string and `out` a valid pointer.
enum AgStatus ag_game_from_json(const char *json, struct AgGame **out);

// Builds the standard game for a group label such as `"AOB"` or
// `"20-11-02"`. A null `delta` means 1/4.
//
// # Safety
// `label` must be a nul-terminated string, `delta` null or nul-terminated,
// and `out` a valid pointer.
enum AgStatus ag_standard_game(const char *label,
                               size_t n_goals,
                               const char *delta,
                               struct AgGame **out);

// Releases a game. Null is ignored.
//
// # Safety
// `game` must be null or a handle from this library not yet freed.
void ag_game_free(struct AgGame *game);

// Releases a string returned by this library. Null is ignored.
//
// # Safety
// `s` must be null or a string from this library not yet freed.
void ag_string_free(char *s);

// Number of agents and goals.
//
// # Safety
// `game` must be a live handle; the out pointers must be valid.
enum AgStatus ag_game_shape(const struct AgGame *game, size_t *n_agents, size_t *n_goals);

// The game as a pretty-printed JSON document.
//
// # Safety
// `game` must be a live handle and `out` a valid pointer.
enum AgStatus ag_game_to_json(const struct AgGame *game, char **out);

// Number of pure Nash equilibria.
//
// # Safety
// `game` must be a live handle and `out` a valid pointer.
enum AgStatus ag_game_equilibrium_count(const struct AgGame *game, uint64_t *out);

// All four scores as doubles. A null `delta` means 1/4.
//
// # Safety
// `game` must be a live handle, `delta` null or nul-terminated, and `out`
// a valid pointer.
enum AgStatus ag_game_scores(const struct AgGame *game, const char *delta, struct AgScores *out);

// One score as an exact `"p/q"` string. A null `delta` means 1/4.
//
// # Safety
// `game` must be a live handle, `delta` null or nul-terminated, and `out`
// a valid pointer.
enum AgStatus ag_game_score_exact(const struct AgGame *game,
                                  enum AgScore which,
                                  const char *delta,
                                  char **out);

// Checks the unique diagonal equilibrium property. `applicable` reports
// whether the game meets the hypotheses; `holds` is true when the property
// holds or the game is not applicable.
//
// # Safety
// `game` must be a live handle; the out pointers must be valid.
enum AgStatus ag_game_verify_theorem(const struct AgGame *game, bool *applicable, bool *holds);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ACHIEVEMENT_H */
