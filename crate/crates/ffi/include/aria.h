#ifndef ARIA_H
#define ARIA_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

#define ARIA_MOVE_GIVE2 0

#define ARIA_MOVE_TAKE1 1

typedef enum AriaStrategy {
  ARIA_STRATEGY_ACCEPTANCE = 0,
  ARIA_STRATEGY_GROWTH = 1,
  ARIA_STRATEGY_GROWTH_DENIAL = 2,
  ARIA_STRATEGY_RESTRAINT = 3,
  ARIA_STRATEGY_DENIAL = 4,
  ARIA_STRATEGY_SEEK_SUPPORT = 5,
} AriaStrategy;

typedef enum AriaStatus {
  ARIA_STATUS_OK = 0,
  ARIA_STATUS_NULL_POINTER = 1,
  ARIA_STATUS_INVALID_ARGUMENT = 2,
  // Call not allowed in the game's current phase.
  ARIA_STATUS_WRONG_PHASE = 3,
  ARIA_STATUS_INTEGRITY = 4,
  ARIA_STATUS_IO = 5,
  ARIA_STATUS_INTERNAL = 6,
  ARIA_STATUS_PANIC = 7,
} AriaStatus;

typedef enum AriaPhase {
  ARIA_PHASE_AWAIT_ACTION = 0,
  ARIA_PHASE_AWAIT_EMOTION = 1,
  ARIA_PHASE_REVEALED = 2,
  ARIA_PHASE_FINISHED = 3,
} AriaPhase;

// Loaded lexicon, phrase bank and embeddings.
typedef struct AriaEngine AriaEngine;

// One game against the agent.
typedef struct AriaGame AriaGame;

typedef struct AriaHsf {
  double happy_sad;
  double surprise_anger;
  double fear_disgust;
} AriaHsf;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread, or NULL. The pointer is
// valid until the next call into this library on the same thread.
const char *aria_last_error(void);

// # Safety
// `s` must come from this library and not have been freed already.
void aria_string_free(char *s);

const char *aria_version(void);

// Static name of a strategy, e.g. `growth+denial`.
const char *aria_strategy_name(enum AriaStrategy strategy);

// Payoffs for player move `a` against opponent move `b`.
//
// # Safety
// Output pointers must be valid for writes.
enum AriaStatus aria_payoff(uint32_t a, uint32_t b, uint32_t *out_a, uint32_t *out_b);

// Tit-for-two-tats reply to a player history of `len` move codes.
//
// # Safety
// `moves` must point to `len` readable values (may be NULL when `len` is 0).
enum AriaStatus aria_tf2t(const uint32_t *moves, size_t len, uint32_t *out_move);

// Face controls for a raw EPA point.
//
// # Safety
// `out` must be valid for writes.
enum AriaStatus aria_epa_to_hsf(double e, double p, double a, struct AriaHsf *out);

// Engine with the bundled data files.
struct AriaEngine *aria_engine_new(void);

// Engine loaded from a data directory.
//
// # Safety
// `dir` must be a NUL-terminated string; `out` must be valid for writes.
enum AriaStatus aria_engine_from_dir(const char *dir, struct AriaEngine **out);

// # Safety
// `engine` must come from this library and not have been freed already.
void aria_engine_free(struct AriaEngine *engine);

// Face controls for an emotion label under the engine's lexicon.
//
// # Safety
// Pointers must be valid; `label` NUL-terminated.
enum AriaStatus aria_engine_face(const struct AriaEngine *engine,
                                 const char *label,
                                 struct AriaHsf *out);

// Coping decision. `t2_move` is ignored unless `has_t2`; `last_move` and
// `last_label` are ignored when `last_label` is NULL (no history).
//
// # Safety
// Pointers must be valid; `last_label` NUL-terminated when non-NULL.
enum AriaStatus aria_engine_cope(const struct AriaEngine *engine,
                                 bool has_t2,
                                 uint32_t t2_move,
                                 uint32_t last_move,
                                 const char *last_label,
                                 uint32_t *out_move,
                                 enum AriaStrategy *out_strategy);

// Start a game. `condition` is `occ`, `emotionless` or `random`. The game
// keeps its own reference to the engine's data, so the engine may be freed
// first.
//
// # Safety
// Pointers must be valid; `condition` NUL-terminated.
enum AriaStatus aria_game_new(const struct AriaEngine *engine,
                              const char *condition,
                              uint64_t seed,
                              uint32_t rounds_played,
                              uint32_t rounds_announced,
                              struct AriaGame **out);

// # Safety
// `game` must come from this library and not have been freed already.
void aria_game_free(struct AriaGame *game);

// # Safety
// Pointers must be valid.
enum AriaStatus aria_game_phase(const struct AriaGame *game, enum AriaPhase *out);

// # Safety
// Pointers must be valid.
enum AriaStatus aria_game_scores(const struct AriaGame *game,
                                 uint32_t *out_player,
                                 uint32_t *out_agent);

// # Safety
// `game` must be valid.
enum AriaStatus aria_game_submit_action(struct AriaGame *game, uint32_t player_move);

// Commit the player's emotion; the agent plays and the reveal is written to
// `out_json` as a JSON object (free with `aria_string_free`).
//
// # Safety
// Pointers must be valid; `label` NUL-terminated.
enum AriaStatus aria_game_submit_emotion(struct AriaGame *game, const char *label, char **out_json);

// # Safety
// Pointers must be valid.
enum AriaStatus aria_game_advance(struct AriaGame *game, enum AriaPhase *out_phase);

// Scores, cooperation count and bonus as a JSON object.
//
// # Safety
// Pointers must be valid.
enum AriaStatus aria_game_summary_json(const struct AriaGame *game, char **out_json);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ARIA_H */
