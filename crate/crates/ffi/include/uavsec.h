#ifndef UAVSEC_H
#define UAVSEC_H

/* Generated by cbindgen from the uavsec-ffi crate. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum UavsecStatus {
  UAVSEC_STATUS_OK = 0,
  UAVSEC_STATUS_NULL_POINTER = 1,
  UAVSEC_STATUS_INVALID_ARGUMENT = 2,
  UAVSEC_STATUS_CONFIG_ERROR = 3,
  UAVSEC_STATUS_RUNTIME_ERROR = 4,
  UAVSEC_STATUS_PANIC = 5,
} UavsecStatus;

typedef enum UavsecScenarioKind {
  UAVSEC_SCENARIO_KIND_RELAY = 0,
  UAVSEC_SCENARIO_KIND_TWO_WAY = 1,
} UavsecScenarioKind;

typedef enum UavsecAlgorithm {
  UAVSEC_ALGORITHM_IMODAOM = 0,
  UAVSEC_ALGORITHM_EMOALO = 1,
  UAVSEC_ALGORITHM_MOPSO = 2,
  UAVSEC_ALGORITHM_RANDOM = 3,
} UavsecAlgorithm;

typedef enum UavsecCipher {
  UAVSEC_CIPHER_DES = 0,
  UAVSEC_CIPHER_AES = 1,
  UAVSEC_CIPHER_RSA = 2,
} UavsecCipher;

/*
 Archive of a finished optimizer run, sorted by objectives.
 */
typedef struct UavsecFront UavsecFront;

/*
 A validated relay or two-way scenario.
 */
typedef struct UavsecScenario UavsecScenario;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Last error message on this thread, or null. Valid until the next failing call.
 */
const char *uavsec_last_error(void);

/*
 Library version as a static string.
 */
const char *uavsec_version(void);

/*
 # Safety
 `s` must come from this library and not be freed already.
 */
void uavsec_string_free(char *s);

/*
 Parses a scenario: `{"kind": "relay" | "twoway", ...}`.

 # Safety
 `json` must be a NUL-terminated string; `out` must be writable.
 */
enum UavsecStatus uavsec_scenario_from_json(const char *json, struct UavsecScenario **out);

/*
 Loads the scenario of a shipped preset such as `relay_default`.

 # Safety
 `name` must be a NUL-terminated string; `out` must be writable.
 */
enum UavsecStatus uavsec_scenario_from_preset(const char *name, struct UavsecScenario **out);

/*
 # Safety
 `s` must come from this library and not be freed already.
 */
void uavsec_scenario_free(struct UavsecScenario *s);

/*
 # Safety
 `s` must be a live scenario handle; `out` must be writable.
 */
enum UavsecStatus uavsec_scenario_kind(const struct UavsecScenario *s,
                                       enum UavsecScenarioKind *out);

/*
 Gene counts of the scenario's genome; `permutation` is 0 when there is none.

 # Safety
 `s` must be a live scenario handle; output pointers must be writable.
 */
enum UavsecStatus uavsec_scenario_genome_shape(const struct UavsecScenario *s,
                                               uintptr_t *continuous,
                                               uintptr_t *integers,
                                               uintptr_t *permutation);

/*
 Evaluates a solution given as JSON; writes `[f1, f2, f3]` to `out`.

 # Safety
 `s` must be a live scenario handle, `json` NUL-terminated, `out` room for 3 doubles.
 */
enum UavsecStatus uavsec_scenario_evaluate_json(const struct UavsecScenario *s,
                                                const char *json,
                                                double *out);

/*
 Repairs and evaluates a raw genome; writes `[f1, f2, f3]` to `out`.

 # Safety
 Array arguments must hold the stated number of elements; `out` room for 3 doubles.
 */
enum UavsecStatus uavsec_scenario_evaluate_genome(const struct UavsecScenario *s,
                                                  const double *continuous,
                                                  uintptr_t n_continuous,
                                                  const int64_t *integers,
                                                  uintptr_t n_integers,
                                                  const uintptr_t *permutation,
                                                  uintptr_t n_permutation,
                                                  double *out);

/*
 Runs an optimizer. `settings_json` may be null for the defaults.

 # Safety
 `s` must be a live scenario handle; `settings_json` null or NUL-terminated; `out` writable.
 */
enum UavsecStatus uavsec_optimize(const struct UavsecScenario *s,
                                  enum UavsecAlgorithm algorithm,
                                  uint64_t seed,
                                  const char *settings_json,
                                  struct UavsecFront **out);

/*
 # Safety
 `f` must come from this library and not be freed already.
 */
void uavsec_front_free(struct UavsecFront *f);

/*
 Number of front members, or 0 for a null handle.

 # Safety
 `f` must be null or a live front handle.
 */
uintptr_t uavsec_front_len(const struct UavsecFront *f);

/*
 Objective evaluations spent by the run, or 0 for a null handle.

 # Safety
 `f` must be null or a live front handle.
 */
uintptr_t uavsec_front_evaluations(const struct UavsecFront *f);

/*
 # Safety
 `f` must be a live front handle; `out` room for 3 doubles.
 */
enum UavsecStatus uavsec_front_objectives(const struct UavsecFront *f,
                                          uintptr_t index,
                                          double *out);

/*
 Decoded solution of one member as JSON; release with `uavsec_string_free`.

 # Safety
 `f` must be a live front handle; `out` writable.
 */
enum UavsecStatus uavsec_front_solution_json(const struct UavsecFront *f,
                                             uintptr_t index,
                                             char **out);

/*
 Exact hypervolume of `n` points of dimension `dims` (row-major).

 # Safety
 `points` must hold `n * dims` doubles, `reference` `dims`; `out` writable.
 */
enum UavsecStatus uavsec_hypervolume(const double *points,
                                     uintptr_t n,
                                     uintptr_t dims,
                                     const double *reference,
                                     double *out);

/*
 Transfer size in bytes beyond which the one-off optimization time is
 cheaper than encrypting with `cipher` at its published throughput.

 # Safety
 `out` must be writable.
 */
enum UavsecStatus uavsec_practicality_crossover_bytes(enum UavsecCipher cipher,
                                                      double optimization_time_s,
                                                      double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* UAVSEC_H */
