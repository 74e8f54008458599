#ifndef QAL_H
#define QAL_H

/* This file is generated by cbindgen from qal-ffi; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Measurement kinds, mirrored for C callers.
typedef enum QalMeasurementKind {
  QAL_MEASUREMENT_WEAK = 0,
  QAL_MEASUREMENT_STRONG = 1,
} QalMeasurementKind;

// Status codes returned by every FFI call.
typedef enum QalStatus {
  QAL_STATUS_OK = 0,
  QAL_STATUS_NULL_POINTER = 1,
  QAL_STATUS_INVALID_PARAMETER = 2,
  QAL_STATUS_INVALID_NAME = 3,
  QAL_STATUS_OUT_OF_RANGE = 4,
  QAL_STATUS_RUNTIME = 5,
} QalStatus;

// Opaque episode-result handle.
typedef struct QalEpisode QalEpisode;

// Opaque lattice handle.
typedef struct QalLattice QalLattice;

// One lattice site, flattened for C.
typedef struct QalSite {
  size_t row;
  size_t col;
  double alpha;
  double cos_alpha;
  int true_class;
} QalSite;

// Episode settings. `fidelity_threshold <= 0` disables the threshold
// stop; `seed_oracles == 0` uses the strategy default (3, QBC 5).
typedef struct QalEpisodeConfig {
  double sigma;
  size_t n_copies;
  enum QalMeasurementKind kind;
  size_t seed_oracles;
  size_t label_budget;
  double fidelity_threshold;
  uint64_t seed;
} QalEpisodeConfig;

// One trajectory point of an episode.
typedef struct QalTrajectoryPoint {
  size_t labels_used;
  double accuracy;
  double system_fidelity;
} QalTrajectoryPoint;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version as a static NUL-terminated string.
const char *qal_version(void);

// Generates the 441-qubit lattice. On success writes a handle the caller
// must release with `qal_lattice_free`.
//
// # Safety
// `out` must be a valid pointer to a `QalLattice*`.
enum QalStatus qal_lattice_generate(uint64_t seed,
                                    double ramp_width,
                                    double epsilon,
                                    struct QalLattice **out);

// Releases a lattice handle. Null is ignored.
//
// # Safety
// `lattice` must have come from `qal_lattice_generate` and not already
// be freed.
void qal_lattice_free(struct QalLattice *lattice);

// Number of lattice sites (constant 441).
size_t qal_lattice_site_count(void);

// Fetches one site by row-major index.
//
// # Safety
// `lattice` must be a live handle; `out` must point to a `QalSite`.
enum QalStatus qal_lattice_site(const struct QalLattice *lattice,
                                size_t site_id,
                                struct QalSite *out);

// Runs one active-learning episode with the named strategy (`random`,
// `usamp_lc`, `usamp_margin`, `usamp_entropy`, `qbc_ve`, `qbc_kl`).
// On success writes an episode handle for `qal_episode_*` accessors;
// release it with `qal_episode_free`.
//
// # Safety
// `lattice` must be a live handle, `strategy` a NUL-terminated string,
// `config` and `out` valid pointers.
enum QalStatus qal_episode_run(const struct QalLattice *lattice,
                               const char *strategy,
                               const struct QalEpisodeConfig *config,
                               struct QalEpisode **out);

// Releases an episode handle. Null is ignored.
//
// # Safety
// `episode` must have come from `qal_episode_run` and not already be
// freed.
void qal_episode_free(struct QalEpisode *episode);

// Trajectory length (one point per retrain, including the seed-only one).
//
// # Safety
// `episode` must be a live handle.
size_t qal_episode_len(const struct QalEpisode *episode);

// Fetches one trajectory point.
//
// # Safety
// `episode` must be a live handle; `out` must point to a
// `QalTrajectoryPoint`.
enum QalStatus qal_episode_point(const struct QalEpisode *episode,
                                 size_t index,
                                 struct QalTrajectoryPoint *out);

// Number of queried sites whose measured label disagreed with ground
// truth.
//
// # Safety
// `episode` must be a live handle.
size_t qal_episode_mislabels(const struct QalEpisode *episode);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QAL_H */
