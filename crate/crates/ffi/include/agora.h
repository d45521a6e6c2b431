#ifndef AGORA_H
#define AGORA_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every fallible call.
 */
typedef enum AgoraStatus {
  AgoraStatus_Ok = 0,
  /**
   * A required pointer argument was null.
   */
  AgoraStatus_NullPointer = 1,
  /**
   * An argument failed validation (sizes, signs, ranges).
   */
  AgoraStatus_InvalidArgument = 2,
  /**
   * The derived interaction network has no edges.
   */
  AgoraStatus_EmptyGraph = 3,
  /**
   * Numerical estimation failed downstream of valid inputs.
   */
  AgoraStatus_Estimation = 4,
} AgoraStatus;

/**
 * How authenticity is assigned in [`agora_simulate`].
 */
typedef enum AgoraGammaMode {
  /**
   * All politicians share the `gamma` argument.
   */
  AgoraGammaMode_Homogeneous = 0,
  /**
   * Per-politician draws from a normal(0.1, 0.1) truncated at zero;
   * the `gamma` argument is ignored.
   */
  AgoraGammaMode_Heterogeneous = 1,
} AgoraGammaMode;

/**
 * Community detection method for [`agora_matrix_modularity`].
 */
typedef enum AgoraMethod {
  AgoraMethod_Louvain = 0,
  AgoraMethod_EdgeBetweenness = 1,
} AgoraMethod;

/**
 * Opaque simulation model: a cast of politicians and an electorate.
 */
typedef struct AgoraModel AgoraModel;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Static version string of the library (not to be freed).
 */
const char *agora_version(void);

/**
 * Voters' posterior belief after observing an endorsement: the weighted
 * average of prior `mu` and signal `delta` with signal weight `omega`.
 *
 * # Safety
 * `out` must point to a writable f64.
 */
enum AgoraStatus agora_posterior(double mu, double delta, double omega, double *out);

/**
 * The like decision for a single message: gain toward the front-runner
 * minus the authenticity cost, strictly positive to like.
 *
 * # Safety
 * `out` must point to a writable boolean byte.
 */
enum AgoraStatus agora_like_decision(double liker_mu,
                                     double liker_sigma,
                                     double liker_gamma,
                                     double message_delta,
                                     double front_runner_mu,
                                     double omega,
                                     bool *out);

/**
 * Builds the bundled default model (28 politicians, lumpy empirical
 * electorate).
 *
 * # Safety
 * `out` must point to a writable model pointer; the result must be
 * released with [`agora_model_free`].
 */
enum AgoraStatus agora_model_default(struct AgoraModel **out);

/**
 * Builds a model from parallel politician arrays (ids become p00, p01, ...)
 * and an electorate of `n_groups` (position, weight) pairs with strictly
 * increasing positions.
 *
 * # Safety
 * `mus`, `sigmas`, `coalitions` must point to `n_politicians` readable
 * elements; `group_positions`, `group_weights` to `n_groups`; `out` to a
 * writable model pointer. The result must be released with
 * [`agora_model_free`].
 */
enum AgoraStatus agora_model_new(const double *mus,
                                 const double *sigmas,
                                 const uint32_t *coalitions,
                                 uintptr_t n_politicians,
                                 const double *group_positions,
                                 const double *group_weights,
                                 uintptr_t n_groups,
                                 struct AgoraModel **out);

/**
 * Number of politicians in the model; zero for a null handle.
 *
 * # Safety
 * `model` must be null or a live handle from a constructor.
 */
uintptr_t agora_model_size(const struct AgoraModel *model);

/**
 * Releases a model handle. Null is a no-op.
 *
 * # Safety
 * `model` must be null or an unreleased handle from a constructor.
 */
void agora_model_free(struct AgoraModel *model);

/**
 * Runs one seeded simulation and writes the like matrix row-major into
 * `counts_out` (`n * n` entries, liker-major): entry `i * n + j` counts
 * likes given by politician `i` to `j`'s messages. Identical arguments
 * produce identical matrices.
 *
 * # Safety
 * `model` must be a live handle and `counts_out` must point to
 * `agora_model_size(model)^2` writable u32 entries.
 */
enum AgoraStatus agora_simulate(const struct AgoraModel *model,
                                double omega,
                                uint32_t messages_per_politician,
                                uint64_t seed,
                                enum AgoraGammaMode gamma_mode,
                                double gamma,
                                uint32_t *counts_out);

/**
 * Builds the thresholded correlation network of a row-major `n * n`
 * interaction matrix, detects communities, and writes the modularity to
 * `q_out`. When `labels_out` is non-null it receives the community label
 * of each node.
 *
 * # Safety
 * `counts` must point to `n * n` readable u32 entries; `q_out` to a
 * writable f64; `labels_out` must be null or point to `n` writable u32.
 */
enum AgoraStatus agora_matrix_modularity(const uint32_t *counts,
                                         uintptr_t n,
                                         double theta,
                                         enum AgoraMethod method,
                                         uint64_t seed,
                                         double *q_out,
                                         uint32_t *labels_out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* AGORA_H */
