#ifndef QSPEED_H
#define QSPEED_H

#include <stddef.h>
#include <stdint.h>
#include <stdbool.h>

/**
 * Result code of every fallible call.
 */
typedef enum {
  QSPEED_STATUS_OK = 0,
  /**
   * Invalid input: dimension, trace, positivity, parameter range.
   */
  QSPEED_STATUS_INVALID_INPUT = 1,
  /**
   * A numerical consistency check failed.
   */
  QSPEED_STATUS_CHECK_FAILED = 2,
  /**
   * An iterative routine did not converge.
   */
  QSPEED_STATUS_NOT_CONVERGED = 3,
  QSPEED_STATUS_NULL_POINTER = 4,
  /**
   * A Rust panic was caught at the boundary.
   */
  QSPEED_STATUS_INTERNAL = 5,
} QspeedStatus;

/**
 * Opaque density matrix.
 */
typedef struct QspeedState QspeedState;

/**
 * Opaque trajectory `ρ_t`, `t ∈ [0, τ]`.
 */
typedef struct QspeedTrajectory QspeedTrajectory;

/**
 * Speed-limit evaluation result.
 */
typedef struct {
  double bound;
  double actual_tau;
  double ratio;
  double distance;
  double mean_speed;
  size_t grid_points;
  bool converged;
  size_t refinements;
} QspeedReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *qspeed_version(void);

/**
 * Message of the last failed call on this thread, or null if none.
 * The pointer stays valid until the next failing call on the same thread.
 */
const char *qspeed_last_error(void);

void qspeed_clear_error(void);

/**
 * Builds a density matrix from row-major real and imaginary parts.
 * `im` may be null.
 *
 * # Safety
 * `re` (and `im` when non-null) must point to `dim * dim` doubles; `out`
 * must be writable.
 */
QspeedStatus qspeed_state_new(size_t dim,
                              const double *re,
                              const double *im,
                              QspeedState **out_state);

/**
 * Diagonal state with the given populations.
 *
 * # Safety
 * `probs` must point to `dim` doubles; `out_state` must be writable.
 */
QspeedStatus qspeed_state_diagonal(size_t dim, const double *probs, QspeedState **out_state);

/**
 * # Safety
 * `state` must be null or a handle from this library not yet freed.
 */
void qspeed_state_free(QspeedState *state);

/**
 * Dimension of `state`, or 0 for null.
 *
 * # Safety
 * `state` must be null or a live handle.
 */
size_t qspeed_state_dim(const QspeedState *state);

/**
 * # Safety
 * `state` must be a live handle; `out_purity` must be writable.
 */
QspeedStatus qspeed_state_purity(const QspeedState *state, double *out_purity);

/**
 * Copies the entries of `state` into row-major `re` and `im` buffers of
 * `dim * dim` doubles each.
 *
 * # Safety
 * `state` must be a live handle; `re` and `im` must be writable for
 * `dim * dim` doubles.
 */
QspeedStatus qspeed_state_entries(const QspeedState *state, double *re, double *im);

/**
 * Angular distance `D_α(ρ, σ)`.
 *
 * # Safety
 * `rho` and `sigma` must be live handles; `out_distance` must be writable.
 */
QspeedStatus qspeed_distance_alpha(const QspeedState *rho,
                                   const QspeedState *sigma,
                                   double alpha,
                                   double *out_distance);

/**
 * Permutation-maximized framed distance in solver eigenframes with default
 * pair parameters. `out_permutation`, if non-null, receives `dim` indices.
 *
 * # Safety
 * `rho` and `sigma` must be live handles; `out_distance` must be writable;
 * `out_permutation` must be null or writable for `dim` entries.
 */
QspeedStatus qspeed_permuted_distance(const QspeedState *rho,
                                      const QspeedState *sigma,
                                      double *out_distance,
                                      size_t *out_permutation);

/**
 * Closed evolution under a time-independent Hamiltonian `H` (row-major,
 * `im` may be null) from `rho0` over `[0, tau]`.
 *
 * # Safety
 * `h_re` (and `h_im` when non-null) must hold `dim * dim` doubles where
 * `dim` is the dimension of `rho0`; `out_traj` must be writable.
 */
QspeedStatus qspeed_trajectory_unitary(const QspeedState *rho0,
                                       const double *h_re,
                                       const double *h_im,
                                       double tau,
                                       QspeedTrajectory **out_traj);

/**
 * Depolarizing channel with `p_t = 1 - e^{-rate t}`.
 *
 * # Safety
 * `rho0` must be a live handle; `out_traj` must be writable.
 */
QspeedStatus qspeed_trajectory_depolarizing(const QspeedState *rho0,
                                            double rate,
                                            double tau,
                                            QspeedTrajectory **out_traj);

/**
 * Amplitude damping of the diagonal state `lambdas` with constant rate.
 *
 * # Safety
 * `lambdas` must hold `dim` doubles; `out_traj` must be writable.
 */
QspeedStatus qspeed_trajectory_amplitude_damping(size_t dim,
                                                 const double *lambdas,
                                                 double gamma,
                                                 double tau,
                                                 QspeedTrajectory **out_traj);

/**
 * Amplitude damping driven by a zero-temperature Ohmic-like bath.
 *
 * # Safety
 * `lambdas` must hold `dim` doubles; `out_traj` must be writable.
 */
QspeedStatus qspeed_trajectory_amplitude_damping_ohmic(size_t dim,
                                                       const double *lambdas,
                                                       double omega_c,
                                                       double k,
                                                       double tau,
                                                       QspeedTrajectory **out_traj);

/**
 * Pure dephasing of `rho0` in the computational basis at rate `gamma`.
 *
 * # Safety
 * `rho0` must be a live handle; `out_traj` must be writable.
 */
QspeedStatus qspeed_trajectory_dephasing(const QspeedState *rho0,
                                         double gamma,
                                         double tau,
                                         QspeedTrajectory **out_traj);

/**
 * # Safety
 * `traj` must be null or a handle from this library not yet freed.
 */
void qspeed_trajectory_free(QspeedTrajectory *traj);

/**
 * Horizon `τ`, or NaN for null.
 *
 * # Safety
 * `traj` must be null or a live handle.
 */
double qspeed_trajectory_horizon(const QspeedTrajectory *traj);

/**
 * State `ρ_t` as a new handle.
 *
 * # Safety
 * `traj` must be a live handle; `out_state` must be writable.
 */
QspeedStatus qspeed_trajectory_state(const QspeedTrajectory *traj,
                                     double t,
                                     QspeedState **out_state);

/**
 * Single-parameter bound `τ_α` evaluated on `grid` points.
 *
 * # Safety
 * `traj` must be a live handle; `out_report` must be writable.
 */
QspeedStatus qspeed_tau_alpha(const QspeedTrajectory *traj,
                              double alpha,
                              size_t grid,
                              QspeedReport *out_report);

/**
 * Framed bound `τ_QSL` with default pair parameters.
 *
 * # Safety
 * `traj` must be a live handle; `out_report` must be writable.
 */
QspeedStatus qspeed_tau_qsl(const QspeedTrajectory *traj, size_t grid, QspeedReport *out_report);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QSPEED_H */
