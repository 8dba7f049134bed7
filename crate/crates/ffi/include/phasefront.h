#ifndef PHASEFRONT_H
#define PHASEFRONT_H

/* Generated by cbindgen; do not edit. */

#include <stddef.h>
#include <stdint.h>

typedef enum PfStatus {
  PF_STATUS_OK = 0,
  PF_STATUS_NULL_POINTER = 1,
  PF_STATUS_INVALID_ARGUMENT = 2,
  PF_STATUS_DOMAIN = 3,
  PF_STATUS_NO_SOLUTION = 4,
  PF_STATUS_NO_CONVERGENCE = 5,
  PF_STATUS_DIVERGED = 6,
  PF_STATUS_IO = 7,
  PF_STATUS_PANIC = 8,
} PfStatus;

/**
 * A running 1D phase-field simulation.
 */
typedef struct PfLine1d PfLine1d;

/**
 * Tabulated standing wave with its derived constants and `Phi`.
 */
typedef struct PfProfile PfProfile;

/**
 * Settings of a 1D simulation with forcing `A sin(omega t) + B`.
 */
typedef struct PfLineParams {
  double eps;
  double beta;
  double x_front;
  uint32_t order;
  double amplitude;
  double omega;
  double offset;
  /**
   * Planned run length, used to size the domain.
   */
  double t_final;
  /**
   * Grid spacing as a fraction of `eps`.
   */
  double spacing_ratio;
  /**
   * Time step as a fraction of the stability budget.
   */
  double dt_ratio;
  /**
   * Bound on the front speed, used to size the domain.
   */
  double speed_bound;
} PfLineParams;

/**
 * Message of the last failed call on this thread, or null. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *pf_last_error(void);

/**
 * Builds the standing-wave table on `[-half_width, half_width]`.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for a handle.
 */
enum PfStatus pf_profile_build(double half_width, double spacing, struct PfProfile **out);

/**
 * # Safety
 * `profile` must be null or a handle from [`pf_profile_build`] not yet freed.
 */
void pf_profile_free(struct PfProfile *profile);

/**
 * Surface tension `c0 = ∫ theta0'^2`.
 *
 * # Safety
 * `profile` must be a live handle and `out` writable.
 */
enum PfStatus pf_profile_c0(const struct PfProfile *profile, double *out);

/**
 * `Phi(V)`.
 *
 * # Safety
 * `profile` must be a live handle and `out` writable.
 */
enum PfStatus pf_phi(const struct PfProfile *profile, double velocity, double *out);

/**
 * Leading-order inner velocity `V0` for forcing `F` and coupling `beta`.
 *
 * # Safety
 * `profile` must be a live handle and `out` writable.
 */
enum PfStatus pf_solve_v0(const struct PfProfile *profile,
                          double forcing,
                          double beta,
                          double *out);

/**
 * Front velocity `x0'` of the 1D law and the number of roots found.
 *
 * # Safety
 * `profile` must be a live handle; `velocity` and `roots` writable.
 */
enum PfStatus pf_front_velocity_1d(const struct PfProfile *profile,
                                   double forcing,
                                   double beta,
                                   double *velocity,
                                   size_t *roots);

/**
 * Creates a simulation from well-prepared data.
 *
 * # Safety
 * `profile` must be a live handle, `params` readable and `out` writable.
 */
enum PfStatus pf_line_new(const struct PfProfile *profile,
                          const struct PfLineParams *params,
                          struct PfLine1d **out);

/**
 * # Safety
 * `sim` must be null or a handle from [`pf_line_new`] not yet freed.
 */
void pf_line_free(struct PfLine1d *sim);

/**
 * Advances the simulation by `count` steps.
 *
 * # Safety
 * `sim` must be a live handle not used concurrently.
 */
enum PfStatus pf_line_step(struct PfLine1d *sim, size_t count);

/**
 * Current time and time step.
 *
 * # Safety
 * `sim` must be a live handle; `t` and `dt` writable.
 */
enum PfStatus pf_line_time(const struct PfLine1d *sim, double *t, double *dt);

/**
 * Position of the `rho = 1/2` crossing.
 *
 * # Safety
 * `sim` must be a live handle and `out` writable.
 */
enum PfStatus pf_line_front(const struct PfLine1d *sim, double *out);

/**
 * Number of grid nodes.
 *
 * # Safety
 * `sim` must be a live handle and `out` writable.
 */
enum PfStatus pf_line_len(const struct PfLine1d *sim, size_t *out);

/**
 * Copies node positions, `rho` and `P` into caller buffers of length
 * `len`, which must equal [`pf_line_len`]. Any of the buffers may be null.
 *
 * # Safety
 * `sim` must be a live handle and each non-null buffer must hold `len`
 * writable doubles.
 */
enum PfStatus pf_line_copy_fields(const struct PfLine1d *sim,
                                  double *x,
                                  double *rho,
                                  double *p,
                                  size_t len);

#endif  /* PHASEFRONT_H */
