#ifndef OSGRP_H
#define OSGRP_H

/* Generated by cbindgen from src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum OsgrpStatus {
  OSGRP_STATUS_OK = 0,
  OSGRP_STATUS_NULL_POINTER = 1,
  OSGRP_STATUS_INVALID_ARGUMENT = 2,
  OSGRP_STATUS_INVALID_STATE = 3,
  OSGRP_STATUS_VACUUM = 4,
  OSGRP_STATUS_NO_CONVERGENCE = 5,
  OSGRP_STATUS_ILL_POSED_BOUNDARY = 6,
  OSGRP_STATUS_UNKNOWN_CASE = 7,
  OSGRP_STATUS_SOLVER_FAILURE = 8,
  OSGRP_STATUS_PARSE = 9,
  OSGRP_STATUS_PANIC = 10,
} OsgrpStatus;

typedef enum OsgrpSide {
  // The fluid lies to the right of the boundary.
  OSGRP_SIDE_LEFT = 0,
  OSGRP_SIDE_RIGHT = 1,
} OsgrpSide;

typedef enum OsgrpBcMode {
  OSGRP_BC_MODE_ONE_SIDED_GRP = 0,
  OSGRP_BC_MODE_REFLECTIVE_GHOST = 1,
} OsgrpBcMode;

typedef enum OsgrpField {
  OSGRP_FIELD_DENSITY = 0,
  // Velocity, or the solution itself for a scalar problem.
  OSGRP_FIELD_VELOCITY_X = 1,
  OSGRP_FIELD_VELOCITY_Y = 2,
  OSGRP_FIELD_PRESSURE = 3,
} OsgrpField;

// Opaque solver handle.
typedef struct OsgrpSolver OsgrpSolver;

// Primitive gas state.
typedef struct OsgrpPrim {
  double rho;
  double v;
  double p;
} OsgrpPrim;

// Star region of a Riemann problem.
typedef struct OsgrpStar {
  double p;
  double v;
  double rho_left;
  double rho_right;
} OsgrpStar;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Copy the last error message of this thread into `buf` (NUL-terminated,
// truncated to `len`). Returns the full message length in bytes.
//
// # Safety
// `buf` must be null or point to `len` writable bytes.
size_t osgrp_last_error(char *buf, size_t len);

// Library version as a static NUL-terminated string.
const char *osgrp_version(void);

// Exact Riemann problem for an ideal gas.
//
// # Safety
// `left`, `right` and `out` must be null or valid pointers.
enum OsgrpStatus osgrp_solve_riemann(double gamma,
                                     const struct OsgrpPrim *left,
                                     const struct OsgrpPrim *right,
                                     struct OsgrpStar *out);

// Boundary state of a solid wall next to `interior`.
//
// # Safety
// `interior` and `out` must be null or valid pointers.
enum OsgrpStatus osgrp_solve_wall(double gamma,
                                  const struct OsgrpPrim *interior,
                                  enum OsgrpSide side,
                                  struct OsgrpPrim *out);

// Solver for a built-in case. `cells` overrides the resolution when
// nonzero (rows for 2D cases).
//
// # Safety
// `name` must be a NUL-terminated string and `out` a valid pointer.
enum OsgrpStatus osgrp_solver_from_case(const char *name,
                                        size_t cells,
                                        enum OsgrpBcMode mode,
                                        struct OsgrpSolver **out);

// Solver for a case given in case-file form.
//
// # Safety
// `toml` must be a NUL-terminated string and `out` a valid pointer.
enum OsgrpStatus osgrp_solver_from_toml(const char *toml,
                                        size_t cells,
                                        enum OsgrpBcMode mode,
                                        struct OsgrpSolver **out);

// # Safety
// `solver` must be null or a handle from this library not yet freed.
void osgrp_solver_free(struct OsgrpSolver *solver);

// Advance to `t_end`, ending on it exactly.
//
// # Safety
// `solver` must be null or a live handle.
enum OsgrpStatus osgrp_solver_advance(struct OsgrpSolver *solver, double t_end);

// Current time, or NaN for a null handle.
//
// # Safety
// `solver` must be null or a live handle.
double osgrp_solver_time(const struct OsgrpSolver *solver);

// Grid size; `ny` is 1 for one-dimensional problems.
//
// # Safety
// `solver`, `nx` and `ny` must be null or valid pointers.
enum OsgrpStatus osgrp_solver_shape(const struct OsgrpSolver *solver, size_t *nx, size_t *ny);

// Copy one field of the cell-centre state, row by row, into `out`, which
// must hold `nx * ny` values. Solid cells of 2D obstacles read as the
// solid placeholder state.
//
// # Safety
// `solver` must be null or a live handle; `out` must be null or point to
// `len` writable doubles.
enum OsgrpStatus osgrp_solver_copy_field(const struct OsgrpSolver *solver,
                                         enum OsgrpField field,
                                         double *out,
                                         size_t len);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* OSGRP_H */
