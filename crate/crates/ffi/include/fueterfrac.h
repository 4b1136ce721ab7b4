#ifndef FUETERFRAC_H
#define FUETERFRAC_H

#include <stddef.h>

// Operator side: `ψD` or `D_ψ`.
typedef enum FfSide {
  FF_SIDE_LEFT = 0,
  FF_SIDE_RIGHT = 1,
} FfSide;

// Status codes returned by every fallible function.
typedef enum FfStatus {
  FF_STATUS_OK = 0,
  FF_STATUS_NULL_POINTER = 1,
  FF_STATUS_INVALID_UTF8 = 2,
  FF_STATUS_PARSE = 3,
  FF_STATUS_INVALID_PARAMETER = 4,
  FF_STATUS_DOMAIN = 5,
  FF_STATUS_HYPOTHESIS = 6,
  FF_STATUS_NON_FINITE = 7,
  FF_STATUS_CONFIG = 8,
  FF_STATUS_PANIC = 9,
} FfStatus;

// A quaternion-valued field with DSL components.
typedef struct FfField FfField;

// An orthonormal structural set `ψ = (ψ0, ψ1, ψ2, ψ3)`.
typedef struct FfFrame FfFrame;

// Parameters of a proportional β-fractal Fueter operator.
typedef struct FfOperator FfOperator;

// The rows of a verified scenario.
typedef struct FfReport FfReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread, or null. The pointer
// stays valid until the next call into the library on this thread.
const char *ff_last_error(void);

// Release a string returned by the library.
//
// # Safety
// `s` must come from this library and not have been freed.
void ff_string_free(char *s);

// The standard frame `(1, e1, e2, e3)`.
//
// # Safety
// `out` must be valid for writing a pointer.
enum FfStatus ff_frame_standard(struct FfFrame **out);

// A frame from `psi[4*k + j]`, component `j` of `ψ_k`.
//
// # Safety
// `psi` must point to 16 doubles; `out` must be valid for writing.
enum FfStatus ff_frame_new(const double *psi, struct FfFrame **out);

// # Safety
// `frame` must come from `ff_frame_*` and not have been freed.
void ff_frame_free(struct FfFrame *frame);

// Orientation sign `±1` of the frame.
//
// # Safety
// `frame` must be a live handle; `out` must be valid for writing.
enum FfStatus ff_frame_sign(const struct FfFrame *frame, int *out);

// A field `Σ ψ_m f_m(x)` from four DSL expressions in `x0..x3`.
//
// # Safety
// `frame` must be a live handle, `components` must point to four
// nul-terminated strings, `out` must be valid for writing.
enum FfStatus ff_field_new(const struct FfFrame *frame,
                           const char *const *components,
                           struct FfField **out);

// # Safety
// `field` must come from `ff_field_new` and not have been freed.
void ff_field_free(struct FfField *field);

// # Safety
// `field` must be a live handle; `x` and `out` must hold four doubles.
enum FfStatus ff_field_eval(const struct FfField *field, const double *x, double *out);

// The classical operator `ψD f` or `f D_ψ` at `x`.
//
// # Safety
// `field` must be a live handle; `x` and `out` must hold four doubles.
enum FfStatus ff_fueter(const struct FfField *field,
                        enum FfSide side,
                        const double *x,
                        double *out);

// Operator parameters from a JSON object with keys `sigma`, `beta`,
// `measure` or `measures`, `pair` or `pairs`, `diff_mode`, as in scenario
// files. An empty object gives the classical operator.
//
// # Safety
// `json` must be a nul-terminated string; `out` must be valid for writing.
enum FfStatus ff_operator_new(enum FfSide side, const char *json, struct FfOperator **out);

// # Safety
// `op` must come from `ff_operator_new` and not have been freed.
void ff_operator_free(struct FfOperator *op);

// The proportional fractal operator `ψD^{σ,β}_ν f` at `x`.
//
// # Safety
// Handles must be live; `x` and `out` must hold four doubles.
enum FfStatus ff_prop_fractal_fueter(const struct FfField *field,
                                     const struct FfOperator *op,
                                     const double *x,
                                     double *out);

// The truncated-exponential operator at `x`; the operator must use
// truncated-exponential measures on every axis.
//
// # Safety
// Handles must be live; `x` and `out` must hold four doubles.
enum FfStatus ff_truncated_fueter(const struct FfField *field,
                                  const struct FfOperator *op,
                                  const double *x,
                                  double *out);

// The Cauchy kernel `K_ψ(q)`.
//
// # Safety
// `frame` must be a live handle; `q` and `out` must hold four doubles.
enum FfStatus ff_cauchy_kernel(const struct FfFrame *frame, const double *q, double *out);

// Evaluate every identity of a scenario given as JSON text.
//
// # Safety
// `config_json` must be a nul-terminated string; `out` must be valid for
// writing.
enum FfStatus ff_verify_scenario(const char *config_json, struct FfReport **out);

// # Safety
// `report` must come from `ff_verify_scenario` and not have been freed.
void ff_report_free(struct FfReport *report);

// Row count, 1 if every row passed (else 0), and the largest residual.
//
// # Safety
// `report` must be a live handle; non-null out pointers must be valid.
enum FfStatus ff_report_summary(const struct FfReport *report,
                                size_t *rows,
                                int *passed,
                                double *max_residual);

// The report as CSV text; release with `ff_string_free`.
//
// # Safety
// `report` must be a live handle; `out` must be valid for writing.
enum FfStatus ff_report_csv(const struct FfReport *report, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FUETERFRAC_H */
