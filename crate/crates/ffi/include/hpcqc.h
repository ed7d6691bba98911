#ifndef HPCQC_H
#define HPCQC_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum HpcqcDecision {
  HPCQC_DECISION_HPC = 0,
  HPCQC_DECISION_QC = 10,
  HPCQC_DECISION_INFEASIBLE = 11,
} HpcqcDecision;

typedef enum HpcqcPolicy {
  HPCQC_POLICY_FULL = 0,
  HPCQC_POLICY_SYMMETRY = 1,
} HpcqcPolicy;

typedef enum HpcqcSource {
  HPCQC_SOURCE_MODEL = 0,
  HPCQC_SOURCE_MODEL_CLAMPED = 1,
  HPCQC_SOURCE_PAPER_TABLE = 2,
} HpcqcSource;

typedef enum HpcqcStatus {
  HPCQC_STATUS_OK = 0,
  HPCQC_STATUS_NULL_POINTER = 1,
  HPCQC_STATUS_INVALID_UTF8 = 2,
  HPCQC_STATUS_PARSE = 3,
  HPCQC_STATUS_INVALID_ARGUMENT = 4,
  HPCQC_STATUS_TRANSPILE = 5,
  HPCQC_STATUS_RESOURCE = 6,
  HPCQC_STATUS_PANIC = 7,
} HpcqcStatus;

/**
 * Opaque parsed circuit.
 */
typedef struct HpcqcCircuit HpcqcCircuit;

typedef struct HpcqcEstimate {
  uint32_t distance;
  uint64_t data_qubits;
  uint64_t distillation_qubits;
  uint64_t total_physical_qubits;
  double hours_per_shot;
  uint32_t source;
} HpcqcEstimate;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread; empty after a success.
 * Valid until the next call into this library on the same thread.
 */
const char *hpcqc_last_error(void);

/**
 * Library version, static storage.
 */
const char *hpcqc_version(void);

/**
 * Parses circuit text into a new handle stored at `*out`.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` a valid pointer.
 */
enum HpcqcStatus hpcqc_circuit_parse(const char *text, struct HpcqcCircuit **out);

/**
 * Releases a circuit handle; null is ignored.
 *
 * # Safety
 * `circuit` must come from [`hpcqc_circuit_parse`] and not be freed twice.
 */
void hpcqc_circuit_free(struct HpcqcCircuit *circuit);

/**
 * # Safety
 * `circuit` must be a live handle; the out pointers must be valid.
 */
enum HpcqcStatus hpcqc_circuit_stats(const struct HpcqcCircuit *circuit,
                                     uint64_t *n_qubits,
                                     uint64_t *gate_count,
                                     uint64_t *depth);

/**
 * T-count under full synthesis and under the symmetry-breaking policy.
 *
 * # Safety
 * `circuit` must be a live handle; the out pointers must be valid.
 */
enum HpcqcStatus hpcqc_t_count(const struct HpcqcCircuit *circuit,
                               double epsilon,
                               uint64_t *t_full,
                               uint64_t *t_sym);

/**
 * Surface-code estimate with the built-in calibration.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum HpcqcStatus hpcqc_estimate(double p,
                                double cycle_time,
                                double target_logical_error,
                                uint64_t logical_qubits,
                                uint64_t t,
                                struct HpcqcEstimate *out);

/**
 * Dispatch decision plus the machine-format report (JSON) in `*report`,
 * to be released with [`hpcqc_string_free`]. `policy` is an
 * [`HpcqcPolicy`] value. `t_override` of `UINT64_MAX`
 * means no override; `logical_qubits` of 0 means the circuit width.
 *
 * # Safety
 * `circuit` must be a live handle; the out pointers must be valid.
 */
enum HpcqcStatus hpcqc_advise(const struct HpcqcCircuit *circuit,
                              double epsilon,
                              uint32_t policy,
                              uint64_t t_threshold,
                              double p,
                              double cycle_time,
                              double target_logical_error,
                              uint64_t t_override,
                              uint64_t logical_qubits,
                              enum HpcqcDecision *decision,
                              char **report);

/**
 * Releases a string returned by this library; null is ignored.
 *
 * # Safety
 * `s` must come from this library and not be freed twice.
 */
void hpcqc_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HPCQC_H */
