#ifndef QHO_H
#define QHO_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum QhoStatus {
  QHO_STATUS_OK = 0,
  QHO_STATUS_NULL_POINTER = 1,
  QHO_STATUS_INVALID_ARGUMENT = 2,
  QHO_STATUS_PARSE = 3,
  QHO_STATUS_SIMULATION = 4,
  QHO_STATUS_BUFFER_TOO_SMALL = 5,
  QHO_STATUS_PANIC = 6,
} QhoStatus;

/**
 * Opaque circuit handle.
 */
typedef struct QhoCircuit QhoCircuit;

/**
 * Opaque state-vector handle.
 */
typedef struct QhoState QhoState;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread, or null. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *qho_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *qho_version(void);

/**
 * # Safety
 * `s` must be null or a string returned by this library.
 */
void qho_string_free(char *s);

/**
 * F(t) = A·cos(ωt + φ)/√(2m).
 *
 * # Safety
 * `out` must be valid for a write.
 */
enum QhoStatus qho_drive_force(double amplitude,
                               double mass,
                               double phase,
                               double omega,
                               double t,
                               double *out);

/**
 * Single-qubit oscillator circuit at time `t`.
 *
 * # Safety
 * `out` must be valid for a write.
 */
enum QhoStatus qho_circuit_single_qubit(double omega0,
                                        double amplitude,
                                        double mass,
                                        double phase,
                                        double omega,
                                        double t,
                                        struct QhoCircuit **out);

/**
 * Five-qubit circuit for the two-qubit oscillator; `theta` must lie in
 * [0, 0.5].
 *
 * # Safety
 * `out` must be valid for a write.
 */
enum QhoStatus qho_circuit_two_qubit(double theta, struct QhoCircuit **out);

/**
 * Parses an OpenQASM 2.0 program.
 *
 * # Safety
 * `text` must be a NUL-terminated string; `out` must be valid for a write.
 */
enum QhoStatus qho_circuit_from_qasm(const char *text, struct QhoCircuit **out);

/**
 * Serialises a circuit to OpenQASM 2.0. Free the result with
 * `qho_string_free`.
 *
 * # Safety
 * `c` must be a live circuit handle; `out` must be valid for a write.
 */
enum QhoStatus qho_circuit_to_qasm(const struct QhoCircuit *c, bool decompose_ch, char **out);

/**
 * # Safety
 * `c` must be a live circuit handle; `out` must be valid for a write.
 */
enum QhoStatus qho_circuit_num_qubits(const struct QhoCircuit *c, size_t *out);

/**
 * # Safety
 * `c` must be a live circuit handle; `out` must be valid for a write.
 */
enum QhoStatus qho_circuit_num_gates(const struct QhoCircuit *c, size_t *out);

/**
 * # Safety
 * `c` must be null or a handle not yet freed.
 */
void qho_circuit_free(struct QhoCircuit *c);

/**
 * Computational basis state |basis_index⟩ on `num_qubits` qubits.
 *
 * # Safety
 * `out` must be valid for a write.
 */
enum QhoStatus qho_state_new(size_t num_qubits, size_t basis_index, struct QhoState **out);

/**
 * Applies every gate of `c` to `s` in place.
 *
 * # Safety
 * `s` and `c` must be live handles.
 */
enum QhoStatus qho_state_run(struct QhoState *s, const struct QhoCircuit *c);

/**
 * Number of amplitudes, 2^n.
 *
 * # Safety
 * `s` must be a live handle; `out` must be valid for a write.
 */
enum QhoStatus qho_state_dim(const struct QhoState *s, size_t *out);

/**
 * Copies amplitudes into `re` and `im`, each of length `len >= dim`.
 *
 * # Safety
 * `s` must be a live handle; `re` and `im` must be valid for `len` writes.
 */
enum QhoStatus qho_state_amplitudes(const struct QhoState *s, double *re, double *im, size_t len);

/**
 * Marginal distribution over `qubits` (first listed qubit is the most
 * significant bit of the outcome index). `probs` needs 2^num_qubits entries.
 *
 * # Safety
 * `s` must be a live handle; `qubits` must be valid for `num_qubits` reads
 * and `probs` for `len` writes.
 */
enum QhoStatus qho_state_marginal(const struct QhoState *s,
                                  const size_t *qubits,
                                  size_t num_qubits,
                                  double *probs,
                                  size_t len);

/**
 * Draws `shots` samples from a distribution over 2^width outcomes with a
 * seeded generator and writes the per-outcome counts.
 *
 * # Safety
 * `probs` must be valid for 2^width reads and `counts` for `len` writes.
 */
enum QhoStatus qho_sample_shots(const double *probs,
                                size_t width,
                                uint64_t shots,
                                uint64_t seed,
                                uint64_t *counts,
                                size_t len);

/**
 * # Safety
 * `s` must be null or a handle not yet freed.
 */
void qho_state_free(struct QhoState *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QHO_H */
