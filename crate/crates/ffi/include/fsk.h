#ifndef FSK_H
#define FSK_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Symbol value marking an erased coordinate in decoder input.
 */
#define FSK_ERASED 2

/**
 * Decoder outcome, mirroring the library's decode status.
 */
typedef enum FskDecodeStatus {
  FSK_DECODE_STATUS_CODEWORD = 0,
  FSK_DECODE_STATUS_UNDECIDED = 1,
  FSK_DECODE_STATUS_MAX_ITERATIONS = 2,
} FskDecodeStatus;

/**
 * Result codes. `FSK_STATUS_REJECT` is returned by a verification that
 * completed but did not accept.
 */
typedef enum FskStatus {
  FSK_STATUS_OK = 0,
  FSK_STATUS_REJECT = 1,
  FSK_STATUS_NULL_POINTER = 2,
  FSK_STATUS_INVALID_ARGUMENT = 3,
  FSK_STATUS_LENGTH_MISMATCH = 4,
  FSK_STATUS_MALFORMED = 5,
  FSK_STATUS_UNKNOWN_DIGEST = 6,
  FSK_STATUS_EXHAUSTIVE_BOUND = 7,
  FSK_STATUS_BUFFER_TOO_SMALL = 8,
  FSK_STATUS_PANIC = 9,
} FskStatus;

typedef struct FskProductCode FskProductCode;

typedef struct FskSketch FskSketch;

typedef struct FskTemplate FskTemplate;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Static description of a status code. Never null.
 */
const char *fsk_status_message(enum FskStatus status);

/**
 * Detail of the last failure on this thread, or an empty string. Valid
 * until the next call into this library from the same thread.
 */
const char *fsk_last_error_message(void);

/**
 * RM(1,m1) rows by RM(1,m2) columns.
 */
enum FskStatus fsk_product_code_new(uint32_t m1, uint32_t m2, struct FskProductCode **out_code);

void fsk_product_code_free(struct FskProductCode *code);

/**
 * Block length N, or 0 for a null handle.
 */
size_t fsk_product_code_length(const struct FskProductCode *code);

/**
 * Dimension k, or 0 for a null handle.
 */
size_t fsk_product_code_dimension(const struct FskProductCode *code);

/**
 * A template of `bits` bits. A null `mask` means every bit is reliable.
 */
enum FskStatus fsk_template_new(const uint8_t *code,
                                const uint8_t *mask,
                                size_t bits,
                                struct FskTemplate **out_template);

void fsk_template_free(struct FskTemplate *template_);

/**
 * Enrolls `template`; all randomness comes from `seed`.
 */
enum FskStatus fsk_enroll(const struct FskTemplate *template_,
                          const struct FskProductCode *code,
                          uint64_t seed,
                          bool interleave,
                          struct FskSketch **out_sketch);

/**
 * Verifies `probe` over `rotation_count` shifts. Returns `FSK_STATUS_OK`
 * on accept and `FSK_STATUS_REJECT` on reject. The optional outputs
 * receive the accepting rotation and the iterations of the reported
 * attempt.
 */
enum FskStatus fsk_verify(const struct FskSketch *sketch,
                          const struct FskTemplate *probe,
                          const struct FskProductCode *code,
                          const int64_t *rotations,
                          size_t rotation_count,
                          size_t max_iterations,
                          int64_t *out_rotation,
                          size_t *out_iterations);

/**
 * Bytes needed by `fsk_sketch_serialize`, or 0 for a null handle.
 */
size_t fsk_sketch_serialized_len(const struct FskSketch *sketch);

/**
 * Writes the sketch file format into `buf`. `out_written` always receives
 * the required size, also when the buffer is too small.
 */
enum FskStatus fsk_sketch_serialize(const struct FskSketch *sketch,
                                    uint8_t *buf,
                                    size_t capacity,
                                    size_t *out_written);

enum FskStatus fsk_sketch_deserialize(const uint8_t *buf,
                                      size_t len,
                                      struct FskSketch **out_sketch);

void fsk_sketch_free(struct FskSketch *sketch);

/**
 * Code orders stored in the sketch.
 */
enum FskStatus fsk_sketch_code_params(const struct FskSketch *sketch,
                                      uint32_t *out_m1,
                                      uint32_t *out_m2);

/**
 * Min-sum decodes `len` symbols (0, 1 or `FSK_ERASED`, row-major). On
 * success `out_word` receives `len` bytes of 0, 1 or `FSK_ERASED`.
 */
enum FskStatus fsk_decode(const struct FskProductCode *code,
                          const uint8_t *symbols,
                          size_t len,
                          size_t max_iterations,
                          uint8_t *out_word,
                          enum FskDecodeStatus *out_status,
                          size_t *out_iterations);

enum FskStatus fsk_binary_entropy(double x, double *out_value);

/**
 * The root of `h(x) = y` in [0, 1/2].
 */
enum FskStatus fsk_entropy_inverse(double y, double *out_value);

/**
 * Largest decodable error fraction on unerased bits for an [n, k] code
 * with `w_e` erasures. `out_rate_saturated` (optional) is set when
 * k > n - w_e.
 */
enum FskStatus fsk_theta(uint64_t n,
                         uint64_t k,
                         uint64_t w_e,
                         double *out_value,
                         bool *out_rate_saturated);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FSK_H */
