#ifndef TRINOM_H
#define TRINOM_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/*
 Result codes. Zero is success.
 */
typedef enum TrinomStatus {
  TRINOM_STATUS_OK = 0,
  TRINOM_STATUS_NULL_POINTER = 1,
  TRINOM_STATUS_INVALID_ARGUMENT = 2,
  TRINOM_STATUS_PARSE = 3,
  TRINOM_STATUS_MISSING_FACTORIZATION = 4,
  TRINOM_STATUS_CERTIFICATION_FAILED = 5,
  TRINOM_STATUS_BUFFER_TOO_SMALL = 6,
  TRINOM_STATUS_INTERNAL = 7,
} TrinomStatus;

/*
 Which property a search or test checks.
 */
typedef enum TrinomMode {
  /*
   Irreducible factor of degree `r`.
   */
  TRINOM_MODE_AIT = 0,
  /*
   Primitive factor of degree `r`.
   */
  TRINOM_MODE_APT = 1,
} TrinomMode;

/*
 Binary ring operations on hex-encoded elements.
 */
typedef enum TrinomRingOp {
  TRINOM_RING_OP_ADD = 0,
  TRINOM_RING_OP_MUL = 1,
} TrinomRingOp;

/*
 Table of factorizations of `2^r - 1`.
 */
typedef struct TrinomFactorTable TrinomFactorTable;

/*
 A certified ring `GF(2)[x]/(T)` with `T = x^(r+δ) + x^s + 1`.
 */
typedef struct TrinomRing TrinomRing;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Library version as a static NUL-terminated string.
 */
const char *trinom_version(void);

/*
 Message for the last failed call on this thread; empty after a success.
 The pointer stays valid until the next call on the same thread.
 */
const char *trinom_last_error(void);

/*
 The built-in factor table (copied into a new handle).

 # Safety
 `out` must be a valid pointer.
 */
enum TrinomStatus trinom_factor_table_bundled(struct TrinomFactorTable **out);

/*
 Parses a factor table in the text format and merges it over the built-in one.

 # Safety
 `text` must be a NUL-terminated string and `out` a valid pointer.
 */
enum TrinomStatus trinom_factor_table_parse(const char *text, struct TrinomFactorTable **out);

/*
 # Safety
 `table` must come from a `trinom_factor_table_*` constructor, or be NULL.
 */
void trinom_factor_table_free(struct TrinomFactorTable *table);

/*
 Tests whether `x^(r+delta) + x^s + 1` has an irreducible (mode AIT) or
 primitive (mode APT) factor of degree `r`. A NULL table means the built-in one.

 # Safety
 `table` must be a live handle or NULL; `accepted` must be a valid pointer.
 */
enum TrinomStatus trinom_test(uint64_t r,
                              uint64_t s,
                              uint64_t delta,
                              enum TrinomMode mode,
                              const struct TrinomFactorTable *table,
                              bool *accepted);

/*
 All accepted `s <= n/2` at fixed `(r, delta)`, ascending. `*count` receives the
 number found; at most `cap` values are written to `out`.

 # Safety
 `out` must have room for `cap` values (it may be NULL when `cap` is 0);
 `count` must be a valid pointer; `table` a live handle or NULL.
 */
enum TrinomStatus trinom_search(uint64_t r,
                                uint64_t delta,
                                enum TrinomMode mode,
                                const struct TrinomFactorTable *table,
                                uint64_t *out,
                                size_t cap,
                                size_t *count);

/*
 Re-checks JSON-lines table rows. `*mismatched` receives the number of rows
 whose stored result is not reproduced.

 # Safety
 `jsonl` must be a NUL-terminated string; `mismatched` a valid pointer;
 `table` a live handle or NULL.
 */
enum TrinomStatus trinom_verify_rows(const char *jsonl,
                                     const struct TrinomFactorTable *table,
                                     size_t *mismatched);

/*
 Builds a ring context; fails with `TRINOM_STATUS_CERTIFICATION_FAILED` unless the
 trinomial has an irreducible factor of degree `r`.

 # Safety
 `out` must be a valid pointer.
 */
enum TrinomStatus trinom_ring_new(uint64_t r, uint64_t s, uint64_t delta, struct TrinomRing **out);

/*
 # Safety
 `ring` must come from [`trinom_ring_new`], or be NULL.
 */
void trinom_ring_free(struct TrinomRing *ring);

/*
 `a op b` in the ring, written as hex.

 # Safety
 `a` and `b` must be NUL-terminated; `buf` must have `len` bytes; `needed`
 may be NULL.
 */
enum TrinomStatus trinom_ring_op(const struct TrinomRing *ring,
                                 enum TrinomRingOp op,
                                 const char *a,
                                 const char *b,
                                 char *buf,
                                 size_t len,
                                 size_t *needed);

/*
 Canonical representative of `a` in the field `GF(2^r)`, as hex.

 # Safety
 As for [`trinom_ring_op`].
 */
enum TrinomStatus trinom_ring_canonicalize(const struct TrinomRing *ring,
                                           const char *a,
                                           char *buf,
                                           size_t len,
                                           size_t *needed);

/*
 Whether `a` and `b` map to the same field element.

 # Safety
 `a` and `b` must be NUL-terminated; `equal` a valid pointer.
 */
enum TrinomStatus trinom_ring_field_equal(const struct TrinomRing *ring,
                                          const char *a,
                                          const char *b,
                                          bool *equal);

/*
 `a^e` for a decimal exponent `e`, as hex.

 # Safety
 As for [`trinom_ring_op`].
 */
enum TrinomStatus trinom_ring_pow(const struct TrinomRing *ring,
                                  const char *a,
                                  const char *e,
                                  char *buf,
                                  size_t len,
                                  size_t *needed);

/*
 Order of `x` in the ring (the period of the trinomial), as decimal.

 # Safety
 `table` must be a live handle or NULL; `buf` must have `len` bytes.
 */
enum TrinomStatus trinom_ring_order_of_x(const struct TrinomRing *ring,
                                         const struct TrinomFactorTable *table,
                                         char *buf,
                                         size_t len,
                                         size_t *needed);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TRINOM_H */
