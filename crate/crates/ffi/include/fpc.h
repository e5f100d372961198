#ifndef FPC_H
#define FPC_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum FpcStatus {
  FPC_STATUS_OK = 0,
  /**
   * At least one certificate failed to check.
   */
  FPC_STATUS_FALSIFIED = 1,
  /**
   * Unreadable or malformed input.
   */
  FPC_STATUS_INPUT = 2,
  FPC_STATUS_NULL_POINTER = 3,
  /**
   * The oracle rejected its arguments.
   */
  FPC_STATUS_ORACLE = 4,
  FPC_STATUS_INTERNAL = 5,
} FpcStatus;

/**
 * Proven facts from a verified corpus.
 */
typedef struct FpcLedger FpcLedger;

/**
 * Message for the last failed call on this thread, or null. Owned by the
 * library and valid until the next call.
 */
const char *fpc_last_error(void);

/**
 * # Safety
 * `s` must be null or a string returned by this library, freed once.
 */
void fpc_string_free(char *s);

/**
 * Verifies the built-in corpus and stores its ledger in `*out`.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum FpcStatus fpc_ledger_embedded(struct FpcLedger **out);

/**
 * Verifies every `.cert` file under `dir`. A ledger of the facts that
 * checked is stored in `*out` for [`FpcStatus::Ok`] and
 * [`FpcStatus::Falsified`]; otherwise `*out` is set to null.
 *
 * # Safety
 * `dir` must be a nul-terminated string and `out` a valid pointer.
 */
enum FpcStatus fpc_verify_dir(const char *dir, struct FpcLedger **out);

/**
 * # Safety
 * `ledger` must be null or a handle from this library, freed once.
 */
void fpc_ledger_free(struct FpcLedger *ledger);

/**
 * Number of proven facts.
 *
 * # Safety
 * `ledger` must be a live handle.
 */
size_t fpc_ledger_len(const struct FpcLedger *ledger);

/**
 * Number of certificates that failed when the ledger was built.
 *
 * # Safety
 * `ledger` must be a live handle.
 */
size_t fpc_ledger_falsified(const struct FpcLedger *ledger);

/**
 * Best lower bound on gamma(n) as a string such as `"42/19"`, or null in
 * `*out` when no fact applies.
 *
 * # Safety
 * `ledger` must be a live handle and `out` a valid pointer.
 */
enum FpcStatus fpc_ledger_gamma(const struct FpcLedger *ledger, uint64_t n, char **out);

/**
 * The whole ledger as JSON.
 *
 * # Safety
 * `ledger` must be a live handle and `out` a valid pointer.
 */
enum FpcStatus fpc_ledger_json(const struct FpcLedger *ledger, char **out);

/**
 * Containment report for `I^(3r-2) ⊂ M^(2r-2) I^r` as JSON.
 *
 * # Safety
 * `ledger` must be a live handle and `out` a valid pointer.
 */
enum FpcStatus fpc_containment_json(const struct FpcLedger *ledger,
                                    uint64_t n,
                                    uint64_t r,
                                    char **out);

/**
 * Dimension of degree-`t` forms through general fat points, computed
 * modulo `prime` with points drawn from `seed`.
 *
 * # Safety
 * `mults` must point to `len` values (or be null with `len == 0`) and
 * `out` must be a valid pointer.
 */
enum FpcStatus fpc_dimension(const int64_t *mults,
                             size_t len,
                             int64_t t,
                             uint64_t prime,
                             uint64_t seed,
                             uint64_t *out);

#endif  /* FPC_H */
