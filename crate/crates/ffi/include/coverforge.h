#ifndef COVERFORGE_H
#define COVERFORGE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

/**
 * Result of every fallible call.
 */
typedef enum {
  CfStatus_Ok = 0,
  CfStatus_NullPointer = 1,
  CfStatus_InvalidUtf8 = 2,
  CfStatus_ParseError = 3,
  CfStatus_InvalidDatum = 4,
  CfStatus_ComputationError = 5,
  CfStatus_BufferTooSmall = 6,
  CfStatus_Panic = 7,
} CfStatus;

/**
 * A branch datum with the character table of its group.
 */
typedef struct CfDatum CfDatum;

/**
 * A finite group with its character table.
 */
typedef struct CfGroup CfGroup;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null. The pointer is
 * valid until the next library call on the same thread.
 */
const char *cf_last_error(void);

/**
 * Releases a string returned by the library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void cf_string_free(char *s);

/**
 * Builds a group from a JSON group descriptor (or any document with a `group` field).
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` a writable pointer.
 */
CfStatus cf_group_from_json(const char *json, CfGroup **out);

/**
 * # Safety
 * `group` must be null or a handle from [`cf_group_from_json`] not yet freed.
 */
void cf_group_free(CfGroup *group);

/**
 * # Safety
 * `group` must be a live handle and `out` writable.
 */
CfStatus cf_group_order(const CfGroup *group, uintptr_t *out);

/**
 * Number of conjugacy classes, which equals the number of irreducibles.
 *
 * # Safety
 * `group` must be a live handle and `out` writable.
 */
CfStatus cf_group_class_count(const CfGroup *group, uintptr_t *out);

/**
 * Character table as a JSON string; release it with [`cf_string_free`].
 *
 * # Safety
 * `group` must be a live handle and `out` writable.
 */
CfStatus cf_group_character_table_json(const CfGroup *group, char **out);

/**
 * Parses a datum file. Invalid data still yield a handle; check them with
 * [`cf_datum_is_valid`].
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` a writable pointer.
 */
CfStatus cf_datum_from_json(const char *json, CfDatum **out);

/**
 * # Safety
 * `datum` must be null or a handle from [`cf_datum_from_json`] not yet freed.
 */
void cf_datum_free(CfDatum *datum);

/**
 * Writes whether the datum satisfies the existence conditions; on `false`
 * the reasons are available from [`cf_last_error`].
 *
 * # Safety
 * `datum` must be a live handle and `out` writable.
 */
CfStatus cf_datum_is_valid(const CfDatum *datum, bool *out);

/**
 * Genus of the covering curve.
 *
 * # Safety
 * `datum` must be a live handle and `out` writable.
 */
CfStatus cf_datum_genus(const CfDatum *datum, uint64_t *out);

/**
 * Multiplicity of each irreducible in the holomorphic differentials, in
 * character-table order. `written` receives the number of irreducibles; if
 * `capacity` is smaller, nothing is copied and `BufferTooSmall` is returned.
 *
 * # Safety
 * `datum` must be a live handle, `out` must hold `capacity` values, and
 * `written` must be writable.
 */
CfStatus cf_datum_cw_multiplicities(const CfDatum *datum,
                                    uint64_t *out,
                                    uintptr_t capacity,
                                    uintptr_t *written);

/**
 * Genus and per-irreducible summands (rank, support, multiplicity, Hodge
 * type) as JSON; release it with [`cf_string_free`].
 *
 * # Safety
 * `datum` must be a live handle and `out` writable.
 */
CfStatus cf_datum_report_json(const CfDatum *datum, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* COVERFORGE_H */
