#ifndef BIRDTRACK_H
#define BIRDTRACK_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum BtStatus {
  BT_STATUS_OK = 0,
  BT_STATUS_NULL_POINTER = 1,
  BT_STATUS_INVALID_UTF8 = 2,
  BT_STATUS_PARSE = 3,
  BT_STATUS_INVALID = 4,
  BT_STATUS_REFUSED = 5,
  BT_STATUS_RESOURCE = 6,
  // A rust panic was caught at the boundary.
  BT_STATUS_INTERNAL = 7,
} BtStatus;

// Opaque operator expression.
typedef struct BtExpr BtExpr;

// Opaque Young tableau.
typedef struct BtTableau BtTableau;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread, or NULL. The pointer is
// valid until the next failing call on the same thread.
const char *bt_last_error_message(void);

// Parse a tableau such as `[[1,2],[3]]`.
//
// # Safety
// `text` must be a NUL-terminated string and `out` a valid pointer.
enum BtStatus bt_tableau_parse(const char *text, struct BtTableau **out);

// # Safety
// `t` must come from this library or be NULL.
void bt_tableau_free(struct BtTableau *t);

// Parse an operator in the text syntax, e.g. `S{1 2} A{1 3}`.
//
// # Safety
// `text` must be a NUL-terminated string and `out` a valid pointer.
enum BtStatus bt_expr_parse(const char *text, struct BtExpr **out);

// # Safety
// `e` must come from this library or be NULL.
void bt_expr_free(struct BtExpr *e);

// Print an expression. The string must be released with [`bt_string_free`].
//
// # Safety
// `e` must be a live handle and `out` a valid pointer.
enum BtStatus bt_expr_print(const struct BtExpr *e, char **out);

// # Safety
// `s` must come from this library or be NULL.
void bt_string_free(char *s);

// Number of symmetrizer and antisymmetrizer sets in the expression.
//
// # Safety
// `e` must be a live handle and `out` a valid pointer.
enum BtStatus bt_expr_set_count(const struct BtExpr *e, uintptr_t *out);

// The Young projector of a tableau.
//
// # Safety
// `t` must be a live handle and `out` a valid pointer.
enum BtStatus bt_build_young(const struct BtTableau *t, struct BtExpr **out);

// Simplify with every rule enabled. `exact` nonzero computes Tung constants
// exactly instead of introducing symbolic ones.
//
// # Safety
// `e` must be a live handle and `out` a valid pointer.
enum BtStatus bt_expr_simplify(const struct BtExpr *e, int32_t exact, struct BtExpr **out);

// Compare two expressions by full expansion. `*equal` is 1 when they are the
// same element of the group algebra and 0 otherwise.
//
// # Safety
// `a` and `b` must be live handles and `equal` a valid pointer.
enum BtStatus bt_expr_equal(const struct BtExpr *a, const struct BtExpr *b, int32_t *equal);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BIRDTRACK_H */
