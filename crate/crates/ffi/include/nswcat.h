#ifndef NSWCAT_H
#define NSWCAT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

#define NSW_REP_FREQ 0

#define NSW_REP_STAT 1

#define NSW_REP_UNION 2

typedef enum NswStatus {
  NSW_STATUS_OK = 0,
  NSW_STATUS_NULL_POINTER = 1,
  NSW_STATUS_INVALID_UTF8 = 2,
  NSW_STATUS_IO = 3,
  // Malformed resource file, model bytes or argument value.
  NSW_STATUS_DATA = 4,
  NSW_STATUS_WIDTH_MISMATCH = 5,
  NSW_STATUS_BUFFER_TOO_SMALL = 6,
  NSW_STATUS_PANIC = 7,
} NswStatus;

typedef struct NswLexerHandle NswLexerHandle;

typedef struct NswModelHandle NswModelHandle;

// One detected NSW: byte range in the input and taxonomy leaf index.
typedef struct NswSpan {
  size_t start;
  size_t end;
  uint32_t type_id;
} NswSpan;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version as a static NUL-terminated string.
const char *nsw_version(void);

// Message of the last failed call on this thread; empty after a
// success. Valid until the next call on the same thread.
const char *nsw_last_error(void);

// Feature count of a representation, or 0 for an unknown one.
size_t nsw_representation_width(uint32_t rep);

// Lexer with the shipped taxonomy, lexicon and rules.
//
// # Safety
// `out` must be a valid pointer.
enum NswStatus nsw_lexer_new_default(struct NswLexerHandle **out);

// Lexer from resource files; a null path keeps the shipped component.
//
// # Safety
// Non-null paths must be NUL-terminated; `out` must be valid.
enum NswStatus nsw_lexer_new_from_files(const char *taxonomy,
                                        const char *lexicon,
                                        const char *rules,
                                        struct NswLexerHandle **out);

// # Safety
// `lexer` must come from a constructor above and not be used again.
void nsw_lexer_free(struct NswLexerHandle *lexer);

// Number of taxonomy leaves.
//
// # Safety
// `lexer` must be a live handle or null (returns 0).
size_t nsw_lexer_type_count(const struct NswLexerHandle *lexer);

// Name of leaf `type_id`, owned by the lexer; null when out of range.
//
// # Safety
// `lexer` must be a live handle or null.
const char *nsw_lexer_type_name(const struct NswLexerHandle *lexer, uint32_t type_id);

// # Safety
// `lexer` live, `text` NUL-terminated, `out_count` valid.
enum NswStatus nsw_lexer_count_tokens(const struct NswLexerHandle *lexer,
                                      const char *text,
                                      size_t *out_count);

// Writes every NSW in `text` to `out`, in document order.
//
// # Safety
// `lexer` live, `text` NUL-terminated, `out` valid for `cap` spans,
// `out_len` valid.
enum NswStatus nsw_lexer_extract(const struct NswLexerHandle *lexer,
                                 const char *text,
                                 struct NswSpan *out,
                                 size_t cap,
                                 size_t *out_len);

// Feature vector of `text` as one document in representation `rep`.
//
// # Safety
// `lexer` live, `text` NUL-terminated, `out` valid for `cap` values,
// `out_len` valid.
enum NswStatus nsw_lexer_features(const struct NswLexerHandle *lexer,
                                  const char *text,
                                  uint32_t rep,
                                  double *out,
                                  size_t cap,
                                  size_t *out_len);

// Loads a model file written by `nswcat train`.
//
// # Safety
// `path` NUL-terminated, `out` valid.
enum NswStatus nsw_model_load(const char *path, struct NswModelHandle **out);

// Decodes a model from the bytes of a model file.
//
// # Safety
// `bytes` valid for `len` bytes, `out` valid.
enum NswStatus nsw_model_from_bytes(const uint8_t *bytes, size_t len, struct NswModelHandle **out);

// # Safety
// `model` must come from a loader above and not be used again.
void nsw_model_free(struct NswModelHandle *model);

// `nb`, `knn`, `tree` or `forest`; null for a null handle.
//
// # Safety
// `model` must be a live handle or null.
const char *nsw_model_kind(const struct NswModelHandle *model);

// # Safety
// `model` must be a live handle or null (returns 0).
size_t nsw_model_feature_width(const struct NswModelHandle *model);

// # Safety
// `model` must be a live handle or null (returns 0).
size_t nsw_model_class_count(const struct NswModelHandle *model);

// Name of class `index`, owned by the model; null when out of range.
//
// # Safety
// `model` must be a live handle or null.
const char *nsw_model_class_name(const struct NswModelHandle *model, size_t index);

// Predicts the class index of one feature vector.
//
// # Safety
// `model` live, `features` valid for `len` values, `out_class` valid.
enum NswStatus nsw_model_predict(const struct NswModelHandle *model,
                                 const double *features,
                                 size_t len,
                                 size_t *out_class);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* NSWCAT_H */
