#ifndef FILLSCOPE_H
#define FILLSCOPE_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

#define FS_OK 0

#define FS_ERR_NULL 1

#define FS_ERR_UTF8 2

#define FS_ERR_PARAM 3

#define FS_ERR_PARSE 4

#define FS_ERR_INVALID 5

#define FS_ERR_BUDGET 6

#define FS_ERR_OTHER 7

#define FS_ERR_PANIC 8

/**
 * Opaque diagram handle.
 */
typedef struct FsDiagram FsDiagram;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Builds a diagram family (`dn`, `sigma`, `bpower`, `bpower_hat`, `delta`, `qmwn`).
 * Negative parameters mean "not given"; a zero budget selects the default.
 *
 * # Safety
 * `family` must be a NUL-terminated string and `out` a valid pointer.
 */
int32_t fs_construct(const char *family,
                     int64_t k,
                     int64_t m,
                     int64_t n,
                     uint64_t budget_faces,
                     struct FsDiagram **out);

/**
 * Parses a diagram in the interchange text format.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` a valid pointer.
 */
int32_t fs_diagram_parse(const char *text, struct FsDiagram **out);

/**
 * Serializes a diagram (with its certificate, if any).
 *
 * # Safety
 * `d` must be a live handle and `out` a valid pointer.
 */
int32_t fs_diagram_to_text(const struct FsDiagram *d, char **out);

/**
 * Returns `FS_OK` for a valid diagram and `FS_ERR_INVALID` otherwise.
 *
 * # Safety
 * `d` must be a live handle.
 */
int32_t fs_diagram_validate(const struct FsDiagram *d);

/**
 * Writes area, vertex count and intrinsic diameter; any output pointer may be null.
 *
 * # Safety
 * `d` must be a live handle; non-null outputs must be valid.
 */
int32_t fs_diagram_stats(const struct FsDiagram *d,
                         uint64_t *area,
                         uint64_t *vertices,
                         uint64_t *idiam);

/**
 * The boundary word read from the base.
 *
 * # Safety
 * `d` must be a live handle and `out` a valid pointer.
 */
int32_t fs_diagram_boundary(const struct FsDiagram *d, char **out);

/**
 * The presentation text of a named family; negative parameters mean "not given".
 *
 * # Safety
 * `family` must be a NUL-terminated string and `out` a valid pointer.
 */
int32_t fs_presentation_text(const char *family, int64_t k, int64_t m, char **out);

/**
 * Copy of the last error message on this thread, or null if there is none.
 */
char *fs_last_error(void);

/**
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void fs_string_free(char *s);

/**
 * # Safety
 * `d` must come from this library and not have been freed.
 */
void fs_diagram_free(struct FsDiagram *d);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FILLSCOPE_H */
