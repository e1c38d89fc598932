/* C ABI for the nilgrowth library.
 *
 * Handles are opaque; create and free them in matching pairs. Functions
 * return NG_OK (0) or a negative NG_ERR_* code; constructors return NULL on
 * failure. ng_last_error() returns the latest failure message for the
 * calling thread (free with ng_string_free). Every char* returned by the
 * library is NUL-terminated UTF-8 owned by the caller after return; release
 * it with ng_string_free.
 *
 * Link against libnilgrowth_capi (cdylib or staticlib).
 */

#ifndef NILGROWTH_H
#define NILGROWTH_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#define NG_OK 0
#define NG_ERR_NULL (-1)
#define NG_ERR_INVALID (-2)
#define NG_ERR_OUT_OF_RADIUS (-3)
#define NG_ERR_RESOURCE (-4)
#define NG_ERR_DOMAIN (-5)
#define NG_ERR_PANIC (-6)

/* Opaque handles. */
typedef struct NgGroup NgGroup;
typedef struct NgTable NgTable;

/* Library version as a static string; do not free. */
const char *ng_version(void);

/* Latest error message for this thread, or NULL. Free with ng_string_free. */
char *ng_last_error(void);

/* Free any string returned by this library. NULL is a no-op. */
void ng_string_free(char *s);

/* Built-in groups: Z1, Z2, H3, Engel, vZ, vH, vE, G2rot. NULL on error. */
NgGroup *ng_group_new(const char *name);
void ng_group_free(NgGroup *g);

/* Nilpotency class of the kernel; 0 on NULL. */
uint32_t ng_group_class(const NgGroup *g);

/* Bass-Guivarc'h exponent of the kernel; 0 on NULL. */
uint64_t ng_group_bass_guivarch(const NgGroup *g);

/* Growth classification report as JSON. NULL on error. */
char *ng_criterion_json(const NgGroup *g);

/* Evaluate a word ("a^3 t a^-2" grammar) to exact element coordinates.
 * NULL on error. */
char *ng_eval(const NgGroup *g, const char *word);

/* Exact alpha_s / delta_s as rational strings ("p" or "p/q"). NULL on
 * error (alpha needs s >= 2, delta needs s >= 1). */
char *ng_alpha(uint32_t s);
char *ng_delta(uint32_t s);

/* Exhaustive norm table out to `radius`. `max_elements` caps memory;
 * `workers` = 0 means 1. NULL on error. */
NgTable *ng_ball(const NgGroup *g, uint32_t radius, uint64_t max_elements,
                 uint32_t workers);
void ng_table_free(NgTable *t);

uint32_t ng_table_radius(const NgTable *t);

/* Elements first reached at distance n; 0 when n exceeds the radius. */
uint64_t ng_table_layer_size(const NgTable *t, uint32_t n);

/* Word norm of a word's element via the table. NG_OK writes *out_norm;
 * NG_ERR_OUT_OF_RADIUS means the element lies outside the table. */
int32_t ng_word_norm(const NgTable *t, const NgGroup *g, const char *word,
                     uint32_t *out_norm);

/* Checksummed cache-file round trip. Loading verifies the format version,
 * the (group, generating set) fingerprint, and the body checksum. */
int32_t ng_table_save(const NgTable *t, const char *path);
NgTable *ng_table_load(const NgGroup *g, const char *path);

#ifdef __cplusplus
}
#endif

#endif /* NILGROWTH_H */
