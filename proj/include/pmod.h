/*
 * pmod — exact interval decompositions (barcodes) of persistence modules
 * over finite chains and zigzag quivers, with arithmetic in GF(p).
 *
 * All functions returning pmod_status leave a human-readable message for the
 * latest failure in pmod_last_error() (thread local). Objects returned
 * through out-parameters are owned by the caller and released with the
 * matching _free function. Point and arrow indices are 1-based.
 */

#ifndef PMOD_H
#define PMOD_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef struct pmod_module pmod_module;
typedef struct pmod_barcode pmod_barcode;
typedef struct pmod_stream pmod_stream;

typedef enum pmod_status {
    PMOD_OK = 0,
    PMOD_MISMATCH = 1,        /* semantic disagreement (e.g. verification failed) */
    PMOD_PARSE_ERROR = 2,     /* malformed input text or file */
    PMOD_INVARIANT_ERROR = 3, /* internal invariant violated; indicates a bug */
    PMOD_USAGE_ERROR = 4,     /* contract violation by the caller */
} pmod_status;

/* Message describing the most recent failure on this thread; never NULL. */
const char* pmod_last_error(void);

/* ----- modules ----- */

pmod_status pmod_module_parse(const char* text, pmod_module** out);
pmod_status pmod_module_read(const char* path, pmod_module** out);
pmod_status pmod_module_print(const pmod_module* m, char** out_text);
pmod_status pmod_module_random(uint32_t points, uint32_t max_dim, uint32_t prime,
                               uint64_t seed, pmod_module** out);
void pmod_module_free(pmod_module* m);

uint32_t pmod_module_points(const pmod_module* m);
uint32_t pmod_module_prime(const pmod_module* m);
/* Fiber dimension at a 1-based point; 0 if out of range. */
uint32_t pmod_module_dim(const pmod_module* m, uint32_t point);
/* 'F' or 'B' for a 1-based arrow; 0 if out of range. */
char pmod_module_direction(const pmod_module* m, uint32_t arrow);

/* ----- decomposition ----- */

/*
 * Computes the barcode. When `check` is nonzero the decomposition is also
 * run through the independent validity checker and PMOD_INVARIANT_ERROR is
 * returned if it fails. `seed`, when non-NULL, randomizes tie-breaking; the
 * barcode does not depend on it.
 */
pmod_status pmod_decompose(const pmod_module* m, const uint64_t* seed, int check,
                           pmod_barcode** out);

/* Recomputes the barcode of `m` and compares: PMOD_OK iff equal. */
pmod_status pmod_verify(const pmod_module* m, const pmod_barcode* expected);

/* ----- barcodes ----- */

size_t pmod_barcode_size(const pmod_barcode* b);
pmod_status pmod_barcode_bar(const pmod_barcode* b, size_t index, uint32_t* lo, uint32_t* hi,
                             uint32_t* mult);
pmod_status pmod_barcode_to_json(const pmod_barcode* b, char** out_text);
pmod_status pmod_barcode_parse_json(const char* text, pmod_barcode** out);
/* 1 if equal as multisets (including prime and point count), else 0. */
int pmod_barcode_equal(const pmod_barcode* a, const pmod_barcode* b);
uint32_t pmod_barcode_points(const pmod_barcode* b);
void pmod_barcode_free(pmod_barcode* b);

/* ----- streaming ----- */

/*
 * A stream starts from a single point of the given fiber dimension and grows
 * by blocks (monotone runs of arrows). Block text is the block section of
 * the stream file format:
 *   dir <F|B>
 *   dims <k integers>
 *   map <j>
 *   <matrix rows>
 */
pmod_status pmod_stream_new(uint32_t prime, uint32_t start_dim, pmod_stream** out);
pmod_status pmod_stream_push(pmod_stream* s, const char* block_text);
uint32_t pmod_stream_blocks(const pmod_stream* s);
uint32_t pmod_stream_points(const pmod_stream* s);
/* Bars that can no longer change / bars still extending at the frontier. */
pmod_status pmod_stream_closed(const pmod_stream* s, pmod_barcode** out);
pmod_status pmod_stream_open(const pmod_stream* s, pmod_barcode** out);
void pmod_stream_free(pmod_stream* s);

/* ----- misc ----- */

void pmod_string_free(char* text);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* PMOD_H */
