/* C interface to the discrete Morse surgery library. */
#ifndef DMS_DMS_H
#define DMS_DMS_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(DMS_BUILDING)
#    define DMS_API __declspec(dllexport)
#  else
#    define DMS_API __declspec(dllimport)
#  endif
#else
#  define DMS_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef struct dms_complex dms_complex;
typedef struct dms_field dms_field;
typedef struct dms_function dms_function;
typedef struct dms_decomposition dms_decomposition;

typedef enum dms_status {
  DMS_OK = 0,
  DMS_INVALID_ARGUMENT = 1, /* null handle, size mismatch, unknown option */
  DMS_PARSE = 2,            /* malformed input or structurally invalid complex */
  DMS_IO = 3,
  DMS_PRECONDITION = 4,     /* input does not meet an operation's hypotheses */
  DMS_VALIDATION = 5,       /* a function or field fails its checks */
  DMS_INTERNAL = 6
} dms_status;

/* Details of the most recent failure on the calling thread. The pointers stay
   valid until the next failing call on that thread. */
DMS_API const char* dms_last_error(void);
DMS_API const char* dms_last_error_kind(void);
DMS_API const char* dms_version(void);

/* Strings returned through char** are owned by the caller. */
DMS_API void dms_string_free(char* s);

/* Complexes: TRI or CWP text, detected by the first keyword. */
DMS_API dms_status dms_complex_load(const char* path, dms_complex** out);
DMS_API dms_status dms_complex_parse(const char* text, dms_complex** out);
DMS_API dms_status dms_complex_save(const dms_complex* k, const char* path);
DMS_API void dms_complex_free(dms_complex* k);
DMS_API size_t dms_complex_size(const dms_complex* k);
DMS_API int dms_complex_top_dim(const dms_complex* k);
DMS_API long dms_complex_euler(const dms_complex* k);
DMS_API dms_status dms_complex_surface_info(const dms_complex* k, int* genus, int* orientable,
                                            int* connected);

/* Writes up to cap entries; *len receives the full length. */
DMS_API dms_status dms_betti(const dms_complex* k, int* out, size_t cap, size_t* len);

/* Vector fields. With strict == 0 doubly matched cells and contradicting
   crit lines are reported through *problems (NULL when there are none)
   instead of failing the load. */
DMS_API dms_status dms_field_load(const dms_complex* k, const char* path, int strict,
                                  dms_field** out, char** problems);
DMS_API dms_status dms_field_save(const dms_complex* k, const dms_field* v, const char* path);
DMS_API void dms_field_free(dms_field* v);

DMS_API dms_status dms_function_load(const dms_complex* k, const char* path, dms_function** out);
DMS_API dms_status dms_function_save(const dms_complex* k, const dms_function* f,
                                     const char* path);
DMS_API void dms_function_free(dms_function* f);

DMS_API dms_status dms_field_from_function(const dms_complex* k, const dms_function* f,
                                           dms_field** out);
DMS_API dms_status dms_function_from_field(const dms_complex* k, const dms_field* v,
                                           dms_function** out);

/* *ok receives 1 or 0; *diagnostics gets one line per violation (may be NULL). */
DMS_API dms_status dms_validate_field(const dms_complex* k, const dms_field* v, int* ok,
                                      char** diagnostics);
DMS_API dms_status dms_validate_function(const dms_complex* k, const dms_function* f, int* ok,
                                         char** diagnostics);

DMS_API dms_status dms_critical_counts(const dms_complex* k, const dms_field* v, int* out,
                                       size_t cap, size_t* len);
/* One "dim id" line per critical cell. */
DMS_API dms_status dms_critical_cells(const dms_complex* k, const dms_field* v, char** listing);
DMS_API dms_status dms_is_perfect(const dms_complex* k, const dms_field* v, int* perfect);

DMS_API dms_status dms_compose(const dms_complex* m1, const dms_function* f1,
                               const dms_complex* m2, const dms_function* f2,
                               dms_complex** out_k, dms_field** out_v, dms_function** out_f,
                               char** report_json);

DMS_API dms_status dms_decompose(const dms_complex* k, const dms_function* f, int g1, int g2,
                                 dms_decomposition** out);
/* which is 1 (holds the minimum) or 2. Returned handles are borrowed and live
   as long as the decomposition. */
DMS_API dms_status dms_decomposition_piece(const dms_decomposition* d, int which,
                                           const dms_complex** k, const dms_field** v,
                                           const dms_function** f);
/* Ordered edge ids of the separating circle, one per line. */
DMS_API dms_status dms_decomposition_circle(const dms_decomposition* d, char** text);
DMS_API dms_status dms_decomposition_report(const dms_decomposition* d, char** json);
DMS_API void dms_decomposition_free(dms_decomposition* d);

/* kind: sphere, torus7, rp2, pillow, genus. Outputs may be NULL when unwanted. */
DMS_API dms_status dms_fixture(const char* kind, int genus, uint64_t seed, dms_complex** out_k,
                               dms_field** out_v, dms_function** out_f);

/* format: "off" or "dot"; v may be NULL. */
DMS_API dms_status dms_export(const dms_complex* k, const dms_field* v, const char* format,
                              char** out);

#ifdef __cplusplus
}
#endif

#endif
