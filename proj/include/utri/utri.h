/* C interface to the unlabeled triangulation library. */
#ifndef UTRI_UTRI_H
#define UTRI_UTRI_H

#include <stddef.h>
#include <stdint.h>

#if defined(UTRI_BUILDING_LIBRARY)
#define UTRI_API __attribute__((visibility("default")))
#else
#define UTRI_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes. Nonzero values other than the last two mirror the library's
 * typed errors. */
typedef enum utri_status {
  UTRI_OK = 0,
  UTRI_ERR_DEGENERATE_INPUT = 1,
  UTRI_ERR_INVALID_CAMERA = 2,
  UTRI_ERR_OUT_OF_RANGE = 3,
  UTRI_ERR_UNDEFINED_PROJECTION = 4,
  UTRI_ERR_INVALID_PAIR = 5,
  UTRI_ERR_AMBIGUOUS_TRIANGULATION = 6,
  UTRI_ERR_SHAPE = 7,
  UTRI_ERR_DEGENERATE_PROJECTION = 8,
  UTRI_ERR_NOT_SPLITTABLE = 9,
  UTRI_ERR_COMPLEX_PAIR = 10,
  UTRI_ERR_OFF_VARIETY = 11,
  UTRI_ERR_DEGENERATE_CONFIGURATION = 12,
  UTRI_ERR_INCONSISTENT_DATA = 13,
  UTRI_ERR_UNSUPPORTED_CONFIGURATION = 14,
  UTRI_ERR_PRECONDITION_VIOLATION = 15,
  UTRI_ERR_BUDGET_EXCEEDED = 16,
  UTRI_ERR_UNRELIABLE_RANK = 17,
  UTRI_ERR_PARSE = 18,
  UTRI_ERR_ASSERTION = 19,
  UTRI_ERR_INVALID_ARGUMENT = 100,
  UTRI_ERR_INTERNAL = 101
} utri_status;

typedef struct utri_rig utri_rig;
typedef struct utri_scene utri_scene;
typedef struct utri_observations utri_observations;

typedef struct utri_options {
  double tol_rank;     /* default 1e-8 */
  double tol_residual; /* default 1e-6 */
  uint64_t budget;     /* default 1e6 matchings */
} utri_options;

UTRI_API const char* utri_version(void);
UTRI_API void utri_options_default(utri_options* opts);

/* snake_case name of a status, e.g. "off_variety". */
UTRI_API const char* utri_status_name(int status);
/* Process exit code for a status: 0 ok, 2 assertion, 4 budget, 3 otherwise. */
UTRI_API int utri_exit_code(int status);

/* Message and JSON document {"error": {...}} of the last failure on the
 * calling thread. Valid until the next failing call on that thread. */
UTRI_API const char* utri_last_error(void);
UTRI_API const char* utri_last_error_json(void);

/* Strings returned through char** are owned by the caller. */
UTRI_API void utri_string_free(char* s);

UTRI_API size_t utri_sym_size(int order, int dim);

/* Rigs. `matrices` holds n row-major 3x4 matrices. */
UTRI_API int utri_rig_create(const double* matrices, size_t n, utri_rig** out);
UTRI_API int utri_rig_canonical(int n, utri_rig** out);
UTRI_API int utri_rig_random(int n, uint64_t seed, utri_rig** out);
UTRI_API int utri_rig_from_json(const char* json, utri_rig** out);
UTRI_API size_t utri_rig_size(const utri_rig* rig);
UTRI_API void utri_rig_destroy(utri_rig* rig);

/* Scenes. family is "generic", "baseline_coplanar" or "epipolar_degenerate". */
UTRI_API int utri_scene_generate(int n, int m, uint64_t seed, const char* family,
                                 double noise_sigma, utri_scene** out);
UTRI_API int utri_scene_from_json(const char* json, utri_scene** out);
UTRI_API int utri_scene_to_json(const utri_scene* scene, char** out);
UTRI_API int utri_scene_rig(const utri_scene* scene, utri_rig** out);
UTRI_API void utri_scene_destroy(utri_scene* scene);

/* Observations. */
UTRI_API int utri_project(const utri_scene* scene, utri_observations** out);
UTRI_API int utri_observations_from_json(const char* json, utri_observations** out);
UTRI_API int utri_observations_to_json(const utri_observations* obs, char** out);
UTRI_API void utri_observations_destroy(utri_observations* obs);

/* Commands producing JSON documents. opts may be NULL for defaults. */
UTRI_API int utri_triangulate_json(const utri_rig* rig, const utri_observations* obs,
                                   const utri_options* opts, char** out);
UTRI_API int utri_oracle_json(const utri_rig* rig, const utri_observations* obs,
                              const utri_options* opts, char** out);
/* Two views, two points per view. */
UTRI_API int utri_check_ambiguity_json(const utri_rig* rig,
                                       const utri_observations* obs,
                                       const utri_options* opts, char** out);
/* Report with a boolean "passed"; the status is OK even when checks fail. */
UTRI_API int utri_verify_ideal_json(const utri_rig* rig, int views, size_t samples,
                                    uint64_t seed, int pencils,
                                    const utri_options* opts, char** out);
/* out_csv may be NULL. */
UTRI_API int utri_experiment_json(const char* config_json, char** out_json,
                                  char** out_csv);

/* Numeric triangulation. sym_entries holds n_views normalized-or-not image
 * tensors of order m, utri_sym_size(m, 3) entries each, in sorted multi-index
 * order. m_delta_out receives utri_sym_size(m, 4) entries. residual_out and
 * kernel_dim_out may be NULL. */
UTRI_API int utri_triangulate(const utri_rig* rig, int m, size_t n_views,
                              const double* sym_entries, const utri_options* opts,
                              double* m_delta_out, size_t m_delta_len,
                              double* residual_out, int* kernel_dim_out);

#ifdef __cplusplus
}
#endif

#endif /* UTRI_UTRI_H */
