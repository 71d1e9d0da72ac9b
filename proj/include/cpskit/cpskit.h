#ifndef CPSKIT_H
#define CPSKIT_H

/* C interface to the cpskit shared library.
 *
 * Every call returns a cpskit_status. On failure the message is available
 * from cpskit_last_error() on the calling thread until the next failing call.
 * Handles are opaque and must be released with their matching _free call.
 */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define CPSKIT_API __declspec(dllexport)
#elif defined(CPSKIT_BUILDING_LIBRARY)
#define CPSKIT_API __attribute__((visibility("default")))
#else
#define CPSKIT_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum {
  CPSKIT_OK = 0,
  CPSKIT_ERR_INVALID_ARGUMENT = 1,
  CPSKIT_ERR_DIMENSION = 2,
  CPSKIT_ERR_NOT_HERMITIAN = 3,
  CPSKIT_ERR_NOT_UNITARY = 4,
  CPSKIT_ERR_UNSUPPORTED = 5,
  CPSKIT_ERR_IO = 6,
  CPSKIT_ERR_INTERNAL = 99
} cpskit_status;

typedef struct cpskit_basis cpskit_basis;
typedef struct cpskit_state cpskit_state;
typedef struct cpskit_table cpskit_table;
typedef struct cpskit_text cpskit_text;

CPSKIT_API const char* cpskit_version(void);
CPSKIT_API const char* cpskit_last_error(void);
CPSKIT_API const char* cpskit_status_name(cpskit_status status);

/* n <= 0 restores the default (CPSKIT_THREADS, else hardware concurrency). */
CPSKIT_API cpskit_status cpskit_set_threads(int n);
CPSKIT_API int cpskit_threads(void);

/* ---- text ---- */
CPSKIT_API const char* cpskit_text_data(const cpskit_text* text);
CPSKIT_API void cpskit_text_free(cpskit_text* text);

/* ---- tables: column-major doubles plus a JSON summary ---- */
CPSKIT_API size_t cpskit_table_rows(const cpskit_table* table);
CPSKIT_API size_t cpskit_table_cols(const cpskit_table* table);
CPSKIT_API const char* cpskit_table_column_name(const cpskit_table* table, size_t col);
/* Pointer to `rows` contiguous values of column `col`, or NULL. */
CPSKIT_API const double* cpskit_table_column(const cpskit_table* table, size_t col);
CPSKIT_API const char* cpskit_table_summary(const cpskit_table* table);
CPSKIT_API void cpskit_table_free(cpskit_table* table);

/* ---- bases and states ---- */
CPSKIT_API cpskit_status cpskit_basis_new(int d, int n0, double alpha_re, double alpha_im,
                                          cpskit_basis** out);
CPSKIT_API void cpskit_basis_free(cpskit_basis* basis);
CPSKIT_API int cpskit_basis_dim(const cpskit_basis* basis);
CPSKIT_API int cpskit_basis_n0(const cpskit_basis* basis);
CPSKIT_API cpskit_status cpskit_basis_gq(const cpskit_basis* basis, double* out);
CPSKIT_API cpskit_status cpskit_basis_gram(const cpskit_basis* basis, int q1, int q2,
                                           double* re, double* im);

/* Fock amplitudes psi_n for n = n0..n_max, interleaved re/im (2d doubles).
 * normalized != 0 selects the g_Q-normalized convention. */
CPSKIT_API cpskit_status cpskit_state_from_fock(const cpskit_basis* basis, const double* psi,
                                                int normalized, cpskit_state** out);
CPSKIT_API cpskit_status cpskit_state_member(const cpskit_basis* basis, int q,
                                             cpskit_state** out);
CPSKIT_API void cpskit_state_free(cpskit_state* state);
/* Writes 2d doubles (re/im interleaved). */
CPSKIT_API cpskit_status cpskit_state_coeffs(const cpskit_state* state, double* out);
CPSKIT_API cpskit_status cpskit_state_to_fock(const cpskit_state* state, double* out);
CPSKIT_API cpskit_status cpskit_state_norm_sq(const cpskit_state* state, double* out);
/* JSON {d, n0, alpha, coeffs, convention}. */
CPSKIT_API cpskit_status cpskit_state_json(const cpskit_state* state, cpskit_text** out);

/* ---- experiments ---- */
typedef enum { CPSKIT_PICTURE_DIRECT = 0, CPSKIT_PICTURE_HYBRID = 1 } cpskit_picture;

typedef struct {
  double alpha_re;
  double alpha_im;
  int d;
  double omega;
  double kappa;
  int steps;
  double t_max;
  cpskit_picture picture;
} cpskit_anharmonic_config;

CPSKIT_API void cpskit_anharmonic_defaults(cpskit_anharmonic_config* config);
/* Columns: t, a_re, a_im, analytic_re, analytic_im, deviation, mean_number,
 * norm_drift. Summary: max_deviation, max_norm_drift. */
CPSKIT_API cpskit_status cpskit_anharmonic(const cpskit_anharmonic_config* config,
                                           cpskit_table** out);

typedef enum {
  CPSKIT_NOISE_MC = 0,
  CPSKIT_NOISE_GAUSS_HERMITE = 1,
  CPSKIT_NOISE_EXACT = 2
} cpskit_noise_method;

typedef struct {
  double alpha;
  double sigma;
  int points;
  double p_min;
  double p_max;
  uint64_t samples;
  uint64_t seed;
  cpskit_noise_method method;
  int d; /* 0 selects the default cutoff */
} cpskit_fringe_config;

CPSKIT_API void cpskit_fringe_defaults(cpskit_fringe_config* config);
/* Columns: p, density, stderr (NaN unless Monte Carlo), and analytic when
 * sigma == 0. Summary: d, visibility, t_collapse, method. */
CPSKIT_API cpskit_status cpskit_cat_fringes(const cpskit_fringe_config* config,
                                            cpskit_table** out);

/* Columns: dq, then |M| and the coherent-state reference e^{-|a - a'|^2/2}
 * for each radius. */
CPSKIT_API cpskit_status cpskit_basis_info(int d, int n0, const double* alpha_sq, size_t count,
                                           cpskit_table** out);

typedef enum { CPSKIT_SAMPLING_EXACT = 0, CPSKIT_SAMPLING_MC = 1 } cpskit_sampling;

/* unitary_json: {"m", "re", "im"}. Result JSON: value, stderr, method,
 * samples, seed, and oracle = |Perm|^2 when exact with N <= 12. */
CPSKIT_API cpskit_status cpskit_boson_sampling(const char* unitary_json, const int* inputs,
                                               size_t n_inputs, const int* outputs,
                                               size_t n_outputs, cpskit_sampling method,
                                               uint64_t samples, uint64_t seed,
                                               cpskit_text** out);

/* Permanent of an n x n row-major matrix given as interleaved re/im. */
CPSKIT_API cpskit_status cpskit_permanent(const double* matrix, int n, double* re, double* im);

/* Suites: basis, operators, evolution, prep, oracle, all. *passed is set to
 * 1 when every check is within tolerance. */
CPSKIT_API cpskit_status cpskit_validate(const char* suite, int* passed, cpskit_text** out);

#ifdef __cplusplus
}
#endif

#endif
