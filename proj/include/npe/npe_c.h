#ifndef NPE_C_H
#define NPE_C_H

/* C interface to the npe library. Every call returns an npe_status; on
 * failure npe_last_error() describes the problem for the calling thread.
 * Status values equal the npectl exit codes. */

#include <stddef.h>
#include <stdint.h>

#if defined(NPE_BUILDING_SHARED)
#define NPE_API __attribute__((visibility("default")))
#else
#define NPE_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum npe_status {
  NPE_OK = 0,
  NPE_ERR_CONFIGURATION = 2,
  NPE_ERR_INVARIANT = 3,
  NPE_ERR_CERTIFICATION = 4,
  NPE_ERR_BLOWUP = 5,
  NPE_ERR_QUADRATURE = 6,
  NPE_ERR_ENVELOPE = 7,
  NPE_ERR_DOMAIN = 8,
  NPE_ERR_IO = 9,
  NPE_ERR_ARGUMENT = 10,
  NPE_ERR_INTERNAL = 11
} npe_status;

typedef enum npe_verdict {
  NPE_STABILITY = 0,
  NPE_EXPLOSION = 1,
  NPE_GROWING = 2,
  NPE_UNDETERMINED = 3
} npe_verdict;

typedef enum npe_trajectory_status {
  NPE_TRAJ_COMPLETED = 0,
  NPE_TRAJ_BLOWUP = 1,
  NPE_TRAJ_QUADRATURE_FAILURE = 2,
  NPE_TRAJ_TRUNCATED = 3
} npe_trajectory_status;

typedef struct npe_field npe_field;
typedef struct npe_trajectory npe_trajectory;

NPE_API const char* npe_version(void);
/* Message of the last failed call on this thread ("" if none). */
NPE_API const char* npe_last_error(void);
NPE_API void npe_string_free(char* s);

/* Fields on an N^3 grid with cutoff K. */
NPE_API npe_status npe_field_zero(int n, int k, npe_field** out);
NPE_API npe_status npe_field_random(int n, int k, uint64_t seed, double decay, double norm,
                                    npe_field** out);
NPE_API npe_status npe_field_single_mode(int n, int k, const int wavevector[3], int component,
                                         double re, double im, npe_field** out);
/* Normalized control u for the box [a, b] and scale p (p <= 0 picks the
 * smallest admissible p). */
NPE_API npe_status npe_field_control(int n, int k, const double a[3], const double b[3], int p,
                                     const double amplitudes[3], npe_field** out);
NPE_API npe_status npe_field_load(const char* path, npe_field** out);
NPE_API npe_status npe_field_save(const npe_field* field, const char* path);
/* out = alpha * x + beta * y */
NPE_API npe_status npe_field_combine(double alpha, const npe_field* x, double beta,
                                     const npe_field* y, npe_field** out);
NPE_API npe_status npe_field_lattice(const npe_field* field, int* n, int* k);
NPE_API void npe_field_free(npe_field* field);

NPE_API npe_status npe_sobolev_norm(const npe_field* field, double s, double* out);
NPE_API npe_status npe_l2_inner(const npe_field* f, const npe_field* g, double* out);
NPE_API npe_status npe_heat_propagate(const npe_field* field, double t, npe_field** out);
NPE_API npe_status npe_psi(const npe_field* field, double* out);
NPE_API npe_status npe_phi(const npe_field* field, double* out);
/* Uses the default quadrature settings. */
NPE_API npe_status npe_phi_integral(const npe_field* field, double t, double* value,
                                    double* error_estimate);
NPE_API npe_status npe_classify(const npe_field* field, double tol, npe_verdict* verdict,
                                double* sup_integral);

/* Closed-form trajectory sampled at an increasing grid starting at 0. */
NPE_API npe_status npe_simulate(const npe_field* field, const double* times, size_t count,
                                npe_trajectory** out);
NPE_API size_t npe_trajectory_length(const npe_trajectory* traj);
NPE_API npe_status npe_trajectory_sample(const npe_trajectory* traj, size_t index, double* t,
                                         double* norm0, double* denominator);
NPE_API npe_trajectory_status npe_trajectory_get_status(const npe_trajectory* traj);
/* NaN unless the trajectory ended in a blow-up. */
NPE_API double npe_trajectory_blowup_time(const npe_trajectory* traj);
NPE_API double npe_trajectory_alpha(const npe_trajectory* traj);
NPE_API void npe_trajectory_free(npe_trajectory* traj);

/* Runs an experiment command (build-control, certify, simulate, classify,
 * stabilize, sweep) on a JSON configuration, writing artifacts to out_dir.
 * options_json may be NULL or hold threads, seed, double_k, negate, oracle,
 * lambda_override. The report is returned through report_json (release
 * with npe_string_free) and its exit code through exit_code. The return
 * value is NPE_OK whenever the command ran, whatever its exit code. */
NPE_API npe_status npe_run(const char* command, const char* config_json, const char* out_dir,
                           const char* options_json, char** report_json, int* exit_code);

#ifdef __cplusplus
}
#endif

#endif
