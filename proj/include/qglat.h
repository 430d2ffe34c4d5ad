/* C API for the qglat band-structure engine.
 *
 * All functions return qg_status; results come back through out-parameters.
 * Objects are opaque handles created and destroyed by the library. Handles
 * are not thread-safe individually; the error string is thread-local.
 */
#ifndef QGLAT_H
#define QGLAT_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum qg_status {
    QG_OK = 0,
    QG_ERR_INVALID_ARGUMENT = 1,
    QG_ERR_DOMAIN = 2,
    QG_ERR_SINGULAR = 3,
    QG_ERR_NO_BRACKET = 4,
    QG_ERR_NO_PERTURBATION = 5,
    QG_ERR_MISSING_GAMMA_TILDE = 6,
    QG_ERR_UNCLASSIFIED_EDGE = 7,
    QG_ERR_INTERNAL = 8
} qg_status;

/* Library version string, e.g. "qglat 1.0.0". */
const char* qg_version(void);

/* Symbolic name of a status code. */
const char* qg_status_name(qg_status s);

/* Message of the last error raised on the calling thread ("" if none). */
const char* qg_last_error(void);

/* ---- lattice -------------------------------------------------------- */

typedef struct qg_lattice qg_lattice;

qg_status qg_lattice_create(double a, double b, double gamma,
                            qg_lattice** out);
qg_status qg_lattice_set_gamma_tilde(qg_lattice* lat, double gamma_tilde);
qg_status qg_lattice_clear_gamma_tilde(qg_lattice* lat);
qg_status qg_lattice_gamma_star(const qg_lattice* lat, double* out);
void qg_lattice_free(qg_lattice* lat);

/* Membership tests at a single energy. member is set to 0 or 1. */
qg_status qg_band_membership(const qg_lattice* lat, double energy,
                             int* member);
qg_status qg_s_membership(const qg_lattice* lat, double energy, int* member);

/* ---- spectrum ------------------------------------------------------- */

typedef struct qg_spectrum qg_spectrum;

/* Band kinds reported by qg_spectrum_band. */
#define QG_BAND_AC 0
#define QG_BAND_FLAT 1

/* Gap edge kinds. */
#define QG_EDGE_XI 0
#define QG_EDGE_CONDITION 1
#define QG_EDGE_SPECTRUM_BOTTOM 2

qg_status qg_spectrum_compute(const qg_lattice* lat, double e_lo, double e_hi,
                              qg_spectrum** out);
qg_status qg_spectrum_band_count(const qg_spectrum* sp, size_t* out);
qg_status qg_spectrum_band(const qg_spectrum* sp, size_t i, double* lo,
                           double* hi, int* kind);
qg_status qg_spectrum_flat_count(const qg_spectrum* sp, size_t* out);
qg_status qg_spectrum_flat(const qg_spectrum* sp, size_t i, double* energy);
qg_status qg_spectrum_has_negative_band(const qg_spectrum* sp, int* out);
qg_status qg_spectrum_negative_band(const qg_spectrum* sp, double* lo,
                                    double* hi);
qg_status qg_spectrum_gap_count(const qg_spectrum* sp, size_t* out);
qg_status qg_spectrum_gap(const qg_spectrum* sp, size_t i, double* lo,
                          double* hi, int* left_kind, int* right_kind,
                          double* left_k, double* right_k);
void qg_spectrum_free(qg_spectrum* sp);

/* ---- perturbed lattice ---------------------------------------------- */

typedef struct qg_perturbed_report qg_perturbed_report;

/* Regime cases. */
#define QG_CASE_I 1
#define QG_CASE_II 2
#define QG_CASE_III 3
#define QG_CASE_IV 4

/* New-band conditions. */
#define QG_CONDITION_PLUS 0
#define QG_CONDITION_MINUS 1

qg_status qg_perturbed_compute(const qg_lattice* lat, double e_lo,
                               double e_hi, qg_perturbed_report** out);
qg_status qg_perturbed_case(const qg_perturbed_report* rep, int* out);
qg_status qg_perturbed_unchanged(const qg_perturbed_report* rep, int* out);
qg_status qg_perturbed_gap_count(const qg_perturbed_report* rep, size_t* out);
qg_status qg_perturbed_gap(const qg_perturbed_report* rep, size_t i,
                           double* lo, double* hi, int* left_kind,
                           int* right_kind);
qg_status qg_perturbed_gap_has_band(const qg_perturbed_report* rep, size_t i,
                                    int* out);
qg_status qg_perturbed_gap_band(const qg_perturbed_report* rep, size_t i,
                                double* lo, double* hi, int* condition,
                                int* touches_lower, int* touches_upper);
qg_status qg_perturbed_closed_gap_count(const qg_perturbed_report* rep,
                                        size_t* out);
qg_status qg_perturbed_closed_gap(const qg_perturbed_report* rep, size_t i,
                                  double* lo, double* hi);
void qg_perturbed_report_free(qg_perturbed_report* rep);

/* ---- fibers ---------------------------------------------------------- */

typedef struct qg_fiber_result qg_fiber_result;

/* Eigenvalue branches. */
#define QG_BRANCH_LOWER 0
#define QG_BRANCH_UPPER 1

/* Bands of the fiber at transverse phase theta2 plus, when gamma_tilde is
 * set, the discrete eigenvalues it inserts into the spectral gaps that
 * intersect [e_lo, e_hi]. */
qg_status qg_fiber_compute(const qg_lattice* lat, double theta2, double e_lo,
                           double e_hi, qg_fiber_result** out);
qg_status qg_fiber_band_count(const qg_fiber_result* fr, size_t* out);
qg_status qg_fiber_band(const qg_fiber_result* fr, size_t i, double* lo,
                        double* hi);
qg_status qg_fiber_eigenvalue_count(const qg_fiber_result* fr, size_t* out);
qg_status qg_fiber_eigenvalue(const qg_fiber_result* fr, size_t i,
                              double* energy, int* branch,
                              double* lambda_decaying,
                              double* localization_length);
/* Vertex values nu_j, j = -j_max..j_max, written into values[0..2*j_max].
 * n_values must be exactly 2*j_max + 1. */
qg_status qg_fiber_mode_profile(const qg_fiber_result* fr, size_t i,
                                int j_max, double* values, size_t n_values);
void qg_fiber_result_free(qg_fiber_result* fr);

/* ---- measures -------------------------------------------------------- */

typedef struct qg_measure_report {
    double k_energy_cutoff;
    double p_sigma;
    double p_s;  /* meaningful only when has_p_s != 0 */
    int has_p_s;
    double p1;
    double p2;
    double xi_cutoff_k;
    long long sample_count;
    int estimator; /* 0 = grid, 1 = monte_carlo */
} qg_measure_report;

qg_status qg_measure_compute(const qg_lattice* lat, double k_max,
                             long long samples, qg_measure_report* out);

#ifdef __cplusplus
}
#endif

#endif /* QGLAT_H */
