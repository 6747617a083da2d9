/* C API of the bellpol shared library.
 *
 * All functions return a bellpol_status code (BELLPOL_OK on success); output
 * parameters are written only on success unless stated otherwise. Angles are
 * radians. A thread-local message describing the last failure is available
 * through bellpol_last_error().
 */
#ifndef BELLPOL_C_H
#define BELLPOL_C_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define BELLPOL_API __declspec(dllexport)
#else
#define BELLPOL_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum bellpol_status {
    BELLPOL_OK = 0,
    BELLPOL_EINVAL = 1,         /* invalid argument */
    BELLPOL_EPRECOND = 2,       /* precondition violated */
    BELLPOL_EDOMAIN = 3,        /* input outside a scheme's valid domain */
    BELLPOL_EDEGENERATE = 4,    /* degenerate analyzer decomposition */
    BELLPOL_ECONVERGENCE = 5,   /* numeric optimization did not converge */
    BELLPOL_ERANGE = 6,         /* value out of representable range */
    BELLPOL_ELOWVIS = 7,        /* fringe visibility too low for a fit */
    BELLPOL_EILLCOND = 8,       /* rank-deficient fit design */
    BELLPOL_EIO = 9,
    BELLPOL_EUNKNOWN = 100
} bellpol_status;

typedef enum bellpol_family { BELLPOL_FAMILY_PHI = 0, BELLPOL_FAMILY_PSI = 1 } bellpol_family;

typedef enum bellpol_scheme {
    BELLPOL_SCHEME_ROTATING = 0,
    BELLPOL_SCHEME_FIXED_PAIR = 1,
    BELLPOL_SCHEME_EXPERIMENTAL = 2
} bellpol_scheme;

BELLPOL_API const char* bellpol_version(void);

/* Message for the most recent error on this thread ("" if none). */
BELLPOL_API const char* bellpol_last_error(void);

/* Closed-form CHSH optimum for |Phi(phi)>.
 * settings: (a, a', b, b'); s_max: Bell parameter at the optimum. */
BELLPOL_API bellpol_status bellpol_optimal_settings_closed(double phi, double settings[4],
                                                           double* s_max);

/* Derivative-free multi-start maximization of S (independent of the closed
 * form). */
BELLPOL_API bellpol_status bellpol_maximize_bell(double phi, double tol, double settings[4],
                                                 double* s);

/* Rotating-analyzer probabilities (p_pp, p_pm, p_mp, p_mm) and the
 * correlation factor E for |Phi(phi)>, cross-checked against direct matrix
 * projection. */
BELLPOL_API bellpol_status bellpol_rotating_probs(double phi, double a, double b, double probs[4],
                                                  double* correlation);

/* Device settings for one compensation scheme, matrix-verified.
 * settings receives, per scheme:
 *   ROTATING:     (chi_A, zeta_A, chi_B)
 *   FIXED_PAIR:   (chi_1A, chi_2A, chi_B)
 *   EXPERIMENTAL: (zeta_1A, chi_2A, zeta_B)
 * phi_eff and s_at_chsh come from verify_compensation at the alpha quadruple
 * (0, pi/4, pi/8, -pi/8). */
BELLPOL_API bellpol_status bellpol_compensate(bellpol_family family, bellpol_scheme scheme,
                                              double phi, double alpha_a, double alpha_b,
                                              double settings[3], double* phi_eff,
                                              double* s_at_chsh);

/* Poisson coincidence counts for one analyzer configuration. */
BELLPOL_API bellpol_status bellpol_simulate_counts(const double probs[4], double pair_rate,
                                                   double integration_time,
                                                   double accidental_rate, uint64_t seed,
                                                   uint64_t counts[4]);

/* Simulated diagonal-basis compensator scan (opaque handle). */
typedef struct bellpol_fringe bellpol_fringe;

BELLPOL_API bellpol_status bellpol_scan_fringe(bellpol_family family, bellpol_scheme scheme,
                                               double phi_true, const double* grid,
                                               size_t n_points, double pair_rate,
                                               double integration_time, double accidental_rate,
                                               uint64_t seed, int noiseless,
                                               bellpol_fringe** out);

BELLPOL_API size_t bellpol_fringe_size(const bellpol_fringe* fringe);

/* Per-point data: scan value, the four counts, and the model p_pp. */
BELLPOL_API bellpol_status bellpol_fringe_point(const bellpol_fringe* fringe, size_t index,
                                                double* scan_value, uint64_t counts[4],
                                                double* p_pp_model);

BELLPOL_API void bellpol_fringe_free(bellpol_fringe* fringe);

/* Phase estimate from a scan. Returns BELLPOL_ELOWVIS when the fringe
 * visibility is below 0.2; the outputs are still populated in that case. */
BELLPOL_API bellpol_status bellpol_estimate_phase(const bellpol_fringe* fringe, int use_expected,
                                                  double* phi_hat, double* sigma,
                                                  double* visibility);

/* Run the oracle verification suites. Writes a one-line-per-suite report
 * into `report` (truncated to report_len, always NUL-terminated) and the
 * number of failing suites into *failures. Returns BELLPOL_OK even when
 * suites fail; inspect *failures. */
BELLPOL_API bellpol_status bellpol_verify(char* report, size_t report_len, int* failures);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* BELLPOL_C_H */
