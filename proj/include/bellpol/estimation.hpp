#pragma once

#include <vector>

#include "bellpol/sim.hpp"

namespace bellpol {

// Weighted linear least-squares fit of y = m + A cos x + B sin x.
struct FringeFit {
    double offset;         // m, counts
    double cos_amp;        // A
    double sin_amp;        // B
    double phase;          // location of the fringe maximum, atan2(B, A)
    double visibility;     // sqrt(A^2 + B^2) / m
    double sigma_phase;    // 1-sigma uncertainty of `phase`
    double residual_chi2;
};

struct PhaseEstimate {
    double phi_hat;  // (-pi, pi]
    double sigma;
    Scheme scheme;
};

struct FitPoint {
    double x;  // radians
    double y;  // counts
};

// Poisson-weighted (w = 1/max(y,1)) harmonic fit via the 3x3 normal
// equations. Needs >= 4 points with x values not all congruent modulo pi.
FringeFit harmonic_fit(const std::vector<FitPoint>& points);

// Recover the state phase from a diagonal-basis scan of the given scheme.
// With use_expected the fit runs on the exact expected counts instead of the
// sampled ones. Errors with low_visibility when the fitted visibility is
// below 0.2.
PhaseEstimate estimate_phase(const FringeData& data, bool use_expected = false);

// Non-throwing variant carrying the underlying fit; `valid` is false when
// the visibility check fails (the estimate is still populated).
struct PhaseEstimateResult {
    PhaseEstimate estimate;
    FringeFit fit;
    bool valid;
};
PhaseEstimateResult estimate_phase_full(const FringeData& data, bool use_expected = false);

}  // namespace bellpol
