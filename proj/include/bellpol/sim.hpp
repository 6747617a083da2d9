#pragma once

#include <cstdint>
#include <vector>

#include "bellpol/compensation.hpp"
#include "bellpol/rng.hpp"

namespace bellpol {

struct SourceModel {
    double pair_rate = 1000.0;       // detected pairs per second
    double integration_time = 1.0;   // seconds per point
    double accidental_rate = 0.0;    // spurious coincidences per second
    std::uint64_t seed = 0;
};

struct CountRecord {
    std::uint64_t n_pp = 0;
    std::uint64_t n_pm = 0;
    std::uint64_t n_mp = 0;
    std::uint64_t n_mm = 0;
};

struct FringePoint {
    double scan_value;     // radians
    CountRecord counts;
    OutcomeProbs probs;    // model probabilities at this point
};

struct FringeData {
    Scheme scheme;
    StateFamily family;
    bool noiseless = false;          // counts hold rounded expected values
    double alpha_diag = pi / 4.0;    // fixed diagonal-basis analysis parameter
    SourceModel model;
    std::vector<FringePoint> points;  // scan values strictly increasing
};

// Expected (mean) counts per outcome: pair_rate*t*p + accidental_rate*t/4.
std::array<double, 4> expected_counts(const OutcomeProbs& p, const SourceModel& m);

// Poisson draw per outcome around the expected counts; deterministic for a
// given seed (inversion below mean 30, transformed rejection above).
CountRecord simulate_counts(const OutcomeProbs& p, const SourceModel& m);

std::uint64_t poisson_sample(double mean, SplitMix64& rng);

// Model probabilities at one scan point of a scheme's diagonal-basis scan.
// Scan variable: Rotating -> chi_A in [pi/2, 3*pi/2]; FixedPair -> chi_1A;
// Experimental -> chi_2A.
OutcomeProbs scan_point_probs(StateFamily family, double phi_true, Scheme scheme,
                              double scan_value);

// Simulated coincidence scan. Per-point seeds are m.seed ^ mix64(index).
// With noiseless = true the expected counts are used directly (rounded to
// the nearest integer in `counts`; the exact expectation is recoverable from
// `probs`).
FringeData scan_fringe(StateFamily family, double phi_true, Scheme scheme,
                       const std::vector<double>& grid, const SourceModel& m,
                       bool noiseless = false);

}  // namespace bellpol
