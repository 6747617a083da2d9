#pragma once

#include <functional>

#include "bellpol/jones.hpp"
#include "bellpol/states.hpp"

namespace bellpol {

// Joint outcome probabilities for the (+,-) ports of the two analyzers.
struct OutcomeProbs {
    double p_pp;
    double p_pm;
    double p_mp;
    double p_mm;

    double sum() const { return p_pp + p_pm + p_mp + p_mm; }
};

// CHSH angle quadruple (a, a', b, b'), each canonical modulo pi.
struct AnalyzerSettings {
    double a;
    double a_prime;
    double b;
    double b_prime;

    static AnalyzerSettings canonical(double a, double a_prime, double b, double b_prime);
};

struct EffectivePhaseInputs {
    double phi;
    UnitaryDecomposition decomp_a;
    UnitaryDecomposition decomp_b;
};

// Probabilities by direct projection: the "+" outcome on each channel is the
// first row of the channel transform.
OutcomeProbs outcome_probs(const TwoQubitState& state, const JonesMatrix& t_a,
                           const JonesMatrix& t_b);

// Closed-form probabilities for |Phi(phi)> with rotation analyzers at (a, b).
OutcomeProbs rotating_analyzer_probs(double phi, double a, double b);

// E = p_pp - p_pm - p_mp + p_mm.
double correlation(const OutcomeProbs& p);

using ProbModel = std::function<OutcomeProbs(double a, double b)>;

// S = E(a,b) + E(a,b') + E(a',b) - E(a',b').
double bell_parameter(const ProbModel& model, const AnalyzerSettings& s);

// phi + phi_A + phi_B - phi'_A - phi'_B reduced to (-pi, pi].
// Errors when either decomposition is degenerate (alpha near 0 or pi/2).
double effective_phase(const EffectivePhaseInputs& in);

struct OptimalSettings {
    AnalyzerSettings settings;
    double s_max;
};

// Closed-form optimum: a=0, a'=pi/4, b=-b'=arctan(cos phi)/2,
// S = 2 sqrt(cos^2 phi + 1).
OptimalSettings optimal_settings_closed(double phi);

// Derivative-free multi-start maximization of S over the 4-torus of analyzer
// angles (period pi each). Deterministic; serves as the independent check of
// optimal_settings_closed.
OptimalSettings maximize_bell_numeric(double phi, double tol);

}  // namespace bellpol
