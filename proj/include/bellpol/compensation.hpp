#pragma once

#include <array>

#include "bellpol/bell.hpp"

namespace bellpol {

enum class Scheme {
    Rotating,      // rotating compensator on A, compensator at pi/4 on B
    FixedPair,     // compensator pair (zeta=0, zeta=pi/4) on A, pi/4 on B
    Experimental,  // Soleil-Babinet at zeta=0 plus half-wave plates
};

struct RotatingCompSettings {
    double chi_a;   // [0, 2*pi)
    double zeta_a;  // [-pi/4, pi/4]
    double chi_b;   // [0, 2*pi)
};

struct FixedPairSettings {
    double chi_1a;  // retardation of the zeta=0 compensator, [0, 2*pi)
    double chi_2a;  // retardation of the zeta=pi/4 compensator, [0, 2*pi)
    double chi_b;   // [0, 2*pi)
};

struct ExperimentalSettings {
    double zeta_1a;  // half-wave-plate angle on A
    double chi_2a;   // Soleil-Babinet retardation at zeta=0
    double zeta_b;   // half-wave-plate angle on B
};

struct CompensationReport {
    double phi_eff;
    double s_at_chsh;
    std::array<double, 4> alphas_echo;  // (a, a', b, b') analysis parameters used
};

// Effective phase of the compensated configuration, from the decompositions
// of the actual channel transforms. For |Psi> states the B channel enters
// with the roles of phi_B and phi'_B exchanged plus a pi offset, so that
// phi_eff = 0 labels the state the diagonal-basis coincidence fringe singles
// out for each family (maximum for |Phi>, minimum for |Psi>).
double effective_phase_for_family(StateFamily family, double phi, const UnitaryDecomposition& da,
                                  const UnitaryDecomposition& db);

// Settings for the rotating-compensator scheme realizing analysis parameters
// (alpha_A, alpha_B) on |Phi(phi)> with phi_eff = 0 (matrix-verified).
RotatingCompSettings rotating_scheme_settings(double phi, double alpha_a, double alpha_b);

// Channel-A transform of the rotating scheme at the scheme's settings.
JonesMatrix rotating_channel_a(const RotatingCompSettings& s);

// Diagonal-basis scan point of the rotating scheme: the (zeta_A, phi_A) pair
// realizing alpha_A = pi/4 at retardation chi_A in [pi/2, 3*pi/2].
struct DiagonalScanPoint {
    double zeta_a;
    double phi_a;
};
DiagonalScanPoint rotating_scheme_diagonal_scan(double chi_a);

// chi_1A = phi + pi (mod 2*pi), chi_2A = 2 alpha_A, chi_B = 2 alpha_B;
// matrix-verified phi_eff = 0.
FixedPairSettings fixed_pair_settings(double phi, double alpha_a, double alpha_b);

// Channel-A transform of the fixed-pair scheme: T_{pi/4}(chi_2A) T_0(chi_1A).
JonesMatrix fixed_pair_channel_a(const FixedPairSettings& s);

// Soleil-Babinet retardation compensating |family(phi)> in the experimental
// chain, together with the half-wave-plate angles realizing (alpha_A, alpha_B).
ExperimentalSettings experimental_settings(StateFamily family, double phi, double alpha_a,
                                           double alpha_b);

// T_A = HWP(zeta_1A) after the Soleil-Babinet, T_B = HWP(zeta_B).
// The "+" outcome on each channel is the transmitted PBS port (first row).
struct ChannelPair {
    JonesMatrix t_a;
    JonesMatrix t_b;
};
ChannelPair experimental_chain(const ExperimentalSettings& s);

// Computes phi_eff from the decompositions of (T_A, T_B) and the Bell
// parameter by full matrix projection at the four alpha pairs
// (a,b), (a,b'), (a',b), (a',b'). The per-pair transforms keep each
// channel's phases and re-synthesize the alpha; for |Psi> the B channel
// analysis is rotated by pi/2. Never uses scheme formulas.
CompensationReport verify_compensation(double state_phi, StateFamily family,
                                       const JonesMatrix& t_a, const JonesMatrix& t_b,
                                       const std::array<double, 4>& chsh_alphas);

}  // namespace bellpol
