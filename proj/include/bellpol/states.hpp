#pragma once

#include <array>

#include "bellpol/jones.hpp"

namespace bellpol {

enum class StateFamily {
    Phi,  // (|HH> + e^{i phi} |VV>) / sqrt(2)
    Psi,  // (|HV> + e^{i phi} |VH>) / sqrt(2)
};

// Pure bipartite polarization state, amplitudes over (HH, HV, VH, VV).
struct TwoQubitState {
    std::array<Complex, 4> amp{};

    double norm_sq() const;
};

// Amplitudes on |Phi_+> and |Phi_-> for a state supported on {HH, VV}.
struct BellCoefficients {
    Complex c_plus;
    Complex c_minus;
};

TwoQubitState make_state(StateFamily family, double phi);

BellCoefficients bell_coefficients(const TwoQubitState& state);

// Local action U_A (x) U_B on the amplitudes.
TwoQubitState apply_local(const TwoQubitState& state, const JonesMatrix& u_a,
                          const JonesMatrix& u_b);

}  // namespace bellpol
