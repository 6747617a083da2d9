#include "bellpol/states.hpp"

#include <cmath>

namespace bellpol {

double TwoQubitState::norm_sq() const {
    double n = 0.0;
    for (const auto& a : amp) n += std::norm(a);
    return n;
}

TwoQubitState make_state(StateFamily family, double phi) {
    if (!std::isfinite(phi)) fail(Errc::invalid_argument, "make_state: phi must be finite");
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    const Complex rel = std::polar(inv_sqrt2, phi);
    TwoQubitState s;
    if (family == StateFamily::Phi) {
        s.amp = {Complex{inv_sqrt2, 0.0}, Complex{}, Complex{}, rel};
    } else {
        s.amp = {Complex{}, Complex{inv_sqrt2, 0.0}, rel, Complex{}};
    }
    return s;
}

BellCoefficients bell_coefficients(const TwoQubitState& state) {
    const double off = std::abs(state.amp[1]) + std::abs(state.amp[2]);
    if (off > 1e-10) {
        fail(Errc::precondition, "bell_coefficients: state has support outside {HH, VV}");
    }
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    return {(state.amp[0] + state.amp[3]) * inv_sqrt2, (state.amp[0] - state.amp[3]) * inv_sqrt2};
}

TwoQubitState apply_local(const TwoQubitState& state, const JonesMatrix& u_a,
                          const JonesMatrix& u_b) {
    if (!u_a.is_unitary(1e-10) || !u_b.is_unitary(1e-10)) {
        fail(Errc::precondition, "apply_local: non-unitary local transform");
    }
    TwoQubitState out;
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            Complex acc{};
            for (int k = 0; k < 2; ++k) {
                for (int l = 0; l < 2; ++l) {
                    acc += u_a(i, k) * u_b(j, l) * state.amp[2 * k + l];
                }
            }
            out.amp[2 * i + j] = acc;
        }
    }
    return out;
}

}  // namespace bellpol
