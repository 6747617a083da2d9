#pragma once

#include <array>
#include <complex>

#include "bellpol/angles.hpp"
#include "bellpol/error.hpp"

namespace bellpol {

using Complex = std::complex<double>;

// 2x2 complex transform acting on the (H, V) field amplitudes of one channel.
// All constructors in this module produce unitary matrices; operations that
// require unitarity check it explicitly.
struct JonesMatrix {
    // Row-major entries: m[0]=J11, m[1]=J12, m[2]=J21, m[3]=J22.
    std::array<Complex, 4> m{};

    Complex operator()(int row, int col) const { return m[2 * row + col]; }
    Complex& operator()(int row, int col) { return m[2 * row + col]; }

    static JonesMatrix identity();

    JonesMatrix adjoint() const;

    // Max entrywise deviation of J^dagger * J from the identity.
    double unitarity_defect() const;
    bool is_unitary(double tol = 1e-12) const { return unitarity_defect() <= tol; }
};

JonesMatrix operator*(const JonesMatrix& a, const JonesMatrix& b);

// Rotation angle zeta and retardation chi of a birefringent plate,
// canonicalized to zeta in [-pi/4, pi/4] and chi in [-pi, pi].
struct WaveplateParams {
    double zeta;
    double chi;

    WaveplateParams(double zeta_raw, double chi_raw)
        : zeta(wrap_period(zeta_raw, pi / 2.0)), chi(wrap_period(chi_raw, two_pi)) {}
};

enum class ElementKind {
    HalfWave,     // T_{lambda/2}(zeta)
    QuarterWave,  // T_{lambda/4}(zeta)
    CompAt45,     // T_{pi/4}(chi), compensator with axes at pi/4
    CompAt0,      // T_0(chi), compensator with axes at 0
};

// (alpha, phi, phi') parametrization of a unitary with the stripped overall
// phase factor:  e^{i global_phase} * [[h, v], [-v*, h*]],
// h = cos(alpha) e^{i phi}, v = sin(alpha) e^{i phi'}.
struct UnitaryDecomposition {
    double alpha;         // [0, pi/2]
    double phi;           // (-pi, pi]
    double phi_prime;     // (-pi, pi]
    double global_phase;  // (-pi, pi]

    JonesMatrix reconstruct() const;
};

// General waveplate R(zeta)^{-1} P(chi) R(zeta).
JonesMatrix waveplate(double zeta, double chi);

// Real rotation by theta, the rotating polarization analyzer.
JonesMatrix rotation_analyzer(double theta);

// The four named elements. `param` is zeta for the waveplates and chi for
// the fixed-angle compensators.
JonesMatrix named_element(ElementKind kind, double param);

// Chain two devices in propagation order: the photon traverses `first`,
// then `then`. Matrix product is then * first.
JonesMatrix compose(const JonesMatrix& first, const JonesMatrix& then);

// Strip the global phase and read off (alpha, phi, phi').
// Normalization: divide by e^{i arg(det J)/2}, then by +-1 so that
// arg(J11) lands in (-pi/2, pi/2] (arg(J12) when J11 == 0).
// At alpha == 0 phi' is reported as 0; at alpha == pi/2 phi is reported as 0.
UnitaryDecomposition decompose(const JonesMatrix& j);

}  // namespace bellpol
