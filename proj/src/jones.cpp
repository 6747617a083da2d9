#include "bellpol/jones.hpp"

#include <cmath>

namespace bellpol {

namespace {

constexpr Complex kI{0.0, 1.0};

void require_finite(double x, const char* name) {
    if (!std::isfinite(x)) fail(Errc::invalid_argument, std::string(name) + " must be finite");
}

void require_unitary(const JonesMatrix& j, double tol, const char* what) {
    double defect = j.unitarity_defect();
    if (defect > tol) {
        fail(Errc::precondition,
             std::string(what) + ": matrix is not unitary (defect " + std::to_string(defect) + ")");
    }
}

}  // namespace

JonesMatrix JonesMatrix::identity() {
    JonesMatrix j;
    j.m = {Complex{1.0, 0.0}, Complex{0.0, 0.0}, Complex{0.0, 0.0}, Complex{1.0, 0.0}};
    return j;
}

JonesMatrix JonesMatrix::adjoint() const {
    JonesMatrix r;
    r.m = {std::conj(m[0]), std::conj(m[2]), std::conj(m[1]), std::conj(m[3])};
    return r;
}

double JonesMatrix::unitarity_defect() const {
    JonesMatrix p = adjoint() * (*this);
    double d = 0.0;
    d = std::max(d, std::abs(p.m[0] - Complex{1.0, 0.0}));
    d = std::max(d, std::abs(p.m[1]));
    d = std::max(d, std::abs(p.m[2]));
    d = std::max(d, std::abs(p.m[3] - Complex{1.0, 0.0}));
    return d;
}

JonesMatrix operator*(const JonesMatrix& a, const JonesMatrix& b) {
    JonesMatrix r;
    r.m[0] = a.m[0] * b.m[0] + a.m[1] * b.m[2];
    r.m[1] = a.m[0] * b.m[1] + a.m[1] * b.m[3];
    r.m[2] = a.m[2] * b.m[0] + a.m[3] * b.m[2];
    r.m[3] = a.m[2] * b.m[1] + a.m[3] * b.m[3];
    return r;
}

JonesMatrix waveplate(double zeta, double chi) {
    require_finite(zeta, "zeta");
    require_finite(chi, "chi");
    // R(zeta)^{-1} P(chi) R(zeta) in closed form:
    //   h = cos(chi/2) - i sin(chi/2) cos(2 zeta)
    //   v = -i sin(chi/2) sin(2 zeta)
    const double c = std::cos(chi / 2.0);
    const double s = std::sin(chi / 2.0);
    const Complex h = Complex{c, -s * std::cos(2.0 * zeta)};
    const Complex v = Complex{0.0, -s * std::sin(2.0 * zeta)};
    JonesMatrix j;
    j.m = {h, v, -std::conj(v), std::conj(h)};
    return j;
}

JonesMatrix rotation_analyzer(double theta) {
    require_finite(theta, "theta");
    const double c = std::cos(theta), s = std::sin(theta);
    JonesMatrix j;
    j.m = {Complex{c, 0.0}, Complex{s, 0.0}, Complex{-s, 0.0}, Complex{c, 0.0}};
    return j;
}

JonesMatrix named_element(ElementKind kind, double param) {
    require_finite(param, "param");
    JonesMatrix j;
    switch (kind) {
        case ElementKind::HalfWave: {
            const double c = std::cos(2.0 * param), s = std::sin(2.0 * param);
            j.m = {-kI * c, -kI * s, -kI * s, kI * c};
            return j;
        }
        case ElementKind::QuarterWave: {
            const double c = std::cos(2.0 * param), s = std::sin(2.0 * param);
            const Complex f = -kI / std::sqrt(2.0);
            j.m = {f * (c + kI), f * s, f * s, f * (kI - c)};
            return j;
        }
        case ElementKind::CompAt45: {
            const double c = std::cos(param / 2.0), s = std::sin(param / 2.0);
            j.m = {Complex{c, 0.0}, Complex{0.0, -s}, Complex{0.0, -s}, Complex{c, 0.0}};
            return j;
        }
        case ElementKind::CompAt0: {
            j.m = {std::polar(1.0, -param / 2.0), Complex{0.0, 0.0}, Complex{0.0, 0.0},
                   std::polar(1.0, param / 2.0)};
            return j;
        }
    }
    fail(Errc::invalid_argument, "unknown element kind");
}

JonesMatrix compose(const JonesMatrix& first, const JonesMatrix& then) {
    require_unitary(first, 1e-10, "compose(first)");
    require_unitary(then, 1e-10, "compose(then)");
    return then * first;
}

JonesMatrix UnitaryDecomposition::reconstruct() const {
    const Complex h = std::polar(std::cos(alpha), phi);
    const Complex v = std::polar(std::sin(alpha), phi_prime);
    const Complex g = std::polar(1.0, global_phase);
    JonesMatrix j;
    j.m = {g * h, g * v, -g * std::conj(v), g * std::conj(h)};
    return j;
}

UnitaryDecomposition decompose(const JonesMatrix& j) {
    require_unitary(j, 1e-10, "decompose");

    const Complex det = j.m[0] * j.m[3] - j.m[1] * j.m[2];
    double gamma = std::arg(det) / 2.0;
    Complex inv_phase = std::polar(1.0, -gamma);
    Complex h = j.m[0] * inv_phase;
    Complex v = j.m[1] * inv_phase;

    // Fix the +-1 ambiguity of the half-angle: arg(h) in (-pi/2, pi/2],
    // falling back to arg(v) when h vanishes.
    const Complex& anchor = (std::abs(h) > 1e-12) ? h : v;
    bool flip = anchor.real() < 0.0 || (anchor.real() == 0.0 && anchor.imag() < 0.0);
    if (flip) {
        h = -h;
        v = -v;
        gamma += pi;
    }

    UnitaryDecomposition d;
    d.alpha = std::asin(std::min(1.0, std::abs(v)));
    d.phi = (std::abs(h) > 1e-12) ? std::arg(h) : 0.0;
    d.phi_prime = (std::abs(v) > 1e-12) ? std::arg(v) : 0.0;
    d.global_phase = wrap_pi(gamma);
    return d;
}

}  // namespace bellpol
