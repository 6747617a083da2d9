#include "bellpol/compensation.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace bellpol {

namespace {

constexpr double kVerifyTol = 1e-9;

// SU(2)-form channel transform with given analysis parameter and phases.
// Negative alpha is the paper's alpha<0 convention (phi' shifted by pi).
JonesMatrix synthesize_channel(double alpha, double phi, double phi_prime) {
    const Complex h = std::polar(std::cos(alpha), phi);
    const Complex v = std::polar(std::sin(alpha), phi_prime);
    JonesMatrix j;
    j.m = {h, v, -std::conj(v), std::conj(h)};
    return j;
}

bool alpha_degenerate(double alpha) { return alpha < 1e-9 || alpha > pi / 2.0 - 1e-9; }

// Reference decomposition of the B-channel compensator in its diagonal
// configuration; the A-branch selection below must not depend on alpha_B.
UnitaryDecomposition reference_decomp_b() {
    return decompose(named_element(ElementKind::CompAt45, pi / 2.0));
}

}  // namespace

double effective_phase_for_family(StateFamily family, double phi, const UnitaryDecomposition& da,
                                  const UnitaryDecomposition& db) {
    if (family == StateFamily::Phi) {
        return wrap_pi(phi + da.phi + db.phi - da.phi_prime - db.phi_prime);
    }
    return wrap_pi(phi + da.phi + db.phi_prime - da.phi_prime - db.phi + pi);
}

RotatingCompSettings rotating_scheme_settings(double phi, double alpha_a, double alpha_b) {
    if (!std::isfinite(phi)) fail(Errc::invalid_argument, "rotating_scheme_settings: phi");
    if (!(alpha_a > 0.0 && alpha_a < pi / 2.0)) {
        fail(Errc::precondition, "rotating_scheme_settings: alpha_A must be in (0, pi/2)");
    }
    if (!(alpha_b >= 0.0 && alpha_b <= pi / 2.0)) {
        fail(Errc::precondition, "rotating_scheme_settings: alpha_B must be in [0, pi/2]");
    }
    const double phi_r = wrap_pi(phi);
    const double cos_half = std::clamp(std::cos(alpha_a) * std::cos(phi_r), -1.0, 1.0);
    const double chi0 = 2.0 * std::acos(cos_half);
    const double sin_half = std::sin(chi0 / 2.0);
    const double asin_arg = std::sin(alpha_a) / sin_half;
    // sin(chi/2) = sqrt(1 - cos^2 a cos^2 phi) >= sin(alpha_A), so the
    // argument cannot leave [-1, 1] for valid inputs.
    if (asin_arg > 1.0 + 1e-12) {
        fail(Errc::domain, "rotating_scheme_settings: arcsin argument out of range");
    }
    const double zeta0 = 0.5 * std::asin(std::clamp(asin_arg, -1.0, 1.0));

    const UnitaryDecomposition db = reference_decomp_b();
    // The printed setting formulas leave the signs of (zeta_A, chi_A)
    // ambiguous; the matrices decide. Try the sign branches and keep the one
    // whose verified effective phase vanishes.
    const std::array<std::pair<double, double>, 4> candidates{{
        {chi0, -zeta0},
        {chi0, zeta0},
        {two_pi - chi0, zeta0},
        {two_pi - chi0, -zeta0},
    }};
    for (const auto& [chi, zeta] : candidates) {
        const UnitaryDecomposition da = decompose(waveplate(zeta, chi));
        if (std::abs(da.alpha - alpha_a) > 1e-9) continue;
        const double phi_eff = effective_phase_for_family(StateFamily::Phi, phi_r, da, db);
        if (std::abs(phi_eff) <= kVerifyTol) {
            return {wrap_two_pi(chi), zeta, wrap_two_pi(2.0 * alpha_b)};
        }
    }
    fail(Errc::domain, "rotating_scheme_settings: no sign branch cancels the effective phase");
}

JonesMatrix rotating_channel_a(const RotatingCompSettings& s) {
    return waveplate(s.zeta_a, s.chi_a);
}

DiagonalScanPoint rotating_scheme_diagonal_scan(double chi_a) {
    if (!(chi_a >= pi / 2.0 - 1e-12 && chi_a <= 3.0 * pi / 2.0 + 1e-12)) {
        fail(Errc::domain,
             "rotating_scheme_diagonal_scan: chi_A must lie in the scan window [pi/2, 3*pi/2]");
    }
    const double arg = 1.0 / (std::sqrt(2.0) * std::sin(chi_a / 2.0));
    DiagonalScanPoint p;
    p.zeta_a = 0.5 * std::asin(std::clamp(arg, -1.0, 1.0));
    p.phi_a = std::acos(std::clamp(std::sqrt(2.0) * std::cos(chi_a / 2.0), -1.0, 1.0));
    return p;
}

FixedPairSettings fixed_pair_settings(double phi, double alpha_a, double alpha_b) {
    if (!std::isfinite(phi) || !std::isfinite(alpha_a) || !std::isfinite(alpha_b)) {
        fail(Errc::invalid_argument, "fixed_pair_settings: non-finite input");
    }
    FixedPairSettings s;
    s.chi_1a = wrap_two_pi(phi + pi);
    s.chi_2a = wrap_two_pi(2.0 * alpha_a);
    s.chi_b = wrap_two_pi(2.0 * alpha_b);
    if (!alpha_degenerate(wrap_period(alpha_a, pi))) {
        const UnitaryDecomposition da = decompose(fixed_pair_channel_a(s));
        const double phi_eff =
            effective_phase_for_family(StateFamily::Phi, phi, da, reference_decomp_b());
        if (std::abs(phi_eff) > kVerifyTol) {
            fail(Errc::domain, "fixed_pair_settings: effective phase did not cancel");
        }
    }
    return s;
}

JonesMatrix fixed_pair_channel_a(const FixedPairSettings& s) {
    return compose(named_element(ElementKind::CompAt0, s.chi_1a),
                   named_element(ElementKind::CompAt45, s.chi_2a));
}

ExperimentalSettings experimental_settings(StateFamily family, double phi, double alpha_a,
                                           double alpha_b) {
    if (!std::isfinite(phi) || !std::isfinite(alpha_a) || !std::isfinite(alpha_b)) {
        fail(Errc::invalid_argument, "experimental_settings: non-finite input");
    }
    ExperimentalSettings s;
    s.zeta_1a = alpha_a / 2.0;
    s.zeta_b = alpha_b / 2.0;
    s.chi_2a = wrap_two_pi(family == StateFamily::Phi ? phi : phi + pi);
    if (!alpha_degenerate(std::abs(wrap_period(alpha_a, pi))) &&
        !alpha_degenerate(std::abs(wrap_period(alpha_b, pi)))) {
        const ChannelPair chain = experimental_chain(s);
        const double phi_eff = effective_phase_for_family(family, phi, decompose(chain.t_a),
                                                          decompose(chain.t_b));
        if (std::abs(phi_eff) > kVerifyTol) {
            fail(Errc::domain, "experimental_settings: effective phase did not cancel");
        }
    }
    return s;
}

ChannelPair experimental_chain(const ExperimentalSettings& s) {
    ChannelPair c;
    c.t_a = compose(named_element(ElementKind::CompAt0, s.chi_2a),
                    named_element(ElementKind::HalfWave, s.zeta_1a));
    c.t_b = named_element(ElementKind::HalfWave, s.zeta_b);
    return c;
}

CompensationReport verify_compensation(double state_phi, StateFamily family,
                                       const JonesMatrix& t_a, const JonesMatrix& t_b,
                                       const std::array<double, 4>& chsh_alphas) {
    const UnitaryDecomposition da = decompose(t_a);
    const UnitaryDecomposition db = decompose(t_b);

    CompensationReport report;
    report.phi_eff = effective_phase_for_family(family, state_phi, da, db);
    report.alphas_echo = chsh_alphas;

    const TwoQubitState state = make_state(family, state_phi);
    const double b_offset = (family == StateFamily::Psi) ? pi / 2.0 : 0.0;
    auto channel_a = [&](double alpha) { return synthesize_channel(alpha, da.phi, da.phi_prime); };
    auto channel_b = [&](double alpha) {
        return synthesize_channel(alpha + b_offset, db.phi, db.phi_prime);
    };
    auto e = [&](double alpha_a, double alpha_b) {
        return correlation(outcome_probs(state, channel_a(alpha_a), channel_b(alpha_b)));
    };
    const auto& [a, ap, b, bp] = chsh_alphas;
    report.s_at_chsh = e(a, b) + e(a, bp) + e(ap, b) - e(ap, bp);
    return report;
}

}  // namespace bellpol
