#include "doctest.h"

#include <array>
#include <cmath>

#include "bellpol/compensation.hpp"
#include "bellpol/rng.hpp"

using namespace bellpol;

namespace {

const std::array<double, 4> kChshAlphas{0.0, pi / 4.0, pi / 8.0, -pi / 8.0};
const double kRoot8 = 2.0 * std::sqrt(2.0);

}  // namespace

TEST_CASE("rotating scheme at phi=0 recovers the diagonal compensator") {
    const RotatingCompSettings s = rotating_scheme_settings(0.0, pi / 4.0, pi / 4.0);
    CHECK(s.chi_a == doctest::Approx(pi / 2.0).epsilon(1e-12));
    CHECK(std::abs(s.zeta_a) == doctest::Approx(pi / 4.0).epsilon(1e-12));
    CHECK(s.chi_b == doctest::Approx(pi / 2.0).epsilon(1e-12));
}

TEST_CASE("rotating scheme settings at phi=pi/3") {
    const RotatingCompSettings s = rotating_scheme_settings(pi / 3.0, pi / 4.0, pi / 4.0);
    CHECK(s.chi_a == doctest::Approx(2.41886).epsilon(1e-5));
    CHECK(std::abs(s.zeta_a) == doctest::Approx(0.42853).epsilon(1e-4));
    CHECK(s.chi_b == doctest::Approx(pi / 2.0).epsilon(1e-12));

    const CompensationReport r =
        verify_compensation(pi / 3.0, StateFamily::Phi, rotating_channel_a(s),
                            named_element(ElementKind::CompAt45, s.chi_b), kChshAlphas);
    CHECK(std::abs(r.phi_eff) < 1e-9);
    CHECK(r.s_at_chsh == doctest::Approx(kRoot8).epsilon(1e-9));
}

TEST_CASE("rotating scheme chi_B tracks alpha_B") {
    for (double phi : {0.1, 1.0, 2.5}) {
        CHECK(rotating_scheme_settings(phi, pi / 4.0, pi / 8.0).chi_b ==
              doctest::Approx(pi / 4.0).epsilon(1e-12));
    }
}

TEST_CASE("rotating scheme validates its analysis parameters") {
    CHECK_THROWS_AS(rotating_scheme_settings(0.3, 0.0, pi / 4.0), Error);
    CHECK_THROWS_AS(rotating_scheme_settings(0.3, pi / 2.0, pi / 4.0), Error);
    CHECK_THROWS_AS(rotating_scheme_settings(std::nan(""), pi / 4.0, pi / 4.0), Error);
}

TEST_CASE("arcsin argument stays in range over the scheme's whole domain") {
    for (int i = 1; i < 100; ++i) {
        const double alpha = (pi / 2.0) * static_cast<double>(i) / 100.0;
        for (int j = 0; j < 100; ++j) {
            const double phi = pi * static_cast<double>(j) / 99.0;
            const double chi = 2.0 * std::acos(std::cos(alpha) * std::cos(phi));
            const double arg = std::sin(alpha) / std::sin(chi / 2.0);
            CHECK(arg <= 1.0 + 1e-12);
        }
    }
}

TEST_CASE("rotating diagonal scan reference points") {
    const DiagonalScanPoint mid = rotating_scheme_diagonal_scan(pi);
    CHECK(mid.zeta_a == doctest::Approx(pi / 8.0).epsilon(1e-12));
    CHECK(mid.phi_a == doctest::Approx(pi / 2.0).epsilon(1e-12));

    const DiagonalScanPoint lo = rotating_scheme_diagonal_scan(pi / 2.0);
    CHECK(lo.zeta_a == doctest::Approx(pi / 4.0).epsilon(1e-12));
    CHECK(lo.phi_a == doctest::Approx(0.0).epsilon(1e-7));

    CHECK(rotating_scheme_diagonal_scan(3.0 * pi / 2.0).phi_a ==
          doctest::Approx(pi).epsilon(1e-7));
}

TEST_CASE("rotating diagonal scan rejects retardations outside the window") {
    CHECK_THROWS_AS(rotating_scheme_diagonal_scan(0.3), Error);
    try {
        rotating_scheme_diagonal_scan(0.3);
    } catch (const Error& e) {
        CHECK(e.code() == Errc::domain);
        CHECK(std::string(e.what()).find("[pi/2, 3*pi/2]") != std::string::npos);
    }
}

TEST_CASE("diagonal scan point realizes alpha = pi/4 and the fringe model") {
    const double phi = 0.9;
    const TwoQubitState state = make_state(StateFamily::Phi, phi);
    const JonesMatrix t_b = named_element(ElementKind::CompAt45, pi / 2.0);
    for (double chi : {pi / 2.0 + 0.01, 2.0, pi, 4.0, 3.0 * pi / 2.0 - 0.01}) {
        const DiagonalScanPoint p = rotating_scheme_diagonal_scan(chi);
        const JonesMatrix t_a = waveplate(p.zeta_a, chi);
        CHECK(decompose(t_a).alpha == doctest::Approx(pi / 4.0).epsilon(1e-9));
        CHECK(outcome_probs(state, t_a, t_b).p_pp ==
              doctest::Approx(0.25 * (1.0 - std::cos(phi - p.phi_a))).epsilon(1e-10));
    }
}

TEST_CASE("fixed pair settings reference values") {
    const FixedPairSettings s = fixed_pair_settings(0.8, pi / 4.0, pi / 4.0);
    CHECK(s.chi_1a == doctest::Approx(0.8 + pi).epsilon(1e-12));
    CHECK(s.chi_2a == doctest::Approx(pi / 2.0).epsilon(1e-12));
    CHECK(s.chi_b == doctest::Approx(pi / 2.0).epsilon(1e-12));

    CHECK(fixed_pair_settings(pi, pi / 4.0, pi / 4.0).chi_1a == doctest::Approx(0.0));
}

TEST_CASE("fixed pair chain decomposes to the stated parameters") {
    const double chi_1a = 1.3, chi_2a = 0.9;
    FixedPairSettings s{chi_1a, chi_2a, pi / 2.0};
    const UnitaryDecomposition d = decompose(fixed_pair_channel_a(s));
    CHECK(d.alpha == doctest::Approx(chi_2a / 2.0).epsilon(1e-10));
    // (phi' - phi) is invariant under the +-1 normalization ambiguity.
    CHECK(std::abs(wrap_pi((d.phi_prime - d.phi) - (chi_1a - pi / 2.0))) < 1e-10);
}

TEST_CASE("fixed pair compensation cancels the effective phase") {
    SplitMix64 rng(31);
    for (int i = 0; i < 50; ++i) {
        const double phi = rng.next_u01() * two_pi - pi;
        const FixedPairSettings s = fixed_pair_settings(phi, pi / 4.0, pi / 4.0);
        const CompensationReport r =
            verify_compensation(phi, StateFamily::Phi, fixed_pair_channel_a(s),
                                named_element(ElementKind::CompAt45, s.chi_b), kChshAlphas);
        CHECK(std::abs(r.phi_eff) < 1e-9);
        CHECK(r.s_at_chsh == doctest::Approx(kRoot8).epsilon(1e-9));
    }
}

TEST_CASE("fixed pair diagonal fringe follows the half-angle sine law") {
    const double phi = 1.7;
    for (int i = 0; i < 40; ++i) {
        const double chi_1a = two_pi * static_cast<double>(i) / 40.0;
        FixedPairSettings s{chi_1a, pi / 2.0, pi / 2.0};
        const OutcomeProbs p =
            outcome_probs(make_state(StateFamily::Phi, phi), fixed_pair_channel_a(s),
                          named_element(ElementKind::CompAt45, s.chi_b));
        const double half = std::sin((phi - chi_1a) / 2.0);
        CHECK(p.p_pp == doctest::Approx(0.5 * half * half).epsilon(1e-12));
    }
}

TEST_CASE("experimental chain endpoint behavior") {
    const ChannelPair aligned = experimental_chain({0.0, 0.0, 0.0});
    const OutcomeProbs p =
        outcome_probs(make_state(StateFamily::Psi, 0.9), aligned.t_a, aligned.t_b);
    CHECK(p.p_pp == doctest::Approx(0.0).epsilon(1e-12));

    for (double chi : {0.0, 1.2, 4.4}) {
        const ChannelPair diag = experimental_chain({pi / 8.0, chi, pi / 8.0});
        CHECK(decompose(diag.t_a).alpha == doctest::Approx(pi / 4.0).epsilon(1e-10));
    }
}

TEST_CASE("experimental scan is sinusoidal with period 2*pi") {
    const double phi = 2.2;
    // p_pp = (1 + cos(phi - chi_2a)) / 4 for |Psi(phi)> in this chain.
    for (int i = 0; i < 32; ++i) {
        const double chi = two_pi * static_cast<double>(i) / 32.0;
        const ChannelPair c = experimental_chain({pi / 8.0, chi, pi / 8.0});
        const OutcomeProbs p = outcome_probs(make_state(StateFamily::Psi, phi), c.t_a, c.t_b);
        CHECK(p.p_pp == doctest::Approx(0.25 * (1.0 + std::cos(phi - chi))).epsilon(1e-12));
    }
}

TEST_CASE("experimental settings compensate both families") {
    SplitMix64 rng(37);
    for (int i = 0; i < 50; ++i) {
        const double phi = rng.next_u01() * two_pi - pi;
        for (StateFamily family : {StateFamily::Phi, StateFamily::Psi}) {
            const ExperimentalSettings s =
                experimental_settings(family, phi, pi / 4.0, pi / 4.0);
            const ChannelPair c = experimental_chain(s);
            const CompensationReport r =
                verify_compensation(phi, family, c.t_a, c.t_b, kChshAlphas);
            CHECK(std::abs(r.phi_eff) < 1e-9);
            CHECK(r.s_at_chsh == doctest::Approx(kRoot8).epsilon(1e-9));
        }
    }
}

TEST_CASE("verify_compensation on the uncompensated state") {
    // phi = pi/2 left uncompensated: the best quadruple gives S = 2.
    const CompensationReport r =
        verify_compensation(pi / 2.0, StateFamily::Phi, JonesMatrix::identity(),
                            JonesMatrix::identity(), {0.0, pi / 4.0, 0.0, 0.0});
    CHECK(r.s_at_chsh == doctest::Approx(2.0).epsilon(1e-9));

    const CompensationReport r0 =
        verify_compensation(0.0, StateFamily::Phi, JonesMatrix::identity(),
                            JonesMatrix::identity(), kChshAlphas);
    CHECK(r0.s_at_chsh == doctest::Approx(kRoot8).epsilon(1e-9));
    CHECK(std::abs(r0.phi_eff) < 1e-12);
}

TEST_CASE("compensation end-to-end over random phases") {
    SplitMix64 rng(41);
    for (int i = 0; i < 100; ++i) {
        const double phi = rng.next_u01() * two_pi - pi;
        JonesMatrix t_a, t_b;
        StateFamily family = StateFamily::Phi;
        switch (i % 3) {
            case 0: {
                const RotatingCompSettings s = rotating_scheme_settings(phi, pi / 4.0, pi / 4.0);
                t_a = rotating_channel_a(s);
                t_b = named_element(ElementKind::CompAt45, s.chi_b);
                break;
            }
            case 1: {
                const FixedPairSettings s = fixed_pair_settings(phi, pi / 4.0, pi / 4.0);
                t_a = fixed_pair_channel_a(s);
                t_b = named_element(ElementKind::CompAt45, s.chi_b);
                break;
            }
            default: {
                family = StateFamily::Psi;
                const ExperimentalSettings s =
                    experimental_settings(family, phi, pi / 4.0, pi / 4.0);
                const ChannelPair c = experimental_chain(s);
                t_a = c.t_a;
                t_b = c.t_b;
                break;
            }
        }
        const CompensationReport r = verify_compensation(phi, family, t_a, t_b, kChshAlphas);
        CHECK(std::abs(r.phi_eff) < 1e-9);
        CHECK(r.s_at_chsh == doctest::Approx(kRoot8).epsilon(1e-9));
    }
}

TEST_CASE("effective phase convention per family") {
    const UnitaryDecomposition da = decompose(waveplate(0.2, 1.0));
    const UnitaryDecomposition db = decompose(waveplate(-0.3, 2.1));
    const double phi = 0.6;
    CHECK(effective_phase_for_family(StateFamily::Phi, phi, da, db) ==
          doctest::Approx(wrap_pi(phi + da.phi + db.phi - da.phi_prime - db.phi_prime))
              .epsilon(1e-12));
    CHECK(effective_phase_for_family(StateFamily::Psi, phi, da, db) ==
          doctest::Approx(wrap_pi(phi + da.phi + db.phi_prime - da.phi_prime - db.phi + pi))
              .epsilon(1e-12));
}
