#include "bellpol/verify.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>

#include "bellpol/rng.hpp"

namespace bellpol {

namespace {

std::string describe(const char* fmt, double a, double b = 0.0, double c = 0.0) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), fmt, a, b, c);
    return buf;
}

VerifySuiteResult suite_smax_oracle(const VerifyOptions& opt) {
    VerifySuiteResult r{.name = "smax closed-form vs numeric maximizer"};
    for (int i = 0; i < 50; ++i) {
        const double phi = pi * static_cast<double>(i) / 49.0;
        const double s_closed = optimal_settings_closed(phi).s_max + opt.perturb_closed_form;
        const double s_numeric = maximize_bell_numeric(phi, 1e-9).s_max;
        ++r.checked;
        if (std::abs(s_closed - s_numeric) > 1e-6) {
            ++r.failures;
            if (r.first_failure.empty()) {
                r.first_failure = describe("phi=%.9f closed=%.12f numeric=%.12f", phi, s_closed,
                                           s_numeric);
            }
        }
    }
    return r;
}

VerifySuiteResult suite_compensation_end_to_end() {
    VerifySuiteResult r{.name = "scheme end-to-end compensation"};
    const std::array<double, 4> alphas{0.0, pi / 4.0, pi / 8.0, -pi / 8.0};
    const double s_target = 2.0 * std::sqrt(2.0);
    SplitMix64 rng(0xC0FFEE0123456789ULL);
    for (int i = 0; i < 100; ++i) {
        const double phi = wrap_pi(rng.next_u01() * two_pi);
        const int scheme_idx = i % 3;
        JonesMatrix t_a, t_b;
        StateFamily family = StateFamily::Phi;
        if (scheme_idx == 0) {
            const RotatingCompSettings s = rotating_scheme_settings(phi, pi / 4.0, pi / 4.0);
            t_a = rotating_channel_a(s);
            t_b = named_element(ElementKind::CompAt45, s.chi_b);
        } else if (scheme_idx == 1) {
            const FixedPairSettings s = fixed_pair_settings(phi, pi / 4.0, pi / 4.0);
            t_a = fixed_pair_channel_a(s);
            t_b = named_element(ElementKind::CompAt45, s.chi_b);
        } else {
            family = StateFamily::Psi;
            const ExperimentalSettings s =
                experimental_settings(family, phi, pi / 4.0, pi / 4.0);
            const ChannelPair chain = experimental_chain(s);
            t_a = chain.t_a;
            t_b = chain.t_b;
        }
        const CompensationReport report = verify_compensation(phi, family, t_a, t_b, alphas);
        ++r.checked;
        if (std::abs(report.phi_eff) > 1e-9 || std::abs(report.s_at_chsh - s_target) > 1e-9) {
            ++r.failures;
            if (r.first_failure.empty()) {
                r.first_failure = describe("phi=%.9f scheme=%.0f phi_eff=%.3e", phi,
                                           static_cast<double>(scheme_idx), report.phi_eff);
            }
        }
    }
    return r;
}

VerifySuiteResult suite_probability_equivalence() {
    VerifySuiteResult r{.name = "closed-form vs matrix-projection probabilities"};
    SplitMix64 rng(0x5EEDF00D00000001ULL);
    for (int i = 0; i < 1000; ++i) {
        const double phi = wrap_pi(rng.next_u01() * two_pi);
        const double a = rng.next_u01() * pi;
        const double b = rng.next_u01() * pi;
        const OutcomeProbs closed = rotating_analyzer_probs(phi, a, b);
        const JonesMatrix rot_a = rotation_analyzer(a);
        const JonesMatrix rot_b = rotation_analyzer(b);
        const OutcomeProbs matrix = outcome_probs(make_state(StateFamily::Phi, phi), rot_a, rot_b);
        const double d = std::max({std::abs(closed.p_pp - matrix.p_pp),
                                   std::abs(closed.p_pm - matrix.p_pm),
                                   std::abs(closed.p_mp - matrix.p_mp),
                                   std::abs(closed.p_mm - matrix.p_mm)});
        ++r.checked;
        if (d > 1e-12) {
            ++r.failures;
            if (r.first_failure.empty()) {
                r.first_failure = describe("phi=%.9f a=%.9f b=%.9f", phi, a, b);
            }
        }
    }
    return r;
}

}  // namespace

std::vector<VerifySuiteResult> run_verify_suites(const VerifyOptions& opt) {
    return {suite_smax_oracle(opt), suite_compensation_end_to_end(),
            suite_probability_equivalence()};
}

bool all_passed(const std::vector<VerifySuiteResult>& results) {
    for (const auto& r : results) {
        if (r.failures > 0) return false;
    }
    return true;
}

std::string format_verify_report(const std::vector<VerifySuiteResult>& results) {
    std::string out;
    for (const auto& r : results) {
        char line[256];
        if (r.failures == 0) {
            std::snprintf(line, sizeof(line), "PASS %s (%d checks)\n", r.name.c_str(), r.checked);
        } else {
            std::snprintf(line, sizeof(line), "FAIL %s (%d/%d failed; first: %s)\n",
                          r.name.c_str(), r.failures, r.checked, r.first_failure.c_str());
        }
        out += line;
    }
    return out;
}

}  // namespace bellpol
