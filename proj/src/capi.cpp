#include "bellpol/bellpol_c.h"

#include <cstring>
#include <string>

#include "bellpol/estimation.hpp"
#include "bellpol/verify.hpp"

namespace {

thread_local std::string g_last_error;

bellpol_status map_code(bellpol::Errc code) {
    using bellpol::Errc;
    switch (code) {
        case Errc::ok: return BELLPOL_OK;
        case Errc::invalid_argument: return BELLPOL_EINVAL;
        case Errc::precondition: return BELLPOL_EPRECOND;
        case Errc::domain: return BELLPOL_EDOMAIN;
        case Errc::degenerate_analyzer: return BELLPOL_EDEGENERATE;
        case Errc::convergence: return BELLPOL_ECONVERGENCE;
        case Errc::range: return BELLPOL_ERANGE;
        case Errc::low_visibility: return BELLPOL_ELOWVIS;
        case Errc::ill_conditioned: return BELLPOL_EILLCOND;
        case Errc::io: return BELLPOL_EIO;
    }
    return BELLPOL_EUNKNOWN;
}

template <typename Fn>
bellpol_status guarded(Fn&& fn) {
    try {
        fn();
        g_last_error.clear();
        return BELLPOL_OK;
    } catch (const bellpol::Error& e) {
        g_last_error = e.what();
        return map_code(e.code());
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return BELLPOL_EUNKNOWN;
    }
}

bellpol::StateFamily to_family(bellpol_family f) {
    return f == BELLPOL_FAMILY_PSI ? bellpol::StateFamily::Psi : bellpol::StateFamily::Phi;
}

bellpol::Scheme to_scheme(bellpol_scheme s) {
    switch (s) {
        case BELLPOL_SCHEME_ROTATING: return bellpol::Scheme::Rotating;
        case BELLPOL_SCHEME_FIXED_PAIR: return bellpol::Scheme::FixedPair;
        case BELLPOL_SCHEME_EXPERIMENTAL: return bellpol::Scheme::Experimental;
    }
    bellpol::fail(bellpol::Errc::invalid_argument, "unknown scheme");
}

}  // namespace

struct bellpol_fringe {
    bellpol::FringeData data;
};

extern "C" {

const char* bellpol_version(void) { return "1.0.0"; }

const char* bellpol_last_error(void) { return g_last_error.c_str(); }

bellpol_status bellpol_optimal_settings_closed(double phi, double settings[4], double* s_max) {
    return guarded([&] {
        const bellpol::OptimalSettings r = bellpol::optimal_settings_closed(phi);
        settings[0] = r.settings.a;
        settings[1] = r.settings.a_prime;
        settings[2] = r.settings.b;
        settings[3] = r.settings.b_prime;
        *s_max = r.s_max;
    });
}

bellpol_status bellpol_maximize_bell(double phi, double tol, double settings[4], double* s) {
    return guarded([&] {
        const bellpol::OptimalSettings r = bellpol::maximize_bell_numeric(phi, tol);
        settings[0] = r.settings.a;
        settings[1] = r.settings.a_prime;
        settings[2] = r.settings.b;
        settings[3] = r.settings.b_prime;
        *s = r.s_max;
    });
}

bellpol_status bellpol_rotating_probs(double phi, double a, double b, double probs[4],
                                      double* correlation) {
    return guarded([&] {
        const bellpol::OutcomeProbs p = bellpol::rotating_analyzer_probs(phi, a, b);
        probs[0] = p.p_pp;
        probs[1] = p.p_pm;
        probs[2] = p.p_mp;
        probs[3] = p.p_mm;
        *correlation = bellpol::correlation(p);
    });
}

bellpol_status bellpol_compensate(bellpol_family family, bellpol_scheme scheme, double phi,
                                  double alpha_a, double alpha_b, double settings[3],
                                  double* phi_eff, double* s_at_chsh) {
    return guarded([&] {
        using namespace bellpol;
        const StateFamily fam = to_family(family);
        const Scheme sch = to_scheme(scheme);
        JonesMatrix t_a, t_b;
        switch (sch) {
            case Scheme::Rotating: {
                const RotatingCompSettings s = rotating_scheme_settings(phi, alpha_a, alpha_b);
                settings[0] = s.chi_a;
                settings[1] = s.zeta_a;
                settings[2] = s.chi_b;
                t_a = rotating_channel_a(s);
                t_b = named_element(ElementKind::CompAt45, s.chi_b);
                break;
            }
            case Scheme::FixedPair: {
                const FixedPairSettings s = fixed_pair_settings(phi, alpha_a, alpha_b);
                settings[0] = s.chi_1a;
                settings[1] = s.chi_2a;
                settings[2] = s.chi_b;
                t_a = fixed_pair_channel_a(s);
                t_b = named_element(ElementKind::CompAt45, s.chi_b);
                break;
            }
            case Scheme::Experimental: {
                const ExperimentalSettings s = experimental_settings(fam, phi, alpha_a, alpha_b);
                settings[0] = s.zeta_1a;
                settings[1] = s.chi_2a;
                settings[2] = s.zeta_b;
                const ChannelPair chain = experimental_chain(s);
                t_a = chain.t_a;
                t_b = chain.t_b;
                break;
            }
        }
        const CompensationReport report = verify_compensation(
            phi, fam, t_a, t_b, {0.0, pi / 4.0, pi / 8.0, -pi / 8.0});
        *phi_eff = report.phi_eff;
        *s_at_chsh = report.s_at_chsh;
    });
}

bellpol_status bellpol_simulate_counts(const double probs[4], double pair_rate,
                                       double integration_time, double accidental_rate,
                                       uint64_t seed, uint64_t counts[4]) {
    return guarded([&] {
        bellpol::OutcomeProbs p{probs[0], probs[1], probs[2], probs[3]};
        bellpol::SourceModel m{pair_rate, integration_time, accidental_rate, seed};
        const bellpol::CountRecord c = bellpol::simulate_counts(p, m);
        counts[0] = c.n_pp;
        counts[1] = c.n_pm;
        counts[2] = c.n_mp;
        counts[3] = c.n_mm;
    });
}

bellpol_status bellpol_scan_fringe(bellpol_family family, bellpol_scheme scheme, double phi_true,
                                   const double* grid, size_t n_points, double pair_rate,
                                   double integration_time, double accidental_rate, uint64_t seed,
                                   int noiseless, bellpol_fringe** out) {
    return guarded([&] {
        std::vector<double> g(grid, grid + n_points);
        bellpol::SourceModel m{pair_rate, integration_time, accidental_rate, seed};
        auto* f = new bellpol_fringe{bellpol::scan_fringe(to_family(family), phi_true,
                                                          to_scheme(scheme), g, m,
                                                          noiseless != 0)};
        *out = f;
    });
}

size_t bellpol_fringe_size(const bellpol_fringe* fringe) {
    return fringe ? fringe->data.points.size() : 0;
}

bellpol_status bellpol_fringe_point(const bellpol_fringe* fringe, size_t index,
                                    double* scan_value, uint64_t counts[4], double* p_pp_model) {
    return guarded([&] {
        if (!fringe || index >= fringe->data.points.size()) {
            bellpol::fail(bellpol::Errc::invalid_argument, "fringe point index out of range");
        }
        const bellpol::FringePoint& p = fringe->data.points[index];
        *scan_value = p.scan_value;
        counts[0] = p.counts.n_pp;
        counts[1] = p.counts.n_pm;
        counts[2] = p.counts.n_mp;
        counts[3] = p.counts.n_mm;
        *p_pp_model = p.probs.p_pp;
    });
}

void bellpol_fringe_free(bellpol_fringe* fringe) { delete fringe; }

bellpol_status bellpol_estimate_phase(const bellpol_fringe* fringe, int use_expected,
                                      double* phi_hat, double* sigma, double* visibility) {
    return guarded([&] {
        if (!fringe) bellpol::fail(bellpol::Errc::invalid_argument, "null fringe handle");
        const bellpol::PhaseEstimateResult r =
            bellpol::estimate_phase_full(fringe->data, use_expected != 0);
        *phi_hat = r.estimate.phi_hat;
        *sigma = r.estimate.sigma;
        *visibility = r.fit.visibility;
        if (!r.valid) {
            bellpol::fail(bellpol::Errc::low_visibility,
                          "fringe visibility below 0.2, fit unreliable");
        }
    });
}

bellpol_status bellpol_verify(char* report, size_t report_len, int* failures) {
    return guarded([&] {
        const auto results = bellpol::run_verify_suites();
        const std::string text = bellpol::format_verify_report(results);
        if (report && report_len > 0) {
            std::strncpy(report, text.c_str(), report_len - 1);
            report[report_len - 1] = '\0';
        }
        int n = 0;
        for (const auto& r : results) {
            if (r.failures > 0) ++n;
        }
        *failures = n;
    });
}

}  // extern "C"
