#include "doctest.h"

#include <cmath>
#include <vector>

#include "bellpol/estimation.hpp"
#include "bellpol/verify.hpp"

using namespace bellpol;

namespace {

std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> g(n);
    for (int i = 0; i < n; ++i) {
        g[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    }
    return g;
}

std::vector<double> scheme_grid(Scheme scheme, int n) {
    if (scheme == Scheme::Rotating) {
        return linspace(pi / 2.0 + 0.05, 3.0 * pi / 2.0 - 0.05, n);
    }
    return linspace(0.0, two_pi * (1.0 - 1.0 / n), n);
}

}  // namespace

TEST_CASE("harmonic_fit recovers its own model class exactly") {
    std::vector<FitPoint> pts;
    for (int i = 0; i < 20; ++i) {
        const double x = two_pi * i / 20.0;
        pts.push_back({x, 100.0 * (1.0 + std::cos(x - 1.2))});
    }
    const FringeFit fit = harmonic_fit(pts);
    CHECK(fit.phase == doctest::Approx(1.2).epsilon(1e-9));
    CHECK(fit.visibility == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(fit.offset == doctest::Approx(100.0).epsilon(1e-9));
    CHECK(fit.residual_chi2 < 1e-12);
}

TEST_CASE("harmonic_fit on a flat fringe reports near-zero visibility") {
    std::vector<FitPoint> pts;
    for (int i = 0; i < 16; ++i) pts.push_back({two_pi * i / 16.0, 50.0});
    const FringeFit fit = harmonic_fit(pts);
    CHECK(std::abs(fit.cos_amp) < 1e-9);
    CHECK(std::abs(fit.sin_amp) < 1e-9);
    CHECK(fit.visibility < 1e-9);
}

TEST_CASE("harmonic_fit input validation") {
    CHECK_THROWS_AS(harmonic_fit({{0.0, 1.0}, {1.0, 2.0}, {2.0, 3.0}}), Error);
    // All abscissas identical: rank-deficient normal equations.
    std::vector<FitPoint> degenerate(6, FitPoint{0.7, 10.0});
    CHECK_THROWS_AS(harmonic_fit(degenerate), Error);
    try {
        harmonic_fit(degenerate);
    } catch (const Error& e) {
        CHECK(e.code() == Errc::ill_conditioned);
    }
}

TEST_CASE("fit phase lands within 3 sigma of truth under Poisson noise") {
    const double truth = 0.85;
    int covered = 0;
    const int trials = 1000;
    for (int t = 0; t < trials; ++t) {
        SplitMix64 rng(1000 + static_cast<std::uint64_t>(t));
        std::vector<FitPoint> pts;
        for (int i = 0; i < 20; ++i) {
            const double x = two_pi * i / 20.0;
            const double mean = 100.0 * (1.0 + std::cos(x - truth));
            pts.push_back({x, static_cast<double>(poisson_sample(mean, rng))});
        }
        const FringeFit fit = harmonic_fit(pts);
        if (std::abs(wrap_pi(fit.phase - truth)) <= 3.0 * fit.sigma_phase) ++covered;
    }
    CHECK(covered >= 985);
}

TEST_CASE("noiseless round trip recovers the phase for every scheme and family") {
    const SourceModel m{1000.0, 1.0, 0.0, 0};
    for (Scheme scheme : {Scheme::Rotating, Scheme::FixedPair, Scheme::Experimental}) {
        for (StateFamily family : {StateFamily::Phi, StateFamily::Psi}) {
            for (double phi : {-2.1, -0.4, 0.8, 2.6}) {
                const FringeData data =
                    scan_fringe(family, phi, scheme, scheme_grid(scheme, 40), m, true);
                const PhaseEstimate est = estimate_phase(data, true);
                CHECK(std::abs(wrap_pi(est.phi_hat - phi)) < 1e-6);
            }
        }
    }
}

TEST_CASE("noisy fixed-pair round trip stays within 0.05 rad") {
    const double phi = 1.0;
    int good = 0;
    const int trials = 200;
    for (int t = 0; t < trials; ++t) {
        const SourceModel m{10000.0, 1.0, 0.0, static_cast<std::uint64_t>(t)};
        const FringeData data =
            scan_fringe(StateFamily::Phi, phi, Scheme::FixedPair, scheme_grid(Scheme::FixedPair, 20), m);
        const PhaseEstimateResult r = estimate_phase_full(data);
        if (r.valid && std::abs(wrap_pi(r.estimate.phi_hat - phi)) <= 0.05) ++good;
    }
    CHECK(good >= 190);
}

TEST_CASE("flat data triggers the low-visibility error") {
    const SourceModel m{0.0, 1.0, 400.0, 3};
    const FringeData data = scan_fringe(StateFamily::Phi, 0.4, Scheme::FixedPair,
                                        scheme_grid(Scheme::FixedPair, 16), m);
    CHECK_THROWS_AS(estimate_phase(data), Error);
    try {
        estimate_phase(data);
    } catch (const Error& e) {
        CHECK(e.code() == Errc::low_visibility);
    }
    const PhaseEstimateResult r = estimate_phase_full(data);
    CHECK_FALSE(r.valid);
    CHECK(r.fit.visibility < 0.2);
}

TEST_CASE("estimator uncertainty scales like one over sqrt(N)") {
    const double phi = 0.6;
    std::vector<double> log_n, log_sigma;
    for (double pairs : {100.0, 1000.0, 10000.0}) {
        double sigma_sum = 0.0;
        const int trials = 100;
        for (int t = 0; t < trials; ++t) {
            const SourceModel m{pairs, 1.0, 0.0, 7000 + static_cast<std::uint64_t>(t)};
            const FringeData data = scan_fringe(StateFamily::Phi, phi, Scheme::FixedPair,
                                                scheme_grid(Scheme::FixedPair, 20), m);
            sigma_sum += estimate_phase_full(data).estimate.sigma;
        }
        log_n.push_back(std::log(pairs));
        log_sigma.push_back(std::log(sigma_sum / trials));
    }
    const double slope = (log_sigma.back() - log_sigma.front()) / (log_n.back() - log_n.front());
    CHECK(slope == doctest::Approx(-0.5).epsilon(0.2));
}

TEST_CASE("closing the loop keeps S near the quantum maximum") {
    const double phi = 1.4;
    const SourceModel m{10000.0, 1.0, 0.0, 11};
    const FringeData data = scan_fringe(StateFamily::Phi, phi, Scheme::FixedPair,
                                        scheme_grid(Scheme::FixedPair, 20), m);
    const double phi_hat = estimate_phase(data).phi_hat;
    const double delta = wrap_pi(phi - phi_hat);
    REQUIRE(std::abs(delta) < 0.05);

    const FixedPairSettings s = fixed_pair_settings(phi_hat, pi / 4.0, pi / 4.0);
    const CompensationReport r = verify_compensation(
        phi, StateFamily::Phi, fixed_pair_channel_a(s),
        named_element(ElementKind::CompAt45, s.chi_b), {0.0, pi / 4.0, pi / 8.0, -pi / 8.0});
    // Residual-error identity at the standard quadruple.
    CHECK(r.s_at_chsh ==
          doctest::Approx(std::sqrt(2.0) * (1.0 + std::cos(delta))).epsilon(1e-9));
    CHECK(r.s_at_chsh >= 2.82);
}

TEST_CASE("verification suites pass on a fresh build") {
    const auto results = run_verify_suites();
    CHECK(all_passed(results));
    CHECK(results.size() == 3);
    for (const auto& r : results) {
        CHECK(r.failures == 0);
        CHECK(r.checked > 0);
    }
    const std::string report = format_verify_report(results);
    CHECK(report.find("PASS") != std::string::npos);
    CHECK(report.find("FAIL") == std::string::npos);
}

TEST_CASE("verification harness catches a broken oracle") {
    VerifyOptions opt;
    opt.perturb_closed_form = 1e-3;
    const auto results = run_verify_suites(opt);
    CHECK_FALSE(all_passed(results));
    const std::string report = format_verify_report(results);
    CHECK(report.find("FAIL") != std::string::npos);
}

TEST_CASE("verification report is byte-identical across runs") {
    CHECK(format_verify_report(run_verify_suites()) ==
          format_verify_report(run_verify_suites()));
}
