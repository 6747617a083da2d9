#include "bellpol/sim.hpp"

#include <cmath>

namespace bellpol {

namespace {

void validate_model(const SourceModel& m) {
    if (!(m.pair_rate >= 0.0) || !(m.accidental_rate >= 0.0)) {
        fail(Errc::invalid_argument, "source model: rates must be >= 0");
    }
    if (!(m.integration_time > 0.0)) {
        fail(Errc::invalid_argument, "source model: integration_time must be > 0");
    }
}

constexpr double kMaxMean = 9007199254740992.0;  // 2^53

}  // namespace

std::array<double, 4> expected_counts(const OutcomeProbs& p, const SourceModel& m) {
    validate_model(m);
    const double pairs = m.pair_rate * m.integration_time;
    const double acc = m.accidental_rate * m.integration_time / 4.0;
    return {pairs * p.p_pp + acc, pairs * p.p_pm + acc, pairs * p.p_mp + acc, pairs * p.p_mm + acc};
}

std::uint64_t poisson_sample(double mean, SplitMix64& rng) {
    if (!(mean >= 0.0)) fail(Errc::invalid_argument, "poisson_sample: mean must be >= 0");
    if (mean > kMaxMean) fail(Errc::range, "poisson_sample: mean exceeds 2^53");
    if (mean == 0.0) return 0;

    if (mean < 30.0) {
        // Inversion by sequential search.
        const double u = rng.next_u01();
        double p = std::exp(-mean);
        double cdf = p;
        std::uint64_t k = 0;
        while (u > cdf && k < 10000) {
            ++k;
            p *= mean / static_cast<double>(k);
            cdf += p;
        }
        return k;
    }

    // Transformed rejection with squeeze (Hormann's PTRS).
    const double b = 0.931 + 2.53 * std::sqrt(mean);
    const double a = -0.059 + 0.02483 * b;
    const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    const double v_r = 0.9277 - 3.6224 / (b - 2.0);
    const double log_mean = std::log(mean);
    for (;;) {
        double u = rng.next_u01() - 0.5;
        double v = rng.next_u01();
        const double us = 0.5 - std::abs(u);
        const double kf = std::floor((2.0 * a / us + b) * u + mean + 0.43);
        if (us >= 0.07 && v <= v_r) return static_cast<std::uint64_t>(kf);
        if (kf < 0.0 || (us < 0.013 && v > us)) continue;
        const double lhs = std::log(v * inv_alpha / (a / (us * us) + b));
        const double rhs = -mean + kf * log_mean - std::lgamma(kf + 1.0);
        if (lhs <= rhs) return static_cast<std::uint64_t>(kf);
    }
}

CountRecord simulate_counts(const OutcomeProbs& p, const SourceModel& m) {
    const std::array<double, 4> means = expected_counts(p, m);
    SplitMix64 rng(m.seed);
    CountRecord c;
    c.n_pp = poisson_sample(means[0], rng);
    c.n_pm = poisson_sample(means[1], rng);
    c.n_mp = poisson_sample(means[2], rng);
    c.n_mm = poisson_sample(means[3], rng);
    return c;
}

OutcomeProbs scan_point_probs(StateFamily family, double phi_true, Scheme scheme,
                              double scan_value) {
    JonesMatrix t_a, t_b;
    switch (scheme) {
        case Scheme::Rotating: {
            const DiagonalScanPoint sp = rotating_scheme_diagonal_scan(scan_value);
            t_a = waveplate(sp.zeta_a, scan_value);
            t_b = named_element(ElementKind::CompAt45, pi / 2.0);
            break;
        }
        case Scheme::FixedPair: {
            FixedPairSettings s;
            s.chi_1a = scan_value;
            s.chi_2a = pi / 2.0;
            s.chi_b = pi / 2.0;
            t_a = fixed_pair_channel_a(s);
            t_b = named_element(ElementKind::CompAt45, s.chi_b);
            break;
        }
        case Scheme::Experimental: {
            ExperimentalSettings s;
            s.zeta_1a = pi / 8.0;
            s.chi_2a = scan_value;
            s.zeta_b = pi / 8.0;
            const ChannelPair chain = experimental_chain(s);
            t_a = chain.t_a;
            t_b = chain.t_b;
            break;
        }
    }
    return outcome_probs(make_state(family, phi_true), t_a, t_b);
}

FringeData scan_fringe(StateFamily family, double phi_true, Scheme scheme,
                       const std::vector<double>& grid, const SourceModel& m, bool noiseless) {
    validate_model(m);
    for (std::size_t i = 1; i < grid.size(); ++i) {
        if (!(grid[i] > grid[i - 1])) {
            fail(Errc::invalid_argument, "scan_fringe: scan values must be strictly increasing");
        }
    }
    FringeData data;
    data.scheme = scheme;
    data.family = family;
    data.noiseless = noiseless;
    data.model = m;
    data.points.reserve(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        FringePoint pt;
        pt.scan_value = grid[i];
        pt.probs = scan_point_probs(family, phi_true, scheme, grid[i]);
        if (noiseless) {
            const std::array<double, 4> means = expected_counts(pt.probs, m);
            pt.counts = {static_cast<std::uint64_t>(std::llround(means[0])),
                         static_cast<std::uint64_t>(std::llround(means[1])),
                         static_cast<std::uint64_t>(std::llround(means[2])),
                         static_cast<std::uint64_t>(std::llround(means[3]))};
        } else {
            SourceModel point_model = m;
            point_model.seed = m.seed ^ mix64(static_cast<std::uint64_t>(i));
            pt.counts = simulate_counts(pt.probs, point_model);
        }
        data.points.push_back(pt);
    }
    return data;
}

}  // namespace bellpol
