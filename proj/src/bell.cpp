#include "bellpol/bell.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bellpol/rng.hpp"

namespace bellpol {

namespace {

double clamp01(double x) { return std::clamp(x, 0.0, 1.0); }

void require_finite(double x, const char* name) {
    if (!std::isfinite(x)) fail(Errc::invalid_argument, std::string(name) + " must be finite");
}

}  // namespace

AnalyzerSettings AnalyzerSettings::canonical(double a, double a_prime, double b, double b_prime) {
    return {wrap_period(a, pi), wrap_period(a_prime, pi), wrap_period(b, pi),
            wrap_period(b_prime, pi)};
}

OutcomeProbs outcome_probs(const TwoQubitState& state, const JonesMatrix& t_a,
                           const JonesMatrix& t_b) {
    if (!t_a.is_unitary(1e-10) || !t_b.is_unitary(1e-10)) {
        fail(Errc::precondition, "outcome_probs: non-unitary analyzer");
    }
    OutcomeProbs p{};
    double* out[4] = {&p.p_pp, &p.p_pm, &p.p_mp, &p.p_mm};
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            // <i_A j_B| = sum_kl conj(T_A[i][k]) conj(T_B[j][l]) <kl|
            Complex amp{};
            for (int k = 0; k < 2; ++k) {
                for (int l = 0; l < 2; ++l) {
                    amp += std::conj(t_a(i, k)) * std::conj(t_b(j, l)) * state.amp[2 * k + l];
                }
            }
            *out[2 * i + j] = clamp01(std::norm(amp));
        }
    }
    return p;
}

OutcomeProbs rotating_analyzer_probs(double phi, double a, double b) {
    require_finite(phi, "phi");
    require_finite(a, "a");
    require_finite(b, "b");
    const double c2 = std::cos(phi / 2.0) * std::cos(phi / 2.0);
    const double s2 = std::sin(phi / 2.0) * std::sin(phi / 2.0);
    const double cm = std::cos(a - b), sm = std::sin(a - b);
    const double cp = std::cos(a + b), sp = std::sin(a + b);
    OutcomeProbs p{};
    p.p_pp = p.p_mm = 0.5 * (c2 * cm * cm + s2 * cp * cp);
    p.p_pm = p.p_mp = 0.5 * (c2 * sm * sm + s2 * sp * sp);
    return p;
}

double correlation(const OutcomeProbs& p) { return p.p_pp - p.p_pm - p.p_mp + p.p_mm; }

double bell_parameter(const ProbModel& model, const AnalyzerSettings& s) {
    return correlation(model(s.a, s.b)) + correlation(model(s.a, s.b_prime)) +
           correlation(model(s.a_prime, s.b)) - correlation(model(s.a_prime, s.b_prime));
}

double effective_phase(const EffectivePhaseInputs& in) {
    for (const auto* d : {&in.decomp_a, &in.decomp_b}) {
        if (d->alpha < 1e-9 || d->alpha > pi / 2.0 - 1e-9) {
            fail(Errc::degenerate_analyzer,
                 "effective_phase: analyzer decomposition is degenerate (alpha near 0 or pi/2)");
        }
    }
    return wrap_pi(in.phi + in.decomp_a.phi + in.decomp_b.phi - in.decomp_a.phi_prime -
                   in.decomp_b.phi_prime);
}

OptimalSettings optimal_settings_closed(double phi) {
    require_finite(phi, "phi");
    const double b = 0.5 * std::atan(std::cos(phi));
    OptimalSettings r;
    r.settings = AnalyzerSettings::canonical(0.0, pi / 4.0, b, -b);
    r.s_max = 2.0 * std::sqrt(std::cos(phi) * std::cos(phi) + 1.0);
    return r;
}

namespace {

// S for |Phi(phi)> via the closed-form correlation factor; this is the
// objective for the numeric maximizer and is independent of the closed-form
// optimal-settings solution.
double bell_s(double phi, double a, double b, double ap, double bp) {
    const double c2 = std::cos(phi / 2.0) * std::cos(phi / 2.0);
    const double s2 = 1.0 - c2;
    auto corr = [&](double x, double y) {
        return c2 * std::cos(2.0 * (x - y)) + s2 * std::cos(2.0 * (x + y));
    };
    return corr(a, b) + corr(a, bp) + corr(ap, b) - corr(ap, bp);
}

}  // namespace

OptimalSettings maximize_bell_numeric(double phi, double tol) {
    require_finite(phi, "phi");
    if (!(tol > 0.0)) fail(Errc::invalid_argument, "maximize_bell_numeric: tol must be > 0");

    constexpr int kStarts = 16;
    constexpr int kMaxEvalsPerStart = 10000;
    const double inv_golden = (std::sqrt(5.0) - 1.0) / 2.0;

    double best_s = -std::numeric_limits<double>::infinity();
    std::array<double, 4> best_x{};

    SplitMix64 rng(0x42656C6C43485348ULL);  // fixed start seed
    for (int start = 0; start < kStarts; ++start) {
        std::array<double, 4> x;
        for (auto& xi : x) xi = rng.next_u01() * pi;

        int evals = 0;
        auto f = [&](const std::array<double, 4>& v) {
            ++evals;
            return bell_s(phi, v[0], v[2], v[1], v[3]);  // order (a, a', b, b')
        };

        double current = f(x);
        bool converged = false;
        while (!converged && evals < kMaxEvalsPerStart) {
            const double before = current;
            for (int d = 0; d < 4 && evals < kMaxEvalsPerStart; ++d) {
                // Golden-section over one full period centered on the
                // current coordinate.
                double lo = x[d] - pi / 2.0, hi = x[d] + pi / 2.0;
                double u = hi - inv_golden * (hi - lo);
                double v = lo + inv_golden * (hi - lo);
                auto eval_at = [&](double t) {
                    std::array<double, 4> y = x;
                    y[d] = t;
                    return f(y);
                };
                double fu = eval_at(u), fv = eval_at(v);
                while (hi - lo > 1e-12 && evals < kMaxEvalsPerStart) {
                    if (fu > fv) {
                        hi = v;
                        v = u;
                        fv = fu;
                        u = hi - inv_golden * (hi - lo);
                        fu = eval_at(u);
                    } else {
                        lo = u;
                        u = v;
                        fu = fv;
                        v = lo + inv_golden * (hi - lo);
                        fv = eval_at(v);
                    }
                }
                x[d] = wrap_period(0.5 * (lo + hi), pi);
                current = eval_at(x[d]);
            }
            if (current - before < tol / 10.0) converged = true;
        }
        if (!converged && evals >= kMaxEvalsPerStart && current < best_s - tol) {
            continue;  // stalled start; other starts decide
        }
        if (current > best_s) {
            best_s = current;
            best_x = x;
        }
    }

    if (!std::isfinite(best_s)) {
        fail(Errc::convergence, "maximize_bell_numeric: no start converged");
    }
    OptimalSettings r;
    r.settings = AnalyzerSettings::canonical(best_x[0], best_x[1], best_x[2], best_x[3]);
    r.s_max = best_s;
    return r;
}

}  // namespace bellpol
