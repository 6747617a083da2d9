#include "bellpol/estimation.hpp"

#include <algorithm>
#include <cmath>

namespace bellpol {

namespace {

// Solve the symmetric 3x3 system n * x = rhs in place; also inverts n into
// cov. Gaussian elimination with partial pivoting.
void solve3(double n[3][3], double rhs[3], double x[3], double cov[3][3]) {
    // Augment with the identity for the inverse.
    double aug[3][6];
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            aug[i][j] = n[i][j];
            aug[i][j + 3] = (i == j) ? 1.0 : 0.0;
        }
    }
    double scale = 0.0;
    for (int i = 0; i < 3; ++i) scale = std::max(scale, std::abs(n[i][i]));
    for (int col = 0; col < 3; ++col) {
        int pivot = col;
        for (int r = col + 1; r < 3; ++r) {
            if (std::abs(aug[r][col]) > std::abs(aug[pivot][col])) pivot = r;
        }
        if (std::abs(aug[pivot][col]) < 1e-12 * std::max(scale, 1.0)) {
            fail(Errc::ill_conditioned, "harmonic_fit: rank-deficient design matrix");
        }
        if (pivot != col) std::swap(aug[pivot], aug[col]);
        const double inv = 1.0 / aug[col][col];
        for (int j = 0; j < 6; ++j) aug[col][j] *= inv;
        for (int r = 0; r < 3; ++r) {
            if (r == col) continue;
            const double f = aug[r][col];
            for (int j = 0; j < 6; ++j) aug[r][j] -= f * aug[col][j];
        }
    }
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) cov[i][j] = aug[i][j + 3];
        x[i] = 0.0;
    }
    // x = cov * rhs (cov is the true inverse of n here).
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) x[i] += cov[i][j] * rhs[j];
    }
}

}  // namespace

FringeFit harmonic_fit(const std::vector<FitPoint>& points) {
    if (points.size() < 4) {
        fail(Errc::precondition, "harmonic_fit: need at least 4 points");
    }
    double n[3][3] = {};
    double rhs[3] = {};
    for (const FitPoint& p : points) {
        const double w = 1.0 / std::max(p.y, 1.0);
        const double basis[3] = {1.0, std::cos(p.x), std::sin(p.x)};
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) n[i][j] += w * basis[i] * basis[j];
            rhs[i] += w * basis[i] * p.y;
        }
    }
    double beta[3];
    double cov[3][3];
    solve3(n, rhs, beta, cov);

    FringeFit fit;
    fit.offset = beta[0];
    fit.cos_amp = beta[1];
    fit.sin_amp = beta[2];
    const double r2 = beta[1] * beta[1] + beta[2] * beta[2];
    fit.phase = std::atan2(beta[2], beta[1]);
    fit.visibility = (fit.offset > 0.0) ? std::sqrt(r2) / fit.offset : 0.0;
    if (r2 > 0.0) {
        // Propagate the (A, B) covariance through atan2(B, A).
        const double ga = -beta[2] / r2;
        const double gb = beta[1] / r2;
        fit.sigma_phase =
            std::sqrt(std::max(0.0, ga * ga * cov[1][1] + 2.0 * ga * gb * cov[1][2] +
                                        gb * gb * cov[2][2]));
    } else {
        fit.sigma_phase = pi;  // flat fringe, phase unconstrained
    }
    double chi2 = 0.0;
    for (const FitPoint& p : points) {
        const double model = beta[0] + beta[1] * std::cos(p.x) + beta[2] * std::sin(p.x);
        const double r = p.y - model;
        chi2 += r * r / std::max(p.y, 1.0);
    }
    fit.residual_chi2 = chi2;
    return fit;
}

namespace {

// Fringes in the diagonal basis follow p_pp = (1 +- cos(phi - g(x))) / 4;
// the sign depends on scheme and family (it tracks whether phi_eff = 0 sits
// at the coincidence maximum or minimum).
bool fringe_inverted(Scheme scheme, StateFamily family) {
    switch (scheme) {
        case Scheme::Rotating:
            return family == StateFamily::Phi;
        case Scheme::FixedPair:
            return family == StateFamily::Phi;
        case Scheme::Experimental:
            return false;
    }
    return false;
}

double scan_abscissa(Scheme scheme, double scan_value) {
    if (scheme == Scheme::Rotating) {
        // chi_A -> phi_A; the fitted quadrature pair keeps the phase
        // identifiable over this half-window.
        return std::acos(std::clamp(std::sqrt(2.0) * std::cos(scan_value / 2.0), -1.0, 1.0));
    }
    return scan_value;
}

}  // namespace

PhaseEstimateResult estimate_phase_full(const FringeData& data, bool use_expected) {
    std::vector<FitPoint> pts;
    pts.reserve(data.points.size());
    for (const FringePoint& p : data.points) {
        double y;
        if (use_expected || data.noiseless) {
            y = expected_counts(p.probs, data.model)[0];
        } else {
            y = static_cast<double>(p.counts.n_pp);
        }
        pts.push_back({scan_abscissa(data.scheme, p.scan_value), y});
    }
    PhaseEstimateResult r;
    r.fit = harmonic_fit(pts);
    double phi_hat = r.fit.phase;  // y ~ m + R cos(x - phase)
    if (fringe_inverted(data.scheme, data.family)) phi_hat += pi;
    r.estimate.phi_hat = wrap_pi(phi_hat);
    r.estimate.sigma = r.fit.sigma_phase;
    r.estimate.scheme = data.scheme;
    r.valid = r.fit.visibility >= 0.2;
    return r;
}

PhaseEstimate estimate_phase(const FringeData& data, bool use_expected) {
    const PhaseEstimateResult r = estimate_phase_full(data, use_expected);
    if (!r.valid) {
        fail(Errc::low_visibility,
             "estimate_phase: fringe visibility below 0.2, fit unreliable");
    }
    return r.estimate;
}

}  // namespace bellpol
