#pragma once

#include <liprop/classical.hpp>
#include <liprop/config.hpp>
#include <liprop/medium.hpp>
#include <liprop/quantum.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

namespace liprop {

enum class VerifyLevel { fast, full };

// One named invariant check: pass iff residual < threshold (and finite).
struct VerifyCheck {
    std::string name;
    double residual;
    double threshold;
    bool pass;
    std::string detail;
};

namespace detail {

inline VerifyCheck make_check(std::string name, double residual, double threshold,
                              std::string detail) {
    const bool pass = std::isfinite(residual) && residual < threshold;
    return VerifyCheck{std::move(name), residual, threshold, pass, std::move(detail)};
}

// Closed-form reference for a longitudinally uniform medium: u = sin(nu z')/nu
// and v = cos(nu z') in the scaled coordinate, rho identically 1, theta linear.
inline VerifyCheck check_homogeneous(double relTol) {
    const double wavelength = 653.0;
    const double nT = 1.515;
    const MediumSpec medium(wavelength, nT, 0.0, LongitudinalProfile::constant(),
                            50.0 * wavelength);
    const ClassicalSolution sol = solve_fundamental(medium, relTol, 2000);
    const double k0 = medium.k0();
    double worst = 0.0;
    for (std::size_t i = 0; i < sol.grid().size(); ++i) {
        const double zeta = k0 * sol.grid()[i];
        const double phase = nT * zeta;
        worst = std::max(worst, std::abs(sol.u()[i] - std::sin(phase) / nT));
        worst = std::max(worst, std::abs(sol.v()[i] - std::cos(phase)));
        worst = std::max(worst, std::abs(sol.rho()[i] - 1.0));
        if (phase > 0.0)
            worst = std::max(worst, std::abs(sol.theta()[i] / phase - 1.0));
    }
    return make_check("homogeneous_exactness", worst, 1e-8,
                      "uniform medium vs sin/cos closed form, 50-wavelength span");
}

inline void append_closed_form_checks(std::vector<VerifyCheck>& checks, double thetaEnd) {
    const double pi = std::numbers::pi;

    double coherentDrift = 0.0;
    const GaussianStateSpec coherent(1.0, 0.0, 1.0);
    for (int i = 0; i <= 1000; ++i) {
        const double theta = thetaEnd * static_cast<double>(i) / 1000.0;
        coherentDrift = std::max(coherentDrift, std::abs(evolve_noise(coherent, theta) - 1.0));
    }
    checks.push_back(make_check("coherent_noise", coherentDrift, 1e-12,
                                "unit input noise stays exactly 1 along the device"));

    double extremaErr = 0.0;
    for (double D : {0.5, 1.5}) {
        const GaussianStateSpec state(1.0, 0.0, D);
        for (int m = 0; m <= 6; ++m) {
            const double expected = (m % 2 == 0) ? D : 1.0 / D;
            extremaErr = std::max(
                extremaErr, std::abs(evolve_noise(state, 0.5 * pi * m) - expected));
        }
    }
    checks.push_back(make_check("noise_extrema", extremaErr, 1e-9,
                                "noise equals {D, 1/D} at the quarter-turn planes"));

    double pinErr = 0.0;
    for (double D : {0.5, 1.0, 1.5}) {
        const GaussianStateSpec state(1.0, 0.0, D);
        for (int m = 0; m <= 8; ++m)
            pinErr = std::max(pinErr,
                              std::abs(gouy_phase(state, 0.5 * pi * m) - 0.5 * pi * m));
    }
    checks.push_back(make_check("gouy_pinning", pinErr, 1e-9,
                                "state phase equals m*pi/2 at the quarter-turn planes"));

    double normErr = 0.0;
    const GaussianStateSpec squeezed(1.0, 0.4, 1.5);
    const OfsGrid grid(-9.0, 9.0, 2048);
    for (double theta : {0.0, 0.7, pi, 2.3}) {
        SampledWavefunction wf{grid, {}};
        wf.values.reserve(grid.points());
        for (std::size_t i = 0; i < grid.points(); ++i)
            wf.values.push_back(evolved_gaussian(squeezed, theta, grid.node(i)));
        normErr = std::max(normErr, std::abs(norm_squared(wf) - 1.0));
    }
    checks.push_back(make_check("gaussian_norm", normErr, 1e-8,
                                "closed-form evolved Gaussian keeps unit norm "
                                "(including the focal plane)"));

    double gramErr = 0.0;
    const OfsGrid fockGrid(-8.0, 8.0, 4096);
    std::vector<std::vector<double>> fock(11);
    for (std::size_t N = 0; N <= 10; ++N) {
        fock[N].reserve(fockGrid.points());
        for (std::size_t i = 0; i < fockGrid.points(); ++i)
            fock[N].push_back(fock_wavefunction(N, fockGrid.node(i)));
    }
    const double de = fockGrid.spacing();
    for (std::size_t a = 0; a <= 10; ++a)
        for (std::size_t b = a; b <= 10; ++b) {
            double acc = 0.0;
            for (std::size_t i = 0; i < fockGrid.points(); ++i) {
                const double w = (i == 0 || i + 1 == fockGrid.points()) ? 0.5 : 1.0;
                acc += w * fock[a][i] * fock[b][i];
            }
            acc *= de;
            gramErr = std::max(gramErr, std::abs(acc - (a == b ? 1.0 : 0.0)));
        }
    checks.push_back(make_check("fock_orthonormality", gramErr, 1e-8,
                                "number states N <= 10 are orthonormal under quadrature"));
}

inline void append_numeric_checks(std::vector<VerifyCheck>& checks) {
    // Closed form against the quadrature propagator across amplitude, phase,
    // input noise, and accumulated phase (away from the focal planes).
    double sweepWorst = 0.0;
    for (double alpha : {0.0, 2.0})
        for (double phi : {0.0, 0.7})
            for (double D : {0.5, 1.0, 1.5})
                for (double theta : {0.3, 1.0, 2.0, 2.8}) {
                    const GaussianStateSpec state(alpha, phi, D);
                    const OfsGrid grid = default_grid(state, theta);
                    const SampledWavefunction numeric =
                        propagate_numeric(sample_gaussian(state, grid), theta);
                    SampledWavefunction closed{grid, {}};
                    closed.values.reserve(grid.points());
                    for (std::size_t i = 0; i < grid.points(); ++i)
                        closed.values.push_back(evolved_gaussian(state, theta, grid.node(i)));
                    sweepWorst = std::max(sweepWorst, l2_relative_distance(numeric, closed));
                }
    checks.push_back(make_check("oracle_equivalence", sweepWorst, 1e-5,
                                "closed-form Gaussian evolution vs quadrature propagation, "
                                "48-point parameter sweep"));

    const GaussianStateSpec coherent(1.0, 0.0, 1.0);
    const OfsGrid chainGrid = default_grid(coherent, 0.4);
    const SampledWavefunction hop1 = propagate_numeric(sample_gaussian(coherent, chainGrid), 0.4);
    const SampledWavefunction hop2 = propagate_numeric(hop1, 0.7);
    SampledWavefunction direct{chainGrid, {}};
    direct.values.reserve(chainGrid.points());
    for (std::size_t i = 0; i < chainGrid.points(); ++i)
        direct.values.push_back(evolved_gaussian(coherent, 1.1, chainGrid.node(i)));
    checks.push_back(make_check("semigroup", l2_relative_distance(hop2, direct), 1e-5,
                                "two numeric hops 0.4 + 0.7 equal one hop 1.1"));

    const OfsGrid fockGrid(-8.0, 8.0, 2048);
    const SampledWavefunction ground = propagate_numeric(sample_fock(0, fockGrid), 0.9);
    double groundErr = 0.0;
    for (std::size_t i = 0; i < fockGrid.points(); ++i)
        groundErr = std::max(groundErr,
                             std::abs(ground.values[i] - fock_propagated(0, fockGrid.node(i), 0.9)));
    checks.push_back(make_check("ground_state_phase", groundErr, 1e-6,
                                "numeric ground-state propagation reproduces the half-quantum "
                                "phase advance"));

    double noiseErr = 0.0;
    for (double theta : {0.3, 1.0, 2.0}) {
        const OfsGrid grid = default_grid(coherent, theta);
        const SampledWavefunction numeric =
            propagate_numeric(sample_gaussian(coherent, grid), theta);
        noiseErr = std::max(noiseErr, std::abs(noise_from_samples(numeric) - 1.0));
    }
    checks.push_back(make_check("numeric_noise", noiseErr, 1e-6,
                                "second moment of the propagated coherent state stays 1"));
}

} // namespace detail

// Run the named invariant checks for a configuration. The fast level covers
// the classical residuals (at the config's own tolerance and grid) plus the
// closed-form quantum identities; the full level adds the quadrature
// cross-checks of the closed forms.
inline std::vector<VerifyCheck> verify_config(const CliConfig& config, VerifyLevel level) {
    std::vector<VerifyCheck> checks;

    const ClassicalSolution sol =
        solve_fundamental(config.medium(), config.run().relTol, config.run().gridPoints);
    const Diagnostics diag = diagnostics(sol);

    checks.push_back(detail::make_check("wronskian", diag.wronskianResidual, 1e-8,
                                        "max |u'v - v'u - 1| over the solution grid"));
    checks.push_back(detail::make_check("pinney", diag.pinneyResidual, 1e-5,
                                        "normalized amplitude-equation residual "
                                        "(centered differences)"));
    checks.push_back(detail::make_check("theta_consistency", diag.thetaConsistency, 1e-8,
                                        "accumulated phase against beta0 * s"));

    double minStep = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < sol.theta().size(); ++i)
        minStep = std::min(minStep, sol.theta()[i] - sol.theta()[i - 1]);
    checks.push_back(detail::make_check("theta_monotone", -minStep, 0.0,
                                        "accumulated phase strictly increases"));

    const double k0 = config.medium().k0();
    double invariantDrift = 0.0;
    double invariant0 = 0.0;
    for (std::size_t i = 0; i < sol.grid().size(); ++i) {
        const ClassicalTrajectory traj{sol.u()[i], k0 * sol.uPrime()[i]};
        const double value = invariant_value(traj, sol, sol.grid()[i]);
        if (i == 0)
            invariant0 = value;
        else
            invariantDrift = std::max(invariantDrift, std::abs(value / invariant0 - 1.0));
    }
    checks.push_back(detail::make_check("invariant_drift", invariantDrift, 1e-8,
                                        "conserved quadratic form along the u-trajectory"));

    checks.push_back(detail::check_homogeneous(config.run().relTol));
    detail::append_closed_form_checks(checks, sol.theta().back());

    if (level == VerifyLevel::full)
        detail::append_numeric_checks(checks);

    return checks;
}

} // namespace liprop
