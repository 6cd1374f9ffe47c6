#pragma once

#include <liprop/classical.hpp>
#include <liprop/medium.hpp>
#include <liprop/quantum.hpp>

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <set>
#include <vector>

namespace liprop {

// Output families an experiment can produce.
enum class OutputKind { effectiveIndex, classicalPhase, noise, gouy, wavefunctionSnapshots };

// Everything needed to drive one end-to-end run. Solver knobs carry the module
// defaults; zSamples controls the emitted z-grid, gridPoints the internal
// solver grid.
struct ExperimentConfig {
    MediumSpec medium;
    std::vector<GaussianStateSpec> states;
    std::size_t zSamples = 401;
    std::set<OutputKind> outputs = {OutputKind::effectiveIndex, OutputKind::classicalPhase,
                                    OutputKind::noise, OutputKind::gouy,
                                    OutputKind::wavefunctionSnapshots};
    double relTol = 1e-10;
    std::size_t gridPoints = 2000;
};

// Closed-form wavefunction sample at one propagation plane.
struct WavefunctionSnapshot {
    std::size_t stateIndex;
    double z;     // nm
    double theta; // rad
    OfsGrid grid;
    std::vector<std::complex<double>> values;
};

// Result bundle: curves on a uniform z-grid over [0, L], per-state noise and
// Gouy-phase curves, optional snapshots, and the solver's residual summary.
struct ExperimentResult {
    std::vector<double> z;     // nm
    std::vector<double> theta; // rad, always present (drives the quantum curves)
    std::vector<double> effectiveIndex;
    std::vector<std::vector<double>> noise; // [state][zIndex]
    std::vector<std::vector<double>> gouy;  // [state][zIndex]
    std::vector<WavefunctionSnapshot> snapshots;
    Diagnostics residuals{0.0, 0.0, 0.0};
    double relTol = 0.0;
    double absTol = 0.0;
};

namespace detail {

// Invert the strictly increasing theta(z) by bisection.
inline double z_of_theta(const ClassicalSolution& sol, double thetaTarget) {
    double lo = 0.0, hi = sol.medium().length();
    for (int iter = 0; iter < 200 && hi - lo > 1e-13 * sol.medium().length(); ++iter) {
        const double mid = 0.5 * (lo + hi);
        (theta_at(sol, mid) < thetaTarget ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace detail

// General experiment driver: classical solve, curves on a uniform z-grid, and
// the selected quantum outputs. The named scenarios below add their medium
// preconditions on top.
inline ExperimentResult run_experiment(const ExperimentConfig& config) {
    if (config.zSamples < 2)
        throw DomainError("experiment requires zSamples >= 2, got " +
                          std::to_string(config.zSamples));
    const bool wantsQuantum = config.outputs.count(OutputKind::noise) ||
                              config.outputs.count(OutputKind::gouy) ||
                              config.outputs.count(OutputKind::wavefunctionSnapshots);
    if (wantsQuantum && config.states.empty())
        throw DomainError("quantum outputs requested but no input states given");

    const ClassicalSolution sol =
        solve_fundamental(config.medium, config.relTol, config.gridPoints);

    ExperimentResult result;
    result.relTol = sol.relTol();
    result.absTol = sol.absTol();
    result.residuals = diagnostics(sol);

    const double L = config.medium.length();
    const std::size_t n = config.zSamples;
    result.z.resize(n);
    result.theta.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double z =
            (i + 1 == n) ? L : L * static_cast<double>(i) / static_cast<double>(n - 1);
        result.z[i] = z;
        result.theta[i] = theta_at(sol, z);
    }

    if (config.outputs.count(OutputKind::effectiveIndex)) {
        result.effectiveIndex.resize(n);
        for (std::size_t i = 0; i < n; ++i)
            result.effectiveIndex[i] = beta_local(config.medium, result.z[i]) / config.medium.k0();
    }

    if (config.outputs.count(OutputKind::noise) || config.outputs.count(OutputKind::gouy)) {
        result.noise.assign(config.states.size(), {});
        result.gouy.assign(config.states.size(), {});
        for (std::size_t si = 0; si < config.states.size(); ++si) {
            result.noise[si].resize(n);
            result.gouy[si].resize(n);
            for (std::size_t i = 0; i < n; ++i) {
                result.noise[si][i] = evolve_noise(config.states[si], result.theta[i]);
                result.gouy[si][i] = gouy_phase(config.states[si], result.theta[i]);
            }
        }
    }

    if (config.outputs.count(OutputKind::wavefunctionSnapshots)) {
        // Quarter-turn planes theta = pi/2, pi, 3pi/2, 2pi that fit in the
        // device, located by inverting theta(z). Evaluated by closed form, so
        // the focal planes (sin theta = 0) are perfectly regular.
        const double thetaEnd = theta_at(sol, L);
        for (std::size_t si = 0; si < config.states.size(); ++si) {
            const GaussianStateSpec& state = config.states[si];
            const double root = std::sqrt(state.inputNoise);
            const double eMax = state.amplitude + 6.0 * std::max(root, 1.0 / root);
            const OfsGrid grid(-eMax, eMax, 2048);
            for (int quarter = 1; quarter <= 4; ++quarter) {
                const double thetaTarget = 0.5 * std::numbers::pi * quarter;
                if (thetaTarget > thetaEnd)
                    break;
                const double z = detail::z_of_theta(sol, thetaTarget);
                WavefunctionSnapshot snap{static_cast<std::size_t>(si), z, thetaTarget, grid, {}};
                snap.values.reserve(grid.points());
                for (std::size_t gi = 0; gi < grid.points(); ++gi)
                    snap.values.push_back(evolved_gaussian(state, thetaTarget, grid.node(gi)));
                result.snapshots.push_back(std::move(snap));
            }
        }
    }

    return result;
}

// Cosine-medium experiment: effective-index and phase curves plus per-state
// noise and Gouy-phase evolution on a uniform z-grid over [0, L].
inline ExperimentResult run_cosine_experiment(const ExperimentConfig& config) {
    if (config.medium.profile().kind() != LongitudinalProfile::Kind::cosine)
        throw DomainError("run_cosine_experiment requires a cosine profile");
    return run_experiment(config);
}

// Homogeneous comparison baseline: requires a longitudinally uniform medium
// (zero contrast or a constant profile); theta(z) is then linear with slope
// beta(0).
inline ExperimentResult run_homogeneous_baseline(const ExperimentConfig& config) {
    if (config.medium.indexContrast() != 0.0 &&
        config.medium.profile().kind() != LongitudinalProfile::Kind::constant)
        throw DomainError("run_homogeneous_baseline requires delta_n = 0 or a constant profile");
    return run_experiment(config);
}

// One row of a noise sweep.
struct NoiseSweepRow {
    double inputNoise; // DeltaE0^2
    double z;          // nm
    double noise;      // DeltaE^2(z)
    double gouy;       // Theta(z), rad
};

// Full factorial sweep: for every input noise value and every z on a uniform
// grid over [0, L], the evolved noise and unwrapped Gouy phase. Rows are
// independent; amplitude and phase do not enter either quantity.
inline std::vector<NoiseSweepRow> sweep_noise(const MediumSpec& medium,
                                              const std::vector<double>& noiseValues,
                                              std::size_t zSamples) {
    if (zSamples < 2)
        throw DomainError("sweep_noise requires zSamples >= 2, got " + std::to_string(zSamples));
    for (double value : noiseValues)
        if (!(value > 0.0) || !std::isfinite(value))
            throw DomainError("sweep noise values must be positive and finite, got " +
                              std::to_string(value));

    const ClassicalSolution sol = solve_fundamental(medium);
    const double L = medium.length();
    std::vector<NoiseSweepRow> rows;
    rows.reserve(noiseValues.size() * zSamples);
    for (double value : noiseValues) {
        const GaussianStateSpec state(1.0, 0.0, value);
        for (std::size_t i = 0; i < zSamples; ++i) {
            const double z = (i + 1 == zSamples)
                                 ? L
                                 : L * static_cast<double>(i) / static_cast<double>(zSamples - 1);
            const double theta = theta_at(sol, z);
            rows.push_back(NoiseSweepRow{value, z, evolve_noise(state, theta),
                                         gouy_phase(state, theta)});
        }
    }
    return rows;
}

} // namespace liprop
