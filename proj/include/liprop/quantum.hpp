#pragma once

#include <liprop/errors.hpp>

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace liprop {

// Exclusion band around the focal planes theta = m*pi: kernel evaluation is
// refused when |sin theta| falls below this. The closed forms stay regular
// there and are the sanctioned path across.
inline constexpr double causticBand = 1e-6;

// Uniform grid of optical-field-strength (OFS) values. The OFS coordinate is
// dimensionless; grids must straddle zero and carry at least 64 points.
class OfsGrid {
public:
    OfsGrid(double eMin, double eMax, std::size_t points)
        : eMin_(eMin), eMax_(eMax), points_(points) {
        if (!std::isfinite(eMin) || !std::isfinite(eMax) || !(eMin < 0.0) || !(eMax > 0.0))
            throw DomainError("OFS grid must satisfy eMin < 0 < eMax, got [" +
                              std::to_string(eMin) + ", " + std::to_string(eMax) + "]");
        if (points < 64)
            throw DomainError("OFS grid needs at least 64 points, got " + std::to_string(points));
    }

    double eMin() const noexcept { return eMin_; }
    double eMax() const noexcept { return eMax_; }
    std::size_t points() const noexcept { return points_; }
    double spacing() const noexcept {
        return (eMax_ - eMin_) / static_cast<double>(points_ - 1);
    }
    double node(std::size_t i) const noexcept {
        return (i + 1 == points_) ? eMax_ : eMin_ + spacing() * static_cast<double>(i);
    }

    bool operator==(const OfsGrid& other) const noexcept {
        return eMin_ == other.eMin_ && eMax_ == other.eMax_ && points_ == other.points_;
    }

private:
    double eMin_;
    double eMax_;
    std::size_t points_;
};

// Gaussian input state: amplitude |alpha| >= 0, phase phi (rad), and input
// quadrature noise DeltaE0^2 > 0 (equal to 1 for a coherent state).
struct GaussianStateSpec {
    GaussianStateSpec(double amplitudeIn, double phaseIn, double inputNoiseIn)
        : amplitude(amplitudeIn), phase(phaseIn), inputNoise(inputNoiseIn) {
        if (!(amplitude >= 0.0) || !std::isfinite(amplitude))
            throw DomainError("Gaussian amplitude must be >= 0 and finite, got " +
                              std::to_string(amplitude));
        if (!std::isfinite(phase))
            throw DomainError("Gaussian phase must be finite");
        if (!(inputNoise > 0.0) || !std::isfinite(inputNoise))
            throw DomainError("input noise must be positive and finite, got " +
                              std::to_string(inputNoise));
    }

    double amplitude;
    double phase;
    double inputNoise;
};

// Snapshot of an evolved Gaussian at accumulated phase theta. The state is
//   psi(E) = (2/(pi*noise))^{1/4} exp(-(E-center)^2/noise)
//            * exp(i*[gouyPhase/2 - delta(E) + chirp*(E-center)^2]),
// delta(E) = deltaPhaseCoefficients.first + deltaPhaseCoefficients.second * E.
// The chirp term vanishes for coherent input and at theta = m*pi/2; it is what
// keeps the closed form exactly unitary for squeezed input between those
// planes.
struct EvolvedGaussian {
    double theta;
    double noise;
    double gouyPhase;
    double center;
    std::pair<double, double> deltaPhaseCoefficients;
    double chirp;
};

// Number-state wavefunction Psi_N(E) = 2^{1/4}/sqrt(2^N sqrt(pi) N!) *
// H_N(sqrt2 E) * exp(-E^2); real-valued. Evaluated by the normalized upward
// recurrence, stable through N = 60.
inline double fock_wavefunction(std::size_t N, double e) {
    if (N > 60)
        throw DomainError("Fock index N=" + std::to_string(N) +
                          " outside the recurrence-stable range [0, 60]");
    if (!std::isfinite(e))
        throw DomainError("OFS value must be finite");
    const double t = std::numbers::sqrt2 * e;
    const double quarterRootTwo = std::pow(2.0, 0.25);
    double hPrev = std::pow(std::numbers::pi, -0.25) * std::exp(-0.5 * t * t);
    if (N == 0)
        return quarterRootTwo * hPrev;
    double hCur = std::numbers::sqrt2 * t * hPrev;
    for (std::size_t k = 2; k <= N; ++k) {
        const double hNext = t * std::sqrt(2.0 / static_cast<double>(k)) * hCur -
                             std::sqrt(static_cast<double>(k - 1) / static_cast<double>(k)) * hPrev;
        hPrev = hCur;
        hCur = hNext;
    }
    return quarterRootTwo * hCur;
}

// Number state after accumulating phase theta: exp(i (N+1/2) theta) Psi_N(E).
// The modulus never changes; only the eigenphase advances.
inline std::complex<double> fock_propagated(std::size_t N, double e, double theta) {
    const double phase = (static_cast<double>(N) + 0.5) * theta;
    return std::polar(1.0, phase) * fock_wavefunction(N, e);
}

// Input Gaussian: (2/(pi D))^{1/4} exp(-(E-|a|cos phi)^2/D) exp(-i delta0),
// delta0 = sin(phi)(|a|^2 cos(phi) - 2|a| E), D = input noise. Unit L2 norm.
inline std::complex<double> gaussian_input(const GaussianStateSpec& state, double e) {
    if (!std::isfinite(e))
        throw DomainError("OFS value must be finite");
    const double a = state.amplitude;
    const double D = state.inputNoise;
    const double center = a * std::cos(state.phase);
    const double delta0 = std::sin(state.phase) * (a * a * std::cos(state.phase) - 2.0 * a * e);
    const double envelope = std::pow(2.0 / (std::numbers::pi * D), 0.25) *
                            std::exp(-(e - center) * (e - center) / D);
    return std::polar(envelope, -delta0);
}

// Quadrature noise after phase theta: sin^2(theta)/D + cos^2(theta)*D.
// Oscillates between D and 1/D with period pi; identically 1 for D = 1.
inline double evolve_noise(const GaussianStateSpec& state, double theta) {
    const double s = std::sin(theta), c = std::cos(theta);
    const double D = state.inputNoise;
    return s * s / D + c * c * D;
}

// State-dependent accumulated phase, the continuous unwrapping of
// arctan(tan(theta)/D): Theta = m*pi + atan2(sin r, D cos r) with
// m = floor(theta/pi + 1/2), r = theta - m*pi. Theta(0) = 0, Theta is
// nondecreasing in theta, and Theta(m*pi/2) = m*pi/2 for every D.
inline double gouy_phase(const GaussianStateSpec& state, double theta) {
    const double m = std::floor(theta / std::numbers::pi + 0.5);
    const double r = theta - m * std::numbers::pi;
    return m * std::numbers::pi + std::atan2(std::sin(r), state.inputNoise * std::cos(r));
}

// All closed-form descriptors of the evolved Gaussian at phase theta.
inline EvolvedGaussian evolve_gaussian_state(const GaussianStateSpec& state, double theta) {
    const double a = state.amplitude;
    const double D = state.inputNoise;
    const double S = std::sin(theta), C = std::cos(theta);
    const double noise = evolve_noise(state, theta);
    const double drifted = state.phase + theta;
    const double center = a * std::cos(drifted);
    const std::pair<double, double> coeffs{std::sin(drifted) * a * a * std::cos(drifted),
                                           -2.0 * a * std::sin(drifted)};
    const double chirp = -S * C * (1.0 - D * D) / (D * noise);
    return EvolvedGaussian{theta, noise, gouy_phase(state, theta), center, coeffs, chirp};
}

// Pointwise evolved Gaussian amplitude; exactly unitary for every theta,
// regular across the focal planes (no caustic in the closed form).
inline std::complex<double> evolved_gaussian(const GaussianStateSpec& state, double theta,
                                             double e) {
    if (!std::isfinite(e))
        throw DomainError("OFS value must be finite");
    const EvolvedGaussian g = evolve_gaussian_state(state, theta);
    const double offset = e - g.center;
    const double delta = g.deltaPhaseCoefficients.first + g.deltaPhaseCoefficients.second * e;
    const double envelope = std::pow(2.0 / (std::numbers::pi * g.noise), 0.25) *
                            std::exp(-offset * offset / g.noise);
    return std::polar(envelope, 0.5 * g.gouyPhase - delta + g.chirp * offset * offset);
}

// Single-mode propagator at fixed accumulated phase theta. Evaluation is
// refused within the caustic band |sin theta| < 1e-6, where the prefactor
// diverges.
class PropagatorKernel {
public:
    explicit PropagatorKernel(double theta) : theta_(theta) {
        if (!std::isfinite(theta))
            throw DomainError("kernel phase must be finite");
        sinTheta_ = std::sin(theta);
        cosTheta_ = std::cos(theta);
        nearCaustic_ = std::abs(sinTheta_) < causticBand;
        if (!nearCaustic_) {
            branch_ = static_cast<int>(std::floor(theta / std::numbers::pi));
            const double r = theta - static_cast<double>(branch_) * std::numbers::pi;
            // Branch-tracked square-root prefactor: i^m * e^{i pi/4} / sqrt(pi sin r)
            // with r in (0, pi), so sin r > 0. Fixed by the identity (delta) limit
            // at theta -> 0+ and continuous phase advance across each focal plane.
            static const std::complex<double> unitPowers[4] = {
                {1.0, 0.0}, {0.0, 1.0}, {-1.0, 0.0}, {0.0, -1.0}};
            const int mMod = ((branch_ % 4) + 4) % 4;
            prefactor_ = unitPowers[mMod] *
                         std::polar(1.0 / std::sqrt(std::numbers::pi * std::sin(r)),
                                    std::numbers::pi / 4.0);
        }
    }

    double theta() const noexcept { return theta_; }
    bool nearCaustic() const noexcept { return nearCaustic_; }
    double sinTheta() const noexcept { return sinTheta_; }
    double cosTheta() const noexcept { return cosTheta_; }
    std::complex<double> prefactor() const noexcept { return prefactor_; }

private:
    double theta_;
    double sinTheta_ = 0.0;
    double cosTheta_ = 0.0;
    int branch_ = 0;
    bool nearCaustic_ = false;
    std::complex<double> prefactor_{0.0, 0.0};
};

// Kernel value K(E, E0; theta) = prefactor * exp(-(i/sin theta)[cos theta
// (E^2 + E0^2) - 2 E E0]); symmetric in E <-> E0.
inline std::complex<double> kernel_value(const PropagatorKernel& kernel, double e, double e0) {
    if (kernel.nearCaustic()) {
        std::ostringstream msg;
        msg << "kernel at theta=" << kernel.theta() << " is within " << causticBand
            << " of a focal plane; evaluate at theta +/- epsilon or use the closed forms";
        throw CausticError(msg.str(), kernel.theta());
    }
    const double S = kernel.sinTheta(), C = kernel.cosTheta();
    const double phase = -(C * (e * e + e0 * e0) - 2.0 * e * e0) / S;
    return kernel.prefactor() * std::polar(1.0, phase);
}

// Wavefunction sampled on a uniform OFS grid.
struct SampledWavefunction {
    OfsGrid grid;
    std::vector<std::complex<double>> values;
};

inline SampledWavefunction sample_gaussian(const GaussianStateSpec& state, const OfsGrid& grid) {
    SampledWavefunction wf{grid, {}};
    wf.values.reserve(grid.points());
    for (std::size_t i = 0; i < grid.points(); ++i)
        wf.values.push_back(gaussian_input(state, grid.node(i)));
    return wf;
}

inline SampledWavefunction sample_fock(std::size_t N, const OfsGrid& grid) {
    SampledWavefunction wf{grid, {}};
    wf.values.reserve(grid.points());
    for (std::size_t i = 0; i < grid.points(); ++i)
        wf.values.emplace_back(fock_wavefunction(N, grid.node(i)), 0.0);
    return wf;
}

// Trapezoid L2 norm squared.
inline double norm_squared(const SampledWavefunction& wf) {
    const double de = wf.grid.spacing();
    double acc = 0.0;
    for (std::size_t i = 0; i < wf.values.size(); ++i) {
        const double w = (i == 0 || i + 1 == wf.values.size()) ? 0.5 : 1.0;
        acc += w * std::norm(wf.values[i]);
    }
    return acc * de;
}

// Relative L2 distance ||a - b|| / ||b||; grids must match.
inline double l2_relative_distance(const SampledWavefunction& a, const SampledWavefunction& b) {
    if (!(a.grid == b.grid))
        throw DomainError("L2 distance requires identical grids");
    const double de = a.grid.spacing();
    double diff = 0.0, ref = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) {
        const double w = (i == 0 || i + 1 == a.values.size()) ? 0.5 : 1.0;
        diff += w * std::norm(a.values[i] - b.values[i]);
        ref += w * std::norm(b.values[i]);
    }
    return std::sqrt(diff * de) / std::sqrt(ref * de);
}

// Quadrature noise 4*Var(E) of a sampled state (normalized internally).
inline double noise_from_samples(const SampledWavefunction& wf) {
    const double de = wf.grid.spacing();
    double p0 = 0.0, p1 = 0.0, p2 = 0.0;
    for (std::size_t i = 0; i < wf.values.size(); ++i) {
        const double w = (i == 0 || i + 1 == wf.values.size()) ? 0.5 : 1.0;
        const double density = w * std::norm(wf.values[i]);
        const double e = wf.grid.node(i);
        p0 += density;
        p1 += density * e;
        p2 += density * e * e;
    }
    p0 *= de;
    p1 *= de;
    p2 *= de;
    const double mean = p1 / p0;
    return 4.0 * (p2 / p0 - mean * mean);
}

namespace detail {

// Largest kernel-phase slope d(phase)/dE0 over the grid: (2/|S|) * max|C E0 - E|
// bounded by 2*maxAbs*(|C|+1)/|S|.
inline double kernel_phase_slope(const OfsGrid& grid, double sinTheta, double cosTheta) {
    const double maxAbs = std::max(std::abs(grid.eMin()), std::abs(grid.eMax()));
    return 2.0 * maxAbs * (std::abs(cosTheta) + 1.0) / std::abs(sinTheta);
}

inline std::size_t points_for_slope(const OfsGrid& grid, double slope) {
    const double span = grid.eMax() - grid.eMin();
    const double maxSpacing = (std::numbers::pi / 4.0) / slope;
    return static_cast<std::size_t>(std::ceil(span / maxSpacing)) + 1;
}

} // namespace detail

// Grid sized for a Gaussian state: half-width |alpha| + 6 max(sqrt D, 1/sqrt D)
// (symmetric about 0), starting at 2048 points and doubling until the kernel
// oscillation at phase theta is resolved (phase change per step < pi/4).
inline OfsGrid default_grid(const GaussianStateSpec& state, double theta) {
    const double s = std::sin(theta);
    if (std::abs(s) < causticBand)
        throw CausticError("cannot size a quadrature grid within the caustic band; "
                           "use the closed forms across focal planes",
                           theta);
    const double root = std::sqrt(state.inputNoise);
    const double eMax = state.amplitude + 6.0 * std::max(root, 1.0 / root);
    std::size_t points = 2048;
    const double slope =
        2.0 * eMax * (std::abs(std::cos(theta)) + 1.0) / std::abs(s);
    while ((2.0 * eMax / static_cast<double>(points - 1)) * slope >= std::numbers::pi / 4.0)
        points *= 2;
    return OfsGrid(-eMax, eMax, points);
}

// Propagation integral: out(E) = integral K(E, E0; theta) in(E0) dE0 by
// trapezoid quadrature on the input grid, evaluated output point by output
// point. The separable kernel phase is advanced by a per-row complex
// recurrence, so each row costs one complex exponential plus points
// multiply-adds. Norm is preserved to better than 1e-6 when the preconditions
// hold.
inline SampledWavefunction propagate_numeric(const SampledWavefunction& input, double theta) {
    const PropagatorKernel kernel(theta);
    if (kernel.nearCaustic())
        throw CausticError("propagation phase theta=" + std::to_string(theta) +
                               " is within the caustic band; use the closed forms",
                           theta);
    const OfsGrid& grid = input.grid;
    const std::size_t n = grid.points();
    if (input.values.size() != n)
        throw DomainError("sampled wavefunction size does not match its grid");

    const double edge = std::max(std::abs(input.values.front()), std::abs(input.values.back()));
    if (!(edge < 1e-12)) {
        std::ostringstream msg;
        msg << "input amplitude " << edge << " at the grid boundary exceeds 1e-12; "
            << "the grid [" << grid.eMin() << ", " << grid.eMax() << "] is too narrow";
        throw DomainError(msg.str());
    }

    const double S = kernel.sinTheta(), C = kernel.cosTheta();
    const double slope = detail::kernel_phase_slope(grid, S, C);
    if (slope * grid.spacing() >= std::numbers::pi / 4.0) {
        const std::size_t needed = detail::points_for_slope(grid, slope);
        std::ostringstream msg;
        msg << "grid of " << n << " points under-resolves the kernel oscillation at theta="
            << theta << "; at least " << needed << " points are required";
        throw ResolutionError(msg.str(), needed);
    }

    const double de = grid.spacing();
    // g_j = exp(-i C e0_j^2 / S) * psi_j * w_j, the E-independent row factor.
    std::vector<std::complex<double>> rowFactor(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double e0 = grid.node(j);
        const double w = (j == 0 || j + 1 == n) ? 0.5 : 1.0;
        rowFactor[j] = std::polar(w * de, -C * e0 * e0 / S) * input.values[j];
    }

    SampledWavefunction out{grid, std::vector<std::complex<double>>(n)};
    const double e0First = grid.node(0);
    for (std::size_t i = 0; i < n; ++i) {
        const double e = grid.node(i);
        // Remaining kernel factor: exp(-i C e^2/S) * exp(2i e e0_j / S).
        const std::complex<double> step = std::polar(1.0, 2.0 * e * de / S);
        std::complex<double> osc = std::polar(1.0, 2.0 * e * e0First / S);
        std::complex<double> acc{0.0, 0.0};
        for (std::size_t j = 0; j < n; ++j) {
            acc += osc * rowFactor[j];
            osc *= step;
        }
        out.values[i] = kernel.prefactor() * std::polar(1.0, -C * e * e / S) * acc;
    }
    return out;
}

} // namespace liprop
