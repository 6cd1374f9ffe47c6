#pragma once

#include <liprop/errors.hpp>

// fpclassify must precede pchip: the interpolator calls unqualified isnan and
// relies on the declaration being visible at instantiation time.
#include <boost/math/special_functions/fpclassify.hpp>

#include <boost/math/interpolators/pchip.hpp>

#include <cmath>
#include <limits>
#include <memory>
#include <numbers>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace liprop {

// Dimensionless longitudinal modulation h(z) of the index contrast.
// Three variants: h == 1, h = cos(spatialFrequency * z), and a tabulated curve
// interpolated by a monotone (shape-preserving) cubic. Interpolation acts on h
// itself, never on h^2, so the squared profile can never undershoot zero.
class LongitudinalProfile {
public:
    enum class Kind { constant, cosine, tabulated };

    static LongitudinalProfile constant() { return LongitudinalProfile(Kind::constant, 0.0); }

    // spatialFrequency in rad/nm, must be positive.
    static LongitudinalProfile cosine(double spatialFrequency) {
        if (!(spatialFrequency > 0.0) || !std::isfinite(spatialFrequency))
            throw DomainError("cosine profile requires spatialFrequency > 0, got " +
                              std::to_string(spatialFrequency));
        return LongitudinalProfile(Kind::cosine, spatialFrequency);
    }

    // Samples (z in nm, h dimensionless) with strictly increasing z. At least
    // four samples are required by the monotone cubic. Evaluation outside the
    // sampled range is an error.
    static LongitudinalProfile tabulated(std::vector<double> z, std::vector<double> h) {
        if (z.size() != h.size())
            throw DomainError("tabulated profile needs equally many z and h samples, got " +
                              std::to_string(z.size()) + " and " + std::to_string(h.size()));
        if (z.size() < 4)
            throw DomainError("tabulated profile needs at least 4 samples, got " +
                              std::to_string(z.size()));
        for (std::size_t i = 0; i < z.size(); ++i) {
            if (!std::isfinite(z[i]) || !std::isfinite(h[i]))
                throw DomainError("tabulated profile sample " + std::to_string(i) + " is not finite");
            if (i > 0 && !(z[i] > z[i - 1]))
                throw DomainError("tabulated profile z samples must be strictly increasing "
                                  "(violated at index " + std::to_string(i) + ")");
        }
        LongitudinalProfile p(Kind::tabulated, 0.0);
        p.zMin_ = z.front();
        p.zMax_ = z.back();
        p.interp_ = std::make_shared<const Interp>(std::move(z), std::move(h));
        return p;
    }

    Kind kind() const noexcept { return kind_; }

    // Spatial frequency of the cosine variant (rad/nm).
    double spatialFrequency() const {
        if (kind_ != Kind::cosine)
            throw DomainError("spatialFrequency is defined only for cosine profiles");
        return spatialFrequency_;
    }

    // True when h(z) is defined at z.
    bool covers(double z) const noexcept {
        return kind_ != Kind::tabulated || (z >= zMin_ && z <= zMax_);
    }

    // Lower/upper end of the evaluable range (unbounded except for tabulated).
    double coverageMin() const noexcept {
        return kind_ == Kind::tabulated ? zMin_ : -std::numeric_limits<double>::infinity();
    }
    double coverageMax() const noexcept {
        return kind_ == Kind::tabulated ? zMax_ : std::numeric_limits<double>::infinity();
    }

    // h(z); z in nm.
    double value(double z) const {
        switch (kind_) {
        case Kind::constant:
            return 1.0;
        case Kind::cosine:
            return std::cos(spatialFrequency_ * z);
        case Kind::tabulated:
        default:
            if (!covers(z)) {
                std::ostringstream msg;
                msg << "tabulated profile evaluated at z=" << z
                    << " nm outside sampled range [" << zMin_ << ", " << zMax_ << "] nm";
                throw DomainError(msg.str());
            }
            return (*interp_)(z);
        }
    }

private:
    using Interp = boost::math::interpolators::pchip<std::vector<double>>;

    LongitudinalProfile(Kind kind, double spatialFrequency)
        : kind_(kind), spatialFrequency_(spatialFrequency) {}

    Kind kind_;
    double spatialFrequency_;
    double zMin_ = 0.0;
    double zMax_ = 0.0;
    std::shared_ptr<const Interp> interp_;
};

// Separable waveguide description. The transverse problem is summarized by the
// effective transverse index N_t = beta_t / k0 (a user input, not solved for);
// the longitudinal structure enters through the squared local propagation
// constant beta^2(z) = beta_t^2 + k0^2 * deltaN^2 * h^2(z).
class MediumSpec {
public:
    // wavelength (nm), effective transverse index, index contrast, profile,
    // and device length (nm).
    MediumSpec(double wavelength, double effectiveTransverseIndex, double indexContrast,
               LongitudinalProfile profile, double length)
        : wavelength_(wavelength),
          nT_(effectiveTransverseIndex),
          deltaN_(indexContrast),
          profile_(std::move(profile)),
          length_(length) {
        if (!(wavelength_ > 0.0) || !std::isfinite(wavelength_))
            throw DomainError("wavelength must be positive and finite, got " +
                              std::to_string(wavelength_));
        if (!(nT_ > 0.0) || !std::isfinite(nT_))
            throw DomainError("effective transverse index must be positive and finite, got " +
                              std::to_string(nT_));
        if (!(deltaN_ >= 0.0) || !std::isfinite(deltaN_))
            throw DomainError("index contrast must be >= 0 and finite, got " +
                              std::to_string(deltaN_));
        if (!(length_ > 0.0) || !std::isfinite(length_))
            throw DomainError("length must be positive and finite, got " +
                              std::to_string(length_));
        if (!profile_.covers(0.0))
            throw DomainError("profile must be defined at z=0 (the launch plane fixes beta0)");
        h0_ = profile_.value(0.0);
        if (!std::isfinite(h0_))
            throw DomainError("profile value at z=0 is not finite");
    }

    double wavelength() const noexcept { return wavelength_; }
    double effectiveTransverseIndex() const noexcept { return nT_; }
    double indexContrast() const noexcept { return deltaN_; }
    double length() const noexcept { return length_; }
    const LongitudinalProfile& profile() const noexcept { return profile_; }

    // Vacuum wavenumber (rad/nm).
    double k0() const noexcept { return 2.0 * std::numbers::pi / wavelength_; }

    // Transverse propagation constant beta_t = k0 * N_t (rad/nm).
    double betaT() const noexcept { return k0() * nT_; }

    // Launch-plane propagation constant beta(0) (rad/nm); uses h(0) as-is,
    // which need not equal 1.
    double beta0() const noexcept { return k0() * nu0(); }

    // Dimensionless launch-plane index beta(0)/k0.
    double nu0() const noexcept { return std::sqrt(nT_ * nT_ + deltaN_ * deltaN_ * h0_ * h0_); }

    // h(z); requires the profile to cover z.
    double h(double z) const { return profile_.value(z); }

    // Squared dimensionless local index (beta/k0)^2 evaluated at the scaled
    // coordinate zeta = k0 * z.
    double nuSquaredAtZeta(double zeta) const {
        const double hz = profile_.value(zeta / k0());
        return nT_ * nT_ + deltaN_ * deltaN_ * hz * hz;
    }

private:
    double wavelength_;
    double nT_;
    double deltaN_;
    LongitudinalProfile profile_;
    double length_;
    double h0_;
};

// Local propagation constant beta(z) = sqrt(beta_t^2 + k0^2 deltaN^2 h^2(z)),
// in rad/nm; always >= beta_t. z must lie in [0, L] and inside the profile's
// sampled range.
inline double beta_local(const MediumSpec& medium, double z) {
    if (!(z >= 0.0 && z <= medium.length())) {
        std::ostringstream msg;
        msg << "z=" << z << " nm outside the device interval [0, " << medium.length() << "] nm";
        throw DomainError(msg.str());
    }
    const double hz = medium.h(z); // tabulated coverage enforced by the profile
    const double kdn = medium.k0() * medium.indexContrast();
    return std::sqrt(medium.betaT() * medium.betaT() + kdn * kdn * hz * hz);
}

// Uniform samples of the effective index N(z) = beta(z)/k0 over [0, L],
// endpoints included.
inline std::vector<std::pair<double, double>> effective_index_curve(const MediumSpec& medium,
                                                                    std::size_t gridPoints) {
    if (gridPoints < 2)
        throw DomainError("effective_index_curve requires gridPoints >= 2, got " +
                          std::to_string(gridPoints));
    std::vector<std::pair<double, double>> curve;
    curve.reserve(gridPoints);
    const double L = medium.length();
    for (std::size_t i = 0; i < gridPoints; ++i) {
        // Hit the right endpoint exactly.
        const double z = (i + 1 == gridPoints) ? L : L * static_cast<double>(i) /
                                                          static_cast<double>(gridPoints - 1);
        curve.emplace_back(z, beta_local(medium, z) / medium.k0());
    }
    return curve;
}

} // namespace liprop
