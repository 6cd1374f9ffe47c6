#pragma once

#include <liprop/classical.hpp>
#include <liprop/scenarios.hpp>
#include <liprop/version.hpp>

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace liprop {

// Full-precision decimal form (17 significant digits), enough to round-trip
// any double; used for every CSV cell so output is byte-deterministic.
inline std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return std::string(buf);
}

namespace detail {

inline std::ofstream open_for_write(const std::string& path) {
    std::ofstream out(path, std::ios::binary); // binary keeps LF line endings everywhere
    if (!out)
        throw std::runtime_error("cannot open '" + path + "' for writing");
    return out;
}

inline void append_row(std::string& buffer, const std::vector<double>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i)
            buffer += ',';
        buffer += format_double(cells[i]);
    }
    buffer += '\n';
}

} // namespace detail

// Classical solution table on a uniform z-grid of zSamples rows:
// z_nm,N_eff,u,v,rho,theta_rad,s_nm.
inline void write_classical_csv(const std::string& path, const ClassicalSolution& sol,
                                std::size_t zSamples) {
    if (zSamples < 2)
        throw DomainError("classical CSV requires zSamples >= 2, got " +
                          std::to_string(zSamples));
    std::string buffer = "z_nm,N_eff,u,v,rho,theta_rad,s_nm\n";
    const MediumSpec& medium = sol.medium();
    const double L = medium.length();
    for (std::size_t i = 0; i < zSamples; ++i) {
        const double z = (i + 1 == zSamples)
                             ? L
                             : L * static_cast<double>(i) / static_cast<double>(zSamples - 1);
        detail::append_row(buffer, {z, beta_local(medium, z) / medium.k0(), sol.uAt(z),
                                    sol.vAt(z), rho_at(sol, z), theta_at(sol, z), s_at(sol, z)});
    }
    detail::open_for_write(path) << buffer;
}

// Per-state quantum evolution curves: z_nm,theta_rad,noise,gouy_rad.
inline void write_state_curves_csv(const std::string& path, const std::vector<double>& z,
                                   const std::vector<double>& theta,
                                   const std::vector<double>& noise,
                                   const std::vector<double>& gouy) {
    std::string buffer = "z_nm,theta_rad,noise,gouy_rad\n";
    for (std::size_t i = 0; i < z.size(); ++i)
        detail::append_row(buffer, {z[i], theta[i], noise[i], gouy[i]});
    detail::open_for_write(path) << buffer;
}

// Sampled wavefunction: e,re,im,abs2.
inline void write_wavefunction_csv(const std::string& path, const OfsGrid& grid,
                                   const std::vector<std::complex<double>>& values) {
    std::string buffer = "e,re,im,abs2\n";
    for (std::size_t i = 0; i < values.size(); ++i)
        detail::append_row(buffer, {grid.node(i), values[i].real(), values[i].imag(),
                                    std::norm(values[i])});
    detail::open_for_write(path) << buffer;
}

// Manifest accompanying every output directory: version, subcommand, the
// resolved configuration, solver tolerances, residual diagnostics, and the
// list of every emitted file.
inline nlohmann::ordered_json build_manifest(const std::string& command,
                                             const nlohmann::ordered_json& resolvedConfig,
                                             double relTol, double absTol,
                                             const Diagnostics& residuals,
                                             const std::vector<std::string>& files) {
    nlohmann::ordered_json manifest;
    manifest["version"] = version;
    manifest["command"] = command;
    manifest["config"] = resolvedConfig;
    manifest["tolerances"] = {{"rel_tol", relTol}, {"abs_tol", absTol}};
    manifest["diagnostics"] = {{"wronskian_residual", residuals.wronskianResidual},
                               {"pinney_residual", residuals.pinneyResidual},
                               {"theta_consistency", residuals.thetaConsistency}};
    manifest["files"] = files;
    return manifest;
}

inline void write_manifest(const std::string& path, const nlohmann::ordered_json& manifest) {
    detail::open_for_write(path) << manifest.dump(2) << '\n';
}

} // namespace liprop
