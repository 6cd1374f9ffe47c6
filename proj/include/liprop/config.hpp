#pragma once

#include <liprop/errors.hpp>
#include <liprop/medium.hpp>
#include <liprop/quantum.hpp>
#include <liprop/scenarios.hpp>

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace liprop {

// Solver and emission settings from the config's run block, post-default.
struct RunSettings {
    std::size_t zSamples = 401;
    double relTol = 1e-10;
    std::size_t gridPoints = 2000;
    std::string outputDir = "out";
};

namespace detail {

using Json = nlohmann::ordered_json;

inline void ensure_keys(const Json& obj, const std::string& where,
                        const std::set<std::string>& allowed) {
    if (!obj.is_object())
        throw ConfigError("'" + where + "' must be an object");
    for (const auto& item : obj.items())
        if (!allowed.count(item.key()))
            throw ConfigError("unknown key '" + where + "." + item.key() + "'");
}

inline const Json* find(const Json& obj, const std::string& key) {
    auto it = obj.find(key);
    return it == obj.end() ? nullptr : &*it;
}

inline double require_number(const Json& obj, const std::string& where, const std::string& key) {
    const Json* value = find(obj, key);
    if (!value)
        throw ConfigError("missing required key '" + where + "." + key + "'");
    if (!value->is_number())
        throw ConfigError("key '" + where + "." + key + "' must be a number");
    return value->get<double>();
}

inline double optional_number(const Json& obj, const std::string& where, const std::string& key,
                              double fallback) {
    const Json* value = find(obj, key);
    if (!value)
        return fallback;
    if (!value->is_number())
        throw ConfigError("key '" + where + "." + key + "' must be a number");
    return value->get<double>();
}

inline std::size_t optional_count(const Json& obj, const std::string& where,
                                  const std::string& key, std::size_t fallback) {
    const Json* value = find(obj, key);
    if (!value)
        return fallback;
    if (!value->is_number_unsigned())
        throw ConfigError("key '" + where + "." + key + "' must be a non-negative integer");
    return value->get<std::size_t>();
}

inline std::string require_string(const Json& obj, const std::string& where,
                                  const std::string& key) {
    const Json* value = find(obj, key);
    if (!value)
        throw ConfigError("missing required key '" + where + "." + key + "'");
    if (!value->is_string())
        throw ConfigError("key '" + where + "." + key + "' must be a string");
    return value->get<std::string>();
}

inline const std::map<std::string, OutputKind>& output_names() {
    static const std::map<std::string, OutputKind> names = {
        {"effective_index", OutputKind::effectiveIndex},
        {"classical_phase", OutputKind::classicalPhase},
        {"noise", OutputKind::noise},
        {"gouy", OutputKind::gouy},
        {"wavefunction_snapshots", OutputKind::wavefunctionSnapshots}};
    return names;
}

} // namespace detail

// Parsed and validated configuration file. Medium, states, and run settings are
// resolved (defaults applied); every module-level invariant has been checked.
class CliConfig {
public:
    const MediumSpec& medium() const noexcept { return medium_; }
    const std::vector<GaussianStateSpec>& states() const noexcept { return states_; }
    const RunSettings& run() const noexcept { return run_; }
    const std::set<OutputKind>& outputs() const noexcept { return outputs_; }

    // The post-default configuration, as recorded in the manifest.
    const nlohmann::ordered_json& resolved() const noexcept { return resolved_; }

    // Parse a JSON config document. Unknown keys anywhere are errors; messages
    // name the offending key.
    static CliConfig parse(const std::string& text) {
        detail::Json doc;
        try {
            doc = detail::Json::parse(text);
        } catch (const nlohmann::json::exception& err) {
            throw ConfigError(std::string("config is not valid JSON: ") + err.what());
        }
        try {
            return fromJson(doc);
        } catch (const DomainError& err) {
            // Invariant violations surface as config errors at parse time.
            throw ConfigError(err.what());
        }
    }

    static CliConfig load(const std::string& path) {
        std::ifstream in(path, std::ios::binary);
        if (!in)
            throw ConfigError("cannot read config file '" + path + "'");
        std::ostringstream text;
        text << in.rdbuf();
        return parse(text.str());
    }

private:
    CliConfig(MediumSpec medium, std::vector<GaussianStateSpec> states, RunSettings run,
              std::set<OutputKind> outputs, nlohmann::ordered_json resolved)
        : medium_(std::move(medium)), states_(std::move(states)), run_(std::move(run)),
          outputs_(std::move(outputs)), resolved_(std::move(resolved)) {}

    static CliConfig fromJson(const detail::Json& doc) {
        detail::ensure_keys(doc, "config", {"medium", "states", "run", "outputs"});

        const detail::Json* mediumBlock = detail::find(doc, "medium");
        if (!mediumBlock)
            throw ConfigError("missing required key 'config.medium'");
        detail::ensure_keys(*mediumBlock, "medium",
                            {"wavelength_nm", "n_transverse", "delta_n", "profile", "length_nm"});

        const double wavelength = detail::require_number(*mediumBlock, "medium", "wavelength_nm");
        const double nTransverse = detail::require_number(*mediumBlock, "medium", "n_transverse");
        const double deltaN = detail::require_number(*mediumBlock, "medium", "delta_n");
        if (!(wavelength > 0.0))
            throw ConfigError("'medium.wavelength_nm' must be positive");

        const detail::Json* profileBlock = detail::find(*mediumBlock, "profile");
        if (!profileBlock)
            throw ConfigError("missing required key 'medium.profile'");
        detail::ensure_keys(*profileBlock, "medium.profile",
                            {"type", "lambda_per_k0", "samples"});
        const std::string type = detail::require_string(*profileBlock, "medium.profile", "type");

        const double k0 = 2.0 * std::numbers::pi / wavelength;
        LongitudinalProfile profile = LongitudinalProfile::constant();
        double defaultLength = 0.0;
        if (type == "constant") {
            if (detail::find(*profileBlock, "lambda_per_k0") ||
                detail::find(*profileBlock, "samples"))
                throw ConfigError("'medium.profile' of type constant takes no extra keys");
            if (!detail::find(*mediumBlock, "length_nm"))
                throw ConfigError("missing required key 'medium.length_nm' "
                                  "(no default for constant profiles)");
        } else if (type == "cosine") {
            if (detail::find(*profileBlock, "samples"))
                throw ConfigError("'medium.profile.samples' is only valid for tabulated profiles");
            const double perK0 =
                detail::require_number(*profileBlock, "medium.profile", "lambda_per_k0");
            if (!(perK0 > 0.0))
                throw ConfigError("'medium.profile.lambda_per_k0' must be positive");
            const double spatialFrequency = k0 / perK0;
            profile = LongitudinalProfile::cosine(spatialFrequency);
            defaultLength = 2.0 * std::numbers::pi / spatialFrequency;
        } else if (type == "tabulated") {
            if (detail::find(*profileBlock, "lambda_per_k0"))
                throw ConfigError(
                    "'medium.profile.lambda_per_k0' is only valid for cosine profiles");
            const detail::Json* samples = detail::find(*profileBlock, "samples");
            if (!samples)
                throw ConfigError("missing required key 'medium.profile.samples'");
            if (!samples->is_array())
                throw ConfigError("'medium.profile.samples' must be an array of [z_nm, h] pairs");
            std::vector<double> zs, hs;
            for (const auto& pair : *samples) {
                if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number() ||
                    !pair[1].is_number())
                    throw ConfigError(
                        "'medium.profile.samples' entries must be [z_nm, h] number pairs");
                zs.push_back(pair[0].get<double>());
                hs.push_back(pair[1].get<double>());
            }
            profile = LongitudinalProfile::tabulated(std::move(zs), std::move(hs));
            if (!detail::find(*mediumBlock, "length_nm"))
                throw ConfigError("missing required key 'medium.length_nm' "
                                  "(no default for tabulated profiles)");
        } else {
            throw ConfigError("'medium.profile.type' must be one of constant, cosine, tabulated; "
                              "got '" + type + "'");
        }

        const double length =
            detail::optional_number(*mediumBlock, "medium", "length_nm", defaultLength);
        MediumSpec medium(wavelength, nTransverse, deltaN, std::move(profile), length);

        // A profile that stops short of the device is rejected here, before any
        // integration starts.
        if (!medium.profile().covers(0.0) || !medium.profile().covers(length)) {
            std::ostringstream msg;
            msg << "'medium.profile.samples' covers [" << medium.profile().coverageMin() << ", "
                << medium.profile().coverageMax() << "] nm but the device spans [0, " << length
                << "] nm";
            throw ConfigError(msg.str());
        }

        std::vector<GaussianStateSpec> states;
        const detail::Json* statesBlock = detail::find(doc, "states");
        if (statesBlock) {
            if (!statesBlock->is_array())
                throw ConfigError("'states' must be an array");
            std::size_t index = 0;
            for (const auto& entry : *statesBlock) {
                const std::string where = "states[" + std::to_string(index) + "]";
                detail::ensure_keys(entry, where, {"alpha_abs", "phi_rad", "noise0"});
                states.emplace_back(detail::require_number(entry, where, "alpha_abs"),
                                    detail::require_number(entry, where, "phi_rad"),
                                    detail::require_number(entry, where, "noise0"));
                ++index;
            }
        } else {
            // Default trio: coherent, stretched, and squeezed input at unit
            // amplitude and zero phase (noise and Gouy curves do not depend on
            // either choice).
            states.emplace_back(1.0, 0.0, 1.0);
            states.emplace_back(1.0, 0.0, 1.5);
            states.emplace_back(1.0, 0.0, 0.5);
        }

        RunSettings run;
        const detail::Json* runBlock = detail::find(doc, "run");
        if (runBlock) {
            detail::ensure_keys(*runBlock, "run",
                                {"z_samples", "rel_tol", "grid_points", "output_dir"});
            run.zSamples = detail::optional_count(*runBlock, "run", "z_samples", run.zSamples);
            run.relTol = detail::optional_number(*runBlock, "run", "rel_tol", run.relTol);
            run.gridPoints =
                detail::optional_count(*runBlock, "run", "grid_points", run.gridPoints);
            if (const detail::Json* dir = detail::find(*runBlock, "output_dir")) {
                if (!dir->is_string())
                    throw ConfigError("key 'run.output_dir' must be a string");
                run.outputDir = dir->get<std::string>();
            }
        }
        if (run.zSamples < 2)
            throw ConfigError("'run.z_samples' must be >= 2");
        if (!(run.relTol > 0.0) || !std::isfinite(run.relTol))
            throw ConfigError("'run.rel_tol' must be positive and finite");
        if (run.gridPoints < 16)
            throw ConfigError("'run.grid_points' must be >= 16");

        std::set<OutputKind> outputs;
        const detail::Json* outputsBlock = detail::find(doc, "outputs");
        if (outputsBlock) {
            if (!outputsBlock->is_array())
                throw ConfigError("'outputs' must be an array of output names");
            for (const auto& entry : *outputsBlock) {
                if (!entry.is_string())
                    throw ConfigError("'outputs' entries must be strings");
                const auto& names = detail::output_names();
                auto it = names.find(entry.get<std::string>());
                if (it == names.end())
                    throw ConfigError("unknown output kind '" + entry.get<std::string>() + "'");
                outputs.insert(it->second);
            }
        } else {
            for (const auto& item : detail::output_names())
                outputs.insert(item.second);
        }

        nlohmann::ordered_json resolved =
            resolvedJson(medium, *profileBlock, states, run, outputs);
        return CliConfig(std::move(medium), std::move(states), std::move(run),
                         std::move(outputs), std::move(resolved));
    }

    static nlohmann::ordered_json resolvedJson(const MediumSpec& medium,
                                               const detail::Json& profileBlock,
                                               const std::vector<GaussianStateSpec>& states,
                                               const RunSettings& run,
                                               const std::set<OutputKind>& outputs) {
        nlohmann::ordered_json doc;
        doc["medium"]["wavelength_nm"] = medium.wavelength();
        doc["medium"]["n_transverse"] = medium.effectiveTransverseIndex();
        doc["medium"]["delta_n"] = medium.indexContrast();
        doc["medium"]["profile"] = profileBlock;
        doc["medium"]["length_nm"] = medium.length();

        doc["states"] = nlohmann::ordered_json::array();
        for (const GaussianStateSpec& state : states)
            doc["states"].push_back({{"alpha_abs", state.amplitude},
                                     {"phi_rad", state.phase},
                                     {"noise0", state.inputNoise}});

        doc["run"]["z_samples"] = run.zSamples;
        doc["run"]["rel_tol"] = run.relTol;
        doc["run"]["grid_points"] = run.gridPoints;
        doc["run"]["output_dir"] = run.outputDir;

        doc["outputs"] = nlohmann::ordered_json::array();
        for (const auto& item : detail::output_names())
            if (outputs.count(item.second))
                doc["outputs"].push_back(item.first);
        return doc;
    }

    MediumSpec medium_;
    std::vector<GaussianStateSpec> states_;
    RunSettings run_;
    std::set<OutputKind> outputs_;
    nlohmann::ordered_json resolved_;
};

} // namespace liprop
