#include <liprop/config.hpp>
#include <liprop/errors.hpp>
#include <liprop/io.hpp>
#include <liprop/scenarios.hpp>
#include <liprop/verify.hpp>

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <numbers>
#include <string>
#include <vector>

namespace {

std::string output_dir(const liprop::CliConfig& config, const std::string& overrideDir) {
    return overrideDir.empty() ? config.run().outputDir : overrideDir;
}

int run_classical(const std::string& configPath, const std::string& overrideDir) {
    const liprop::CliConfig config = liprop::CliConfig::load(configPath);
    const std::string dir = output_dir(config, overrideDir);
    std::filesystem::create_directories(dir);

    const liprop::ClassicalSolution sol =
        liprop::solve_fundamental(config.medium(), config.run().relTol, config.run().gridPoints);

    std::vector<std::string> files{"classical.csv"};
    liprop::write_classical_csv(dir + "/classical.csv", sol, config.run().zSamples);

    liprop::write_manifest(dir + "/manifest.json",
                           liprop::build_manifest("classical", config.resolved(), sol.relTol(),
                                                  sol.absTol(), liprop::diagnostics(sol), files));
    std::cout << "wrote " << files.size() << " file(s) + manifest to " << dir << '\n';
    return 0;
}

int run_quantum(const std::string& configPath, const std::string& overrideDir) {
    const liprop::CliConfig config = liprop::CliConfig::load(configPath);
    if (config.states().empty())
        throw liprop::ConfigError("'states' must contain at least one state for quantum output");
    const std::string dir = output_dir(config, overrideDir);
    std::filesystem::create_directories(dir);

    const liprop::MediumSpec& medium = config.medium();
    const liprop::ExperimentConfig experiment{medium,
                                              config.states(),
                                              config.run().zSamples,
                                              config.outputs(),
                                              config.run().relTol,
                                              config.run().gridPoints};
    liprop::ExperimentResult result;
    if (medium.profile().kind() == liprop::LongitudinalProfile::Kind::cosine)
        result = liprop::run_cosine_experiment(experiment);
    else if (medium.indexContrast() == 0.0 ||
             medium.profile().kind() == liprop::LongitudinalProfile::Kind::constant)
        result = liprop::run_homogeneous_baseline(experiment);
    else
        result = liprop::run_experiment(experiment);

    std::vector<std::string> files;
    if (!result.noise.empty()) {
        for (std::size_t si = 0; si < result.noise.size(); ++si) {
            const std::string name = "state" + std::to_string(si) + "_curves.csv";
            liprop::write_state_curves_csv(dir + "/" + name, result.z, result.theta,
                                           result.noise[si], result.gouy[si]);
            files.push_back(name);
        }
    }
    for (const liprop::WavefunctionSnapshot& snap : result.snapshots) {
        const long quarter = std::lround(snap.theta / (0.5 * std::numbers::pi));
        const std::string name = "state" + std::to_string(snap.stateIndex) + "_snapshot_q" +
                                 std::to_string(quarter) + ".csv";
        liprop::write_wavefunction_csv(dir + "/" + name, snap.grid, snap.values);
        files.push_back(name);
    }

    liprop::write_manifest(dir + "/manifest.json",
                           liprop::build_manifest("quantum", config.resolved(), result.relTol,
                                                  result.absTol, result.residuals, files));
    std::cout << "wrote " << files.size() << " file(s) + manifest to " << dir << '\n';
    return 0;
}

int run_verify(const std::string& configPath, const std::string& level) {
    const liprop::CliConfig config = liprop::CliConfig::load(configPath);
    const liprop::VerifyLevel verifyLevel =
        (level == "full") ? liprop::VerifyLevel::full : liprop::VerifyLevel::fast;
    const std::vector<liprop::VerifyCheck> checks = liprop::verify_config(config, verifyLevel);

    std::printf("%-24s %-6s %-12s %-12s %s\n", "check", "status", "residual", "threshold",
                "detail");
    bool allPass = true;
    for (const liprop::VerifyCheck& check : checks) {
        std::printf("%-24s %-6s %-12.3e %-12.3e %s\n", check.name.c_str(),
                    check.pass ? "PASS" : "FAIL", check.residual, check.threshold,
                    check.detail.c_str());
        allPass = allPass && check.pass;
    }
    if (!allPass) {
        std::cerr << "verification failed:\n";
        for (const liprop::VerifyCheck& check : checks)
            if (!check.pass)
                std::cerr << "  " << check.name << ": residual " << check.residual
                          << " exceeds threshold " << check.threshold << '\n';
        return 1;
    }
    std::cout << "all " << checks.size() << " checks passed (" << level << " level)\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"light propagation in separable longitudinally structured waveguides"};
    app.require_subcommand(1);

    std::string configPath;
    std::string outDir;
    std::string level = "fast";

    CLI::App* classical = app.add_subcommand(
        "classical", "integrate the fundamental mode pair and emit the classical table");
    classical->add_option("--config", configPath, "JSON configuration file")->required();
    classical->add_option("--out", outDir, "output directory (overrides run.output_dir)");

    CLI::App* quantum = app.add_subcommand(
        "quantum", "evolve the configured Gaussian states and emit noise and phase curves");
    quantum->add_option("--config", configPath, "JSON configuration file")->required();
    quantum->add_option("--out", outDir, "output directory (overrides run.output_dir)");

    CLI::App* verify =
        app.add_subcommand("verify", "run the invariant checks and print a pass/fail table");
    verify->add_option("--config", configPath, "JSON configuration file")->required();
    verify->add_option("--level", level, "fast (default) or full")
        ->check(CLI::IsMember({"fast", "full"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2; // bad flags are configuration errors
    }

    try {
        if (classical->parsed())
            return run_classical(configPath, outDir);
        if (quantum->parsed())
            return run_quantum(configPath, outDir);
        return run_verify(configPath, level);
    } catch (const liprop::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const liprop::IntegrationError& e) {
        std::cerr << "integration error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
}
