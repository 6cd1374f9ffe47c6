#include <catch2/catch_amalgamated.hpp>

#include <liprop/classical.hpp>
#include <liprop/scenarios.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

using namespace liprop;

namespace {

constexpr double pi = std::numbers::pi;

MediumSpec cosine_device() {
    const double wavelength = 653.0;
    const double k0 = 2.0 * std::numbers::pi / wavelength;
    return MediumSpec(wavelength, 1.515, 0.5, LongitudinalProfile::cosine(k0 / 50.0),
                      50.0 * wavelength);
}

// Homogeneous device spanning exactly one classical-phase turn, so the
// quarter-turn planes z = m pi/(2 beta_t) land on every 401-sample grid.
MediumSpec one_turn_uniform() {
    const double wavelength = 653.0;
    const double betaT = 2.0 * std::numbers::pi / wavelength * 1.515;
    return MediumSpec(wavelength, 1.515, 0.0, LongitudinalProfile::constant(),
                      2.0 * std::numbers::pi / betaT);
}

std::vector<GaussianStateSpec> default_trio() {
    return {GaussianStateSpec(1.0, 0.0, 1.0), GaussianStateSpec(1.0, 0.0, 1.5),
            GaussianStateSpec(1.0, 0.0, 0.5)};
}

} // namespace

TEST_CASE("experiment drivers validate their preconditions", "[scenarios]") {
    ExperimentConfig config{cosine_device(), default_trio()};

    SECTION("sample count") {
        config.zSamples = 1;
        CHECK_THROWS_AS(run_experiment(config), DomainError);
    }
    SECTION("quantum outputs need at least one state") {
        config.states.clear();
        CHECK_THROWS_AS(run_experiment(config), DomainError);
        // Classical-only outputs are fine without states.
        config.outputs = {OutputKind::effectiveIndex, OutputKind::classicalPhase};
        CHECK_NOTHROW(run_experiment(config));
    }
    SECTION("cosine runner insists on a cosine profile") {
        const ExperimentConfig uniform{one_turn_uniform(), default_trio()};
        CHECK_THROWS_AS(run_cosine_experiment(uniform), DomainError);
        CHECK_NOTHROW(run_cosine_experiment(config));
    }
    SECTION("baseline runner insists on a homogeneous device") {
        CHECK_THROWS_AS(run_homogeneous_baseline(config), DomainError);
        const ExperimentConfig uniform{one_turn_uniform(), default_trio()};
        CHECK_NOTHROW(run_homogeneous_baseline(uniform));
        // Zero contrast makes any profile homogeneous.
        const MediumSpec flatCos(653.0, 1.515, 0.0,
                                 LongitudinalProfile::cosine(2.0 * pi / 653.0 / 50.0),
                                 32650.0);
        CHECK_NOTHROW(run_homogeneous_baseline(ExperimentConfig{flatCos, default_trio()}));
    }
}

TEST_CASE("cosine experiment reproduces the device curves", "[scenarios]") {
    ExperimentConfig config{cosine_device(), default_trio()};
    const ExperimentResult result = run_cosine_experiment(config);

    REQUIRE(result.z.size() == config.zSamples);
    CHECK(result.z.front() == 0.0);
    CHECK(result.z.back() == Catch::Approx(config.medium.length()).margin(1e-9));

    SECTION("effective index matches the medium curve") {
        const auto curve = effective_index_curve(config.medium, config.zSamples);
        for (std::size_t i = 0; i < curve.size(); ++i) {
            CHECK(result.z[i] == Catch::Approx(curve[i].first).margin(1e-9));
            CHECK(result.effectiveIndex[i] == Catch::Approx(curve[i].second).margin(1e-14));
        }
    }
    SECTION("phase curve is strictly increasing and solver-consistent") {
        const ClassicalSolution sol =
            solve_fundamental(config.medium, config.relTol, config.gridPoints);
        for (std::size_t i = 1; i < result.theta.size(); ++i)
            REQUIRE(result.theta[i] > result.theta[i - 1]);
        for (std::size_t i = 0; i < result.theta.size(); i += 40)
            CHECK(result.theta[i] == Catch::Approx(theta_at(sol, result.z[i])).margin(1e-10));
    }
    SECTION("noise curves are the closed forms on the phase grid") {
        REQUIRE(result.noise.size() == 3);
        for (std::size_t si = 0; si < 3; ++si)
            for (std::size_t i = 0; i < result.z.size(); i += 25)
                CHECK(result.noise[si][i] ==
                      Catch::Approx(evolve_noise(config.states[si], result.theta[i]))
                          .margin(1e-12));
        // Coherent state: flat unit noise.
        for (double value : result.noise[0])
            CHECK(value == Catch::Approx(1.0).margin(1e-12));
        // Squeezed states stay inside their swap bounds.
        for (double value : result.noise[1]) {
            CHECK(value > 2.0 / 3.0 - 1e-12);
            CHECK(value < 1.5 + 1e-12);
        }
        for (double value : result.noise[2]) {
            CHECK(value > 0.5 - 1e-12);
            CHECK(value < 2.0 + 1e-12);
        }
    }
    SECTION("residual summary is propagated") {
        CHECK(result.residuals.wronskianResidual < 1e-8);
        CHECK(result.relTol == config.relTol);
        CHECK(result.absTol > 0.0);
    }
}

TEST_CASE("phase curves of all states meet at the squeezing planes", "[scenarios]") {
    ExperimentConfig config{cosine_device(), default_trio()};
    config.zSamples = 16001;
    config.outputs = {OutputKind::noise, OutputKind::gouy, OutputKind::classicalPhase};
    const ExperimentResult result = run_cosine_experiment(config);

    // Locate each quarter-turn crossing of theta and compare the linearly
    // interpolated Gouy curves there; all three states must agree on mpi/2.
    int planes = 0;
    for (std::size_t i = 1; i < result.theta.size() && planes < 12; ++i) {
        const int m = static_cast<int>(std::floor(result.theta[i] / (pi / 2.0)));
        const double plane = m * pi / 2.0;
        if (result.theta[i - 1] < plane && result.theta[i] >= plane) {
            const double w =
                (plane - result.theta[i - 1]) / (result.theta[i] - result.theta[i - 1]);
            for (std::size_t si = 0; si < 3; ++si) {
                const double interp =
                    (1.0 - w) * result.gouy[si][i - 1] + w * result.gouy[si][i];
                CHECK(interp == Catch::Approx(plane).margin(2e-3));
            }
            ++planes;
        }
    }
    CHECK(planes == 12);
}

TEST_CASE("homogeneous baseline has a linear phase and exact planes", "[scenarios]") {
    const MediumSpec medium = one_turn_uniform();
    ExperimentConfig config{medium, {GaussianStateSpec(1.0, 0.0, 0.5)}};
    const ExperimentResult result = run_homogeneous_baseline(config);
    const double betaT = medium.betaT();

    for (std::size_t i = 0; i < result.z.size(); i += 20)
        CHECK(result.theta[i] == Catch::Approx(betaT * result.z[i]).margin(1e-9));

    // 401 samples over one full turn: node 100m sits at theta = m pi/2, where
    // the noise alternates between the swap pair {1/2, 2} exactly.
    for (int m = 0; m <= 4; ++m) {
        const double value = result.noise[0][static_cast<std::size_t>(100 * m)];
        CHECK(value == Catch::Approx(m % 2 == 0 ? 0.5 : 2.0).margin(1e-9));
        const double gouy = result.gouy[0][static_cast<std::size_t>(100 * m)];
        CHECK(gouy == Catch::Approx(m * pi / 2.0).margin(1e-9));
    }
}

TEST_CASE("cosine and homogeneous extrema planes differ at equal length", "[scenarios]") {
    const MediumSpec cosine = cosine_device();
    const MediumSpec uniform(653.0, 1.515, 0.0, LongitudinalProfile::constant(),
                             cosine.length());
    const ClassicalSolution a = solve_fundamental(cosine, 1e-10, 2000);
    const ClassicalSolution b = solve_fundamental(uniform, 1e-10, 2000);
    // First plane theta = pi/2: invert both phase curves by bisection on the
    // dense grids and compare the plane positions.
    auto invert = [](const ClassicalSolution& sol, double target) {
        double lo = 0.0, hi = sol.medium().length();
        while (hi - lo > 1e-6) {
            const double mid = 0.5 * (lo + hi);
            (theta_at(sol, mid) < target ? lo : hi) = mid;
        }
        return 0.5 * (lo + hi);
    };
    const double zCos = invert(a, pi / 2.0);
    const double zUni = invert(b, pi / 2.0);
    CHECK(std::abs(zCos - zUni) > 1.0);
    CHECK(zUni == Catch::Approx(pi / (2.0 * uniform.betaT())).margin(1e-3));
}

TEST_CASE("experiment results are deterministic and grid-stable", "[scenarios]") {
    ExperimentConfig config{cosine_device(), default_trio()};
    config.outputs = {OutputKind::classicalPhase, OutputKind::noise, OutputKind::gouy};

    SECTION("identical configs give identical results") {
        const ExperimentResult a = run_experiment(config);
        const ExperimentResult b = run_experiment(config);
        CHECK(a.z == b.z);
        CHECK(a.theta == b.theta);
        CHECK(a.noise == b.noise);
        CHECK(a.gouy == b.gouy);
    }
    SECTION("doubling the output sampling keeps shared planes") {
        const ExperimentResult coarse = run_experiment(config);
        ExperimentConfig dense = config;
        dense.zSamples = 2 * config.zSamples - 1;
        const ExperimentResult fine = run_experiment(dense);
        for (std::size_t i = 0; i < coarse.z.size(); i += 10) {
            CHECK(fine.z[2 * i] == Catch::Approx(coarse.z[i]).margin(1e-9));
            CHECK(fine.theta[2 * i] == Catch::Approx(coarse.theta[i]).margin(1e-9));
            CHECK(fine.noise[1][2 * i] == Catch::Approx(coarse.noise[1][i]).margin(1e-9));
            CHECK(fine.gouy[2][2 * i] == Catch::Approx(coarse.gouy[2][i]).margin(1e-9));
        }
    }
}

TEST_CASE("snapshots are taken at the quarter-turn planes", "[scenarios]") {
    SECTION("long device provides all four planes per state") {
        ExperimentConfig config{cosine_device(),
                                {GaussianStateSpec(1.0, 0.0, 1.0),
                                 GaussianStateSpec(1.0, 0.0, 1.5)}};
        config.outputs = {OutputKind::wavefunctionSnapshots};
        const ExperimentResult result = run_experiment(config);
        REQUIRE(result.snapshots.size() == 8);
        for (std::size_t si = 0; si < 2; ++si) {
            double prevZ = 0.0;
            for (int m = 1; m <= 4; ++m) {
                const WavefunctionSnapshot& snap = result.snapshots[4 * si + (m - 1)];
                CHECK(snap.stateIndex == si);
                CHECK(snap.theta == Catch::Approx(m * pi / 2.0).margin(1e-6));
                CHECK(snap.z > prevZ);
                CHECK(snap.z < config.medium.length());
                prevZ = snap.z;
                CHECK(norm_squared(SampledWavefunction{snap.grid, snap.values}) ==
                      Catch::Approx(1.0).margin(1e-8));
            }
        }
    }
    SECTION("short device stops at the reachable planes") {
        const double wavelength = 653.0;
        const double betaT = 2.0 * pi / wavelength * 1.515;
        const MediumSpec shortDevice(wavelength, 1.515, 0.0, LongitudinalProfile::constant(),
                                     1.2 * pi / betaT);
        ExperimentConfig config{shortDevice, {GaussianStateSpec(1.0, 0.0, 0.5)}};
        config.outputs = {OutputKind::wavefunctionSnapshots};
        const ExperimentResult result = run_homogeneous_baseline(config);
        // theta(L) = 1.2 pi, so only the pi/2 and pi planes exist; the half-turn
        // snapshot exercises the closed form at the kernel's caustic plane.
        REQUIRE(result.snapshots.size() == 2);
        CHECK(result.snapshots[0].theta == Catch::Approx(pi / 2.0).margin(1e-6));
        CHECK(result.snapshots[1].theta == Catch::Approx(pi).margin(1e-6));
        CHECK(norm_squared(SampledWavefunction{result.snapshots[1].grid,
                                               result.snapshots[1].values}) ==
              Catch::Approx(1.0).margin(1e-8));
    }
}

TEST_CASE("noise sweep covers the factorial table", "[scenarios]") {
    SECTION("input validation") {
        CHECK_THROWS_AS(sweep_noise(one_turn_uniform(), {1.0}, 1), DomainError);
        CHECK_THROWS_AS(sweep_noise(one_turn_uniform(), {0.0}, 5), DomainError);
        CHECK_THROWS_AS(sweep_noise(one_turn_uniform(), {-2.0}, 5), DomainError);
    }
    SECTION("unit input noise gives the flat coherent line") {
        for (const NoiseSweepRow& row : sweep_noise(one_turn_uniform(), {1.0}, 9)) {
            CHECK(row.inputNoise == 1.0);
            CHECK(row.noise == Catch::Approx(1.0).margin(1e-12));
        }
    }
    SECTION("reciprocal pair swaps exactly at the quarter-turn planes") {
        const double x = 1.7;
        const std::vector<NoiseSweepRow> rows =
            sweep_noise(one_turn_uniform(), {x, 1.0 / x}, 5);
        REQUIRE(rows.size() == 10);
        // 5 samples over one turn place plane m at row index m.
        for (int m = 0; m <= 4; ++m) {
            const double first = rows[static_cast<std::size_t>(m)].noise;
            const double second = rows[static_cast<std::size_t>(5 + m)].noise;
            const double lowPlane = (m % 2 == 0) ? x : 1.0 / x;
            CHECK(first == Catch::Approx(lowPlane).margin(1e-9));
            CHECK(second == Catch::Approx(1.0 / lowPlane).margin(1e-9));
        }
    }
}

TEST_CASE("noise sweep reproduces the frozen table", "[scenarios]") {
    std::ifstream table(std::string(LIPROP_TEST_DATA_DIR) + "/sweep_golden.csv");
    REQUIRE(table.is_open());
    std::string line;
    REQUIRE(std::getline(table, line));
    REQUIRE(line == "noise0,z_nm,noise,gouy_rad");

    struct Row {
        double noise0, z, noise, gouy;
    };
    std::vector<Row> expected;
    std::vector<double> noiseValues;
    while (std::getline(table, line)) {
        Row row{};
        REQUIRE(std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf", &row.noise0, &row.z, &row.noise,
                            &row.gouy) == 4);
        if (noiseValues.empty() || noiseValues.back() != row.noise0)
            noiseValues.push_back(row.noise0);
        expected.push_back(row);
    }
    REQUIRE(noiseValues.size() == 101);
    REQUIRE(expected.size() == 505);

    const std::vector<NoiseSweepRow> rows = sweep_noise(cosine_device(), noiseValues, 5);
    REQUIRE(rows.size() == expected.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(rows[i].inputNoise == expected[i].noise0);
        CHECK(rows[i].z == Catch::Approx(expected[i].z).margin(1e-6));
        CHECK(rows[i].noise == Catch::Approx(expected[i].noise).margin(1e-5));
        CHECK(rows[i].gouy == Catch::Approx(expected[i].gouy).margin(1e-5));
    }
}
