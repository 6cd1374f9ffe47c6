#include <catch2/catch_amalgamated.hpp>

#include <liprop/config.hpp>

#include <string>

using namespace liprop;

namespace {

const std::string minimalCosine = R"({
  "medium": {
    "wavelength_nm": 653.0,
    "n_transverse": 1.515,
    "delta_n": 0.5,
    "profile": { "type": "cosine", "lambda_per_k0": 50.0 }
  }
})";

} // namespace

TEST_CASE("minimal config fills every default", "[config]") {
    const CliConfig config = CliConfig::parse(minimalCosine);

    CHECK(config.medium().wavelength() == 653.0);
    CHECK(config.medium().effectiveTransverseIndex() == 1.515);
    CHECK(config.medium().indexContrast() == 0.5);
    // Cosine profiles default the device length to one modulation period.
    CHECK(config.medium().length() == Catch::Approx(50.0 * 653.0).epsilon(1e-9));

    REQUIRE(config.states().size() == 3);
    CHECK(config.states()[0].inputNoise == 1.0);
    CHECK(config.states()[1].inputNoise == 1.5);
    CHECK(config.states()[2].inputNoise == 0.5);

    CHECK(config.run().zSamples == 401);
    CHECK(config.run().relTol == 1e-10);
    CHECK(config.run().gridPoints == 2000);
    CHECK(config.run().outputDir == "out");
    CHECK(config.outputs().size() == 5);
}

TEST_CASE("unknown keys are rejected with their full path", "[config]") {
    CHECK_THROWS_WITH(CliConfig::parse(R"({"medium": {}, "bogus": 1})"),
                      Catch::Matchers::ContainsSubstring("config.bogus"));
    CHECK_THROWS_WITH(
        CliConfig::parse(R"({
          "medium": {
            "wavelength_nm": 653, "n_transverse": 1.5, "delta_n": 0.5, "typo": 0,
            "profile": { "type": "cosine", "lambda_per_k0": 50 }
          }
        })"),
        Catch::Matchers::ContainsSubstring("medium.typo"));
    CHECK_THROWS_WITH(
        CliConfig::parse(R"({
          "medium": {
            "wavelength_nm": 653, "n_transverse": 1.5, "delta_n": 0.5,
            "profile": { "type": "cosine", "lambda_per_k0": 50, "phase": 0 }
          }
        })"),
        Catch::Matchers::ContainsSubstring("medium.profile.phase"));
    CHECK_THROWS_WITH(
        CliConfig::parse(R"({
          "medium": {
            "wavelength_nm": 653, "n_transverse": 1.5, "delta_n": 0.5,
            "profile": { "type": "cosine", "lambda_per_k0": 50 }
          },
          "run": { "reltol": 1e-8 }
        })"),
        Catch::Matchers::ContainsSubstring("run.reltol"));
    CHECK_THROWS_WITH(
        CliConfig::parse(R"({
          "medium": {
            "wavelength_nm": 653, "n_transverse": 1.5, "delta_n": 0.5,
            "profile": { "type": "cosine", "lambda_per_k0": 50 }
          },
          "states": [ { "alpha_abs": 1, "phi_rad": 0, "noise0": 1, "extra": 2 } ]
        })"),
        Catch::Matchers::ContainsSubstring("states[0].extra"));
}

TEST_CASE("missing and mistyped values are reported by key", "[config]") {
    CHECK_THROWS_WITH(CliConfig::parse(R"({})"),
                      Catch::Matchers::ContainsSubstring("config.medium"));
    CHECK_THROWS_WITH(
        CliConfig::parse(R"({
          "medium": {
            "n_transverse": 1.5, "delta_n": 0.5,
            "profile": { "type": "cosine", "lambda_per_k0": 50 }
          }
        })"),
        Catch::Matchers::ContainsSubstring("medium.wavelength_nm"));
    CHECK_THROWS_WITH(
        CliConfig::parse(R"({
          "medium": {
            "wavelength_nm": "653", "n_transverse": 1.5, "delta_n": 0.5,
            "profile": { "type": "cosine", "lambda_per_k0": 50 }
          }
        })"),
        Catch::Matchers::ContainsSubstring("must be a number"));
    CHECK_THROWS_WITH(
        CliConfig::parse(R"({
          "medium": {
            "wavelength_nm": -653, "n_transverse": 1.5, "delta_n": 0.5,
            "profile": { "type": "cosine", "lambda_per_k0": 50 }
          }
        })"),
        Catch::Matchers::ContainsSubstring("must be positive"));
    CHECK_THROWS_AS(CliConfig::parse("{ not json"), ConfigError);
    CHECK_THROWS_WITH(CliConfig::parse("{ not json"),
                      Catch::Matchers::ContainsSubstring("not valid JSON"));
}

TEST_CASE("profile variants require their own keys", "[config]") {
    SECTION("constant needs an explicit length and no extras") {
        CHECK_THROWS_WITH(
            CliConfig::parse(R"({
              "medium": {
                "wavelength_nm": 653, "n_transverse": 1.5, "delta_n": 0.0,
                "profile": { "type": "constant" }
              }
            })"),
            Catch::Matchers::ContainsSubstring("medium.length_nm"));
        CHECK_THROWS_AS(
            CliConfig::parse(R"({
              "medium": {
                "wavelength_nm": 653, "n_transverse": 1.5, "delta_n": 0.0,
                "profile": { "type": "constant", "lambda_per_k0": 50 },
                "length_nm": 1000
              }
            })"),
            ConfigError);
        CHECK_NOTHROW(CliConfig::parse(R"({
          "medium": {
            "wavelength_nm": 653, "n_transverse": 1.5, "delta_n": 0.0,
            "profile": { "type": "constant" },
            "length_nm": 1000
          }
        })"));
    }
    SECTION("cosine rejects tabulated keys and non-positive frequencies") {
        CHECK_THROWS_WITH(
            CliConfig::parse(R"({
              "medium": {
                "wavelength_nm": 653, "n_transverse": 1.5, "delta_n": 0.5,
                "profile": { "type": "cosine", "lambda_per_k0": 50, "samples": [] }
              }
            })"),
            Catch::Matchers::ContainsSubstring("only valid for tabulated"));
        CHECK_THROWS_WITH(
            CliConfig::parse(R"({
              "medium": {
                "wavelength_nm": 653, "n_transverse": 1.5, "delta_n": 0.5,
                "profile": { "type": "cosine", "lambda_per_k0": -50 }
              }
            })"),
            Catch::Matchers::ContainsSubstring("lambda_per_k0"));
    }
    SECTION("tabulated needs samples, length, and coverage") {
        CHECK_THROWS_WITH(
            CliConfig::parse(R"({
              "medium": {
                "wavelength_nm": 653, "n_transverse": 1.5, "delta_n": 0.5,
                "profile": { "type": "tabulated" },
                "length_nm": 1000
              }
            })"),
            Catch::Matchers::ContainsSubstring("medium.profile.samples"));
        CHECK_THROWS_WITH(
            CliConfig::parse(R"({
              "medium": {
                "wavelength_nm": 653, "n_transverse": 1.5, "delta_n": 0.5,
                "profile": { "type": "tabulated",
                             "samples": [[0, 1], [100, 0.9], "oops", [300, 0.7]] },
                "length_nm": 300
              }
            })"),
            Catch::Matchers::ContainsSubstring("number pairs"));
        // Samples that stop short of the device length.
        CHECK_THROWS_WITH(
            CliConfig::parse(R"({
              "medium": {
                "wavelength_nm": 653, "n_transverse": 1.5, "delta_n": 0.5,
                "profile": { "type": "tabulated",
                             "samples": [[0, 1], [100, 0.9], [200, 0.8], [300, 0.7]] },
                "length_nm": 1000
              }
            })"),
            Catch::Matchers::ContainsSubstring("covers [0, 300] nm but the device spans"));
    }
    SECTION("unknown profile type") {
        CHECK_THROWS_WITH(
            CliConfig::parse(R"({
              "medium": {
                "wavelength_nm": 653, "n_transverse": 1.5, "delta_n": 0.5,
                "profile": { "type": "parabolic" }
              }
            })"),
            Catch::Matchers::ContainsSubstring("constant, cosine, tabulated"));
    }
}

TEST_CASE("state entries map onto Gaussian specs", "[config]") {
    const CliConfig config = CliConfig::parse(R"({
      "medium": {
        "wavelength_nm": 653, "n_transverse": 1.515, "delta_n": 0.5,
        "profile": { "type": "cosine", "lambda_per_k0": 50 }
      },
      "states": [ { "alpha_abs": 2.0, "phi_rad": 0.7, "noise0": 1.5 } ]
    })");
    REQUIRE(config.states().size() == 1);
    CHECK(config.states()[0].amplitude == 2.0);
    CHECK(config.states()[0].phase == 0.7);
    CHECK(config.states()[0].inputNoise == 1.5);

    // Physically invalid states surface as config errors, not crashes.
    CHECK_THROWS_AS(CliConfig::parse(R"({
      "medium": {
        "wavelength_nm": 653, "n_transverse": 1.515, "delta_n": 0.5,
        "profile": { "type": "cosine", "lambda_per_k0": 50 }
      },
      "states": [ { "alpha_abs": 1.0, "phi_rad": 0.0, "noise0": -1.0 } ]
    })"),
                    ConfigError);
}

TEST_CASE("run block bounds are enforced", "[config]") {
    auto withRun = [](const std::string& runBody) {
        return std::string(R"({
          "medium": {
            "wavelength_nm": 653, "n_transverse": 1.515, "delta_n": 0.5,
            "profile": { "type": "cosine", "lambda_per_k0": 50 }
          },
          "run": )") +
               runBody + "}";
    };
    CHECK_THROWS_WITH(CliConfig::parse(withRun(R"({ "z_samples": 1 })")),
                      Catch::Matchers::ContainsSubstring("z_samples"));
    CHECK_THROWS_WITH(CliConfig::parse(withRun(R"({ "rel_tol": 0.0 })")),
                      Catch::Matchers::ContainsSubstring("rel_tol"));
    CHECK_THROWS_WITH(CliConfig::parse(withRun(R"({ "rel_tol": -1e-9 })")),
                      Catch::Matchers::ContainsSubstring("rel_tol"));
    CHECK_THROWS_WITH(CliConfig::parse(withRun(R"({ "grid_points": 8 })")),
                      Catch::Matchers::ContainsSubstring("grid_points"));
    CHECK_THROWS_WITH(CliConfig::parse(withRun(R"({ "z_samples": -5 })")),
                      Catch::Matchers::ContainsSubstring("non-negative integer"));
    CHECK_THROWS_WITH(CliConfig::parse(withRun(R"({ "output_dir": 42 })")),
                      Catch::Matchers::ContainsSubstring("output_dir"));

    const CliConfig config =
        CliConfig::parse(withRun(R"({ "z_samples": 51, "rel_tol": 1e-8,
                                      "grid_points": 500, "output_dir": "results" })"));
    CHECK(config.run().zSamples == 51);
    CHECK(config.run().relTol == 1e-8);
    CHECK(config.run().gridPoints == 500);
    CHECK(config.run().outputDir == "results");
}

TEST_CASE("output selection accepts only the documented names", "[config]") {
    auto withOutputs = [](const std::string& outputs) {
        return std::string(R"({
          "medium": {
            "wavelength_nm": 653, "n_transverse": 1.515, "delta_n": 0.5,
            "profile": { "type": "cosine", "lambda_per_k0": 50 }
          },
          "outputs": )") +
               outputs + "}";
    };
    const CliConfig config = CliConfig::parse(withOutputs(R"(["noise", "gouy"])"));
    CHECK(config.outputs().size() == 2);
    CHECK(config.outputs().count(OutputKind::noise) == 1);
    CHECK(config.outputs().count(OutputKind::gouy) == 1);
    CHECK(config.outputs().count(OutputKind::effectiveIndex) == 0);

    CHECK_THROWS_WITH(CliConfig::parse(withOutputs(R"(["spectrum"])")),
                      Catch::Matchers::ContainsSubstring("unknown output kind 'spectrum'"));
    CHECK_THROWS_AS(CliConfig::parse(withOutputs(R"("noise")")), ConfigError);
    CHECK_THROWS_AS(CliConfig::parse(withOutputs(R"([42])")), ConfigError);
}

TEST_CASE("resolved config records every post-default value", "[config]") {
    const CliConfig config = CliConfig::parse(minimalCosine);
    const auto& resolved = config.resolved();

    CHECK(resolved.at("medium").at("length_nm").get<double>() ==
          Catch::Approx(50.0 * 653.0).epsilon(1e-12));
    CHECK(resolved.at("medium").at("profile").at("type").get<std::string>() == "cosine");
    CHECK(resolved.at("states").size() == 3);
    CHECK(resolved.at("run").at("z_samples").get<std::size_t>() == 401);
    CHECK(resolved.at("run").at("rel_tol").get<double>() == 1e-10);
    CHECK(resolved.at("run").at("output_dir").get<std::string>() == "out");
    CHECK(resolved.at("outputs").size() == 5);

    // Tabulated sample tables survive into the resolved document verbatim.
    const CliConfig tabbed = CliConfig::parse(R"({
      "medium": {
        "wavelength_nm": 653, "n_transverse": 1.5, "delta_n": 0.5,
        "profile": { "type": "tabulated",
                     "samples": [[0, 1], [400, 0.9], [800, 0.8], [1200, 0.7]] },
        "length_nm": 1200
      }
    })");
    CHECK(tabbed.resolved().at("medium").at("profile").at("samples").size() == 4);
}

TEST_CASE("config files load from disk with readable failures", "[config]") {
    CHECK_THROWS_WITH(CliConfig::load("/nonexistent/liprop.json"),
                      Catch::Matchers::ContainsSubstring("cannot read config file"));
}
