#include <cmath>
#include <sstream>
#include <string>

#include "doctest.h"

#include "d2dcache/config.hpp"
#include "d2dcache/errors.hpp"

using namespace d2dcache;

namespace {

ExperimentConfig parse(const std::string& text)
{
    std::istringstream in(text);
    return parse_config(in, "test.toml");
}

ConfigError parse_error(const std::string& text)
{
    try {
        parse(text);
    } catch (const ConfigError& e) {
        return e;
    }
    FAIL("expected ConfigError");
    return ConfigError("unreachable");
}

}  // namespace

TEST_CASE("basic keys and units")
{
    const ExperimentConfig cfg = parse(
        "experiment = \"fig4\"\n"
        "# comment line\n"
        "theta_db = 3  # trailing comment\n"
        "sigma_m = 12.5\n"
        "trials = 1_000\n"
        "b_values = [0.25, 0.75]\n"
        "caching_policy = \"uniform\"\n");
    CHECK(cfg.experiment == "fig4");
    CHECK(cfg.radio.theta == doctest::Approx(std::pow(10.0, 0.3)).epsilon(1e-15));
    CHECK(cfg.geometry.sigma_m == 12.5);
    CHECK(cfg.trials == 1000);
    REQUIRE(cfg.b_values.size() == 2);
    CHECK(cfg.b_values[1] == 0.75);
    CHECK(cfg.policy == CachingPolicy::Uniform);
    // Untouched keys keep the recipe default.
    CHECK(cfg.geometry.lambda_p_per_km2 == 50.0);
    CHECK(cfg.sweep_axis == "p");
}

TEST_CASE("theta_db of 0 is a linear threshold of 1")
{
    CHECK(parse("experiment = \"fig4\"\ntheta_db = 0\n").radio.theta == 1.0);
}

TEST_CASE("errors carry line and field")
{
    SUBCASE("missing experiment")
    {
        const ConfigError e = parse_error("sigma_m = 5\n");
        CHECK(e.field() == "experiment");
        CHECK(std::string(e.what()).find("experiment") != std::string::npos);
    }
    SUBCASE("unknown key")
    {
        const ConfigError e = parse_error("experiment = \"fig4\"\n\nsigmaa = 5\n");
        CHECK(e.line() == 3);
        CHECK(e.field() == "sigmaa");
    }
    SUBCASE("wrong type")
    {
        const ConfigError e = parse_error("experiment = \"fig4\"\nsigma_m = \"ten\"\n");
        CHECK(e.line() == 2);
        CHECK(e.field() == "sigma_m");
        CHECK(std::string(e.what()).find("test.toml:2") != std::string::npos);
    }
    SUBCASE("duplicate key")
    {
        const ConfigError e = parse_error("experiment = \"fig4\"\np = 0.1\np = 0.2\n");
        CHECK(e.line() == 3);
    }
    SUBCASE("tables are rejected")
    {
        CHECK(parse_error("[geometry]\n").line() == 1);
    }
    SUBCASE("unknown experiment")
    {
        CHECK(parse_error("experiment = \"fig7\"\n").field() == "experiment");
    }
    SUBCASE("out-of-range values")
    {
        parse_error("experiment = \"fig4\"\np = 1.5\n");
        parse_error("experiment = \"fig4\"\nbins = 5\n");
        parse_error("experiment = \"fig4\"\nthreads = 0\n");
    }
}

TEST_CASE("lenient parsing starts from the base defaults")
{
    std::istringstream in("zeta = 0.2\n");
    const ExperimentConfig cfg = parse_config_lenient(in);
    CHECK(cfg.experiment.empty());
    CHECK(cfg.zeta == 0.2);
    CHECK(cfg.geometry.n_bar == 20.0);
    CHECK(cfg.radio.bandwidth_hz == 20e6);
    CHECK(cfg.traffic().eta == doctest::Approx(5.0));
}

TEST_CASE("recipe lookup and defaults")
{
    CHECK(parse_recipe("Fig9_DelayCompare") == FigureRecipe::Fig9_DelayCompare);
    CHECK(parse_recipe("FIG9") == FigureRecipe::Fig9_DelayCompare);
    CHECK(parse_recipe("9") == FigureRecipe::Fig9_DelayCompare);
    CHECK_THROWS_AS(parse_recipe("fig2"), ConfigError);
    CHECK(all_recipes().size() == 8);
    for (FigureRecipe r : all_recipes()) {
        CHECK(parse_recipe(recipe_short_name(r)) == r);
        CHECK_NOTHROW(recipe_defaults(r).validate());
    }
    const ExperimentConfig f9 = recipe_defaults(FigureRecipe::Fig9_DelayCompare);
    CHECK(f9.geometry.lambda_p_per_km2 == 10.0);
    CHECK(f9.traffic().eta == 5.0);
    const ExperimentConfig f11 = recipe_defaults(FigureRecipe::Fig11_DelayVsP);
    CHECK(f11.radio.theta == doctest::Approx(std::sqrt(10.0)).epsilon(1e-14));
}

TEST_CASE("overrides")
{
    ExperimentConfig cfg = recipe_defaults(FigureRecipe::Fig4_CoverageVsP);
    apply_override(cfg, "sigma_m=7");
    apply_override(cfg, "caching_policy=zipf_proportional");
    apply_override(cfg, "sweep_values=[0.2,0.4]");
    CHECK(cfg.geometry.sigma_m == 7.0);
    CHECK(cfg.policy == CachingPolicy::ZipfProportional);
    CHECK(cfg.sweep_values.size() == 2);
    CHECK_THROWS_AS(apply_override(cfg, "sigma_m"), ConfigError);
    CHECK_THROWS_AS(apply_override(cfg, "sigma_m=-1"), ConfigError);
    CHECK_THROWS_AS(apply_override(cfg, "nope=1"), ConfigError);
}

TEST_CASE("describe lists resolved values")
{
    const auto d = describe(recipe_defaults(FigureRecipe::Fig11_DelayVsP));
    CHECK(d.at("experiment") == "Fig11_DelayVsP");
    CHECK(d.count("theta_linear") == 1);
    CHECK(d.count("seed") == 1);
    for (const ConfigKey& k : config_keys()) {
        CHECK(std::string(k.description).size() > 0);
    }
}
