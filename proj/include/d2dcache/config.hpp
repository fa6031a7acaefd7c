#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "d2dcache/caching.hpp"
#include "d2dcache/coverage.hpp"
#include "d2dcache/geometry.hpp"
#include "d2dcache/optimizer.hpp"
#include "d2dcache/quadrature.hpp"

namespace d2dcache {

enum class FigureRecipe {
    Fig3_NearestPdf,
    Fig4_CoverageVsP,
    Fig5_OptBandwidth,
    Fig6_CoverageVsSigma,
    Fig8_Variants,
    Fig9_DelayCompare,
    Fig10_DelayVsGeometry,
    Fig11_DelayVsP,
};

/// Accepts "Fig4_CoverageVsP", "fig4" or "4". Throws ConfigError otherwise.
FigureRecipe parse_recipe(const std::string& id);
const char* recipe_name(FigureRecipe r) noexcept;
const char* recipe_short_name(FigureRecipe r) noexcept;  // "fig4"
std::vector<FigureRecipe> all_recipes();

/// One experiment: base defaults, then the recipe's overrides, then the
/// user's keys.
struct ExperimentConfig {
    std::string experiment;
    NetworkGeometry geometry;
    RadioConfig radio;
    int n_files = 10;
    int cache_size = 1;
    double beta = 0.5;
    double zeta = 0.5;
    std::optional<double> eta;  // overrides lambda_p / lambda_b when set
    CachingPolicy policy = CachingPolicy::ZipfTopM;

    std::string sweep_axis;
    std::vector<double> sweep_values;
    std::vector<double> series_values;  // second axis (b_i, lambda_p, ...) per recipe
    std::vector<double> b_values;

    std::uint64_t trials = 10000;
    std::uint64_t seed = 1;
    unsigned threads = 1;
    int bins = 40;
    QuadratureConfig quad;
    SolverConfig solver;
    std::string output;  // file name inside the output directory

    TrafficModel traffic() const;
    ContentModel content() const;
    void validate() const;
};

/// Keys the file format understands, with their units, for docs and --help.
struct ConfigKey {
    const char* name;
    const char* kind;  // number, integer, string, list
    const char* description;
};
const std::vector<ConfigKey>& config_keys();

/// Parses `key = value` lines. Values: numbers, "strings", true/false and
/// [number, ...] lists; '#' starts a comment. `experiment` is mandatory.
ExperimentConfig parse_config(std::istream& in, const std::string& source = "<config>");
ExperimentConfig load_config(const std::string& path);

/// Same as parse_config with no mandatory keys; `experiment` picks recipe
/// defaults when present.
ExperimentConfig parse_config_lenient(std::istream& in, const std::string& source = "<config>");

/// Recipe defaults without any user keys.
ExperimentConfig recipe_defaults(FigureRecipe recipe);
ExperimentConfig table_defaults();

/// Applies one `key=value` override, same syntax as a config line.
void apply_override(ExperimentConfig& cfg, const std::string& assignment);

/// Resolved parameters as ordered key -> printable value, for manifests.
std::map<std::string, std::string> describe(const ExperimentConfig& cfg);

}  // namespace d2dcache
