#include "d2dcache/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

#include "d2dcache/errors.hpp"

namespace d2dcache {

namespace {

struct Value {
    enum class Kind { Number, String, Bool, List } kind = Kind::Number;
    double number = 0.0;
    std::string text;
    bool flag = false;
    std::vector<double> list;
};

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

bool parse_number(const std::string& s, double& out)
{
    std::string t = trim(s);
    t.erase(std::remove(t.begin(), t.end(), '_'), t.end());
    if (!t.empty() && t.front() == '+') {
        t.erase(0, 1);
    }
    const char* end = t.data() + t.size();
    const auto [ptr, ec] = std::from_chars(t.data(), end, out);
    return ec == std::errc() && ptr == end && !t.empty();
}

Value parse_value(const std::string& raw, int line, const std::string& key)
{
    const std::string s = trim(raw);
    Value v;
    if (s.empty()) {
        throw ConfigError("missing value for '" + key + "'", line, key);
    }
    if (s.front() == '"') {
        if (s.size() < 2 || s.back() != '"') {
            throw ConfigError("unterminated string for '" + key + "'", line, key);
        }
        v.kind = Value::Kind::String;
        v.text = s.substr(1, s.size() - 2);
        return v;
    }
    if (s == "true" || s == "false") {
        v.kind = Value::Kind::Bool;
        v.flag = s == "true";
        return v;
    }
    if (s.front() == '[') {
        if (s.back() != ']') {
            throw ConfigError("unterminated list for '" + key + "'", line, key);
        }
        v.kind = Value::Kind::List;
        std::stringstream items(s.substr(1, s.size() - 2));
        std::string item;
        while (std::getline(items, item, ',')) {
            if (trim(item).empty()) {
                continue;  // trailing comma
            }
            double x = 0.0;
            if (!parse_number(item, x)) {
                throw ConfigError("list '" + key + "' holds a non-number: " + trim(item), line, key);
            }
            v.list.push_back(x);
        }
        return v;
    }
    if (!parse_number(s, v.number)) {
        throw ConfigError("cannot parse value of '" + key + "': " + s, line, key);
    }
    return v;
}

// Strips a trailing comment that is not inside a string.
std::string strip_comment(const std::string& line)
{
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        if (line[i] == '"') {
            quoted = !quoted;
        } else if (line[i] == '#' && !quoted) {
            return line.substr(0, i);
        }
    }
    return line;
}

double as_number(const Value& v, int line, const std::string& key)
{
    if (v.kind != Value::Kind::Number) {
        throw ConfigError("'" + key + "' must be a number", line, key);
    }
    return v.number;
}

long long as_integer(const Value& v, int line, const std::string& key, long long lo)
{
    const double x = as_number(v, line, key);
    if (x != std::floor(x) || x < static_cast<double>(lo) || x > 9.0e15) {
        throw ConfigError("'" + key + "' must be an integer >= " + std::to_string(lo), line, key);
    }
    return static_cast<long long>(x);
}

std::string as_string(const Value& v, int line, const std::string& key)
{
    if (v.kind != Value::Kind::String) {
        throw ConfigError("'" + key + "' must be a quoted string", line, key);
    }
    return v.text;
}

std::vector<double> as_list(const Value& v, int line, const std::string& key)
{
    if (v.kind == Value::Kind::Number) {
        return {v.number};
    }
    if (v.kind != Value::Kind::List) {
        throw ConfigError("'" + key + "' must be a list of numbers", line, key);
    }
    return v.list;
}

using Setter = std::function<void(ExperimentConfig&, const Value&, int, const std::string&)>;

struct KeySpec {
    ConfigKey doc;
    Setter set;
};

Setter number_field(double ExperimentConfig::*field)
{
    return [field](ExperimentConfig& c, const Value& v, int line, const std::string& key) {
        c.*field = as_number(v, line, key);
    };
}

template <class F>
Setter number_with(F f)
{
    return [f](ExperimentConfig& c, const Value& v, int line, const std::string& key) {
        f(c, as_number(v, line, key));
    };
}

const std::vector<KeySpec>& key_specs()
{
    static const std::vector<KeySpec> specs = {
        {{"experiment", "string", "recipe id, e.g. Fig4_CoverageVsP or fig4 (mandatory for run)"},
         [](ExperimentConfig& c, const Value& v, int l, const std::string& k) {
             c.experiment = as_string(v, l, k);
         }},
        {{"output", "string", "CSV file name inside the output directory"},
         [](ExperimentConfig& c, const Value& v, int l, const std::string& k) {
             c.output = as_string(v, l, k);
         }},
        {{"lambda_p_per_km2", "number", "cluster density, km^-2"},
         number_with([](ExperimentConfig& c, double x) { c.geometry.lambda_p_per_km2 = x; })},
        {{"sigma_m", "number", "scattering standard deviation, m"},
         number_with([](ExperimentConfig& c, double x) { c.geometry.sigma_m = x; })},
        {{"n_bar", "number", "mean devices per cluster"},
         number_with([](ExperimentConfig& c, double x) { c.geometry.n_bar = x; })},
        {{"p", "number", "access probability"},
         number_with([](ExperimentConfig& c, double x) { c.geometry.p = x; })},
        {{"lambda_b_per_km2", "number", "BS density, km^-2"},
         number_with([](ExperimentConfig& c, double x) { c.geometry.lambda_b_per_km2 = x; })},
        {{"eta", "number", "clients per BS; overrides lambda_p / lambda_b"},
         number_with([](ExperimentConfig& c, double x) { c.eta = x; })},
        {{"bandwidth_hz", "number", "total bandwidth W, Hz"},
         number_with([](ExperimentConfig& c, double x) { c.radio.bandwidth_hz = x; })},
        {{"theta_db", "number", "SIR threshold, dB"},
         number_with([](ExperimentConfig& c, double x) { c.radio.theta = std::pow(10.0, x / 10.0); })},
        {{"alpha", "number", "NLoS path-loss exponent"},
         number_with([](ExperimentConfig& c, double x) { c.radio.alpha = x; })},
        {{"alpha_los", "number", "LoS path-loss exponent inside a cluster"},
         number_with([](ExperimentConfig& c, double x) { c.radio.alpha_los = x; })},
        {{"nakagami_m", "number", "Nakagami fading parameter inside a cluster"},
         number_with([](ExperimentConfig& c, double x) { c.radio.nakagami_m = x; })},
        {{"mean_size_bits", "number", "mean content size, bits"},
         number_with([](ExperimentConfig& c, double x) { c.radio.mean_size_bits = x; })},
        {{"channel_mode", "string", "rayleigh_nlos or nakagami_los_intra"},
         [](ExperimentConfig& c, const Value& v, int l, const std::string& k) {
             const std::string s = as_string(v, l, k);
             if (s == "rayleigh_nlos") {
                 c.radio.channel_mode = ChannelMode::RayleighNLoS;
             } else if (s == "nakagami_los_intra") {
                 c.radio.channel_mode = ChannelMode::NakagamiLoSIntra;
             } else {
                 throw ConfigError("unknown channel_mode '" + s + "'", l, k);
             }
         }},
        {{"n_files", "integer", "library size N_f"},
         [](ExperimentConfig& c, const Value& v, int l, const std::string& k) {
             c.n_files = static_cast<int>(as_integer(v, l, k, 1));
         }},
        {{"cache_size", "integer", "files cached per provider, M"},
         [](ExperimentConfig& c, const Value& v, int l, const std::string& k) {
             c.cache_size = static_cast<int>(as_integer(v, l, k, 0));
         }},
        {{"beta", "number", "Zipf exponent"}, number_field(&ExperimentConfig::beta)},
        {{"zeta", "number", "requests/s per client"}, number_field(&ExperimentConfig::zeta)},
        {{"caching_policy", "string", "uniform, zipf_top_m or zipf_proportional"},
         [](ExperimentConfig& c, const Value& v, int l, const std::string& k) {
             try {
                 c.policy = parse_caching_policy(as_string(v, l, k));
             } catch (const InvalidArgument& e) {
                 throw ConfigError(e.what(), l, k);
             }
         }},
        {{"sweep_axis", "string", "name of the swept parameter (informational)"},
         [](ExperimentConfig& c, const Value& v, int l, const std::string& k) {
             c.sweep_axis = as_string(v, l, k);
         }},
        {{"sweep_values", "list", "primary sweep grid"},
         [](ExperimentConfig& c, const Value& v, int l, const std::string& k) {
             c.sweep_values = as_list(v, l, k);
         }},
        {{"series_values", "list", "secondary grid (one curve per value)"},
         [](ExperimentConfig& c, const Value& v, int l, const std::string& k) {
             c.series_values = as_list(v, l, k);
         }},
        {{"b_values", "list", "caching probabilities of the tagged content"},
         [](ExperimentConfig& c, const Value& v, int l, const std::string& k) {
             c.b_values = as_list(v, l, k);
         }},
        {{"trials", "integer", "Monte Carlo trials per point (0 skips simulation)"},
         [](ExperimentConfig& c, const Value& v, int l, const std::string& k) {
             c.trials = static_cast<std::uint64_t>(as_integer(v, l, k, 0));
         }},
        {{"seed", "integer", "master seed"},
         [](ExperimentConfig& c, const Value& v, int l, const std::string& k) {
             c.seed = static_cast<std::uint64_t>(as_integer(v, l, k, 0));
         }},
        {{"threads", "integer", "worker threads"},
         [](ExperimentConfig& c, const Value& v, int l, const std::string& k) {
             c.threads = static_cast<unsigned>(as_integer(v, l, k, 1));
         }},
        {{"bins", "integer", "histogram bins"},
         [](ExperimentConfig& c, const Value& v, int l, const std::string& k) {
             c.bins = static_cast<int>(as_integer(v, l, k, 10));
         }},
        {{"quad_rel_tol", "number", "quadrature relative tolerance"},
         number_with([](ExperimentConfig& c, double x) { c.quad.rel_tol = x; })},
        {{"quad_abs_tol", "number", "quadrature absolute tolerance"},
         number_with([](ExperimentConfig& c, double x) { c.quad.abs_tol = x; })},
        {{"quad_tail_mass_tol", "number", "truncated tail mass"},
         number_with([](ExperimentConfig& c, double x) { c.quad.tail_mass_tol = x; })},
        {{"solver_obj_tol", "number", "relative objective decrease to stop"},
         number_with([](ExperimentConfig& c, double x) { c.solver.obj_tol = x; })},
        {{"solver_max_outer_iters", "integer", "BCD iteration cap"},
         [](ExperimentConfig& c, const Value& v, int l, const std::string& k) {
             c.solver.max_outer_iters = static_cast<int>(as_integer(v, l, k, 1));
         }},
        {{"solver_barrier_mu0", "number", "initial barrier weight (relative to T)"},
         number_with([](ExperimentConfig& c, double x) { c.solver.barrier_mu0 = x; })},
        {{"solver_barrier_shrink", "number", "barrier weight factor per stage"},
         number_with([](ExperimentConfig& c, double x) { c.solver.barrier_shrink = x; })},
        {{"solver_grad_step_tol", "number", "smallest projected step"},
         number_with([](ExperimentConfig& c, double x) { c.solver.grad_step_tol = x; })},
        {{"solver_upsilon_grid_points", "integer", "coverage tabulation nodes"},
         [](ExperimentConfig& c, const Value& v, int l, const std::string& k) {
             c.solver.upsilon_grid_points = static_cast<int>(as_integer(v, l, k, 8));
         }},
    };
    return specs;
}

const KeySpec* find_key(const std::string& name)
{
    for (const auto& s : key_specs()) {
        if (name == s.doc.name) {
            return &s;
        }
    }
    return nullptr;
}

struct Entry {
    std::string key;
    std::string value;
    int line;
};

std::vector<Entry> read_entries(std::istream& in, const std::string& source)
{
    std::vector<Entry> out;
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const std::string s = trim(strip_comment(raw));
        if (s.empty()) {
            continue;
        }
        if (s.front() == '[') {
            throw ConfigError(source + ": tables are not supported; use flat keys", line);
        }
        const auto eq = s.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(source + ": expected key = value", line);
        }
        const std::string key = trim(s.substr(0, eq));
        if (key.empty()) {
            throw ConfigError(source + ": empty key", line);
        }
        for (const auto& e : out) {
            if (e.key == key) {
                throw ConfigError(source + ": duplicate key '" + key + "' (first on line " +
                                      std::to_string(e.line) + ")",
                                  line, key);
            }
        }
        out.push_back({key, s.substr(eq + 1), line});
    }
    return out;
}

void apply_entry(ExperimentConfig& cfg, const Entry& e, const std::string& source)
{
    const KeySpec* spec = find_key(e.key);
    if (!spec) {
        throw ConfigError(source + ": unknown key '" + e.key + "'", e.line, e.key);
    }
    try {
        spec->set(cfg, parse_value(e.value, e.line, e.key), e.line, e.key);
    } catch (const ConfigError& err) {
        if (err.line() > 0) {
            throw ConfigError(source + ":" + std::to_string(err.line()) + ": " + err.what(),
                              err.line(), err.field());
        }
        throw;
    }
}

ExperimentConfig parse_impl(std::istream& in, const std::string& source, bool require_experiment)
{
    const std::vector<Entry> entries = read_entries(in, source);
    ExperimentConfig cfg = table_defaults();
    const auto it = std::find_if(entries.begin(), entries.end(),
                                 [](const Entry& e) { return e.key == "experiment"; });
    if (it == entries.end()) {
        if (require_experiment) {
            throw ConfigError(source + ": missing mandatory field 'experiment'", 0, "experiment");
        }
    } else {
        ExperimentConfig probe;
        apply_entry(probe, *it, source);
        cfg = recipe_defaults(parse_recipe(probe.experiment));
    }
    for (const auto& e : entries) {
        apply_entry(cfg, e, source);
    }
    try {
        cfg.validate();
    } catch (const InvalidArgument& e) {
        throw ConfigError(source + ": " + e.what());
    }
    return cfg;
}

std::string format_number(double x)
{
    std::ostringstream s;
    s.precision(17);
    s << x;
    return s.str();
}

std::string format_list(const std::vector<double>& v)
{
    std::string out = "[";
    for (std::size_t i = 0; i < v.size(); ++i) {
        out += (i ? ", " : "") + format_number(v[i]);
    }
    return out + "]";
}

}  // namespace

FigureRecipe parse_recipe(const std::string& id)
{
    std::string lower = id;
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
    for (FigureRecipe r : all_recipes()) {
        std::string full = recipe_name(r);
        std::transform(full.begin(), full.end(), full.begin(),
                       [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
        const std::string shortname = recipe_short_name(r);
        if (lower == full || lower == shortname || lower == shortname.substr(3)) {
            return r;
        }
    }
    std::string known;
    for (FigureRecipe r : all_recipes()) {
        known += std::string(known.empty() ? "" : ", ") + recipe_name(r);
    }
    throw ConfigError("unknown experiment '" + id + "' (known: " + known + ")", 0, "experiment");
}

const char* recipe_name(FigureRecipe r) noexcept
{
    switch (r) {
    case FigureRecipe::Fig3_NearestPdf:
        return "Fig3_NearestPdf";
    case FigureRecipe::Fig4_CoverageVsP:
        return "Fig4_CoverageVsP";
    case FigureRecipe::Fig5_OptBandwidth:
        return "Fig5_OptBandwidth";
    case FigureRecipe::Fig6_CoverageVsSigma:
        return "Fig6_CoverageVsSigma";
    case FigureRecipe::Fig8_Variants:
        return "Fig8_Variants";
    case FigureRecipe::Fig9_DelayCompare:
        return "Fig9_DelayCompare";
    case FigureRecipe::Fig10_DelayVsGeometry:
        return "Fig10_DelayVsGeometry";
    case FigureRecipe::Fig11_DelayVsP:
        return "Fig11_DelayVsP";
    }
    return "?";
}

const char* recipe_short_name(FigureRecipe r) noexcept
{
    switch (r) {
    case FigureRecipe::Fig3_NearestPdf:
        return "fig3";
    case FigureRecipe::Fig4_CoverageVsP:
        return "fig4";
    case FigureRecipe::Fig5_OptBandwidth:
        return "fig5";
    case FigureRecipe::Fig6_CoverageVsSigma:
        return "fig6";
    case FigureRecipe::Fig8_Variants:
        return "fig8";
    case FigureRecipe::Fig9_DelayCompare:
        return "fig9";
    case FigureRecipe::Fig10_DelayVsGeometry:
        return "fig10";
    case FigureRecipe::Fig11_DelayVsP:
        return "fig11";
    }
    return "?";
}

std::vector<FigureRecipe> all_recipes()
{
    return {FigureRecipe::Fig3_NearestPdf,      FigureRecipe::Fig4_CoverageVsP,
            FigureRecipe::Fig5_OptBandwidth,    FigureRecipe::Fig6_CoverageVsSigma,
            FigureRecipe::Fig8_Variants,        FigureRecipe::Fig9_DelayCompare,
            FigureRecipe::Fig10_DelayVsGeometry, FigureRecipe::Fig11_DelayVsP};
}

TrafficModel ExperimentConfig::traffic() const
{
    TrafficModel t{zeta, eta ? *eta : geometry.clients_per_bs()};
    t.validate();
    return t;
}

ContentModel ExperimentConfig::content() const
{
    ContentModel c = ContentModel::zipf(n_files, cache_size, beta);
    c.b = baseline_caching(policy, c);
    return c;
}

void ExperimentConfig::validate() const
{
    geometry.validate();
    radio.validate();
    quad.validate();
    solver.validate();
    traffic();
    if (n_files < 1 || cache_size < 0 || cache_size > n_files) {
        throw InvalidArgument("cache_size must lie in [0, n_files]");
    }
    if (!(beta >= 0.0)) {
        throw InvalidArgument("beta must be non-negative");
    }
    for (double b : b_values) {
        if (!(b > 0.0 && b <= 1.0)) {
            throw InvalidArgument("b_values must lie in (0, 1]");
        }
    }
    if (threads < 1) {
        throw InvalidArgument("threads must be at least 1");
    }
}

const std::vector<ConfigKey>& config_keys()
{
    static const std::vector<ConfigKey> keys = [] {
        std::vector<ConfigKey> k;
        for (const auto& s : key_specs()) {
            k.push_back(s.doc);
        }
        return k;
    }();
    return keys;
}

ExperimentConfig parse_config(std::istream& in, const std::string& source)
{
    return parse_impl(in, source, true);
}

ExperimentConfig parse_config_lenient(std::istream& in, const std::string& source)
{
    return parse_impl(in, source, false);
}

ExperimentConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file " + path);
    }
    return parse_config(in, path);
}

ExperimentConfig table_defaults()
{
    ExperimentConfig c;
    c.geometry = NetworkGeometry{50.0, 10.0, 20.0, 0.2, 10.0};
    c.radio = RadioConfig{};
    return c;
}

ExperimentConfig recipe_defaults(FigureRecipe recipe)
{
    ExperimentConfig c = table_defaults();
    c.experiment = recipe_name(recipe);
    c.output = std::string(recipe_short_name(recipe)) + ".csv";
    switch (recipe) {
    case FigureRecipe::Fig3_NearestPdf:
        c.geometry.sigma_m = 5.0;
        c.geometry.p = 0.5;
        c.b_values = {1.0, 0.5};
        c.trials = 100000;
        c.bins = 40;
        c.sweep_axis = "h_m";
        break;
    case FigureRecipe::Fig4_CoverageVsP:
        c.sweep_axis = "p";
        c.sweep_values = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
        c.b_values = {0.5, 1.0};
        c.trials = 10000;
        break;
    case FigureRecipe::Fig5_OptBandwidth:
        c.sweep_axis = "beta";
        c.sweep_values = {0.2, 0.4, 0.6, 0.8, 1.0, 1.2, 1.4, 1.6, 1.8, 2.0};
        c.series_values = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6};  // zeta sweep
        c.trials = 0;
        break;
    case FigureRecipe::Fig6_CoverageVsSigma:
        c.sweep_axis = "sigma_m";
        c.sweep_values = {5, 10, 15, 20, 25, 30, 35, 40, 45, 50};
        c.series_values = {10, 50, 100};  // lambda_p
        c.b_values = {1.0};
        c.trials = 0;
        break;
    case FigureRecipe::Fig8_Variants:
        c.sweep_axis = "sigma_m";
        c.sweep_values = {5, 10, 15};
        c.b_values = {1.0};
        c.radio.alpha_los = 2.09;
        c.radio.nakagami_m = 3.0;
        c.trials = 100000;
        break;
    case FigureRecipe::Fig9_DelayCompare:
        c.geometry.lambda_p_per_km2 = 10.0;
        c.eta = 5.0;
        c.geometry.lambda_b_per_km2 = 2.0;
        c.zeta = 0.2;
        c.sweep_axis = "beta";
        c.sweep_values = {0.2, 0.4, 0.6, 0.8, 1.0, 1.2, 1.4, 1.6, 1.8, 2.0};
        c.series_values = {0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.35};  // zeta sweep
        c.trials = 0;
        break;
    case FigureRecipe::Fig10_DelayVsGeometry:
        c.beta = 1.0;
        c.eta = 5.0;
        c.sweep_axis = "sigma_m";
        c.sweep_values = {5, 10, 15, 20, 25, 30, 35, 40, 45, 50};
        c.series_values = {10, 50, 100};  // lambda_p
        c.trials = 0;
        break;
    case FigureRecipe::Fig11_DelayVsP:
        c.radio.theta = std::pow(10.0, 0.5);
        c.geometry.lambda_p_per_km2 = 10.0;
        c.eta = 5.0;
        c.geometry.lambda_b_per_km2 = 2.0;
        c.sweep_axis = "p";
        c.sweep_values = {0.05, 0.1, 0.15, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
        c.trials = 0;
        break;
    }
    return c;
}

void apply_override(ExperimentConfig& cfg, const std::string& assignment)
{
    const auto eq = assignment.find('=');
    if (eq == std::string::npos) {
        throw ConfigError("override must look like key=value: " + assignment);
    }
    std::string key = trim(assignment.substr(0, eq));
    std::string value = trim(assignment.substr(eq + 1));
    // Bare words are taken as strings so shells need no extra quoting.
    double probe = 0.0;
    if (!value.empty() && value.front() != '"' && value.front() != '[' && value != "true" &&
        value != "false" && !parse_number(value, probe)) {
        value = "\"" + value + "\"";
    }
    apply_entry(cfg, {key, value, 0}, "--set");
    try {
        cfg.validate();
    } catch (const InvalidArgument& e) {
        throw ConfigError(std::string("--set ") + key + ": " + e.what(), 0, key);
    }
}

std::map<std::string, std::string> describe(const ExperimentConfig& c)
{
    std::map<std::string, std::string> m;
    m["experiment"] = c.experiment;
    m["output"] = c.output;
    m["lambda_p_per_km2"] = format_number(c.geometry.lambda_p_per_km2);
    m["sigma_m"] = format_number(c.geometry.sigma_m);
    m["n_bar"] = format_number(c.geometry.n_bar);
    m["p"] = format_number(c.geometry.p);
    m["lambda_b_per_km2"] = format_number(c.geometry.lambda_b_per_km2);
    m["eta"] = format_number(c.traffic().eta);
    m["bandwidth_hz"] = format_number(c.radio.bandwidth_hz);
    m["theta_db"] = format_number(10.0 * std::log10(c.radio.theta));
    m["theta_linear"] = format_number(c.radio.theta);
    m["alpha"] = format_number(c.radio.alpha);
    m["alpha_los"] = c.radio.alpha_los ? format_number(*c.radio.alpha_los) : "none";
    m["nakagami_m"] = c.radio.nakagami_m ? format_number(*c.radio.nakagami_m) : "none";
    m["mean_size_bits"] = format_number(c.radio.mean_size_bits);
    m["channel_mode"] = c.radio.channel_mode == ChannelMode::RayleighNLoS ? "rayleigh_nlos"
                                                                           : "nakagami_los_intra";
    m["n_files"] = std::to_string(c.n_files);
    m["cache_size"] = std::to_string(c.cache_size);
    m["beta"] = format_number(c.beta);
    m["zeta"] = format_number(c.zeta);
    m["caching_policy"] = to_string(c.policy);
    m["sweep_axis"] = c.sweep_axis;
    m["sweep_values"] = format_list(c.sweep_values);
    m["series_values"] = format_list(c.series_values);
    m["b_values"] = format_list(c.b_values);
    m["trials"] = std::to_string(c.trials);
    m["seed"] = std::to_string(c.seed);
    m["bins"] = std::to_string(c.bins);
    m["quad_rel_tol"] = format_number(c.quad.rel_tol);
    m["quad_abs_tol"] = format_number(c.quad.abs_tol);
    m["quad_tail_mass_tol"] = format_number(c.quad.tail_mass_tol);
    m["solver_obj_tol"] = format_number(c.solver.obj_tol);
    m["solver_max_outer_iters"] = std::to_string(c.solver.max_outer_iters);
    m["solver_barrier_mu0"] = format_number(c.solver.barrier_mu0);
    m["solver_barrier_shrink"] = format_number(c.solver.barrier_shrink);
    m["solver_grad_step_tol"] = format_number(c.solver.grad_step_tol);
    m["solver_upsilon_grid_points"] = std::to_string(c.solver.upsilon_grid_points);
    return m;
}

}  // namespace d2dcache
