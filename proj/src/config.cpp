#include "lanegp/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

#include "lanegp/errors.hpp"

namespace lanegp {

namespace {

int to_int(const std::string& v) {
    std::size_t pos = 0;
    const int out = std::stoi(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return out;
}

std::uint64_t to_u64(const std::string& v) {
    std::size_t pos = 0;
    const unsigned long long out = std::stoull(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return out;
}

double to_double(const std::string& v) {
    std::size_t pos = 0;
    const double out = std::stod(v, &pos);
    if (pos != v.size() || !std::isfinite(out)) throw std::invalid_argument(v);
    return out;
}

bool to_bool(const std::string& v) {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw std::invalid_argument(v);
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}

struct KeyDef {
    const char* name;
    std::function<void(RunConfig&, const std::string&)> set;
    std::function<std::string(const RunConfig&)> get;
    const char* help;
};

const std::vector<KeyDef>& key_table() {
    static const std::vector<KeyDef> keys = {
        {"col_vehicle_id", [](RunConfig& c, const std::string& v) { c.col_vehicle_id = to_int(v); },
         [](const RunConfig& c) { return std::to_string(c.col_vehicle_id); }, "column index of the vehicle id"},
        {"col_frame_id", [](RunConfig& c, const std::string& v) { c.col_frame_id = to_int(v); },
         [](const RunConfig& c) { return std::to_string(c.col_frame_id); }, "column index of the 10 Hz frame id"},
        {"col_lateral", [](RunConfig& c, const std::string& v) { c.col_lateral = to_int(v); },
         [](const RunConfig& c) { return std::to_string(c.col_lateral); }, "column index of the lateral position (ft)"},
        {"col_lane_id", [](RunConfig& c, const std::string& v) { c.col_lane_id = to_int(v); },
         [](const RunConfig& c) { return std::to_string(c.col_lane_id); }, "column index of the lane id"},
        {"disp_band_lo", [](RunConfig& c, const std::string& v) { c.disp_band_lo = to_double(v); },
         [](const RunConfig& c) { return fmt(c.disp_band_lo); }, "min accepted |lateral displacement| (ft)"},
        {"disp_band_hi", [](RunConfig& c, const std::string& v) { c.disp_band_hi = to_double(v); },
         [](const RunConfig& c) { return fmt(c.disp_band_hi); }, "max accepted |lateral displacement| (ft)"},
        {"synth_n", [](RunConfig& c, const std::string& v) { c.synth_n = to_int(v); },
         [](const RunConfig& c) { return std::to_string(c.synth_n); }, "synthetic corpus size"},
        {"synth_seed", [](RunConfig& c, const std::string& v) { c.synth_seed = to_u64(v); },
         [](const RunConfig& c) { return std::to_string(c.synth_seed); }, "synthetic corpus seed"},
        {"synth_noise_sigma", [](RunConfig& c, const std::string& v) { c.synth_noise_sigma = to_double(v); },
         [](const RunConfig& c) { return fmt(c.synth_noise_sigma); }, "synthetic observation noise (ft)"},
        {"synth_shape_jitter", [](RunConfig& c, const std::string& v) { c.synth_shape_jitter = to_double(v); },
         [](const RunConfig& c) { return fmt(c.synth_shape_jitter); }, "synthetic shape spread, 0..1"},
        {"init_sigma_l", [](RunConfig& c, const std::string& v) { c.init_sigma_l = to_double(v); },
         [](const RunConfig& c) { return fmt(c.init_sigma_l); }, "kernel signal scale init (ft/s)"},
        {"init_c", [](RunConfig& c, const std::string& v) { c.init_c = to_double(v); },
         [](const RunConfig& c) { return fmt(c.init_c); }, "kernel time offset init (s)"},
        {"init_noise_var", [](RunConfig& c, const std::string& v) { c.init_noise_var = to_double(v); },
         [](const RunConfig& c) { return fmt(c.init_noise_var); }, "observation-noise variance init (ft^2)"},
        {"sigma_l_min", [](RunConfig& c, const std::string& v) { c.sigma_l_min = to_double(v); },
         [](const RunConfig& c) { return fmt(c.sigma_l_min); }, "search lower bound for sigma_l"},
        {"sigma_l_max", [](RunConfig& c, const std::string& v) { c.sigma_l_max = to_double(v); },
         [](const RunConfig& c) { return fmt(c.sigma_l_max); }, "search upper bound for sigma_l"},
        {"noise_var_min", [](RunConfig& c, const std::string& v) { c.noise_var_min = to_double(v); },
         [](const RunConfig& c) { return fmt(c.noise_var_min); }, "search lower bound for noise_var"},
        {"noise_var_max", [](RunConfig& c, const std::string& v) { c.noise_var_max = to_double(v); },
         [](const RunConfig& c) { return fmt(c.noise_var_max); }, "search upper bound for noise_var"},
        {"c_min", [](RunConfig& c, const std::string& v) { c.c_min = to_double(v); },
         [](const RunConfig& c) { return fmt(c.c_min); }, "search lower bound for c (s)"},
        {"c_max", [](RunConfig& c, const std::string& v) { c.c_max = to_double(v); },
         [](const RunConfig& c) { return fmt(c.c_max); }, "search upper bound for c (s)"},
        {"optimize_c", [](RunConfig& c, const std::string& v) { c.optimize_c = to_bool(v); },
         [](const RunConfig& c) { return std::string(c.optimize_c ? "true" : "false"); },
         "search over c (false pins it at init_c)"},
        {"bank_budget", [](RunConfig& c, const std::string& v) { c.bank_budget = to_int(v); },
         [](const RunConfig& c) { return std::to_string(c.bank_budget); }, "likelihood evaluations per model-bank fit"},
        {"bank_starts", [](RunConfig& c, const std::string& v) { c.bank_starts = to_int(v); },
         [](const RunConfig& c) { return std::to_string(c.bank_starts); }, "search starts per model-bank fit"},
        {"refit_budget", [](RunConfig& c, const std::string& v) { c.refit_budget = to_int(v); },
         [](const RunConfig& c) { return std::to_string(c.refit_budget); }, "likelihood evaluations per online refit"},
        {"refit_starts", [](RunConfig& c, const std::string& v) { c.refit_starts = to_int(v); },
         [](const RunConfig& c) { return std::to_string(c.refit_starts); }, "search starts per online refit"},
        {"seed", [](RunConfig& c, const std::string& v) { c.seed = to_u64(v); },
         [](const RunConfig& c) { return std::to_string(c.seed); }, "master evaluation seed"},
        {"prefix_min_s", [](RunConfig& c, const std::string& v) { c.prefix_min_s = to_double(v); },
         [](const RunConfig& c) { return fmt(c.prefix_min_s); }, "first forecast-issue time (s)"},
        {"prefix_max_s", [](RunConfig& c, const std::string& v) { c.prefix_max_s = to_double(v); },
         [](const RunConfig& c) { return fmt(c.prefix_max_s); }, "last forecast-issue time (s)"},
        {"horizon_min_s", [](RunConfig& c, const std::string& v) { c.horizon_min_s = to_double(v); },
         [](const RunConfig& c) { return fmt(c.horizon_min_s); }, "smallest forecast horizon (s)"},
        {"horizon_max_s", [](RunConfig& c, const std::string& v) { c.horizon_max_s = to_double(v); },
         [](const RunConfig& c) { return fmt(c.horizon_max_s); }, "largest forecast horizon (s)"},
        {"compound_threshold", [](RunConfig& c, const std::string& v) { c.compound_threshold = to_double(v); },
         [](const RunConfig& c) { return fmt(c.compound_threshold); }, "compound split point (s); horizons >= it go to the GP"},
        {"velocity_window", [](RunConfig& c, const std::string& v) { c.velocity_window = to_int(v); },
         [](const RunConfig& c) { return std::to_string(c.velocity_window); },
         "baseline slope samples: 2 = last-pair difference, >2 = LS fit"},
        {"workers", [](RunConfig& c, const std::string& v) { c.workers = to_int(v); },
         [](const RunConfig& c) { return std::to_string(c.workers); }, "evaluation worker threads (0 = hardware)"},
        {"models", [](RunConfig& c, const std::string& v) { c.models = v; },
         [](const RunConfig& c) { return c.models; }, "comma list from baseline,gp,compound"},
        {"pool_per_maneuver", [](RunConfig& c, const std::string& v) { c.pool_per_maneuver = to_bool(v); },
         [](const RunConfig& c) { return std::string(c.pool_per_maneuver ? "true" : "false"); },
         "horizon table pooling: mean of per-maneuver p95s instead of one pooled p95"},
        {"write_records", [](RunConfig& c, const std::string& v) { c.write_records = to_bool(v); },
         [](const RunConfig& c) { return std::string(c.write_records ? "true" : "false"); },
         "also write records.csv next to the figure tables"},
    };
    return keys;
}

int to_samples(double seconds, const char* key) {
    const double scaled = seconds * 10.0;
    const double rounded = std::round(scaled);
    if (std::abs(scaled - rounded) > 1e-6) {
        throw ConfigError(std::string(key) + " must be a 0.1 s multiple");
    }
    return static_cast<int>(rounded);
}

}  // namespace

void RunConfig::set(const std::string& key, const std::string& value) {
    for (const KeyDef& def : key_table()) {
        if (key == def.name) {
            try {
                def.set(*this, value);
            } catch (const std::exception&) {
                throw ConfigError("bad value for " + key + ": '" + value + "'");
            }
            return;
        }
    }
    throw ConfigError("unknown config key: " + key);
}

void RunConfig::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file: " + path);
    }
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) {
            line = line.substr(0, hash);
        }
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        const auto last = line.find_last_not_of(" \t\r");
        line = line.substr(first, last - first + 1);
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(path + ":" + std::to_string(lineno) + ": expected key=value");
        }
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t");
            const auto e = s.find_last_not_of(" \t");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
}

std::vector<std::string> RunConfig::echo() const {
    std::vector<std::string> lines;
    for (const KeyDef& def : key_table()) {
        lines.push_back(std::string(def.name) + "=" + def.get(*this));
    }
    std::sort(lines.begin(), lines.end());
    return lines;
}

std::vector<std::string> RunConfig::key_help() {
    RunConfig defaults;
    std::vector<std::string> lines;
    for (const KeyDef& def : key_table()) {
        lines.push_back(std::string(def.name) + " (default " + def.get(defaults) + "): " + def.help);
    }
    return lines;
}

ColumnMap RunConfig::column_map() const {
    if (col_vehicle_id < 0 || col_frame_id < 0 || col_lateral < 0 || col_lane_id < 0) {
        throw ConfigError("column indices must be >= 0");
    }
    return {col_vehicle_id, col_frame_id, col_lateral, col_lane_id};
}

DisplacementBand RunConfig::displacement_band() const {
    if (!(disp_band_lo > 0) || !(disp_band_hi > disp_band_lo)) {
        throw ConfigError("need 0 < disp_band_lo < disp_band_hi");
    }
    return {disp_band_lo, disp_band_hi};
}

SynthParams RunConfig::synth_params() const {
    if (synth_n < 1) throw ConfigError("synth_n must be >= 1");
    if (synth_noise_sigma < 0 || synth_shape_jitter < 0) {
        throw ConfigError("synth_noise_sigma and synth_shape_jitter must be >= 0");
    }
    return {synth_n, synth_seed, synth_noise_sigma, synth_shape_jitter};
}

EvalOptions RunConfig::eval_options() const {
    EvalOptions opts = EvalOptions::defaults();

    const int prefix_lo = to_samples(prefix_min_s, "prefix_min_s");
    const int prefix_hi = to_samples(prefix_max_s, "prefix_max_s");
    const int horizon_lo = to_samples(horizon_min_s, "horizon_min_s");
    const int horizon_hi = to_samples(horizon_max_s, "horizon_max_s");
    if (prefix_lo < 1 || prefix_hi > 29 || prefix_lo > prefix_hi) {
        throw ConfigError("prefix range must satisfy 0.1 <= prefix_min_s <= prefix_max_s <= 2.9");
    }
    if (horizon_lo < 1 || horizon_hi > 30 || horizon_lo > horizon_hi) {
        throw ConfigError("horizon range must satisfy 0.1 <= horizon_min_s <= horizon_max_s <= 3.0");
    }
    opts.grid.prefix_samples.clear();
    opts.grid.horizon_samples.clear();
    for (int p = prefix_lo; p <= prefix_hi; ++p) opts.grid.prefix_samples.push_back(p);
    for (int h = horizon_lo; h <= horizon_hi; ++h) opts.grid.horizon_samples.push_back(h);
    opts.grid.validate();

    if (!(compound_threshold > 0) || compound_threshold > 3.0) {
        throw ConfigError("compound_threshold must lie in (0, 3]");
    }
    if (velocity_window < 2) throw ConfigError("velocity_window must be >= 2");

    opts.forecasters.clear();
    std::istringstream list(models);
    std::string name;
    std::vector<std::string> seen;
    while (std::getline(list, name, ',')) {
        if (name.empty()) continue;
        if (std::find(seen.begin(), seen.end(), name) != seen.end()) {
            throw ConfigError("model '" + name + "' listed twice");
        }
        seen.push_back(name);
        ForecasterSpec spec;
        spec.compound_threshold = compound_threshold;
        spec.velocity_window = velocity_window;
        if (name == "baseline") {
            spec.kind = ForecasterKind::ConstantSpeed;
        } else if (name == "gp") {
            spec.kind = ForecasterKind::Gp;
        } else if (name == "compound") {
            spec.kind = ForecasterKind::Compound;
        } else {
            throw ConfigError("unknown model '" + name + "' (expected baseline, gp, compound)");
        }
        opts.forecasters.push_back(spec);
    }
    if (opts.forecasters.empty()) {
        throw ConfigError("models list selects nothing");
    }

    opts.band = displacement_band();

    if (!(init_sigma_l > 0) || init_noise_var < 0 || !std::isfinite(init_c)) {
        throw ConfigError("kernel init needs init_sigma_l > 0, init_noise_var >= 0, finite init_c");
    }
    opts.default_init = {init_sigma_l, init_c, init_noise_var};

    const auto fill_bounds = [&](OptimizeSpec& spec) {
        spec.sigma_l_min = sigma_l_min;
        spec.sigma_l_max = sigma_l_max;
        spec.noise_var_min = noise_var_min;
        spec.noise_var_max = noise_var_max;
        spec.c_min = c_min;
        spec.c_max = c_max;
        spec.optimize_c = optimize_c;
    };
    if (bank_budget < 1 || refit_budget < 0 || bank_starts < 1 || refit_starts < 1) {
        throw ConfigError("budgets must be >= 1 (refit_budget 0 disables the online refit)");
    }
    opts.bank_fit.budget = bank_budget;
    opts.bank_fit.starts = bank_starts;
    fill_bounds(opts.bank_fit);
    opts.refit.budget = refit_budget;
    opts.refit.starts = refit_starts;
    fill_bounds(opts.refit);

    if (workers < 0) throw ConfigError("workers must be >= 0");
    opts.workers = workers;
    opts.seed = seed;
    opts.pool_per_maneuver = pool_per_maneuver;
    return opts;
}

}  // namespace lanegp
