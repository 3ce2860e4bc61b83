#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lanegp/eval.hpp"
#include "lanegp/ingest.hpp"

namespace lanegp {

// Flat key=value run configuration. Precedence: CLI override > config file >
// built-in default; the effective values are echoed into summary.txt.
// Unknown keys are fatal.
struct RunConfig {
    // ingest columns
    int col_vehicle_id = 0;
    int col_frame_id = 1;
    int col_lateral = 4;
    int col_lane_id = 13;
    double disp_band_lo = 7.0;
    double disp_band_hi = 14.0;

    // synthetic corpus
    int synth_n = 40;
    std::uint64_t synth_seed = 7;
    double synth_noise_sigma = 0.2;
    double synth_shape_jitter = 1.0;

    // kernel init
    double init_sigma_l = 1.0;
    double init_c = 1.5;
    double init_noise_var = 0.01;

    // optimizer bounds
    double sigma_l_min = 1e-3, sigma_l_max = 1e3;
    double noise_var_min = 1e-8, noise_var_max = 1e2;
    double c_min = -10.0, c_max = 10.0;
    bool optimize_c = true;

    // optimizer budgets
    int bank_budget = 240;
    int bank_starts = 8;
    int refit_budget = 50;
    int refit_starts = 1;
    std::uint64_t seed = 1;

    // grid (seconds, 0.1 multiples)
    double prefix_min_s = 0.1, prefix_max_s = 2.9;
    double horizon_min_s = 0.1, horizon_max_s = 3.0;

    // evaluation
    double compound_threshold = 1.0;
    int velocity_window = 2;
    int workers = 0;
    std::string models = "baseline,gp,compound";
    bool pool_per_maneuver = false;
    bool write_records = true;

    // Apply one `key=value` assignment; throws ConfigError on unknown key or
    // bad value.
    void set(const std::string& key, const std::string& value);

    // Load assignments from a file ('#' comments, blank lines allowed).
    void load_file(const std::string& path);

    // All keys with effective values, sorted, as `key=value` lines.
    std::vector<std::string> echo() const;

    // Documented key list for --help.
    static std::vector<std::string> key_help();

    // Derived views. Throw ConfigError/std::invalid_argument on inconsistent
    // settings.
    ColumnMap column_map() const;
    DisplacementBand displacement_band() const;
    SynthParams synth_params() const;
    EvalOptions eval_options() const;
};

}  // namespace lanegp
