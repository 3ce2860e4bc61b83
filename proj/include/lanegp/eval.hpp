#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "lanegp/forecasters.hpp"
#include "lanegp/history.hpp"
#include "lanegp/maneuver.hpp"

namespace lanegp {

// Sample-count grid (1 sample = 0.1 s): forecasts are issued after each
// prefix and scored at every horizon that stays inside the 3 s window.
struct EvaluationGrid {
    std::vector<int> horizon_samples;  // 1..30
    std::vector<int> prefix_samples;   // last observed sample index, 1..29

    static EvaluationGrid defaults();
    void validate() const;
};

// Inclusive [lo, hi] range in samples.
struct SampleRange {
    int lo = 1;
    int hi = 30;

    bool contains(int samples) const { return samples >= lo && samples <= hi; }
};

// One (maneuver, prefix, horizon) forecast with per-model outcomes. Means and
// errors are parallel to the forecaster list; a quiet NaN marks a model that
// failed or was not scored for this cell.
struct ForecastRecord {
    int maneuver_id = 0;
    int history_count = 0;  // completed maneuvers in the training set
    int prefix_samples = 0;
    int horizon_samples = 0;
    double truth = 0.0;  // held-out window sample, ft
    std::vector<double> mean;
    std::vector<double> abs_error;

    double prefix_end_s() const { return kSampleDt * prefix_samples; }
    double horizon_s() const { return kSampleDt * horizon_samples; }
};

struct EvalOptions {
    EvaluationGrid grid = EvaluationGrid::defaults();
    std::vector<ForecasterSpec> forecasters;
    DisplacementBand band;
    LinearKernelParams default_init{1.0, 1.5, 0.01};
    OptimizeSpec bank_fit;  // per-maneuver model-bank fits
    OptimizeSpec refit;     // per-prefix online refits (warm-started)
    std::uint64_t seed = 1;
    int workers = 0;  // 0 = hardware concurrency
    bool pool_per_maneuver = false;  // fig3 alternative pooling (mean of per-maneuver p95s)

    static EvalOptions defaults();
};

struct Fig3Row {
    std::string model;
    int horizon_samples = 0;
    double reception_rate_hz = 0.0;
    double p95_abs_error_ft = 0.0;
    std::size_t n_records = 0;
};

struct HistoryRow {
    std::string model;
    int history_count = 0;  // completed maneuvers ahead of the evaluated one
    double p95_abs_error_ft = 0.0;
    std::size_t n_records = 0;
};

struct ExperimentReport {
    std::vector<std::string> models;
    std::vector<Fig3Row> fig3;
    std::vector<HistoryRow> fig4;
    std::vector<HistoryRow> fig5;
    std::size_t n_records = 0;        // (record, model) cells scored
    std::size_t n_failed = 0;         // cells dropped by model failures
    std::size_t leakage_violations = 0;
    std::vector<std::string> config_echo;
};

// Equivalent message-update frequency implied by a forecast horizon:
// 1 / (horizon + 0.1).
double reception_rate(double horizon_s);

// Nearest-rank 95th percentile: sort ascending, element ceil(0.95 n) - 1.
// Throws EmptyInput.
double p95_abs_error(std::vector<double> errors);

// The full record pass: maneuvers in trip order, maneuver i trained on the
// previous i-1 (history augmentation with warm-started hyperparameters,
// re-fit at every prefix). Deterministic for a fixed seed, independent of
// worker count.
std::vector<ForecastRecord> generate_records(const std::vector<ManeuverWindow>& corpus,
                                             const EvalOptions& opts,
                                             std::size_t* leakage_violations = nullptr);

// Aggregations (per model, skipping NaN cells). The name-list overloads serve
// re-aggregation of records read back from disk.
std::vector<Fig3Row> aggregate_by_horizon(const std::vector<ForecastRecord>& records,
                                          const std::vector<std::string>& models,
                                          bool pool_per_maneuver = false);
std::vector<Fig3Row> aggregate_by_horizon(const std::vector<ForecastRecord>& records,
                                          const EvalOptions& opts);
std::vector<HistoryRow> aggregate_by_history(const std::vector<ForecastRecord>& records,
                                             const std::vector<std::string>& models,
                                             const SampleRange& horizon_band,
                                             const SampleRange& prefix_phase);
std::vector<HistoryRow> aggregate_by_history(const std::vector<ForecastRecord>& records,
                                             const EvalOptions& opts, const SampleRange& horizon_band,
                                             const SampleRange& prefix_phase);

// Scoring presets behind the fig3/fig4/fig5 tables.
inline constexpr SampleRange kFig4HorizonBand{20, 30};  // 2-3 s ahead
inline constexpr SampleRange kFig4PrefixPhase{1, 10};   // issued during the first 1 s
inline constexpr SampleRange kFullHorizonBand{1, 30};
inline constexpr SampleRange kFullPrefixPhase{1, 29};

ExperimentReport run_horizon_sweep(const std::vector<ManeuverWindow>& corpus, const EvalOptions& opts);
ExperimentReport run_history_sweep(const std::vector<ManeuverWindow>& corpus, const EvalOptions& opts,
                                   const SampleRange& horizon_band, const SampleRange& prefix_phase);

// Full pipeline used by the CLI: one record pass, all three figure tables.
ExperimentReport run_experiment(const std::vector<ManeuverWindow>& corpus, const EvalOptions& opts);

// fig3.csv / fig4.csv / fig5.csv / summary.txt (6 significant digits,
// deterministic row order; empty tables still get header rows).
void emit_report(const ExperimentReport& report, const std::filesystem::path& out_dir);

// Record interchange for the `report` subcommand.
void write_records_csv(const std::filesystem::path& path, const std::vector<ForecastRecord>& records,
                       const std::vector<std::string>& models);
std::vector<ForecastRecord> read_records_csv(const std::filesystem::path& path,
                                             std::vector<std::string>& models_out);

}  // namespace lanegp
