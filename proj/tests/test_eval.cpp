#include "lanegp/eval.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "lanegp/errors.hpp"
#include "lanegp/ingest.hpp"

using namespace lanegp;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const char* tag) {
    const fs::path dir = fs::temp_directory_path() / (std::string("lanegp_eval_") + tag);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

EvalOptions small_opts() {
    EvalOptions opts = EvalOptions::defaults();
    opts.bank_fit.budget = 60;
    opts.bank_fit.starts = 2;
    opts.refit.budget = 16;
    opts.seed = 5;
    return opts;
}

// Affine corpus: y = 3t + offset, displacement 9 ft sits inside the band.
std::vector<ManeuverWindow> affine_corpus(int n) {
    std::vector<ManeuverWindow> corpus;
    for (int j = 0; j < n; ++j) {
        ManeuverWindow window;
        window.id = j + 1;
        window.vehicle_id = j + 1;
        window.direction = +1;
        window.lane_from = 2;
        window.lane_to = 3;
        for (int k = 0; k < kWindowSamples; ++k) {
            const double t = kSampleDt * k;
            window.samples.push_back({t, 3.0 * t + 0.5 * j});
        }
        window.displacement = window.samples.back().y - window.samples.front().y;
        corpus.push_back(std::move(window));
    }
    return corpus;
}

}  // namespace

TEST(ReceptionRate, PaperEndpoints) {
    EXPECT_EQ(reception_rate(0.1), 5.0);  // exact
    const double slowest = reception_rate(3.0);
    EXPECT_GT(slowest, 0.322);
    EXPECT_LT(slowest, 0.323);
    EXPECT_EQ(reception_rate(0.9), 1.0);  // the 1 Hz / 1 s crossover
    EXPECT_THROW(reception_rate(0.05), std::invalid_argument);
    EXPECT_THROW(reception_rate(3.2), std::invalid_argument);
}

TEST(P95, NearestRankExamples) {
    EXPECT_DOUBLE_EQ(p95_abs_error({5.0}), 5.0);
    std::vector<double> one_to_hundred;
    for (int i = 100; i >= 1; --i) one_to_hundred.push_back(i);
    EXPECT_DOUBLE_EQ(p95_abs_error(one_to_hundred), 95.0);
    EXPECT_DOUBLE_EQ(p95_abs_error(std::vector<double>(20, 3.25)), 3.25);
    EXPECT_THROW(p95_abs_error({}), EmptyInput);
}

TEST(P95, PoolingMatchesBruteForceConcatenation) {
    // p95 over the flat record table equals p95 over the concatenation of
    // per-maneuver error lists: same multiset either way.
    std::vector<ForecastRecord> records;
    std::vector<double> all_errors;
    SampleRange everything{1, 30};
    int value = 0;
    for (int maneuver = 1; maneuver <= 3; ++maneuver) {
        for (int r = 0; r < 7; ++r) {
            ForecastRecord rec;
            rec.maneuver_id = maneuver;
            rec.history_count = maneuver - 1;
            rec.prefix_samples = 1 + r;
            rec.horizon_samples = 10;
            rec.truth = 0.0;
            const double err = ((value * 37) % 11) * 0.5;
            ++value;
            rec.mean = {err};
            rec.abs_error = {err};
            records.push_back(rec);
            all_errors.push_back(err);
        }
    }
    const auto rows = aggregate_by_horizon(records, {"baseline"}, false);
    ASSERT_EQ(rows.size(), 1u);
    EXPECT_DOUBLE_EQ(rows[0].p95_abs_error_ft, p95_abs_error(all_errors));
    EXPECT_EQ(rows[0].n_records, all_errors.size());

    const auto hist = aggregate_by_history(records, {"baseline"}, everything, {1, 29});
    ASSERT_EQ(hist.size(), 3u);
    std::vector<double> first;
    for (std::size_t i = 0; i < 7; ++i) first.push_back(records[i].abs_error[0]);
    EXPECT_DOUBLE_EQ(hist[0].p95_abs_error_ft, p95_abs_error(first));
}

TEST(P95, PerManeuverPoolingReportsMeanOfP95s) {
    std::vector<ForecastRecord> records;
    const auto add = [&](int maneuver, double err) {
        ForecastRecord rec;
        rec.maneuver_id = maneuver;
        rec.history_count = maneuver - 1;
        rec.prefix_samples = 1;
        rec.horizon_samples = 5;
        rec.mean = {err};
        rec.abs_error = {err};
        records.push_back(rec);
    };
    // Maneuver 1 errors {1,2,3,4} -> p95 = 4; maneuver 2 errors {10} -> 10.
    for (double e : {1.0, 2.0, 3.0, 4.0}) add(1, e);
    add(2, 10.0);

    const auto pooled = aggregate_by_horizon(records, {"m"}, false);
    ASSERT_EQ(pooled.size(), 1u);
    EXPECT_DOUBLE_EQ(pooled[0].p95_abs_error_ft, 10.0);  // nearest rank of {1,2,3,4,10}

    const auto per_maneuver = aggregate_by_horizon(records, {"m"}, true);
    ASSERT_EQ(per_maneuver.size(), 1u);
    EXPECT_DOUBLE_EQ(per_maneuver[0].p95_abs_error_ft, (4.0 + 10.0) / 2.0);
    EXPECT_EQ(per_maneuver[0].n_records, 5u);
}

TEST(Eval, AffineCorpusGivesZeroBaselineError) {
    EvalOptions opts = small_opts();
    opts.forecasters = {{ForecasterKind::ConstantSpeed, 1.0, 2}};
    const auto records = generate_records(affine_corpus(4), opts);
    const auto rows = aggregate_by_horizon(records, opts);
    // Horizons 0.1..2.9 s: a 3.0 s horizon never fits behind a 2-observation
    // prefix inside the 3 s window.
    ASSERT_EQ(rows.size(), 29u);
    for (const Fig3Row& row : rows) {
        ASSERT_LE(row.p95_abs_error_ft, 1e-12);
    }
}

TEST(Eval, RecordCardinalityAndFigureRows) {
    SynthParams synth;
    synth.n = 3;
    synth.seed = 31;
    const auto corpus = synth_corpus(synth);
    const EvalOptions opts = small_opts();
    const auto records = generate_records(corpus, opts);
    // Per maneuver: sum over p of |{h : p + h <= 30}| = 29+28+...+1 = 435.
    EXPECT_EQ(records.size(), 3u * 435u);

    const auto fig3 = aggregate_by_horizon(records, opts);
    EXPECT_EQ(fig3.size(), 3u * 29u);  // 3 models x 29 reachable horizons

    const auto fig5 = aggregate_by_history(records, opts, kFullHorizonBand, kFullPrefixPhase);
    EXPECT_EQ(fig5.size(), 3u * 3u);
    // History counts in trip order: 0, 1, 2.
    EXPECT_EQ(fig5[0].history_count, 0);
    EXPECT_EQ(fig5[1].history_count, 1);
    EXPECT_EQ(fig5[2].history_count, 2);
}

TEST(Eval, NoLeakageOnSynthCorpus) {
    SynthParams synth;
    synth.n = 4;
    synth.seed = 19;
    std::size_t leaks = 123;
    generate_records(synth_corpus(synth), small_opts(), &leaks);
    EXPECT_EQ(leaks, 0u);
}

TEST(Eval, Fig4BandRestrictsRecords) {
    SynthParams synth;
    synth.n = 2;
    synth.seed = 8;
    const EvalOptions opts = small_opts();
    const auto records = generate_records(synth_corpus(synth), opts);
    const auto fig4 = aggregate_by_history(records, opts, kFig4HorizonBand, kFig4PrefixPhase);
    // Eligible cells per maneuver: prefixes 1..10, horizons 20..30 with
    // p + h <= 30 -> sum_{p=1..10} (11 - p) = 10+9+...+1 = 55.
    for (const HistoryRow& row : fig4) {
        ASSERT_EQ(row.n_records, 55u);
    }
}

TEST(Eval, WorkerCountDoesNotChangeRecords) {
    SynthParams synth;
    synth.n = 3;
    synth.seed = 77;
    const auto corpus = synth_corpus(synth);
    EvalOptions opts = small_opts();
    opts.workers = 1;
    const auto serial = generate_records(corpus, opts);
    opts.workers = 3;
    const auto parallel = generate_records(corpus, opts);
    ASSERT_EQ(serial.size(), parallel.size());
    for (std::size_t i = 0; i < serial.size(); ++i) {
        ASSERT_EQ(serial[i].maneuver_id, parallel[i].maneuver_id);
        for (std::size_t f = 0; f < serial[i].mean.size(); ++f) {
            const bool both_nan = std::isnan(serial[i].mean[f]) && std::isnan(parallel[i].mean[f]);
            ASSERT_TRUE(both_nan || serial[i].mean[f] == parallel[i].mean[f]);
        }
    }
}

TEST(Eval, EmitReportIsByteDeterministic) {
    SynthParams synth;
    synth.n = 2;
    synth.seed = 3;
    const auto corpus = synth_corpus(synth);
    const EvalOptions opts = small_opts();

    ExperimentReport report;
    report.models = {"baseline", "gp", "compound"};
    const auto records = generate_records(corpus, opts, &report.leakage_violations);
    report.fig3 = aggregate_by_horizon(records, opts);
    report.fig4 = aggregate_by_history(records, opts, kFig4HorizonBand, kFig4PrefixPhase);
    report.fig5 = aggregate_by_history(records, opts, kFullHorizonBand, kFullPrefixPhase);
    report.config_echo = {"seed=5"};

    const fs::path dir_a = fresh_dir("emit_a");
    const fs::path dir_b = fresh_dir("emit_b");
    emit_report(report, dir_a);
    emit_report(report, dir_b);
    for (const char* name : {"fig3.csv", "fig4.csv", "fig5.csv", "summary.txt"}) {
        ASSERT_EQ(slurp(dir_a / name), slurp(dir_b / name)) << name;
    }
    fs::remove_all(dir_a);
    fs::remove_all(dir_b);
}

TEST(Eval, EmptyReportWritesHeaderOnlyFiles) {
    const fs::path dir = fresh_dir("empty");
    emit_report(ExperimentReport{}, dir);
    EXPECT_EQ(slurp(dir / "fig3.csv"), "model,horizon_s,reception_rate_hz,p95_abs_error_ft,n_records\n");
    EXPECT_EQ(slurp(dir / "fig4.csv"), "model,history_count,p95_abs_error_ft,n_records\n");
    const std::string summary = slurp(dir / "summary.txt");
    EXPECT_NE(summary.find("warning=empty report"), std::string::npos);
    fs::remove_all(dir);
}

TEST(Eval, RecordsCsvRoundTrip) {
    SynthParams synth;
    synth.n = 2;
    synth.seed = 12;
    const EvalOptions opts = small_opts();
    const auto records = generate_records(synth_corpus(synth), opts);
    std::vector<std::string> models = {"baseline", "gp", "compound"};

    const fs::path dir = fresh_dir("records");
    write_records_csv(dir / "records.csv", records, models);

    std::vector<std::string> loaded_models;
    const auto loaded = read_records_csv(dir / "records.csv", loaded_models);
    ASSERT_EQ(loaded_models, models);
    ASSERT_EQ(loaded.size(), records.size());
    for (std::size_t i = 0; i < records.size(); ++i) {
        ASSERT_EQ(loaded[i].maneuver_id, records[i].maneuver_id);
        ASSERT_EQ(loaded[i].history_count, records[i].history_count);
        ASSERT_EQ(loaded[i].prefix_samples, records[i].prefix_samples);
        ASSERT_EQ(loaded[i].horizon_samples, records[i].horizon_samples);
        ASSERT_EQ(loaded[i].truth, records[i].truth);
        for (std::size_t f = 0; f < models.size(); ++f) {
            const bool both_nan = std::isnan(loaded[i].mean[f]) && std::isnan(records[i].mean[f]);
            ASSERT_TRUE(both_nan || loaded[i].mean[f] == records[i].mean[f]);
        }
    }
    fs::remove_all(dir);
}

TEST(Eval, GridValidation) {
    EvaluationGrid grid = EvaluationGrid::defaults();
    EXPECT_NO_THROW(grid.validate());

    EvaluationGrid empty;
    EXPECT_THROW(empty.validate(), std::invalid_argument);

    EvaluationGrid out_of_range = EvaluationGrid::defaults();
    out_of_range.horizon_samples.push_back(31);
    EXPECT_THROW(out_of_range.validate(), std::invalid_argument);

    EvaluationGrid no_fit;
    no_fit.horizon_samples = {30};
    no_fit.prefix_samples = {5};
    EXPECT_THROW(no_fit.validate(), std::invalid_argument);
}

TEST(Eval, ThirtyHorizonReportHasNinetyRows) {
    // Cardinality rule: rows = models x horizons present. Hand-built records
    // covering all 30 horizons for 3 models.
    std::vector<ForecastRecord> records;
    for (int h = 1; h <= 30; ++h) {
        ForecastRecord rec;
        rec.maneuver_id = 1;
        rec.history_count = 0;
        rec.prefix_samples = 0;  // synthetic record, not grid-constrained
        rec.horizon_samples = h;
        rec.truth = 0.0;
        rec.mean = {1.0, 2.0, 3.0};
        rec.abs_error = {1.0, 2.0, 3.0};
        records.push_back(rec);
    }
    const auto rows = aggregate_by_horizon(records, {"baseline", "gp", "compound"}, false);
    EXPECT_EQ(rows.size(), 90u);
}

TEST(Eval, SweepWrappersFillTheirTables) {
    SynthParams synth;
    synth.n = 2;
    synth.seed = 42;
    const auto corpus = synth_corpus(synth);
    const EvalOptions opts = small_opts();

    const ExperimentReport horizon = run_horizon_sweep(corpus, opts);
    EXPECT_FALSE(horizon.fig3.empty());
    EXPECT_TRUE(horizon.fig4.empty());
    EXPECT_EQ(horizon.leakage_violations, 0u);
    EXPECT_GT(horizon.n_records, 0u);

    const ExperimentReport history = run_history_sweep(corpus, opts, kFig4HorizonBand, kFig4PrefixPhase);
    EXPECT_TRUE(history.fig3.empty());
    ASSERT_EQ(history.fig4.size(), 3u * 2u);  // 3 models x 2 maneuvers
    EXPECT_EQ(history.fig4[0].history_count, 0);
}

TEST(Eval, EmptyCorpusAndMissingForecastersRejected) {
    EvalOptions opts = small_opts();
    EXPECT_THROW(generate_records({}, opts), std::invalid_argument);
    opts.forecasters.clear();
    SynthParams synth;
    synth.n = 1;
    EXPECT_THROW(generate_records(synth_corpus(synth), opts), std::invalid_argument);
}
