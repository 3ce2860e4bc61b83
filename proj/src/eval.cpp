#include "lanegp/eval.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <tuple>

#include "lanegp/errors.hpp"
#include "lanegp/rng.hpp"

namespace lanegp {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string fmt6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string fmt_time(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.1f", v);
    return buf;
}

}  // namespace

EvaluationGrid EvaluationGrid::defaults() {
    EvaluationGrid grid;
    for (int h = 1; h <= 30; ++h) grid.horizon_samples.push_back(h);
    for (int p = 1; p <= 29; ++p) grid.prefix_samples.push_back(p);
    return grid;
}

void EvaluationGrid::validate() const {
    if (horizon_samples.empty() || prefix_samples.empty()) {
        throw std::invalid_argument("EvaluationGrid: empty horizon or prefix list");
    }
    for (std::size_t i = 0; i < horizon_samples.size(); ++i) {
        if (horizon_samples[i] < 1 || horizon_samples[i] > 30 ||
            (i > 0 && horizon_samples[i] <= horizon_samples[i - 1])) {
            throw std::invalid_argument("EvaluationGrid: horizons must increase strictly within 1..30 samples");
        }
    }
    for (std::size_t i = 0; i < prefix_samples.size(); ++i) {
        if (prefix_samples[i] < 1 || prefix_samples[i] > 29 ||
            (i > 0 && prefix_samples[i] <= prefix_samples[i - 1])) {
            throw std::invalid_argument("EvaluationGrid: prefixes must increase strictly within 1..29 samples");
        }
    }
    if (prefix_samples.front() + horizon_samples.front() > 30) {
        throw std::invalid_argument("EvaluationGrid: no (prefix, horizon) pair fits inside the window");
    }
}

EvalOptions EvalOptions::defaults() {
    EvalOptions opts;
    opts.forecasters = {
        {ForecasterKind::ConstantSpeed, 1.0, 2},
        {ForecasterKind::Gp, 1.0, 2},
        {ForecasterKind::Compound, 1.0, 2},
    };
    opts.bank_fit.budget = 240;
    opts.bank_fit.starts = 8;
    opts.refit.budget = 50;
    opts.refit.starts = 1;
    return opts;
}

double reception_rate(double horizon_s) {
    if (horizon_s < 0.1 - 1e-9 || horizon_s > 3.0 + 1e-9) {
        throw std::invalid_argument("reception_rate: horizon must lie in [0.1, 3.0] s");
    }
    return 1.0 / (horizon_s + 0.1);
}

double p95_abs_error(std::vector<double> errors) {
    if (errors.empty()) {
        throw EmptyInput("p95_abs_error: empty error list");
    }
    std::sort(errors.begin(), errors.end());
    const auto n = errors.size();
    const auto rank = static_cast<std::size_t>(std::ceil(0.95 * static_cast<double>(n)));
    return errors[std::min(n, std::max<std::size_t>(rank, 1)) - 1];
}

namespace {

struct ManeuverEvalResult {
    std::vector<ForecastRecord> records;
    std::size_t leakage_violations = 0;
};

ManeuverEvalResult evaluate_maneuver(std::size_t index, const ManeuverBank& bank, const EvalOptions& opts) {
    const ManeuverWindow& window = bank.maneuver(index);
    const int id = window.id;
    const int history_count = static_cast<int>(index);

    bool want_baseline = false, want_gp = false;
    int velocity_window = 2;
    for (const ForecasterSpec& f : opts.forecasters) {
        if (f.kind != ForecasterKind::Gp) {
            if (!want_baseline) velocity_window = f.velocity_window;
            want_baseline = true;
        }
        want_gp |= f.kind != ForecasterKind::ConstantSpeed;
    }

    std::set<int> history_ids;
    for (std::size_t i = 0; i < index; ++i) {
        history_ids.insert(bank.maneuver(i).id);
    }
    const TrainingSet history = bank.assemble_training_set(index, std::span<const Observation>{}, id);

    ManeuverEvalResult result;
    LinearKernelParams current = bank.warm_start_params(index);

    for (int p : opts.grid.prefix_samples) {
        std::vector<int> horizons;
        for (int h : opts.grid.horizon_samples) {
            if (p + h <= kWindowSamples - 1) {
                horizons.push_back(h);
            }
        }
        if (horizons.empty()) {
            continue;
        }

        ForecastRequest req;
        req.observed.assign(window.samples.begin(), window.samples.begin() + p + 1);
        for (int h : horizons) {
            req.horizons.push_back(kSampleDt * h);
        }

        // Structural no-leakage audit on the exact training composition.
        {
            const TrainingSet combined = bank.assemble_training_set(index, req.observed, id);
            const double prefix_end = kSampleDt * p;
            for (const TaggedObservation& o : combined.obs) {
                if (o.maneuver_id == id) {
                    if (o.t > prefix_end + 1e-9) {
                        ++result.leakage_violations;
                    }
                } else if (!history_ids.contains(o.maneuver_id)) {
                    ++result.leakage_violations;
                }
            }
        }

        std::vector<Prediction> baseline_preds;
        if (want_baseline) {
            baseline_preds = constant_speed_forecast(req, velocity_window);
        }

        bool gp_ok = false;
        GpForecastResult gp_result;
        if (want_gp) {
            OptimizeSpec refit = opts.refit;
            refit.seed = mix_seed(mix_seed(opts.seed ^ 0xA5A5A5A5A5A5A5A5ULL, static_cast<std::uint64_t>(id)),
                                  static_cast<std::uint64_t>(p));
            try {
                gp_result = gp_forecast(req, history, current, refit, id);
                current = gp_result.fitted;
                gp_ok = true;
            } catch (const FactorizationFailure&) {
            } catch (const OptimizationDiverged&) {
            }
        }

        for (std::size_t hi = 0; hi < horizons.size(); ++hi) {
            const int h = horizons[hi];
            ForecastRecord rec;
            rec.maneuver_id = id;
            rec.history_count = history_count;
            rec.prefix_samples = p;
            rec.horizon_samples = h;
            rec.truth = window.samples[static_cast<std::size_t>(p + h)].y;
            rec.mean.reserve(opts.forecasters.size());
            rec.abs_error.reserve(opts.forecasters.size());
            for (const ForecasterSpec& f : opts.forecasters) {
                double mean = kNaN;
                switch (f.kind) {
                    case ForecasterKind::ConstantSpeed:
                        mean = baseline_preds[hi].mean;
                        break;
                    case ForecasterKind::Gp:
                        if (gp_ok) mean = gp_result.predictions[hi].mean;
                        break;
                    case ForecasterKind::Compound:
                        if (kSampleDt * h < f.compound_threshold) {
                            mean = baseline_preds[hi].mean;
                        } else if (gp_ok) {
                            mean = gp_result.predictions[hi].mean;
                        }
                        break;
                }
                rec.mean.push_back(mean);
                rec.abs_error.push_back(std::isnan(mean) ? kNaN : std::abs(mean - rec.truth));
            }
            result.records.push_back(std::move(rec));
        }
    }
    return result;
}

std::vector<std::string> model_names(const EvalOptions& opts) {
    std::vector<std::string> names;
    names.reserve(opts.forecasters.size());
    for (const ForecasterSpec& f : opts.forecasters) {
        names.push_back(f.name());
    }
    return names;
}

}  // namespace

std::vector<ForecastRecord> generate_records(const std::vector<ManeuverWindow>& corpus,
                                             const EvalOptions& opts, std::size_t* leakage_violations) {
    opts.grid.validate();
    if (opts.forecasters.empty()) {
        throw std::invalid_argument("generate_records: no forecasters selected");
    }
    if (corpus.empty()) {
        throw std::invalid_argument("generate_records: empty corpus");
    }

    OptimizeSpec bank_fit = opts.bank_fit;
    bank_fit.seed = opts.seed;
    ManeuverBank bank(opts.default_init, bank_fit);
    for (const ManeuverWindow& window : corpus) {
        window.validate(opts.band);
        bank.append_completed(window);
    }

    const std::size_t n = corpus.size();
    std::vector<ManeuverEvalResult> partial(n);
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;

    const unsigned hw = std::thread::hardware_concurrency();
    const std::size_t n_workers =
        std::min<std::size_t>(n, opts.workers > 0 ? static_cast<std::size_t>(opts.workers)
                                                  : std::max(1u, hw));

    auto work = [&]() {
        for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
            try {
                partial[i] = evaluate_maneuver(i, bank, opts);
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        }
    };

    if (n_workers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n_workers);
        for (std::size_t w = 0; w < n_workers; ++w) pool.emplace_back(work);
        for (std::thread& t : pool) t.join();
    }
    if (failure) {
        std::rethrow_exception(failure);
    }

    std::vector<ForecastRecord> records;
    std::size_t leaks = 0;
    for (ManeuverEvalResult& part : partial) {
        leaks += part.leakage_violations;
        for (ForecastRecord& rec : part.records) {
            records.push_back(std::move(rec));
        }
    }
    if (leakage_violations) {
        *leakage_violations = leaks;
    }
    return records;
}

std::vector<Fig3Row> aggregate_by_horizon(const std::vector<ForecastRecord>& records,
                                          const std::vector<std::string>& names,
                                          bool pool_per_maneuver) {
    std::set<int> horizon_set;
    for (const ForecastRecord& rec : records) {
        horizon_set.insert(rec.horizon_samples);
    }

    std::vector<Fig3Row> rows;
    for (std::size_t f = 0; f < names.size(); ++f) {
        for (int h : horizon_set) {
            std::vector<double> pooled;
            std::map<int, std::vector<double>> per_maneuver;
            for (const ForecastRecord& rec : records) {
                if (rec.horizon_samples != h || f >= rec.abs_error.size()) continue;
                const double err = rec.abs_error[f];
                if (std::isnan(err)) continue;
                if (pool_per_maneuver) {
                    per_maneuver[rec.maneuver_id].push_back(err);
                } else {
                    pooled.push_back(err);
                }
            }
            double value;
            std::size_t count;
            if (pool_per_maneuver) {
                if (per_maneuver.empty()) continue;
                double sum = 0;
                count = 0;
                for (auto& [mid, errs] : per_maneuver) {
                    sum += p95_abs_error(errs);
                    count += errs.size();
                }
                value = sum / static_cast<double>(per_maneuver.size());
            } else {
                if (pooled.empty()) continue;
                count = pooled.size();
                value = p95_abs_error(std::move(pooled));
            }
            rows.push_back({names[f], h, reception_rate(kSampleDt * h), value, count});
        }
    }
    return rows;
}

std::vector<Fig3Row> aggregate_by_horizon(const std::vector<ForecastRecord>& records,
                                          const EvalOptions& opts) {
    return aggregate_by_horizon(records, model_names(opts), opts.pool_per_maneuver);
}

std::vector<HistoryRow> aggregate_by_history(const std::vector<ForecastRecord>& records,
                                             const std::vector<std::string>& names,
                                             const SampleRange& horizon_band,
                                             const SampleRange& prefix_phase) {
    // Trip order = record order.
    std::vector<int> history_counts;
    std::set<int> seen;
    for (const ForecastRecord& rec : records) {
        if (seen.insert(rec.history_count).second) {
            history_counts.push_back(rec.history_count);
        }
    }

    std::vector<HistoryRow> rows;
    for (std::size_t f = 0; f < names.size(); ++f) {
        for (int hc : history_counts) {
            std::vector<double> errors;
            for (const ForecastRecord& rec : records) {
                if (rec.history_count != hc || f >= rec.abs_error.size()) continue;
                if (!horizon_band.contains(rec.horizon_samples)) continue;
                if (!prefix_phase.contains(rec.prefix_samples)) continue;
                const double err = rec.abs_error[f];
                if (!std::isnan(err)) errors.push_back(err);
            }
            if (errors.empty()) continue;
            const std::size_t count = errors.size();
            rows.push_back({names[f], hc, p95_abs_error(std::move(errors)), count});
        }
    }
    return rows;
}

std::vector<HistoryRow> aggregate_by_history(const std::vector<ForecastRecord>& records,
                                             const EvalOptions& opts, const SampleRange& horizon_band,
                                             const SampleRange& prefix_phase) {
    return aggregate_by_history(records, model_names(opts), horizon_band, prefix_phase);
}

namespace {

void count_cells(const std::vector<ForecastRecord>& records, ExperimentReport& report) {
    for (const ForecastRecord& rec : records) {
        for (double err : rec.abs_error) {
            if (std::isnan(err)) {
                ++report.n_failed;
            } else {
                ++report.n_records;
            }
        }
    }
}

}  // namespace

ExperimentReport run_horizon_sweep(const std::vector<ManeuverWindow>& corpus, const EvalOptions& opts) {
    ExperimentReport report;
    report.models = model_names(opts);
    const auto records = generate_records(corpus, opts, &report.leakage_violations);
    report.fig3 = aggregate_by_horizon(records, opts);
    count_cells(records, report);
    return report;
}

ExperimentReport run_history_sweep(const std::vector<ManeuverWindow>& corpus, const EvalOptions& opts,
                                   const SampleRange& horizon_band, const SampleRange& prefix_phase) {
    ExperimentReport report;
    report.models = model_names(opts);
    const auto records = generate_records(corpus, opts, &report.leakage_violations);
    report.fig4 = aggregate_by_history(records, opts, horizon_band, prefix_phase);
    count_cells(records, report);
    return report;
}

ExperimentReport run_experiment(const std::vector<ManeuverWindow>& corpus, const EvalOptions& opts) {
    ExperimentReport report;
    report.models = model_names(opts);
    const auto records = generate_records(corpus, opts, &report.leakage_violations);
    report.fig3 = aggregate_by_horizon(records, opts);
    report.fig4 = aggregate_by_history(records, opts, kFig4HorizonBand, kFig4PrefixPhase);
    report.fig5 = aggregate_by_history(records, opts, kFullHorizonBand, kFullPrefixPhase);
    count_cells(records, report);
    return report;
}

void emit_report(const ExperimentReport& report, const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);

    {
        std::ofstream out(out_dir / "fig3.csv");
        if (!out) throw IoError("cannot write fig3.csv in " + out_dir.string());
        out << "model,horizon_s,reception_rate_hz,p95_abs_error_ft,n_records\n";
        for (const Fig3Row& row : report.fig3) {
            out << row.model << ',' << fmt6(kSampleDt * row.horizon_samples) << ','
                << fmt6(row.reception_rate_hz) << ',' << fmt6(row.p95_abs_error_ft) << ','
                << row.n_records << "\n";
        }
    }
    const auto write_history = [&](const std::filesystem::path& name, const std::vector<HistoryRow>& rows) {
        std::ofstream out(out_dir / name);
        if (!out) throw IoError("cannot write " + name.string() + " in " + out_dir.string());
        out << "model,history_count,p95_abs_error_ft,n_records\n";
        for (const HistoryRow& row : rows) {
            out << row.model << ',' << row.history_count << ',' << fmt6(row.p95_abs_error_ft) << ','
                << row.n_records << "\n";
        }
    };
    write_history("fig4.csv", report.fig4);
    write_history("fig5.csv", report.fig5);

    std::ofstream out(out_dir / "summary.txt");
    if (!out) throw IoError("cannot write summary.txt in " + out_dir.string());
    out << "# run configuration\n";
    for (const std::string& line : report.config_echo) {
        out << line << "\n";
    }
    out << "# results\n";
    out << "models=";
    for (std::size_t i = 0; i < report.models.size(); ++i) {
        out << (i ? "," : "") << report.models[i];
    }
    out << "\n";
    out << "records_scored=" << report.n_records << "\n";
    out << "records_failed=" << report.n_failed << "\n";
    out << "leakage_violations=" << report.leakage_violations << "\n";
    if (report.n_records == 0) {
        out << "warning=empty report\n";
    }
}

void write_records_csv(const std::filesystem::path& path, const std::vector<ForecastRecord>& records,
                       const std::vector<std::string>& models) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write records csv: " + path.string());
    out << "maneuver_id,history_count,prefix_end_s,horizon_s,model,truth_ft,mean_ft,abs_error_ft\n";
    for (const ForecastRecord& rec : records) {
        for (std::size_t f = 0; f < models.size() && f < rec.mean.size(); ++f) {
            if (std::isnan(rec.mean[f])) continue;
            out << rec.maneuver_id << ',' << rec.history_count << ',' << fmt_time(rec.prefix_end_s())
                << ',' << fmt_time(rec.horizon_s()) << ',' << models[f] << ',' << fmt17(rec.truth)
                << ',' << fmt17(rec.mean[f]) << ',' << fmt17(rec.abs_error[f]) << "\n";
        }
    }
    if (!out) throw IoError("write failed: " + path.string());
}

std::vector<ForecastRecord> read_records_csv(const std::filesystem::path& path,
                                             std::vector<std::string>& models_out) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open records csv: " + path.string());

    models_out.clear();
    std::vector<ForecastRecord> records;
    std::map<std::tuple<int, int, int>, std::size_t> record_index;

    std::string line;
    if (!std::getline(in, line)) {
        throw FormatError("empty records csv: " + path.string());
    }
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string field;
        std::vector<std::string> fields;
        while (std::getline(row, field, ',')) {
            fields.push_back(field);
        }
        if (fields.size() != 8) {
            throw FormatError("bad records row: " + line);
        }
        try {
            const int maneuver_id = std::stoi(fields[0]);
            const int history_count = std::stoi(fields[1]);
            const int prefix = static_cast<int>(std::lround(std::stod(fields[2]) * 10.0));
            const int horizon = static_cast<int>(std::lround(std::stod(fields[3]) * 10.0));
            const std::string& model = fields[4];
            const double truth = std::stod(fields[5]);
            const double mean = std::stod(fields[6]);
            const double abs_error = std::stod(fields[7]);

            std::size_t model_idx = models_out.size();
            for (std::size_t i = 0; i < models_out.size(); ++i) {
                if (models_out[i] == model) {
                    model_idx = i;
                    break;
                }
            }
            if (model_idx == models_out.size()) {
                models_out.push_back(model);
            }

            const auto key = std::make_tuple(maneuver_id, prefix, horizon);
            auto it = record_index.find(key);
            if (it == record_index.end()) {
                it = record_index.emplace(key, records.size()).first;
                ForecastRecord rec;
                rec.maneuver_id = maneuver_id;
                rec.history_count = history_count;
                rec.prefix_samples = prefix;
                rec.horizon_samples = horizon;
                rec.truth = truth;
                records.push_back(std::move(rec));
            }
            ForecastRecord& rec = records[it->second];
            if (rec.mean.size() <= model_idx) {
                rec.mean.resize(model_idx + 1, kNaN);
                rec.abs_error.resize(model_idx + 1, kNaN);
            }
            rec.mean[model_idx] = mean;
            rec.abs_error[model_idx] = abs_error;
        } catch (const std::invalid_argument&) {
            throw FormatError("bad records row: " + line);
        }
    }
    for (ForecastRecord& rec : records) {
        rec.mean.resize(models_out.size(), kNaN);
        rec.abs_error.resize(models_out.size(), kNaN);
    }
    return records;
}

}  // namespace lanegp
