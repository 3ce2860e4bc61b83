#include "lanegp/cli_commands.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>

#include "lanegp/errors.hpp"
#include "lanegp/history.hpp"
#include "lanegp/ingest.hpp"

namespace lanegp {

namespace fs = std::filesystem;

RunConfig build_config(const std::string& config_file, const std::vector<std::string>& overrides) {
    RunConfig config;
    if (!config_file.empty()) {
        config.load_file(config_file);
    }
    for (const std::string& assignment : overrides) {
        const auto eq = assignment.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("override must look like key=value: " + assignment);
        }
        config.set(assignment.substr(0, eq), assignment.substr(eq + 1));
    }
    return config;
}

std::vector<ManeuverWindow> load_corpus(const fs::path& dir) {
    std::vector<ManeuverWindow> corpus;
    const fs::path index = dir / "index.txt";
    if (fs::exists(index)) {
        for (const IndexEntry& entry : read_index_file(index)) {
            corpus.push_back(read_window_file(dir / window_file_name(entry.id)));
        }
        return corpus;
    }
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".txt" &&
            entry.path().filename().string().starts_with("maneuver_")) {
            files.push_back(entry.path());
        }
    }
    std::sort(files.begin(), files.end());
    for (const fs::path& file : files) {
        corpus.push_back(read_window_file(file));
    }
    return corpus;
}

namespace {

// Fit the model bank and persist windows + index in trip order.
void save_corpus(const RunConfig& config, const std::vector<ManeuverWindow>& windows,
                 const fs::path& out_dir) {
    const EvalOptions opts = config.eval_options();
    OptimizeSpec bank_fit = opts.bank_fit;
    bank_fit.seed = opts.seed;
    ManeuverBank bank(opts.default_init, bank_fit);
    for (const ManeuverWindow& window : windows) {
        window.validate(config.displacement_band());
        bank.append_completed(window);
    }
    bank.save(out_dir);
}

bool refuse_existing(const fs::path& out_dir, bool force) {
    if (fs::exists(out_dir) && !force) {
        std::cerr << "refusing to write into existing " << out_dir << " (use --force)\n";
        return true;
    }
    return false;
}

}  // namespace

int cmd_extract(const RunConfig& config, const std::string& input, const std::string& out_dir,
                bool force, bool synth) {
    if (synth) {
        return cmd_synth(config, out_dir, force);
    }
    if (refuse_existing(out_dir, force)) {
        return kExitRefuse;
    }
    const ParsedTrajectories parsed = parse_trajectories(input, config.column_map());
    const std::vector<ManeuverWindow> windows =
        extract_lane_changes(parsed, config.displacement_band());
    std::cout << "parsed " << parsed.total_rows << " rows (" << parsed.bad_rows
              << " malformed), extracted " << windows.size() << " lane-change windows\n";
    if (windows.empty()) {
        std::cerr << "no validated lane-change windows in " << input << "\n";
        return kExitEmpty;
    }
    save_corpus(config, windows, out_dir);
    std::cout << "wrote corpus to " << out_dir << "\n";
    return kExitOk;
}

int cmd_synth(const RunConfig& config, const std::string& out_dir, bool force) {
    if (refuse_existing(out_dir, force)) {
        return kExitRefuse;
    }
    const std::vector<ManeuverWindow> windows = synth_corpus(config.synth_params());
    save_corpus(config, windows, out_dir);
    std::cout << "wrote " << windows.size() << " synthetic maneuvers to " << out_dir << "\n";
    return kExitOk;
}

int cmd_evaluate(const RunConfig& config, const std::string& corpus_dir, const std::string& out_dir,
                 bool force) {
    if (refuse_existing(out_dir, force)) {
        return kExitRefuse;
    }
    const std::vector<ManeuverWindow> corpus = load_corpus(corpus_dir);
    if (corpus.empty()) {
        std::cerr << "empty corpus: " << corpus_dir << "\n";
        return kExitEmpty;
    }
    const EvalOptions opts = config.eval_options();

    ExperimentReport report;
    report.models.clear();
    for (const ForecasterSpec& f : opts.forecasters) {
        report.models.push_back(f.name());
    }
    const std::vector<ForecastRecord> records =
        generate_records(corpus, opts, &report.leakage_violations);
    report.fig3 = aggregate_by_horizon(records, opts);
    report.fig4 = aggregate_by_history(records, opts, kFig4HorizonBand, kFig4PrefixPhase);
    report.fig5 = aggregate_by_history(records, opts, kFullHorizonBand, kFullPrefixPhase);
    for (const ForecastRecord& rec : records) {
        for (double err : rec.abs_error) {
            if (std::isnan(err)) {
                ++report.n_failed;
            } else {
                ++report.n_records;
            }
        }
    }
    report.config_echo = config.echo();

    emit_report(report, out_dir);
    if (config.write_records) {
        write_records_csv(fs::path(out_dir) / "records.csv", records, report.models);
    }
    std::cout << "evaluated " << corpus.size() << " maneuvers, " << report.n_records
              << " records (" << report.n_failed << " failed); reports in " << out_dir << "\n";
    return kExitOk;
}

int cmd_report(const RunConfig& config, const std::string& records_csv, const std::string& out_dir,
               bool force) {
    if (refuse_existing(out_dir, force)) {
        return kExitRefuse;
    }
    ExperimentReport report;
    const std::vector<ForecastRecord> records = read_records_csv(records_csv, report.models);
    if (records.empty()) {
        std::cerr << "no records in " << records_csv << "\n";
        return kExitEmpty;
    }
    report.fig3 = aggregate_by_horizon(records, report.models, config.pool_per_maneuver);
    report.fig4 = aggregate_by_history(records, report.models, kFig4HorizonBand, kFig4PrefixPhase);
    report.fig5 = aggregate_by_history(records, report.models, kFullHorizonBand, kFullPrefixPhase);
    for (const ForecastRecord& rec : records) {
        for (double err : rec.abs_error) {
            if (!std::isnan(err)) {
                ++report.n_records;
            }
        }
    }
    report.config_echo = config.echo();
    emit_report(report, out_dir);
    std::cout << "re-aggregated " << records.size() << " records; reports in " << out_dir << "\n";
    return kExitOk;
}

}  // namespace lanegp
