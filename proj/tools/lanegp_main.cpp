#include <exception>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lanegp/cli_commands.hpp"
#include "lanegp/errors.hpp"

namespace {

std::string config_footer() {
    std::string footer = "Config keys (config file or --set key=value):\n";
    for (const std::string& line : lanegp::RunConfig::key_help()) {
        footer += "  " + line + "\n";
    }
    return footer;
}

int guarded(const std::function<int()>& command) {
    try {
        return command();
    } catch (const lanegp::FormatError& err) {
        std::cerr << "format error: " << err.what() << "\n";
        return lanegp::kExitFormat;
    } catch (const lanegp::TooManyBadRows& err) {
        std::cerr << "format error: " << err.what() << "\n";
        return lanegp::kExitFormat;
    } catch (const lanegp::ConfigError& err) {
        std::cerr << "config error: " << err.what() << "\n";
        return lanegp::kExitFailure;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return lanegp::kExitFailure;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Gaussian-process lane-change trajectory forecasting benchmark"};
    app.require_subcommand(1);
    app.fallthrough();  // --config / --set may follow the subcommand
    app.footer(config_footer());

    std::string config_file;
    std::vector<std::string> overrides;
    app.add_option("--config", config_file, "key=value config file")->expected(1);
    app.add_option("--set", overrides, "config override, key=value (repeatable)");

    const auto config = [&]() { return lanegp::build_config(config_file, overrides); };

    std::string input, corpus_dir, out_dir, records_csv;
    bool force = false;
    bool synth = false;

    CLI::App* extract = app.add_subcommand("extract", "extract validated lane-change windows from a trajectory file");
    extract->add_option("--input", input, "delimited trajectory file")->expected(1);
    extract->add_option("--out", out_dir, "corpus output directory")->required();
    extract->add_flag("--force", force, "overwrite an existing output directory");
    extract->add_flag("--synth", synth, "generate the synthetic corpus instead of reading --input");
    extract->callback([&]() {
        if (!synth && input.empty()) {
            throw CLI::ValidationError("extract", "--input is required unless --synth is given");
        }
    });

    CLI::App* synth_cmd = app.add_subcommand("synth", "generate a synthetic lane-change corpus");
    synth_cmd->add_option("--out", out_dir, "corpus output directory")->required();
    synth_cmd->add_option("--n", [&overrides](const std::vector<std::string>& vals) {
        overrides.push_back("synth_n=" + vals.at(0));
        return true;
    }, "corpus size (shorthand for --set synth_n=N)");
    synth_cmd->add_option("--seed", [&overrides](const std::vector<std::string>& vals) {
        overrides.push_back("synth_seed=" + vals.at(0));
        return true;
    }, "corpus seed (shorthand for --set synth_seed=N)");
    synth_cmd->add_flag("--force", force, "overwrite an existing output directory");

    CLI::App* evaluate = app.add_subcommand("evaluate", "run the forecast-horizon and history sweeps");
    evaluate->add_option("--corpus", corpus_dir, "corpus directory from extract/synth")->required();
    evaluate->add_option("--out", out_dir, "report output directory")->required();
    evaluate->add_option("--workers", [&overrides](const std::vector<std::string>& vals) {
        overrides.push_back("workers=" + vals.at(0));
        return true;
    }, "worker threads (shorthand for --set workers=N)");
    evaluate->add_option("--models", [&overrides](const std::vector<std::string>& vals) {
        overrides.push_back("models=" + vals.at(0));
        return true;
    }, "model list (shorthand for --set models=...)");
    evaluate->add_option("--seed", [&overrides](const std::vector<std::string>& vals) {
        overrides.push_back("seed=" + vals.at(0));
        return true;
    }, "evaluation seed (shorthand for --set seed=N)");
    evaluate->add_flag("--force", force, "overwrite an existing output directory");

    CLI::App* report = app.add_subcommand("report", "re-aggregate figure tables from records.csv");
    report->add_option("--records", records_csv, "records.csv from a previous evaluate run")->required();
    report->add_option("--out", out_dir, "report output directory")->required();
    report->add_flag("--force", force, "overwrite an existing output directory");

    CLI11_PARSE(app, argc, argv);

    if (extract->parsed()) {
        return guarded([&]() { return lanegp::cmd_extract(config(), input, out_dir, force, synth); });
    }
    if (synth_cmd->parsed()) {
        return guarded([&]() { return lanegp::cmd_synth(config(), out_dir, force); });
    }
    if (evaluate->parsed()) {
        return guarded([&]() { return lanegp::cmd_evaluate(config(), corpus_dir, out_dir, force); });
    }
    if (report->parsed()) {
        return guarded([&]() { return lanegp::cmd_report(config(), records_csv, out_dir, force); });
    }
    return lanegp::kExitFailure;
}
