#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "lanegp/ingest.hpp"

using namespace lanegp;
namespace fs = std::filesystem;

namespace {

std::string cli_path() {
    const char* path = std::getenv("LANEGP_CLI");
    return path ? path : "";
}

int run_cli(const std::string& args) {
    const std::string cmd = cli_path() + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

fs::path fresh_dir(const char* tag) {
    const fs::path dir = fs::temp_directory_path() / (std::string("lanegp_cli_") + tag);
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

class CliTest : public ::testing::Test {
protected:
    void SetUp() override {
        if (cli_path().empty()) {
            GTEST_SKIP() << "LANEGP_CLI not set";
        }
    }
};

// Small corpora and budgets keep the subprocess runs quick.
const char* kFastSets = " --set refit_budget=12 --set bank_budget=40 --set bank_starts=2";

}  // namespace

TEST_F(CliTest, SynthIsDeterministicAndRefusesOverwrite) {
    const fs::path dir = fresh_dir("synth");
    const std::string corpus_a = (dir / "a").string();
    const std::string corpus_b = (dir / "b").string();
    ASSERT_EQ(run_cli("synth --out " + corpus_a + " --n 3 --seed 7"), 0);
    ASSERT_EQ(run_cli("synth --out " + corpus_b + " --n 3 --seed 7"), 0);
    for (const char* name : {"index.txt", "maneuver_0001.txt", "maneuver_0003.txt"}) {
        ASSERT_EQ(slurp(dir / "a" / name), slurp(dir / "b" / name)) << name;
    }
    // Existing directory without --force.
    EXPECT_EQ(run_cli("synth --out " + corpus_a + " --n 3 --seed 7"), 4);
    EXPECT_EQ(run_cli("synth --out " + corpus_a + " --n 3 --seed 7 --force"), 0);
    fs::remove_all(dir);
}

TEST_F(CliTest, ExtractFromRawFixture) {
    const fs::path dir = fresh_dir("extract");
    SynthParams synth;
    synth.n = 3;
    synth.seed = 15;
    write_raw_trajectories(dir / "rows.txt", synth_corpus(synth));

    const std::string corpus = (dir / "corpus").string();
    ASSERT_EQ(run_cli("extract --input " + (dir / "rows.txt").string() + " --out " + corpus), 0);
    EXPECT_TRUE(fs::exists(dir / "corpus" / "index.txt"));
    EXPECT_TRUE(fs::exists(dir / "corpus" / "maneuver_0001.txt"));
    EXPECT_TRUE(fs::exists(dir / "corpus" / "maneuver_0003.txt"));
    fs::remove_all(dir);
}

TEST_F(CliTest, ExtractSynthFlagMatchesSynthCommand) {
    const fs::path dir = fresh_dir("extsynth");
    ASSERT_EQ(run_cli("extract --synth --out " + (dir / "a").string() +
                      " --set synth_n=2 --set synth_seed=9"),
              0);
    ASSERT_EQ(run_cli("synth --out " + (dir / "b").string() + " --n 2 --seed 9"), 0);
    EXPECT_EQ(slurp(dir / "a" / "maneuver_0002.txt"), slurp(dir / "b" / "maneuver_0002.txt"));
    fs::remove_all(dir);
}

TEST_F(CliTest, ExtractErrorExitCodes) {
    const fs::path dir = fresh_dir("exterr");
    std::ofstream(dir / "empty.txt").close();
    EXPECT_EQ(run_cli("extract --input " + (dir / "empty.txt").string() + " --out " +
                      (dir / "c1").string()),
              2);

    // Lane-holding traffic parses fine but yields no maneuvers.
    std::ofstream rows(dir / "hold.txt");
    for (int i = 0; i < 80; ++i) {
        rows << "1 " << i << " 0 0 " << 5.0 + 0.01 * i << " 0 0 0 0 0 0 0 0 2\n";
    }
    rows.close();
    EXPECT_EQ(run_cli("extract --input " + (dir / "hold.txt").string() + " --out " +
                      (dir / "c2").string()),
              3);
    fs::remove_all(dir);
}

TEST_F(CliTest, EvaluateFiltersModelsAndIsDeterministic) {
    const fs::path dir = fresh_dir("evaluate");
    const std::string corpus = (dir / "corpus").string();
    ASSERT_EQ(run_cli("synth --out " + corpus + " --n 3 --seed 7"), 0);

    const std::string base_args = "evaluate --corpus " + corpus + kFastSets;
    ASSERT_EQ(run_cli(base_args + " --out " + (dir / "r1").string()), 0);
    ASSERT_EQ(run_cli(base_args + " --out " + (dir / "r2").string()), 0);
    ASSERT_EQ(run_cli(base_args + " --out " + (dir / "r3").string() + " --workers 2"), 0);
    for (const char* name : {"fig3.csv", "fig4.csv", "fig5.csv", "records.csv"}) {
        ASSERT_EQ(slurp(dir / "r1" / name), slurp(dir / "r2" / name)) << name;
        ASSERT_EQ(slurp(dir / "r1" / name), slurp(dir / "r3" / name)) << name;
    }

    ASSERT_EQ(run_cli(base_args + " --out " + (dir / "rb").string() + " --models baseline"), 0);
    std::istringstream fig3(slurp(dir / "rb" / "fig3.csv"));
    std::string line;
    std::getline(fig3, line);  // header
    std::size_t rows = 0;
    while (std::getline(fig3, line)) {
        if (line.empty()) continue;
        ASSERT_EQ(line.rfind("baseline,", 0), 0u) << line;
        ++rows;
    }
    EXPECT_EQ(rows, 29u);
    fs::remove_all(dir);
}

TEST_F(CliTest, EvaluateEmptyCorpusFails) {
    const fs::path dir = fresh_dir("evalempty");
    fs::create_directories(dir / "corpus");
    EXPECT_EQ(run_cli("evaluate --corpus " + (dir / "corpus").string() + " --out " +
                      (dir / "out").string()),
              3);
    fs::remove_all(dir);
}

TEST_F(CliTest, UnknownConfigKeyIsFatal) {
    const fs::path dir = fresh_dir("badkey");
    EXPECT_EQ(run_cli("synth --out " + (dir / "c").string() + " --set no_such_key=1"), 1);
    // Config file path with an unknown key is fatal too.
    std::ofstream config(dir / "run.cfg");
    config << "synth_n=2\nmystery=3\n";
    config.close();
    EXPECT_EQ(run_cli("synth --out " + (dir / "c").string() + " --config " + (dir / "run.cfg").string()),
              1);
    fs::remove_all(dir);
}

TEST_F(CliTest, ConfigFilePrecedenceBelowCliOverride) {
    const fs::path dir = fresh_dir("precedence");
    std::ofstream config(dir / "run.cfg");
    config << "# comment\nsynth_n = 2\nsynth_seed=5\n";
    config.close();
    ASSERT_EQ(run_cli("synth --out " + (dir / "a").string() + " --config " + (dir / "run.cfg").string() +
                      " --set synth_n=4"),
              0);
    EXPECT_TRUE(fs::exists(dir / "a" / "maneuver_0004.txt"));  // override won
    const std::string summary_free = slurp(dir / "a" / "index.txt");
    EXPECT_FALSE(summary_free.empty());
    fs::remove_all(dir);
}

TEST_F(CliTest, HelpDocumentsEveryConfigKey) {
    const fs::path dir = fresh_dir("help");
    const std::string cmd = cli_path() + " --help > " + (dir / "help.txt").string() + " 2>&1";
    std::system(cmd.c_str());
    const std::string help = slurp(dir / "help.txt");
    for (const char* key :
         {"col_vehicle_id", "disp_band_lo", "synth_noise_sigma", "init_sigma_l", "refit_budget",
          "compound_threshold", "velocity_window", "workers", "models", "seed", "pool_per_maneuver"}) {
        EXPECT_NE(help.find(key), std::string::npos) << key;
    }
    fs::remove_all(dir);
}

TEST_F(CliTest, ReportReaggregatesIdentically) {
    const fs::path dir = fresh_dir("report");
    const std::string corpus = (dir / "corpus").string();
    ASSERT_EQ(run_cli("synth --out " + corpus + " --n 3 --seed 11"), 0);
    ASSERT_EQ(run_cli("evaluate --corpus " + corpus + " --out " + (dir / "r").string() + kFastSets), 0);
    ASSERT_EQ(run_cli("report --records " + (dir / "r" / "records.csv").string() + " --out " +
                      (dir / "r2").string()),
              0);
    for (const char* name : {"fig3.csv", "fig4.csv", "fig5.csv"}) {
        ASSERT_EQ(slurp(dir / "r" / name), slurp(dir / "r2" / name)) << name;
    }
    fs::remove_all(dir);
}
