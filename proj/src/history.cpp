#include "lanegp/history.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "lanegp/errors.hpp"
#include "lanegp/rng.hpp"

namespace lanegp {

void ManeuverBank::append_completed(const ManeuverWindow& maneuver) {
    const ManeuverWindow normalized = normalize(maneuver);
    TrainingSet own;
    own.append(normalized.id, normalized.samples);
    OptimizeSpec spec = fit_spec_;
    spec.seed = mix_seed(fit_spec_.seed, static_cast<std::uint64_t>(normalized.id));
    append_with_params(maneuver, optimize_hyperparams(own, default_init_, spec));
}

void ManeuverBank::append_with_params(const ManeuverWindow& maneuver, const LinearKernelParams& params) {
    for (const Entry& entry : entries_) {
        if (entry.window.id == maneuver.id) {
            throw DuplicateManeuver("maneuver id already in bank: " + std::to_string(maneuver.id));
        }
    }
    entries_.push_back({normalize(maneuver), params});
}

TrainingSet ManeuverBank::assemble_training_set(std::size_t count, std::span<const Observation> prefix,
                                                int current_id) const {
    if (count > entries_.size()) {
        throw std::invalid_argument("assemble_training_set: count exceeds bank size");
    }
    TrainingSet train;
    for (std::size_t i = 0; i < count; ++i) {
        train.append(entries_[i].window.id, entries_[i].window.samples);
    }
    train.append(current_id, prefix);
    return train;
}

LinearKernelParams ManeuverBank::warm_start_params(std::size_t count) const {
    if (count == 0) {
        return default_init_;
    }
    if (count > entries_.size()) {
        throw std::invalid_argument("warm_start_params: count exceeds bank size");
    }
    return entries_[count - 1].params;
}

std::string window_file_name(int id) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "maneuver_%04d.txt", id);
    return buf;
}

void ManeuverBank::save(const std::filesystem::path& dir) const {
    std::filesystem::create_directories(dir);
    std::vector<IndexEntry> index;
    index.reserve(entries_.size());
    for (const Entry& entry : entries_) {
        write_window_file(dir / window_file_name(entry.window.id), entry.window);
        index.push_back({entry.window.id, entry.params});
    }
    write_index_file(dir / "index.txt", index);
}

ManeuverBank ManeuverBank::load(const std::filesystem::path& dir, LinearKernelParams default_init,
                                OptimizeSpec fit_spec) {
    ManeuverBank bank(default_init, fit_spec);
    for (const IndexEntry& entry : read_index_file(dir / "index.txt")) {
        bank.append_with_params(read_window_file(dir / window_file_name(entry.id)), entry.params);
    }
    return bank;
}

void write_index_file(const std::filesystem::path& path, std::span<const IndexEntry> entries) {
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot open for writing: " + path.string());
    }
    for (const IndexEntry& entry : entries) {
        char buf[160];
        std::snprintf(buf, sizeof(buf), "id=%d sigma_l=%.17g c=%.17g noise_var=%.17g", entry.id,
                      entry.params.sigma_l, entry.params.c, entry.params.noise_var);
        out << buf << "\n";
    }
    if (!out) {
        throw IoError("write failed: " + path.string());
    }
}

std::vector<IndexEntry> read_index_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw FormatError("cannot open index file: " + path.string());
    }
    std::vector<IndexEntry> entries;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        IndexEntry entry;
        bool have_id = false;
        std::istringstream tokens(line);
        std::string token;
        while (tokens >> token) {
            const auto eq = token.find('=');
            if (eq == std::string::npos) {
                throw FormatError("bad index token '" + token + "' in " + path.string());
            }
            const std::string key = token.substr(0, eq);
            const std::string value = token.substr(eq + 1);
            try {
                if (key == "id") {
                    entry.id = std::stoi(value);
                    have_id = true;
                } else if (key == "sigma_l") {
                    entry.params.sigma_l = std::stod(value);
                } else if (key == "c") {
                    entry.params.c = std::stod(value);
                } else if (key == "noise_var") {
                    entry.params.noise_var = std::stod(value);
                } else {
                    throw FormatError("unknown index key '" + key + "' in " + path.string());
                }
            } catch (const std::invalid_argument&) {
                throw FormatError("bad index value in " + path.string() + ": " + token);
            }
        }
        if (!have_id) {
            throw FormatError("index row missing id in " + path.string());
        }
        entries.push_back(entry);
    }
    return entries;
}

}  // namespace lanegp
