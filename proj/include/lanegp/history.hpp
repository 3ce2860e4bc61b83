#pragma once

#include <filesystem>
#include <span>
#include <vector>

#include "lanegp/maneuver.hpp"
#include "lanegp/optimize.hpp"

namespace lanegp {

// Append-only bank of completed maneuvers in trip order, plus per-maneuver
// fitted kernel params (the model bank). Training sets for the i-th maneuver
// are assembled from the previous i-1 entries. Reads are thread-safe with no
// writer; the evaluation driver owns writes.
class ManeuverBank {
public:
    ManeuverBank(LinearKernelParams default_init, OptimizeSpec fit_spec)
        : default_init_(default_init), fit_spec_(fit_spec) {}

    // Stores the normalized window and hyperparameters fitted to it alone.
    // Throws DuplicateManeuver on id collision.
    void append_completed(const ManeuverWindow& maneuver);

    // Same, with precomputed params (persistence load path).
    void append_with_params(const ManeuverWindow& maneuver, const LinearKernelParams& params);

    std::size_t size() const { return entries_.size(); }
    const ManeuverWindow& maneuver(std::size_t index) const { return entries_.at(index).window; }
    const LinearKernelParams& fitted_params(std::size_t index) const { return entries_.at(index).params; }

    // Observations of the first `count` maneuvers (bank order, then time),
    // then the ongoing prefix tagged with `current_id`.
    TrainingSet assemble_training_set(std::size_t count, std::span<const Observation> prefix,
                                      int current_id) const;

    // count = 0 returns the default init; otherwise the params fitted to
    // maneuver `count` (1-based: the most recent relevant one).
    LinearKernelParams warm_start_params(std::size_t count) const;

    const LinearKernelParams& default_init() const { return default_init_; }

    // One window file per maneuver plus an index of ids and fitted params.
    void save(const std::filesystem::path& dir) const;
    static ManeuverBank load(const std::filesystem::path& dir, LinearKernelParams default_init,
                             OptimizeSpec fit_spec);

private:
    struct Entry {
        ManeuverWindow window;
        LinearKernelParams params;
    };

    LinearKernelParams default_init_;
    OptimizeSpec fit_spec_;
    std::vector<Entry> entries_;
};

// Index-file helpers shared with the CLI (plain text, one `key=value` token
// row per maneuver in trip order).
struct IndexEntry {
    int id = 0;
    LinearKernelParams params;
};

void write_index_file(const std::filesystem::path& path, std::span<const IndexEntry> entries);
std::vector<IndexEntry> read_index_file(const std::filesystem::path& path);

std::string window_file_name(int id);

}  // namespace lanegp
