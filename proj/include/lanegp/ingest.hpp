#pragma once

#include <cstdint>
#include <filesystem>
#include <utility>
#include <vector>

#include "lanegp/maneuver.hpp"

namespace lanegp {

// Column indices into a delimited trajectory file. Defaults match the public
// US-101 column order (Vehicle_ID, Frame_ID, ..., Local_X at 4, Lane_ID at 13).
struct ColumnMap {
    int vehicle_id = 0;
    int frame_id = 1;
    int lateral = 4;
    int lane_id = 13;

    int max_index() const;
};

struct RawTrajectoryRow {
    long vehicle_id = 0;
    long frame_id = 0;  // 10 Hz ticks
    double lateral_pos = 0.0;
    int lane_id = 0;
};

struct ParsedTrajectories {
    // Grouped by vehicle (ascending id), rows frame-sorted and de-duplicated.
    std::vector<std::pair<long, std::vector<RawTrajectoryRow>>> vehicles;
    std::size_t total_rows = 0;  // data lines seen
    std::size_t bad_rows = 0;    // malformed / duplicate-frame lines dropped
};

// Whitespace- or comma-delimited text; an unparsable first line is treated
// as a header. Throws FormatError on an empty/unreadable file, TooManyBadRows
// when more than 1% of data lines fail.
ParsedTrajectories parse_trajectories(const std::filesystem::path& path, const ColumnMap& columns = {});

// Emit a 31-frame window around every lane_id transition that has full
// context, no second transition, no frame gap, and a displacement inside the
// band. Window ids are assigned sequentially in (vehicle, frame) order.
std::vector<ManeuverWindow> extract_lane_changes(const ParsedTrajectories& rows,
                                                 const DisplacementBand& band = {});

// Synthetic lane-change corpus: logistic transitions with jittered amplitude,
// midpoint and steepness plus white observation noise. Deterministic per
// seed; every window passes extraction validation.
struct SynthParams {
    int n = 40;
    std::uint64_t seed = 7;
    double noise_sigma = 0.2;   // ft
    double shape_jitter = 1.0;  // 0 = identical maneuvers, 1 = full spread
};

std::vector<ManeuverWindow> synth_corpus(const SynthParams& params);

// Serialize windows back to the raw trajectory format (one vehicle per
// window, lane flip at the center frame). Fixture generator for the
// parse -> extract round trip.
void write_raw_trajectories(const std::filesystem::path& path, const std::vector<ManeuverWindow>& windows,
                            const ColumnMap& columns = {});

}  // namespace lanegp
