#pragma once

#include <filesystem>
#include <vector>

#include "lanegp/gp.hpp"

namespace lanegp {

inline constexpr int kWindowSamples = 31;   // t = 0.0, 0.1, ..., 3.0
inline constexpr double kSampleDt = 0.1;    // 10 Hz
inline constexpr double kWindowSpan = 3.0;  // seconds

// Accepted |y(3.0) - y(0.0)| range for a true, complete lane change; brackets
// the typical US lane width.
struct DisplacementBand {
    double lo = 7.0;
    double hi = 14.0;

    bool contains(double displacement) const {
        const double d = displacement < 0 ? -displacement : displacement;
        return d >= lo && d <= hi;
    }
};

// One time-aligned 3 s lane-change segment: 31 lateral-position samples on
// the maneuver-local clock, the lane transition at t = 1.5 s.
struct ManeuverWindow {
    int id = 0;
    std::vector<Observation> samples;  // exactly kWindowSamples, uniform dt
    int direction = +1;                // sign of the raw lateral displacement
    double displacement = 0.0;         // y(3.0) - y(0.0), ft, current values
    long vehicle_id = 0;
    int lane_from = 0;
    int lane_to = 0;

    double sample_time(int k) const { return kSampleDt * k; }

    // Shape invariants: 31 samples, uniform 0.1 s grid from 0, finite y with
    // |y| <= 50 ft, displacement consistent with the samples and inside the
    // band. Throws std::invalid_argument.
    void validate(const DisplacementBand& band = {}) const;
};

// Shift so y(0) = 0 and flip so displacement > 0; `direction` keeps the raw
// sign so the transform stays invertible. Idempotent.
ManeuverWindow normalize(const ManeuverWindow& window);

// Plain-text maneuver-window file: `key=value` header lines (id, direction,
// displacement_ft, vehicle, lane_from, lane_to), then 31 `t y` rows.
void write_window_file(const std::filesystem::path& path, const ManeuverWindow& window);
ManeuverWindow read_window_file(const std::filesystem::path& path);

}  // namespace lanegp
