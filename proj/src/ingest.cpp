#include "lanegp/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>

#include "lanegp/errors.hpp"
#include "lanegp/rng.hpp"

namespace lanegp {

int ColumnMap::max_index() const {
    return std::max({vehicle_id, frame_id, lateral, lane_id});
}

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == ',' || line[i] == '\r')) {
            ++i;
        }
        std::size_t start = i;
        while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != ',' && line[i] != '\r') {
            ++i;
        }
        if (i > start) {
            fields.push_back(line.substr(start, i - start));
        }
    }
    return fields;
}

bool parse_field(std::string_view field, double& out) {
    const char* begin = field.data();
    const char* end = begin + field.size();
    auto [ptr, ec] = std::from_chars(begin, end, out);
    return ec == std::errc{} && ptr == end && std::isfinite(out);
}

bool parse_row(const std::vector<std::string_view>& fields, const ColumnMap& columns, RawTrajectoryRow& row) {
    if (static_cast<int>(fields.size()) <= columns.max_index()) {
        return false;
    }
    double vehicle = 0, frame = 0, lateral = 0, lane = 0;
    if (!parse_field(fields[static_cast<std::size_t>(columns.vehicle_id)], vehicle) ||
        !parse_field(fields[static_cast<std::size_t>(columns.frame_id)], frame) ||
        !parse_field(fields[static_cast<std::size_t>(columns.lateral)], lateral) ||
        !parse_field(fields[static_cast<std::size_t>(columns.lane_id)], lane)) {
        return false;
    }
    row.vehicle_id = static_cast<long>(vehicle);
    row.frame_id = static_cast<long>(frame);
    row.lateral_pos = lateral;
    row.lane_id = static_cast<int>(lane);
    return true;
}

}  // namespace

ParsedTrajectories parse_trajectories(const std::filesystem::path& path, const ColumnMap& columns) {
    std::ifstream in(path);
    if (!in) {
        throw FormatError("cannot open trajectory file: " + path.string());
    }

    ParsedTrajectories parsed;
    std::map<long, std::vector<RawTrajectoryRow>> by_vehicle;
    std::size_t parsed_ok = 0;
    bool first_line = true;
    std::string line;
    while (std::getline(in, line)) {
        const auto fields = split_fields(line);
        if (fields.empty()) {
            continue;
        }
        RawTrajectoryRow row;
        const bool ok = parse_row(fields, columns, row);
        if (first_line) {
            first_line = false;
            if (!ok) {
                continue;  // header line
            }
        }
        ++parsed.total_rows;
        if (!ok) {
            ++parsed.bad_rows;
            continue;
        }
        ++parsed_ok;
        by_vehicle[row.vehicle_id].push_back(row);
    }

    if (parsed.total_rows == 0 && first_line) {
        throw FormatError("empty trajectory file: " + path.string());
    }
    if (parsed.total_rows > 0 && parsed_ok == 0) {
        throw FormatError("no parsable rows (wrong delimiter or column map?): " + path.string());
    }

    for (auto& [vehicle, rows] : by_vehicle) {
        std::stable_sort(rows.begin(), rows.end(),
                         [](const RawTrajectoryRow& a, const RawTrajectoryRow& b) { return a.frame_id < b.frame_id; });
        std::vector<RawTrajectoryRow> unique_rows;
        unique_rows.reserve(rows.size());
        for (const RawTrajectoryRow& row : rows) {
            if (!unique_rows.empty() && unique_rows.back().frame_id == row.frame_id) {
                ++parsed.bad_rows;  // duplicate frame, keep the first
                continue;
            }
            unique_rows.push_back(row);
        }
        parsed.vehicles.emplace_back(vehicle, std::move(unique_rows));
    }

    if (static_cast<double>(parsed.bad_rows) > 0.01 * static_cast<double>(parsed.total_rows)) {
        throw TooManyBadRows("more than 1% malformed rows in " + path.string());
    }
    return parsed;
}

std::vector<ManeuverWindow> extract_lane_changes(const ParsedTrajectories& parsed, const DisplacementBand& band) {
    constexpr int kHalf = kWindowSamples / 2;  // 15 frames each side
    std::vector<ManeuverWindow> windows;
    int next_id = 1;
    for (const auto& [vehicle, rows] : parsed.vehicles) {
        for (std::size_t j = 1; j < rows.size(); ++j) {
            if (rows[j].lane_id == rows[j - 1].lane_id) {
                continue;
            }
            // Transition at the first frame of the new lane.
            if (j < kHalf || j + kHalf >= rows.size()) {
                continue;
            }
            const std::size_t base = j - kHalf;
            bool ok = true;
            for (int k = 0; k < kWindowSamples && ok; ++k) {
                ok = rows[base + static_cast<std::size_t>(k)].frame_id == rows[base].frame_id + k;
            }
            if (!ok) {
                continue;  // frame gap inside the window
            }
            for (std::size_t k = base; k < j && ok; ++k) {
                ok = rows[k].lane_id == rows[j - 1].lane_id;
            }
            for (std::size_t k = j; k <= j + kHalf && ok; ++k) {
                ok = rows[k].lane_id == rows[j].lane_id;
            }
            if (!ok) {
                continue;  // second transition inside the window
            }
            const double displacement = rows[j + kHalf].lateral_pos - rows[j - kHalf].lateral_pos;
            if (!band.contains(displacement)) {
                continue;
            }
            ManeuverWindow window;
            window.id = next_id++;
            window.samples.reserve(kWindowSamples);
            for (int k = 0; k < kWindowSamples; ++k) {
                window.samples.push_back({kSampleDt * k, rows[j - kHalf + static_cast<std::size_t>(k)].lateral_pos});
            }
            window.direction = displacement < 0 ? -1 : +1;
            window.displacement = displacement;
            window.vehicle_id = vehicle;
            window.lane_from = rows[j - 1].lane_id;
            window.lane_to = rows[j].lane_id;
            windows.push_back(std::move(window));
        }
    }
    return windows;
}

std::vector<ManeuverWindow> synth_corpus(const SynthParams& params) {
    if (params.n < 1) {
        throw std::invalid_argument("synth_corpus: n must be >= 1");
    }
    if (params.noise_sigma < 0 || params.shape_jitter < 0) {
        throw std::invalid_argument("synth_corpus: noise_sigma and shape_jitter must be >= 0");
    }
    const DisplacementBand band;
    std::vector<ManeuverWindow> corpus;
    corpus.reserve(static_cast<std::size_t>(params.n));
    for (int j = 0; j < params.n; ++j) {
        SplitMix64 rng(mix_seed(params.seed, static_cast<std::uint64_t>(j)));
        const double amplitude = 10.0 + 1.5 * params.shape_jitter * rng.uniform(-1.0, 1.0);
        const double midpoint = 1.5 + 0.15 * params.shape_jitter * rng.uniform(-1.0, 1.0);
        const double steepness = 4.0 + 1.0 * params.shape_jitter * rng.uniform(-1.0, 1.0);
        const int sign = rng.uniform01() < 0.5 ? +1 : -1;
        const double offset = rng.uniform(0.0, 36.0);

        ManeuverWindow window;
        window.id = j + 1;
        window.vehicle_id = j + 1;
        window.direction = sign;
        window.lane_from = sign > 0 ? 2 : 3;
        window.lane_to = sign > 0 ? 3 : 2;

        for (int attempt = 0;; ++attempt) {
            if (attempt >= 1000) {
                throw std::runtime_error("synth_corpus: parameters cannot satisfy the displacement band");
            }
            window.samples.clear();
            for (int k = 0; k < kWindowSamples; ++k) {
                const double t = kSampleDt * k;
                const double shape = amplitude / (1.0 + std::exp(-steepness * (t - midpoint)));
                window.samples.push_back({t, offset + sign * shape + rng.normal(0.0, params.noise_sigma)});
            }
            window.displacement = window.samples.back().y - window.samples.front().y;
            if (band.contains(window.displacement)) {
                break;
            }
        }
        corpus.push_back(std::move(window));
    }
    return corpus;
}

void write_raw_trajectories(const std::filesystem::path& path, const std::vector<ManeuverWindow>& windows,
                            const ColumnMap& columns) {
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot open for writing: " + path.string());
    }
    const int n_cols = columns.max_index() + 1;
    constexpr int kHalf = kWindowSamples / 2;
    for (const ManeuverWindow& window : windows) {
        const long frame_base = 1000 + 100L * window.id;
        for (int k = 0; k < static_cast<int>(window.samples.size()); ++k) {
            for (int col = 0; col < n_cols; ++col) {
                if (col > 0) {
                    out << ' ';
                }
                if (col == columns.vehicle_id) {
                    out << window.vehicle_id;
                } else if (col == columns.frame_id) {
                    out << frame_base + k;
                } else if (col == columns.lateral) {
                    char buf[64];
                    std::snprintf(buf, sizeof(buf), "%.12g", window.samples[static_cast<std::size_t>(k)].y);
                    out << buf;
                } else if (col == columns.lane_id) {
                    out << (k < kHalf ? window.lane_from : window.lane_to);
                } else {
                    out << 0;
                }
            }
            out << '\n';
        }
    }
    if (!out) {
        throw IoError("write failed: " + path.string());
    }
}

}  // namespace lanegp
