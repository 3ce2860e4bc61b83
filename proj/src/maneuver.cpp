#include "lanegp/maneuver.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "lanegp/errors.hpp"

namespace lanegp {

void ManeuverWindow::validate(const DisplacementBand& band) const {
    if (static_cast<int>(samples.size()) != kWindowSamples) {
        throw std::invalid_argument("ManeuverWindow: expected 31 samples");
    }
    for (int k = 0; k < kWindowSamples; ++k) {
        const Observation& s = samples[static_cast<std::size_t>(k)];
        if (std::abs(s.t - sample_time(k)) > 1e-9) {
            throw std::invalid_argument("ManeuverWindow: samples must sit on the uniform 0.1 s grid");
        }
        // Sanity bound on the window's own excursion (shift-invariant, so it
        // holds for raw and normalized windows alike).
        if (!std::isfinite(s.y) || std::abs(s.y - samples.front().y) > 50.0) {
            throw std::invalid_argument("ManeuverWindow: lateral excursion out of sanity range");
        }
    }
    const double disp = samples.back().y - samples.front().y;
    if (std::abs(disp - displacement) > 1e-6) {
        throw std::invalid_argument("ManeuverWindow: displacement field disagrees with samples");
    }
    if (!band.contains(displacement)) {
        throw std::invalid_argument("ManeuverWindow: displacement outside acceptance band");
    }
    if (direction != 1 && direction != -1) {
        throw std::invalid_argument("ManeuverWindow: direction must be +1 or -1");
    }
}

ManeuverWindow normalize(const ManeuverWindow& window) {
    ManeuverWindow out = window;
    const double y0 = out.samples.front().y;
    for (Observation& s : out.samples) {
        s.y -= y0;
    }
    if (out.displacement < 0.0) {
        for (Observation& s : out.samples) {
            s.y = -s.y;
        }
        out.direction = -1;
    }
    out.displacement = out.samples.back().y - out.samples.front().y;
    return out;
}

namespace {

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

}  // namespace

void write_window_file(const std::filesystem::path& path, const ManeuverWindow& window) {
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot open for writing: " + path.string());
    }
    out << "id=" << window.id << "\n";
    out << "direction=" << window.direction << "\n";
    out << "displacement_ft=" << format_double(window.displacement) << "\n";
    out << "vehicle=" << window.vehicle_id << "\n";
    out << "lane_from=" << window.lane_from << "\n";
    out << "lane_to=" << window.lane_to << "\n";
    for (int k = 0; k < static_cast<int>(window.samples.size()); ++k) {
        char tbuf[16];
        std::snprintf(tbuf, sizeof(tbuf), "%.1f", window.sample_time(k));
        out << tbuf << " " << format_double(window.samples[static_cast<std::size_t>(k)].y) << "\n";
    }
    if (!out) {
        throw IoError("write failed: " + path.string());
    }
}

ManeuverWindow read_window_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw FormatError("cannot open maneuver-window file: " + path.string());
    }
    ManeuverWindow window;
    bool have_id = false, have_direction = false, have_displacement = false;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq != std::string::npos && line.find(' ') > eq) {
            const std::string key = line.substr(0, eq);
            const std::string value = line.substr(eq + 1);
            try {
                if (key == "id") {
                    window.id = std::stoi(value);
                    have_id = true;
                } else if (key == "direction") {
                    window.direction = std::stoi(value);
                    have_direction = true;
                } else if (key == "displacement_ft") {
                    window.displacement = std::stod(value);
                    have_displacement = true;
                } else if (key == "vehicle") {
                    window.vehicle_id = std::stol(value);
                } else if (key == "lane_from") {
                    window.lane_from = std::stoi(value);
                } else if (key == "lane_to") {
                    window.lane_to = std::stoi(value);
                } else {
                    throw FormatError("unknown header key '" + key + "' in " + path.string());
                }
            } catch (const std::invalid_argument&) {
                throw FormatError("bad header value in " + path.string() + ": " + line);
            }
        } else {
            std::istringstream row(line);
            Observation s;
            if (!(row >> s.t >> s.y)) {
                throw FormatError("bad sample row in " + path.string() + ": " + line);
            }
            window.samples.push_back(s);
        }
    }
    if (!have_id || !have_direction || !have_displacement) {
        throw FormatError("maneuver-window file missing required headers: " + path.string());
    }
    if (static_cast<int>(window.samples.size()) != kWindowSamples) {
        throw FormatError("maneuver-window file needs exactly 31 sample rows: " + path.string());
    }
    return window;
}

}  // namespace lanegp
