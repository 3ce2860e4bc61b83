#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lanegp/gp.hpp"
#include "lanegp/optimize.hpp"

namespace lanegp {

enum class ForecasterKind { ConstantSpeed, Gp, Compound };

struct ForecasterSpec {
    ForecasterKind kind = ForecasterKind::ConstantSpeed;
    double compound_threshold = 1.0;  // seconds, in (0, 3]; horizons >= threshold go to the GP
    int velocity_window = 2;          // baseline slope: 2 = last-pair difference, >2 = LS fit

    std::string name() const;
};

struct ForecastRequest {
    std::vector<Observation> observed;  // ordered maneuver-local prefix
    std::vector<double> horizons;       // seconds past the last observation

    // Horizons non-empty, positive 0.1 s multiples up to 3.0 s; observed times
    // strictly increasing. Throws std::invalid_argument.
    void validate() const;
};

// Linear extrapolation from the latest velocity estimate; deterministic, so
// reported variance is 0. Throws InsufficientPrefix with fewer than 2
// observations.
std::vector<Prediction> constant_speed_forecast(const ForecastRequest& req, int velocity_window = 2);

struct GpForecastResult {
    std::vector<Prediction> predictions;
    LinearKernelParams fitted;  // params actually used (post warm-start refit)
};

// Trains on history + observed prefix (warm-started from `init`; opt.budget
// 0 skips the refit and uses `init` as-is), then predicts at t_last + h.
GpForecastResult gp_forecast(const ForecastRequest& req, const TrainingSet& history,
                             const LinearKernelParams& init, const OptimizeSpec& opt,
                             int current_maneuver_id = -1);

struct CompoundForecastResult {
    std::vector<Prediction> predictions;
    std::optional<LinearKernelParams> fitted;  // set when the GP side ran
};

// Horizon splitter: h < threshold answered by the constant-speed sub-model,
// h >= threshold by the GP. Outputs are bit-identical to the sub-models'; a
// sub-model only runs if it owns at least one horizon.
CompoundForecastResult compound_forecast(const ForecastRequest& req, const TrainingSet& history,
                                         const LinearKernelParams& init, const OptimizeSpec& opt,
                                         double threshold, int current_maneuver_id = -1,
                                         int velocity_window = 2);

}  // namespace lanegp
