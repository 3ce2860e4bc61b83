#include "lanegp/forecasters.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "lanegp/errors.hpp"

namespace lanegp {

std::string ForecasterSpec::name() const {
    switch (kind) {
        case ForecasterKind::ConstantSpeed:
            return "baseline";
        case ForecasterKind::Gp:
            return "gp";
        case ForecasterKind::Compound:
            return "compound";
    }
    return "unknown";
}

void ForecastRequest::validate() const {
    if (horizons.empty()) {
        throw std::invalid_argument("ForecastRequest: need at least one horizon");
    }
    for (double h : horizons) {
        if (!(h > 0.0) || h > 3.0 + 1e-9) {
            throw std::invalid_argument("ForecastRequest: horizons must lie in (0, 3] s");
        }
        const double samples = h / 0.1;
        if (std::abs(samples - std::round(samples)) > 1e-6) {
            throw std::invalid_argument("ForecastRequest: horizons must be 0.1 s multiples");
        }
    }
    for (std::size_t i = 1; i < observed.size(); ++i) {
        if (!(observed[i].t > observed[i - 1].t)) {
            throw std::invalid_argument("ForecastRequest: observed times must increase strictly");
        }
    }
}

std::vector<Prediction> constant_speed_forecast(const ForecastRequest& req, int velocity_window) {
    req.validate();
    if (req.observed.size() < 2) {
        throw InsufficientPrefix("constant-speed forecast needs at least 2 observations");
    }
    const Observation& last = req.observed.back();

    double velocity;
    if (velocity_window <= 2) {
        const Observation& prev = req.observed[req.observed.size() - 2];
        if (!(last.t > prev.t)) {
            throw std::invalid_argument("constant_speed_forecast: non-increasing times");
        }
        velocity = (last.y - prev.y) / (last.t - prev.t);
    } else {
        // Least-squares slope over the last `velocity_window` samples.
        const std::size_t n = std::min<std::size_t>(static_cast<std::size_t>(velocity_window), req.observed.size());
        const std::size_t start = req.observed.size() - n;
        double mean_t = 0, mean_y = 0;
        for (std::size_t i = start; i < req.observed.size(); ++i) {
            mean_t += req.observed[i].t;
            mean_y += req.observed[i].y;
        }
        mean_t /= static_cast<double>(n);
        mean_y /= static_cast<double>(n);
        double num = 0, den = 0;
        for (std::size_t i = start; i < req.observed.size(); ++i) {
            num += (req.observed[i].t - mean_t) * (req.observed[i].y - mean_y);
            den += (req.observed[i].t - mean_t) * (req.observed[i].t - mean_t);
        }
        if (den <= 0) {
            throw std::invalid_argument("constant_speed_forecast: degenerate time spread");
        }
        velocity = num / den;
    }

    std::vector<Prediction> out;
    out.reserve(req.horizons.size());
    for (double h : req.horizons) {
        out.push_back({last.t + h, last.y + velocity * h, 0.0});
    }
    return out;
}

GpForecastResult gp_forecast(const ForecastRequest& req, const TrainingSet& history,
                             const LinearKernelParams& init, const OptimizeSpec& opt,
                             int current_maneuver_id) {
    req.validate();
    TrainingSet combined = history;
    combined.append(current_maneuver_id, req.observed);
    if (combined.empty()) {
        throw std::invalid_argument("gp_forecast: history plus prefix must hold at least one observation");
    }

    GpForecastResult result;
    result.fitted = opt.budget > 0 ? optimize_hyperparams(combined, init, opt) : init;

    const GpPosterior post = GpPosterior::fit(result.fitted, combined);
    const double t_last = req.observed.empty() ? 0.0 : req.observed.back().t;
    result.predictions.reserve(req.horizons.size());
    for (double h : req.horizons) {
        result.predictions.push_back(post.predict_at(t_last + h));
    }
    return result;
}

CompoundForecastResult compound_forecast(const ForecastRequest& req, const TrainingSet& history,
                                         const LinearKernelParams& init, const OptimizeSpec& opt,
                                         double threshold, int current_maneuver_id, int velocity_window) {
    if (!(threshold > 0.0) || threshold > 3.0) {
        throw std::invalid_argument("compound_forecast: threshold must lie in (0, 3]");
    }
    req.validate();

    ForecastRequest near = req, far = req;
    near.horizons.clear();
    far.horizons.clear();
    for (double h : req.horizons) {
        (h < threshold ? near : far).horizons.push_back(h);
    }

    std::vector<Prediction> near_preds, far_preds;
    CompoundForecastResult result;
    if (!near.horizons.empty()) {
        near_preds = constant_speed_forecast(near, velocity_window);
    }
    if (!far.horizons.empty()) {
        GpForecastResult gp = gp_forecast(far, history, init, opt, current_maneuver_id);
        far_preds = std::move(gp.predictions);
        result.fitted = gp.fitted;
    }

    std::size_t ni = 0, fi = 0;
    result.predictions.reserve(req.horizons.size());
    for (double h : req.horizons) {
        result.predictions.push_back(h < threshold ? near_preds[ni++] : far_preds[fi++]);
    }
    return result;
}

}  // namespace lanegp
