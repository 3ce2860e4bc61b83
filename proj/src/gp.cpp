#include "lanegp/gp.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "lanegp/errors.hpp"

namespace lanegp {

Eigen::VectorXd TrainingSet::times() const {
    Eigen::VectorXd t(static_cast<Eigen::Index>(obs.size()));
    for (Eigen::Index i = 0; i < t.size(); ++i) {
        t(i) = obs[static_cast<std::size_t>(i)].t;
    }
    return t;
}

Eigen::VectorXd TrainingSet::targets() const {
    Eigen::VectorXd y(static_cast<Eigen::Index>(obs.size()));
    for (Eigen::Index i = 0; i < y.size(); ++i) {
        y(i) = obs[static_cast<std::size_t>(i)].y;
    }
    return y;
}

void TrainingSet::append(int maneuver_id, std::span<const Observation> samples) {
    obs.reserve(obs.size() + samples.size());
    for (const Observation& s : samples) {
        obs.push_back({maneuver_id, s.t, s.y});
    }
}

void TrainingSet::validate() const {
    if (obs.empty()) {
        throw std::invalid_argument("TrainingSet: need at least one observation");
    }
    for (const TaggedObservation& o : obs) {
        if (!std::isfinite(o.t) || !std::isfinite(o.y)) {
            throw std::invalid_argument("TrainingSet: non-finite observation");
        }
    }
    std::vector<std::size_t> idx(obs.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        if (obs[a].maneuver_id != obs[b].maneuver_id) return obs[a].maneuver_id < obs[b].maneuver_id;
        return obs[a].t < obs[b].t;
    });
    for (std::size_t i = 1; i < idx.size(); ++i) {
        const TaggedObservation& a = obs[idx[i - 1]];
        const TaggedObservation& b = obs[idx[i]];
        if (a.maneuver_id == b.maneuver_id && a.t == b.t) {
            throw std::invalid_argument("TrainingSet: duplicate (maneuver_id, t) pair");
        }
    }
}

namespace {

// Lower Cholesky factor of lambda*I + w w^T via a rank-1 update of
// sqrt(lambda)*I (LINPACK-style rotations, column at a time). O(m^2).
// Returns false if the matrix is not numerically positive definite.
bool rank_one_cholesky(double lambda, const Eigen::VectorXd& w_in, Eigen::MatrixXd& chol) {
    const Eigen::Index m = w_in.size();
    if (!std::isfinite(lambda) || !(lambda > 0.0) || !w_in.allFinite()) {
        return false;
    }
    chol = Eigen::MatrixXd::Zero(m, m);
    const double sl = std::sqrt(lambda);
    Eigen::VectorXd w = w_in;
    for (Eigen::Index k = 0; k < m; ++k) {
        const double wk = w(k);
        const double r = std::hypot(sl, wk);
        if (!std::isfinite(r) || !(r > 0.0)) {
            return false;
        }
        chol(k, k) = r;
        const Eigen::Index tail = m - k - 1;
        if (tail > 0) {
            const double cc = r / sl;
            const double s = wk / sl;
            auto lcol = chol.col(k).tail(tail);
            auto wt = w.tail(tail);
            lcol = (lcol + s * wt) / cc;
            wt = cc * wt - s * lcol;
        }
    }
    return chol.allFinite();
}

struct JitterSchedule {
    double trace_over_m = 0.0;

    double candidate(int step) const {
        double scale = detail::kJitterRel;
        for (int i = 0; i < step; ++i) scale *= 10.0;
        return scale * trace_over_m;
    }
};

}  // namespace

GpPosterior GpPosterior::fit(const LinearKernelParams& params, const TrainingSet& train) {
    params.validate();
    train.validate();

    GpPosterior post;
    post.params_ = params;
    post.times_ = train.times();
    post.targets_ = train.targets();

    const Eigen::Index m = post.times_.size();
    const Eigen::VectorXd v = post.times_.array() - params.c;
    const Eigen::VectorXd w = params.sigma_l * v;

    const JitterSchedule schedule{w.squaredNorm() / static_cast<double>(m)};
    bool ok = false;
    for (int step = 0; step < detail::kJitterSteps && !ok; ++step) {
        post.jitter_ = schedule.candidate(step);
        ok = rank_one_cholesky(params.noise_var + post.jitter_, w, post.chol_lower_);
    }
    if (!ok) {
        throw FactorizationFailure("regularized Gram matrix is not positive definite after jitter escalation");
    }

    const auto lower = post.chol_lower_.triangularView<Eigen::Lower>();
    const Eigen::VectorXd z = lower.solve(post.targets_);
    post.weights_ = post.chol_lower_.transpose().triangularView<Eigen::Upper>().solve(z);
    post.feature_dot_weights_ = v.dot(post.weights_);
    post.whitened_feature_norm2_ = lower.solve(w).squaredNorm();
    return post;
}

Prediction GpPosterior::predict_at(double t) const {
    const double s2 = params_.sigma_l * params_.sigma_l;
    const double dt = t - params_.c;
    const double mean = s2 * dt * feature_dot_weights_;
    const double var = s2 * dt * dt * (1.0 - whitened_feature_norm2_);
    return {t, mean, std::max(0.0, var)};
}

std::vector<Prediction> GpPosterior::predict(std::span<const double> times) const {
    std::vector<Prediction> out;
    out.reserve(times.size());
    for (double t : times) {
        out.push_back(predict_at(t));
    }
    return out;
}

double GpPosterior::log_marginal_likelihood() const {
    const double m = static_cast<double>(times_.size());
    const double quad = targets_.dot(weights_);
    const double logdet = 2.0 * chol_lower_.diagonal().array().log().sum();
    return -0.5 * quad - 0.5 * logdet - 0.5 * m * std::log(2.0 * std::numbers::pi);
}

GpPosterior fit_posterior(const LinearKernelParams& params, const TrainingSet& train) {
    return GpPosterior::fit(params, train);
}

double log_marginal_likelihood(const LinearKernelParams& params, const TrainingSet& train) {
    return GpPosterior::fit(params, train).log_marginal_likelihood();
}

namespace detail {

double lml_rank_one(const LinearKernelParams& params, const TrainingSet& train) {
    params.validate();
    train.validate();

    const Eigen::VectorXd t = train.times();
    const Eigen::VectorXd y = train.targets();
    const Eigen::Index m = t.size();
    const double s2 = params.sigma_l * params.sigma_l;
    const Eigen::VectorXd v = t.array() - params.c;
    const double vv = v.squaredNorm();
    const double trace_over_m = s2 * vv / static_cast<double>(m);

    const JitterSchedule schedule{trace_over_m};
    for (int step = 0; step < kJitterSteps; ++step) {
        const double lambda = params.noise_var + schedule.candidate(step);
        if (!(lambda > 0.0) || !std::isfinite(lambda)) {
            continue;
        }
        const double denom = lambda + s2 * vv;
        double quad;
        if (vv > 0.0) {
            const double vy = v.dot(y);
            // Residual of y against span{v}, squared after projection so the
            // quadratic form stays >= 0 even near exact interpolation.
            const double beta = vy / vv;
            const double r2 = (y - beta * v).squaredNorm();
            quad = r2 / lambda + vy * vy / (vv * denom);
        } else {
            quad = y.squaredNorm() / lambda;
        }
        const double logdet =
            static_cast<double>(m - 1) * std::log(lambda) + std::log(denom);
        const double lml =
            -0.5 * quad - 0.5 * logdet -
            0.5 * static_cast<double>(m) * std::log(2.0 * std::numbers::pi);
        if (std::isfinite(lml)) {
            return lml;
        }
    }
    throw FactorizationFailure("regularized Gram matrix is not positive definite after jitter escalation");
}

}  // namespace detail

}  // namespace lanegp
