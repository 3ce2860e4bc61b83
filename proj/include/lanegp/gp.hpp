#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "lanegp/kernel.hpp"

namespace lanegp {

// One sample of the scalar series being modeled: maneuver-local time in
// seconds, lateral position in feet.
struct Observation {
    double t = 0.0;
    double y = 0.0;
};

// Observation tagged with the maneuver it came from. Times may repeat across
// maneuvers; the (maneuver_id, t) pair is unique within a training set.
struct TaggedObservation {
    int maneuver_id = 0;
    double t = 0.0;
    double y = 0.0;
};

struct TrainingSet {
    std::vector<TaggedObservation> obs;

    std::size_t size() const { return obs.size(); }
    bool empty() const { return obs.empty(); }

    Eigen::VectorXd times() const;
    Eigen::VectorXd targets() const;

    void append(int maneuver_id, std::span<const Observation> samples);

    // m >= 1, finite values, unique (maneuver_id, t) pairs. Throws
    // std::invalid_argument.
    void validate() const;
};

struct Prediction {
    double t = 0.0;
    double mean = 0.0;      // ft
    double variance = 0.0;  // ft^2, clamped to >= 0
};

// Exact GP posterior conditioned on a training set, held through the lower
// Cholesky factor L of the regularized Gram
//   K + noise_var*I + jitter*I = L L^T.
// The linear kernel makes that matrix a rank-1 update of a scaled identity,
// so L is built by a rank-1 Cholesky update in O(m^2) instead of a dense
// O(m^3) factorization; the factor is the same matrix either way.
//
// Immutable after construction; safe to read from many threads.
class GpPosterior {
public:
    // Throws FactorizationFailure if the regularized Gram is not numerically
    // positive definite after jitter escalation, std::invalid_argument on an
    // empty or invalid training set.
    static GpPosterior fit(const LinearKernelParams& params, const TrainingSet& train);

    Prediction predict_at(double t) const;
    std::vector<Prediction> predict(std::span<const double> times) const;

    // -1/2 y^T alpha - sum log L_ii - m/2 log 2pi, all pieces taken from the
    // stored factorization.
    double log_marginal_likelihood() const;

    const LinearKernelParams& params() const { return params_; }
    const Eigen::MatrixXd& factor() const { return chol_lower_; }
    const Eigen::VectorXd& weights() const { return weights_; }
    const Eigen::VectorXd& train_times() const { return times_; }
    const Eigen::VectorXd& train_targets() const { return targets_; }
    double jitter() const { return jitter_; }
    std::size_t train_size() const { return static_cast<std::size_t>(times_.size()); }

private:
    GpPosterior() = default;

    LinearKernelParams params_;
    Eigen::VectorXd times_;
    Eigen::VectorXd targets_;
    Eigen::MatrixXd chol_lower_;  // L, strictly positive diagonal
    Eigen::VectorXd weights_;     // alpha = (K + noise*I + jitter*I)^-1 y
    double jitter_ = 0.0;         // diagonal term actually used
    double feature_dot_weights_ = 0.0;  // v . alpha with v_i = t_i - c
    double whitened_feature_norm2_ = 0.0;  // ||L^-1 (sigma_l v)||^2
};

GpPosterior fit_posterior(const LinearKernelParams& params, const TrainingSet& train);

double log_marginal_likelihood(const LinearKernelParams& params, const TrainingSet& train);

namespace detail {

// Jitter schedule shared by fitting and the fast likelihood: base
// 1e-8*trace(K)/m, escalated x10 on factorization failure up to
// 1e-2*trace(K)/m. The linear-kernel Gram has rank 1, so the jitter carries
// the factorization whenever noise_var = 0.
inline constexpr double kJitterRel = 1e-8;
inline constexpr int kJitterSteps = 7;  // 1e-8 .. 1e-2

// Likelihood of the same regularized matrix evaluated through the rank-1
// closed form (Sherman-Morrison / determinant lemma) in O(m). Agrees with
// the factorized path to rounding; used as the optimizer objective where the
// O(m^2) factor build would dominate. Throws FactorizationFailure exactly
// when fit() would.
double lml_rank_one(const LinearKernelParams& params, const TrainingSet& train);

}  // namespace detail

}  // namespace lanegp
