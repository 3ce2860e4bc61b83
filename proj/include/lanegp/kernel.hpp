#pragma once

#include <span>

#include <Eigen/Dense>

namespace lanegp {

// Hyperparameters of the non-stationary linear covariance
//   k(t, t') = sigma_l^2 * (t - c) * (t' - c)
// plus the observation-noise variance added on the Gram diagonal. A single
// offset c is used for both factors; distinct offsets would break symmetry
// and the result would not be a valid covariance.
struct LinearKernelParams {
    double sigma_l = 1.0;    // signal scale, ft/s
    double c = 0.0;          // time offset, s
    double noise_var = 0.0;  // observation-noise variance, ft^2

    bool valid() const;
    void validate() const;  // throws std::invalid_argument
};

// k(t, t2). Total over valid params; symmetric in (t, t2) bit-for-bit.
double kernel_eval(const LinearKernelParams& params, double t, double t2);

// Dense m x m Gram over `times`, entry (i,j) = kernel_eval(times[i], times[j]).
// Exactly symmetric by construction; PSD up to rounding (the kernel is a
// rank-1 outer product).
Eigen::MatrixXd gram_matrix(const LinearKernelParams& params, std::span<const double> times);

}  // namespace lanegp
