#include "lanegp/kernel.hpp"

#include <cmath>
#include <stdexcept>

namespace lanegp {

bool LinearKernelParams::valid() const {
    return std::isfinite(sigma_l) && sigma_l > 0.0 && std::isfinite(c) &&
           std::isfinite(noise_var) && noise_var >= 0.0;
}

void LinearKernelParams::validate() const {
    if (!valid()) {
        throw std::invalid_argument("LinearKernelParams: need sigma_l > 0, noise_var >= 0, c finite");
    }
}

double kernel_eval(const LinearKernelParams& params, double t, double t2) {
    const double s2 = params.sigma_l * params.sigma_l;
    return s2 * ((t - params.c) * (t2 - params.c));
}

Eigen::MatrixXd gram_matrix(const LinearKernelParams& params, std::span<const double> times) {
    const auto m = static_cast<Eigen::Index>(times.size());
    if (m == 0) {
        throw std::invalid_argument("gram_matrix: empty time set");
    }
    Eigen::MatrixXd gram(m, m);
    for (Eigen::Index i = 0; i < m; ++i) {
        for (Eigen::Index j = 0; j <= i; ++j) {
            const double k = kernel_eval(params, times[static_cast<std::size_t>(i)],
                                         times[static_cast<std::size_t>(j)]);
            gram(i, j) = k;
            gram(j, i) = k;
        }
    }
    return gram;
}

}  // namespace lanegp
