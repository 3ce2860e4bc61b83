#pragma once

#include <cstdint>
#include <vector>

#include "lanegp/gp.hpp"
#include "lanegp/kernel.hpp"

namespace lanegp {

// Derivative-free likelihood maximization: multi-start coordinate pattern
// search, log-space steps for sigma_l and noise_var, linear steps for c.
struct OptimizeSpec {
    int budget = 200;        // total likelihood evaluations, >= 1
    std::uint64_t seed = 0;  // start-point stream
    int starts = 8;          // search starts (first is the init point)
    bool optimize_c = true;  // false pins c at its init value

    // Search bounds (init itself is evaluated as given, outside the clamp).
    double sigma_l_min = 1e-3, sigma_l_max = 1e3;
    double noise_var_min = 1e-8, noise_var_max = 1e2;
    double c_min = -10.0, c_max = 10.0;
};

// Returns params whose likelihood is never below the init's (up to 1e-12);
// with budget 1 the init is returned unchanged. Accepted-improvement history
// is appended to *trace when given (non-decreasing by construction).
//
// Throws OptimizationDiverged if every probed point, the init included,
// fails factorization.
LinearKernelParams optimize_hyperparams(const TrainingSet& train, const LinearKernelParams& init,
                                        const OptimizeSpec& spec,
                                        std::vector<double>* trace = nullptr);

}  // namespace lanegp
