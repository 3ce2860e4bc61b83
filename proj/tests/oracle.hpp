#pragma once

// Dense joint-Gaussian reference for the GP tests. Covariances are built
// straight from the closed-form kernel formula and conditioned with
// LU/eigen-solves, so no code path is shared with the library's rank-1
// Cholesky pipeline beyond the jitter value, which is an input here.

#include <numbers>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

inline Eigen::MatrixXd cross_gram(double sigma_l, double c, const std::vector<double>& a,
                                  const std::vector<double>& b) {
    Eigen::MatrixXd out(static_cast<Eigen::Index>(a.size()), static_cast<Eigen::Index>(b.size()));
    for (Eigen::Index i = 0; i < out.rows(); ++i) {
        for (Eigen::Index j = 0; j < out.cols(); ++j) {
            out(i, j) = sigma_l * sigma_l * (a[static_cast<std::size_t>(i)] - c) *
                        (b[static_cast<std::size_t>(j)] - c);
        }
    }
    return out;
}

struct Conditioned {
    Eigen::VectorXd mean;
    Eigen::MatrixXd cov;
};

// Condition the joint Gaussian over [train, query] on the training targets.
// `lambda` is the full diagonal regularizer (noise_var + jitter).
inline Conditioned condition(double sigma_l, double c, const std::vector<double>& train_t,
                             const Eigen::VectorXd& train_y, double lambda,
                             const std::vector<double>& query_t) {
    const Eigen::MatrixXd ktt = cross_gram(sigma_l, c, train_t, train_t) +
                                lambda * Eigen::MatrixXd::Identity(
                                             static_cast<Eigen::Index>(train_t.size()),
                                             static_cast<Eigen::Index>(train_t.size()));
    const Eigen::MatrixXd kqt = cross_gram(sigma_l, c, query_t, train_t);
    const Eigen::MatrixXd kqq = cross_gram(sigma_l, c, query_t, query_t);

    const Eigen::FullPivLU<Eigen::MatrixXd> lu(ktt);
    Conditioned out;
    out.mean = kqt * lu.solve(train_y);
    out.cov = kqq - kqt * lu.solve(kqt.transpose());
    return out;
}

// Log marginal likelihood evaluated densely: LU solve for the quadratic
// form, symmetric eigendecomposition for the log determinant.
inline double log_marginal_likelihood(double sigma_l, double c, const std::vector<double>& train_t,
                                      const Eigen::VectorXd& train_y, double lambda) {
    const Eigen::Index m = static_cast<Eigen::Index>(train_t.size());
    const Eigen::MatrixXd ktt =
        cross_gram(sigma_l, c, train_t, train_t) + lambda * Eigen::MatrixXd::Identity(m, m);
    const Eigen::FullPivLU<Eigen::MatrixXd> lu(ktt);
    const double quad = train_y.dot(lu.solve(train_y));
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(ktt, Eigen::EigenvaluesOnly);
    const double logdet = eig.eigenvalues().array().log().sum();
    return -0.5 * quad - 0.5 * logdet -
           0.5 * static_cast<double>(m) * std::log(2.0 * std::numbers::pi);
}

}  // namespace oracle
