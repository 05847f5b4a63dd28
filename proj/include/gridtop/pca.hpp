#pragma once

#include <vector>

#include <Eigen/Core>

#include "gridtop/readings.hpp"

namespace gridtop {

/// Diagonal measurement-error covariance with its (diagonal) Cholesky
/// factor. from_variances() clamps entries below kRelativeFloor times the
/// largest entry, so near-constant rows cannot break whitening; the raw
/// constructor keeps the values as given.
class ErrorCovariance {
public:
    static constexpr double kRelativeFloor = 1e-12;
    static constexpr double kAbsoluteFloor = 1e-12;  // used when all entries are zero

    explicit ErrorCovariance(Eigen::VectorXd variances);
    static ErrorCovariance from_variances(Eigen::VectorXd variances);

    Eigen::Index size() const { return variances_.size(); }
    const Eigen::VectorXd& variances() const { return variances_; }
    /// Diagonal of L with Sigma_e = L L^T, i.e. per-row standard deviations.
    const Eigen::VectorXd& cholesky_diagonal() const { return cholesky_; }

private:
    Eigen::VectorXd variances_;
    Eigen::VectorXd cholesky_;
};

/// Singular spectrum plus the left singular vectors of the p smallest
/// singular values (as rows of u2_transpose).
struct SubspaceFit {
    Eigen::VectorXd singular_values;  // all n, descending
    Eigen::MatrixXd u2_transpose;     // p x n
};

/// Whitened-PCA constraint model for one variable set.
struct PcaModel {
    Eigen::Index n_vars{};
    Eigen::Index n_constraints{};
    Eigen::VectorXd singular_values;
    Eigen::MatrixXd constraint_matrix;   // p x n
    Eigen::MatrixXd regression_matrix;   // p x (n - p)
    std::vector<Eigen::Index> dependent_indices;
    std::vector<Eigen::Index> independent_indices;
};

/// Z_s = L^-1 Z: each row divided by its error standard deviation.
Eigen::MatrixXd whiten(const Eigen::MatrixXd& z, const ErrorCovariance& cov);

/// SVD of the whitened matrix; keeps the left vectors of the p smallest
/// singular values. Requires N >= n and 1 <= p < n.
SubspaceFit fit(const Eigen::MatrixXd& z_s, Eigen::Index p);

/// C_hat = U2s^T L^-1, mapping the whitened constraint basis back to the
/// original coordinates.
Eigen::MatrixXd unwhiten_constraints(const Eigen::MatrixXd& u2_transpose,
                                     const ErrorCovariance& cov);

/// Condition-number ceiling on C_d before it is declared singular.
inline constexpr double kDependentConditionLimit = 1e10;

/// R_hat = -(C_d)^-1 C_i. Unique regardless of the rotational ambiguity in
/// C_hat. Throws SingularDependentBlock when cond(C_d) exceeds
/// kDependentConditionLimit.
Eigen::MatrixXd regression(const Eigen::MatrixXd& c_hat,
                           const std::vector<Eigen::Index>& dependent_indices,
                           const std::vector<Eigen::Index>& independent_indices);

}  // namespace gridtop
