#pragma once

#include <vector>

#include <Eigen/Core>

#include "gridtop/pca.hpp"
#include "gridtop/readings.hpp"

namespace gridtop {

/// Estimated error statistics for one variable set. mu_lambda and
/// sigma_lambda are non-zero only at parent rows; sigma_e is the
/// element-wise sum of the three variance vectors.
struct NoiseStats {
    Eigen::VectorXd mu_lambda;
    Eigen::VectorXd sigma_lambda;
    Eigen::VectorXd sigma_epsilon;
    Eigen::VectorXd sigma_delta;
    Eigen::VectorXd sigma_e;
    double mu_t{};
    double var_lt{};
};

struct MeanLossEstimate {
    double mu_t{};
    Eigen::VectorXd mu_lambda;
};

struct LossVarianceEstimate {
    double var_lt{};
    Eigen::VectorXd sigma_lambda;
};

/// Mean total technical loss (parent sums minus child sums, averaged over
/// time) apportioned to parents in proportion to their mean readings.
MeanLossEstimate estimate_mu(const ReadingsMatrix& z,
                             const std::vector<Eigen::Index>& parent_rows,
                             const std::vector<Eigen::Index>& child_rows);

/// Subtract mu_lambda from every column.
ReadingsMatrix separate_mean(const ReadingsMatrix& z, const Eigen::VectorXd& mu_lambda);

/// Population variance of the total loss, apportioned to parents in
/// proportion to their raw reading variances.
LossVarianceEstimate estimate_sigma_lambda(const ReadingsMatrix& z,
                                           const std::vector<Eigen::Index>& parent_rows,
                                           const std::vector<Eigen::Index>& child_rows,
                                           double mu_t);

/// Random-error variance per row: (alpha * mean / 300)^2, with 3 sigma equal
/// to alpha percent of the row mean.
Eigen::VectorXd estimate_sigma_epsilon(const ReadingsMatrix& z, double accuracy_class_pct);

/// Clock-sync variance per row: (mean / (60 T))^2, one second of drift in a
/// T-minute interval.
Eigen::VectorXd estimate_sigma_delta(const ReadingsMatrix& z, double interval_minutes);

/// Sigma_e = Sigma_lambda + Sigma_epsilon + Sigma_delta, floored and
/// factored.
ErrorCovariance combine(const Eigen::VectorXd& sigma_lambda,
                        const Eigen::VectorXd& sigma_epsilon,
                        const Eigen::VectorXd& sigma_delta);

/// Full estimation pass over one variable set.
NoiseStats estimate_noise(const ReadingsMatrix& z,
                          const std::vector<Eigen::Index>& parent_rows,
                          const std::vector<Eigen::Index>& child_rows,
                          const NoiseConfig& cfg);

}  // namespace gridtop
