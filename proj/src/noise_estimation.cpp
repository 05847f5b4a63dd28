#include "gridtop/noise_estimation.hpp"

#include <stdexcept>
#include <vector>

#include "gridtop/errors.hpp"
#include "gridtop/kernels.hpp"

namespace gridtop {

namespace {

void check_partition(const ReadingsMatrix& z, const std::vector<Eigen::Index>& parent_rows,
                     const std::vector<Eigen::Index>& child_rows) {
    if (parent_rows.empty() || child_rows.empty())
        throw EmptyPartition("parent and child row sets must both be non-empty");
    std::vector<char> seen(static_cast<std::size_t>(z.rows()), 0);
    auto mark = [&](const std::vector<Eigen::Index>& rows) {
        for (const Eigen::Index r : rows) {
            if (r < 0 || r >= z.rows())
                throw std::invalid_argument("row index out of range");
            if (seen[static_cast<std::size_t>(r)]++)
                throw std::invalid_argument("row sets overlap or repeat a row");
        }
    };
    mark(parent_rows);
    mark(child_rows);
    if (parent_rows.size() + child_rows.size() != static_cast<std::size_t>(z.rows()))
        throw std::invalid_argument("parent and child rows must partition the matrix");
}

double mean_of(const Eigen::VectorXd& v) {
    double acc = 0.0;
    for (Eigen::Index j = 0; j < v.size(); ++j) acc += v(j);
    return v.size() > 0 ? acc / static_cast<double>(v.size()) : 0.0;
}

// Apportionment fractions proportional to the weights; uniform when the
// weights sum to zero (degenerate all-zero parents).
Eigen::VectorXd fractions(const std::vector<Eigen::Index>& parent_rows,
                          const Eigen::VectorXd& weights) {
    const auto p = static_cast<Eigen::Index>(parent_rows.size());
    Eigen::VectorXd out(p);
    double total = 0.0;
    for (Eigen::Index k = 0; k < p; ++k) total += weights(parent_rows[static_cast<std::size_t>(k)]);
    if (total == 0.0) {
        out.setConstant(1.0 / static_cast<double>(p));
    } else {
        for (Eigen::Index k = 0; k < p; ++k)
            out(k) = weights(parent_rows[static_cast<std::size_t>(k)]) / total;
    }
    return out;
}

}  // namespace

MeanLossEstimate estimate_mu(const ReadingsMatrix& z,
                             const std::vector<Eigen::Index>& parent_rows,
                             const std::vector<Eigen::Index>& child_rows) {
    check_partition(z, parent_rows, child_rows);
    if (z.samples() < 1) throw std::invalid_argument("need at least one sample");

    const Eigen::VectorXd imbalance = kernels::group_imbalance(z.values(), parent_rows, child_rows);
    const double mu_t = mean_of(imbalance);

    // Fractions of mu_t proportional to each parent's mean reading.
    const Eigen::VectorXd means = kernels::row_means(z.values());
    const Eigen::VectorXd frac = fractions(parent_rows, means);

    Eigen::VectorXd mu_lambda = Eigen::VectorXd::Zero(z.rows());
    for (std::size_t k = 0; k < parent_rows.size(); ++k)
        mu_lambda(parent_rows[k]) = mu_t * frac(static_cast<Eigen::Index>(k));
    return MeanLossEstimate{mu_t, std::move(mu_lambda)};
}

ReadingsMatrix separate_mean(const ReadingsMatrix& z, const Eigen::VectorXd& mu_lambda) {
    if (mu_lambda.size() != z.rows())
        throw std::invalid_argument("separate_mean: vector length must equal row count");
    Eigen::MatrixXd values = z.values();
    kernels::subtract_row_offsets(values, mu_lambda);
    return ReadingsMatrix(std::move(values), z.node_order(), z.interval_minutes());
}

LossVarianceEstimate estimate_sigma_lambda(const ReadingsMatrix& z,
                                           const std::vector<Eigen::Index>& parent_rows,
                                           const std::vector<Eigen::Index>& child_rows,
                                           double mu_t) {
    check_partition(z, parent_rows, child_rows);
    if (z.samples() < 2) throw std::invalid_argument("need at least two samples");

    const Eigen::VectorXd imbalance = kernels::group_imbalance(z.values(), parent_rows, child_rows);
    double var_lt = 0.0;
    for (Eigen::Index j = 0; j < imbalance.size(); ++j) {
        const double d = imbalance(j) - mu_t;
        var_lt += d * d;
    }
    var_lt /= static_cast<double>(imbalance.size());

    // Apportioned by the variance of the raw parent readings.
    const Eigen::VectorXd means = kernels::row_means(z.values());
    const Eigen::VectorXd variances = kernels::row_variances(z.values(), means);
    const Eigen::VectorXd frac = fractions(parent_rows, variances);

    Eigen::VectorXd sigma_lambda = Eigen::VectorXd::Zero(z.rows());
    for (std::size_t k = 0; k < parent_rows.size(); ++k)
        sigma_lambda(parent_rows[k]) = var_lt * frac(static_cast<Eigen::Index>(k));
    return LossVarianceEstimate{var_lt, std::move(sigma_lambda)};
}

Eigen::VectorXd estimate_sigma_epsilon(const ReadingsMatrix& z, double accuracy_class_pct) {
    if (accuracy_class_pct < 0) throw std::invalid_argument("accuracy class must be non-negative");
    const Eigen::VectorXd means = kernels::row_means(z.values());
    Eigen::VectorXd out(z.rows());
    for (Eigen::Index i = 0; i < out.size(); ++i) {
        const double three_sigma_pct = accuracy_class_pct * means(i) / 100.0;
        out(i) = (three_sigma_pct / 3.0) * (three_sigma_pct / 3.0);
    }
    return out;
}

Eigen::VectorXd estimate_sigma_delta(const ReadingsMatrix& z, double interval_minutes) {
    if (interval_minutes < 1) throw std::invalid_argument("interval must be at least one minute");
    const Eigen::VectorXd means = kernels::row_means(z.values());
    Eigen::VectorXd out(z.rows());
    for (Eigen::Index i = 0; i < out.size(); ++i) {
        const double sigma = means(i) / (60.0 * interval_minutes);
        out(i) = sigma * sigma;
    }
    return out;
}

ErrorCovariance combine(const Eigen::VectorXd& sigma_lambda, const Eigen::VectorXd& sigma_epsilon,
                        const Eigen::VectorXd& sigma_delta) {
    if (sigma_lambda.size() != sigma_epsilon.size() || sigma_lambda.size() != sigma_delta.size())
        throw std::invalid_argument("combine: variance vectors must have equal length");
    if ((sigma_lambda.array() < 0).any() || (sigma_epsilon.array() < 0).any() ||
        (sigma_delta.array() < 0).any())
        throw NegativeVariance("variance vectors must be non-negative");
    return ErrorCovariance::from_variances(sigma_lambda + sigma_epsilon + sigma_delta);
}

NoiseStats estimate_noise(const ReadingsMatrix& z, const std::vector<Eigen::Index>& parent_rows,
                          const std::vector<Eigen::Index>& child_rows, const NoiseConfig& cfg) {
    NoiseStats stats;
    auto mean_est = estimate_mu(z, parent_rows, child_rows);
    stats.mu_t = mean_est.mu_t;
    stats.mu_lambda = std::move(mean_est.mu_lambda);

    auto var_est = estimate_sigma_lambda(z, parent_rows, child_rows, stats.mu_t);
    stats.var_lt = var_est.var_lt;
    stats.sigma_lambda = std::move(var_est.sigma_lambda);

    stats.sigma_epsilon = estimate_sigma_epsilon(z, cfg.accuracy_class_pct);
    stats.sigma_delta = estimate_sigma_delta(z, cfg.interval_minutes);
    stats.sigma_e = stats.sigma_lambda + stats.sigma_epsilon + stats.sigma_delta;
    return stats;
}

}  // namespace gridtop
