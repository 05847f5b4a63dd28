#include "gridtop/pca.hpp"

#include <limits>
#include <string>
#include <utility>

#include <Eigen/SVD>

#include "gridtop/errors.hpp"
#include "gridtop/kernels.hpp"

#if defined(GRIDTOP_USE_LAPACKE)
#include <lapacke.h>
#endif

namespace gridtop {

ErrorCovariance::ErrorCovariance(Eigen::VectorXd variances) : variances_(std::move(variances)) {
    if ((variances_.array() < 0.0).any())
        throw NegativeVariance("error covariance has a negative diagonal entry");
    cholesky_ = variances_.cwiseSqrt();
}

ErrorCovariance ErrorCovariance::from_variances(Eigen::VectorXd variances) {
    if ((variances.array() < 0.0).any())
        throw NegativeVariance("error covariance has a negative diagonal entry");
    const double max_entry = variances.size() > 0 ? variances.maxCoeff() : 0.0;
    const double floor = max_entry > 0.0 ? kRelativeFloor * max_entry : kAbsoluteFloor;
    for (Eigen::Index i = 0; i < variances.size(); ++i)
        if (variances(i) < floor) variances(i) = floor;
    return ErrorCovariance(std::move(variances));
}

Eigen::MatrixXd whiten(const Eigen::MatrixXd& z, const ErrorCovariance& cov) {
    if (cov.size() != z.rows())
        throw std::invalid_argument("whiten: covariance size does not match row count");
    if ((cov.variances().array() <= 0.0).any())
        throw SingularCovariance("error covariance has a zero diagonal entry");
    Eigen::MatrixXd z_s = z;
    kernels::scale_rows(z_s, cov.cholesky_diagonal().cwiseInverse());
    return z_s;
}

namespace {

SubspaceFit fit_eigen(const Eigen::MatrixXd& z_s, Eigen::Index p) {
    Eigen::BDCSVD<Eigen::MatrixXd> svd(z_s, Eigen::ComputeThinU);
    SubspaceFit out;
    out.singular_values = svd.singularValues();
    out.u2_transpose = svd.matrixU().rightCols(p).transpose();
    return out;
}

#if defined(GRIDTOP_USE_LAPACKE)
// dgesdd on the transposed (tall) matrix: with B = Z_s^T = V S U^T, the
// returned VT block is exactly U^T and the tall factor is never formed.
bool fit_lapack(const Eigen::MatrixXd& z_s, Eigen::Index p, SubspaceFit& out) {
    const auto n = static_cast<lapack_int>(z_s.rows());
    const auto samples = static_cast<lapack_int>(z_s.cols());
    Eigen::MatrixXd tall = z_s.transpose();
    Eigen::VectorXd s(n);
    Eigen::MatrixXd vt(n, n);
    const lapack_int info =
        LAPACKE_dgesdd(LAPACK_COL_MAJOR, 'O', samples, n, tall.data(), samples, s.data(),
                       nullptr, samples, vt.data(), n);
    if (info != 0) return false;
    out.singular_values = s;
    out.u2_transpose = vt.bottomRows(p);
    return true;
}
#endif

}  // namespace

SubspaceFit fit(const Eigen::MatrixXd& z_s, Eigen::Index p) {
    const Eigen::Index n = z_s.rows();
    if (z_s.cols() < n)
        throw InsufficientSamples("need at least as many samples as variables (n = " +
                                  std::to_string(n) + ", N = " + std::to_string(z_s.cols()) +
                                  ")");
    if (p < 1 || p >= n)
        throw std::invalid_argument("constraint count must satisfy 1 <= p < n");

#if defined(GRIDTOP_USE_LAPACKE)
    SubspaceFit out;
    if (fit_lapack(z_s, p, out)) return out;
#endif
    return fit_eigen(z_s, p);
}

Eigen::MatrixXd unwhiten_constraints(const Eigen::MatrixXd& u2_transpose,
                                     const ErrorCovariance& cov) {
    if (cov.size() != u2_transpose.cols())
        throw std::invalid_argument("unwhiten_constraints: covariance size mismatch");
    Eigen::MatrixXd c_hat = u2_transpose;
    const Eigen::VectorXd& l = cov.cholesky_diagonal();
    for (Eigen::Index j = 0; j < c_hat.cols(); ++j) c_hat.col(j) /= l(j);
    return c_hat;
}

Eigen::MatrixXd regression(const Eigen::MatrixXd& c_hat,
                           const std::vector<Eigen::Index>& dependent_indices,
                           const std::vector<Eigen::Index>& independent_indices) {
    const Eigen::Index p = c_hat.rows();
    if (static_cast<Eigen::Index>(dependent_indices.size()) != p)
        throw std::invalid_argument("regression: dependent block must be square (p columns)");
    if (dependent_indices.size() + independent_indices.size() !=
        static_cast<std::size_t>(c_hat.cols()))
        throw std::invalid_argument("regression: partition must cover all columns");

    Eigen::MatrixXd c_d(p, p);
    for (Eigen::Index j = 0; j < p; ++j) c_d.col(j) = c_hat.col(dependent_indices[j]);
    Eigen::MatrixXd c_i(p, static_cast<Eigen::Index>(independent_indices.size()));
    for (Eigen::Index j = 0; j < c_i.cols(); ++j)
        c_i.col(j) = c_hat.col(independent_indices[static_cast<std::size_t>(j)]);

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(c_d, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const double s_max = svd.singularValues()(0);
    const double s_min = svd.singularValues()(p - 1);
    if (s_min <= 0.0 || s_max / s_min > kDependentConditionLimit)
        throw SingularDependentBlock(
            "dependent block of the constraint matrix is singular or ill-conditioned "
            "(condition number " +
            std::to_string(s_min > 0.0 ? s_max / s_min : std::numeric_limits<double>::infinity()) +
            ")");
    return -svd.solve(c_i);
}

}  // namespace gridtop
