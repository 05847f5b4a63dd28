#include "gridtop/kernels.hpp"

#include <cstdlib>
#include <random>
#include <stdexcept>

#if defined(_OPENMP)
#include <omp.h>
#endif

namespace gridtop::kernels {

int max_threads() {
#if defined(_OPENMP)
    int n = omp_get_max_threads();
#else
    int n = 1;
#endif
    if (const char* env = std::getenv("GRIDTOP_THREADS")) {
        const int cap = std::atoi(env);
        if (cap >= 1 && cap < n) n = cap;
    }
    return n;
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
    // splitmix64 finalizer over the combined state
    std::uint64_t x = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
    x ^= x >> 30;
    x *= 0xBF58476D1CE4E5B9ULL;
    x ^= x >> 27;
    x *= 0x94D049BB133111EBULL;
    x ^= x >> 31;
    return x;
}

namespace {

void check_length(Eigen::Index got, Eigen::Index want, const char* what) {
    if (got != want) throw std::invalid_argument(std::string(what) + ": length mismatch");
}

inline double row_mean_one(const Eigen::MatrixXd& m, Eigen::Index i) {
    double acc = 0.0;
    for (Eigen::Index j = 0; j < m.cols(); ++j) acc += m(i, j);
    return m.cols() > 0 ? acc / static_cast<double>(m.cols()) : 0.0;
}

inline double row_variance_one(const Eigen::MatrixXd& m, Eigen::Index i, double mean) {
    double acc = 0.0;
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
        const double d = m(i, j) - mean;
        acc += d * d;
    }
    return m.cols() > 0 ? acc / static_cast<double>(m.cols()) : 0.0;
}

inline void add_gaussian_row(Eigen::MatrixXd& m, Eigen::Index i, double sigma,
                             std::uint64_t seed) {
    if (sigma == 0.0) return;
    std::mt19937_64 rng(mix_seed(seed, static_cast<std::uint64_t>(i)));
    std::normal_distribution<double> dist(0.0, sigma);
    for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) += dist(rng);
}

inline void fill_uniform_row(Eigen::MatrixXd& m, Eigen::Index i, double low, double high,
                             std::uint64_t seed) {
    std::mt19937_64 rng(mix_seed(seed, static_cast<std::uint64_t>(i)));
    std::uniform_real_distribution<double> dist(low, high);
    for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = dist(rng);
}

inline double column_imbalance_one(const Eigen::MatrixXd& m,
                                   const std::vector<Eigen::Index>& parent_rows,
                                   const std::vector<Eigen::Index>& child_rows,
                                   Eigen::Index j) {
    double p = 0.0, c = 0.0;
    for (const Eigen::Index r : parent_rows) p += m(r, j);
    for (const Eigen::Index r : child_rows) c += m(r, j);
    return p - c;
}

inline void aggregate_one(Eigen::MatrixXd& m, const RowGroup& g) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
        double acc = 0.0;
        for (const Eigen::Index s : g.sources) acc += m(s, j);
        m(g.target, j) = acc;
    }
}

inline void aggregate_one_weighted(Eigen::MatrixXd& m, const WeightedRowGroup& g) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
        double acc = 0.0;
        for (std::size_t k = 0; k < g.sources.size(); ++k) acc += g.weights[k] * m(g.sources[k], j);
        m(g.target, j) = acc;
    }
}

}  // namespace

namespace serial {

Eigen::VectorXd row_means(const Eigen::MatrixXd& m) {
    Eigen::VectorXd out(m.rows());
    for (Eigen::Index i = 0; i < m.rows(); ++i) out(i) = row_mean_one(m, i);
    return out;
}

Eigen::VectorXd row_variances(const Eigen::MatrixXd& m, const Eigen::VectorXd& means) {
    check_length(means.size(), m.rows(), "row_variances");
    Eigen::VectorXd out(m.rows());
    for (Eigen::Index i = 0; i < m.rows(); ++i) out(i) = row_variance_one(m, i, means(i));
    return out;
}

void scale_rows(Eigen::MatrixXd& m, const Eigen::VectorXd& factors) {
    check_length(factors.size(), m.rows(), "scale_rows");
    for (Eigen::Index j = 0; j < m.cols(); ++j)
        for (Eigen::Index i = 0; i < m.rows(); ++i) m(i, j) *= factors(i);
}

void subtract_row_offsets(Eigen::MatrixXd& m, const Eigen::VectorXd& offsets) {
    check_length(offsets.size(), m.rows(), "subtract_row_offsets");
    for (Eigen::Index j = 0; j < m.cols(); ++j)
        for (Eigen::Index i = 0; i < m.rows(); ++i) m(i, j) -= offsets(i);
}

void add_gaussian_rows(Eigen::MatrixXd& m, const Eigen::VectorXd& sigmas, std::uint64_t seed) {
    check_length(sigmas.size(), m.rows(), "add_gaussian_rows");
    for (Eigen::Index i = 0; i < m.rows(); ++i) add_gaussian_row(m, i, sigmas(i), seed);
}

void fill_uniform_rows(Eigen::MatrixXd& m, const Eigen::VectorXd& lows,
                       const Eigen::VectorXd& highs, std::uint64_t seed) {
    check_length(lows.size(), m.rows(), "fill_uniform_rows");
    check_length(highs.size(), m.rows(), "fill_uniform_rows");
    for (Eigen::Index i = 0; i < m.rows(); ++i) fill_uniform_row(m, i, lows(i), highs(i), seed);
}

Eigen::VectorXd group_imbalance(const Eigen::MatrixXd& m,
                                const std::vector<Eigen::Index>& parent_rows,
                                const std::vector<Eigen::Index>& child_rows) {
    Eigen::VectorXd out(m.cols());
    for (Eigen::Index j = 0; j < m.cols(); ++j)
        out(j) = column_imbalance_one(m, parent_rows, child_rows, j);
    return out;
}

void aggregate_rows(Eigen::MatrixXd& m, const std::vector<RowGroup>& groups) {
    for (const auto& g : groups) aggregate_one(m, g);
}

void aggregate_rows_weighted(Eigen::MatrixXd& m, const std::vector<WeightedRowGroup>& groups) {
    for (const auto& g : groups) aggregate_one_weighted(m, g);
}

}  // namespace serial

namespace par {

Eigen::VectorXd row_means(const Eigen::MatrixXd& m) {
    Eigen::VectorXd out(m.rows());
#pragma omp parallel for schedule(static) num_threads(max_threads())
    for (Eigen::Index i = 0; i < m.rows(); ++i) out(i) = row_mean_one(m, i);
    return out;
}

Eigen::VectorXd row_variances(const Eigen::MatrixXd& m, const Eigen::VectorXd& means) {
    check_length(means.size(), m.rows(), "row_variances");
    Eigen::VectorXd out(m.rows());
#pragma omp parallel for schedule(static) num_threads(max_threads())
    for (Eigen::Index i = 0; i < m.rows(); ++i) out(i) = row_variance_one(m, i, means(i));
    return out;
}

void scale_rows(Eigen::MatrixXd& m, const Eigen::VectorXd& factors) {
    check_length(factors.size(), m.rows(), "scale_rows");
#pragma omp parallel for schedule(static) num_threads(max_threads())
    for (Eigen::Index j = 0; j < m.cols(); ++j)
        for (Eigen::Index i = 0; i < m.rows(); ++i) m(i, j) *= factors(i);
}

void subtract_row_offsets(Eigen::MatrixXd& m, const Eigen::VectorXd& offsets) {
    check_length(offsets.size(), m.rows(), "subtract_row_offsets");
#pragma omp parallel for schedule(static) num_threads(max_threads())
    for (Eigen::Index j = 0; j < m.cols(); ++j)
        for (Eigen::Index i = 0; i < m.rows(); ++i) m(i, j) -= offsets(i);
}

void add_gaussian_rows(Eigen::MatrixXd& m, const Eigen::VectorXd& sigmas, std::uint64_t seed) {
    check_length(sigmas.size(), m.rows(), "add_gaussian_rows");
#pragma omp parallel for schedule(static) num_threads(max_threads())
    for (Eigen::Index i = 0; i < m.rows(); ++i) add_gaussian_row(m, i, sigmas(i), seed);
}

void fill_uniform_rows(Eigen::MatrixXd& m, const Eigen::VectorXd& lows,
                       const Eigen::VectorXd& highs, std::uint64_t seed) {
    check_length(lows.size(), m.rows(), "fill_uniform_rows");
    check_length(highs.size(), m.rows(), "fill_uniform_rows");
#pragma omp parallel for schedule(static) num_threads(max_threads())
    for (Eigen::Index i = 0; i < m.rows(); ++i) fill_uniform_row(m, i, lows(i), highs(i), seed);
}

Eigen::VectorXd group_imbalance(const Eigen::MatrixXd& m,
                                const std::vector<Eigen::Index>& parent_rows,
                                const std::vector<Eigen::Index>& child_rows) {
    Eigen::VectorXd out(m.cols());
#pragma omp parallel for schedule(static) num_threads(max_threads())
    for (Eigen::Index j = 0; j < m.cols(); ++j)
        out(j) = column_imbalance_one(m, parent_rows, child_rows, j);
    return out;
}

void aggregate_rows(Eigen::MatrixXd& m, const std::vector<RowGroup>& groups) {
    const auto n = static_cast<Eigen::Index>(groups.size());
#pragma omp parallel for schedule(static) num_threads(max_threads())
    for (Eigen::Index k = 0; k < n; ++k) aggregate_one(m, groups[static_cast<std::size_t>(k)]);
}

void aggregate_rows_weighted(Eigen::MatrixXd& m, const std::vector<WeightedRowGroup>& groups) {
    const auto n = static_cast<Eigen::Index>(groups.size());
#pragma omp parallel for schedule(static) num_threads(max_threads())
    for (Eigen::Index k = 0; k < n; ++k)
        aggregate_one_weighted(m, groups[static_cast<std::size_t>(k)]);
}

}  // namespace par

namespace {

inline bool use_parallel() {
#if defined(_OPENMP)
    return max_threads() > 1;
#else
    return false;
#endif
}

}  // namespace

Eigen::VectorXd row_means(const Eigen::MatrixXd& m) {
    return use_parallel() ? par::row_means(m) : serial::row_means(m);
}

Eigen::VectorXd row_variances(const Eigen::MatrixXd& m, const Eigen::VectorXd& means) {
    return use_parallel() ? par::row_variances(m, means) : serial::row_variances(m, means);
}

void scale_rows(Eigen::MatrixXd& m, const Eigen::VectorXd& factors) {
    use_parallel() ? par::scale_rows(m, factors) : serial::scale_rows(m, factors);
}

void subtract_row_offsets(Eigen::MatrixXd& m, const Eigen::VectorXd& offsets) {
    use_parallel() ? par::subtract_row_offsets(m, offsets)
                   : serial::subtract_row_offsets(m, offsets);
}

void add_gaussian_rows(Eigen::MatrixXd& m, const Eigen::VectorXd& sigmas, std::uint64_t seed) {
    use_parallel() ? par::add_gaussian_rows(m, sigmas, seed)
                   : serial::add_gaussian_rows(m, sigmas, seed);
}

void fill_uniform_rows(Eigen::MatrixXd& m, const Eigen::VectorXd& lows,
                       const Eigen::VectorXd& highs, std::uint64_t seed) {
    use_parallel() ? par::fill_uniform_rows(m, lows, highs, seed)
                   : serial::fill_uniform_rows(m, lows, highs, seed);
}

Eigen::VectorXd group_imbalance(const Eigen::MatrixXd& m,
                                const std::vector<Eigen::Index>& parent_rows,
                                const std::vector<Eigen::Index>& child_rows) {
    return use_parallel() ? par::group_imbalance(m, parent_rows, child_rows)
                          : serial::group_imbalance(m, parent_rows, child_rows);
}

void aggregate_rows(Eigen::MatrixXd& m, const std::vector<RowGroup>& groups) {
    use_parallel() ? par::aggregate_rows(m, groups) : serial::aggregate_rows(m, groups);
}

void aggregate_rows_weighted(Eigen::MatrixXd& m, const std::vector<WeightedRowGroup>& groups) {
    use_parallel() ? par::aggregate_rows_weighted(m, groups)
                   : serial::aggregate_rows_weighted(m, groups);
}

}  // namespace gridtop::kernels
