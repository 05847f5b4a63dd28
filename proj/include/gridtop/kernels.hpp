#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

namespace gridtop::kernels {

/// Worker cap: min(OpenMP max threads, GRIDTOP_THREADS when set). 1 without
/// OpenMP.
int max_threads();

/// Deterministic per-stream seed derivation (splitmix64 over seed and
/// stream index). Used so per-row RNG streams are independent of thread
/// scheduling.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

/// target row index plus the source rows summed into it.
struct RowGroup {
    Eigen::Index target{};
    std::vector<Eigen::Index> sources;
};

/// As RowGroup, with one multiplicative factor per source row.
struct WeightedRowGroup {
    Eigen::Index target{};
    std::vector<Eigen::Index> sources;
    std::vector<double> weights;
};

// Serial reference implementations. Every kernel accumulates per output
// element in a fixed order (ascending column index, sources in list order),
// so the parallel versions below are bit-identical to these.
namespace serial {

Eigen::VectorXd row_means(const Eigen::MatrixXd& m);
Eigen::VectorXd row_variances(const Eigen::MatrixXd& m, const Eigen::VectorXd& means);
void scale_rows(Eigen::MatrixXd& m, const Eigen::VectorXd& factors);
void subtract_row_offsets(Eigen::MatrixXd& m, const Eigen::VectorXd& offsets);
void add_gaussian_rows(Eigen::MatrixXd& m, const Eigen::VectorXd& sigmas, std::uint64_t seed);
void fill_uniform_rows(Eigen::MatrixXd& m, const Eigen::VectorXd& lows,
                       const Eigen::VectorXd& highs, std::uint64_t seed);
/// Per column: sum over parent_rows minus sum over child_rows.
Eigen::VectorXd group_imbalance(const Eigen::MatrixXd& m,
                                const std::vector<Eigen::Index>& parent_rows,
                                const std::vector<Eigen::Index>& child_rows);
void aggregate_rows(Eigen::MatrixXd& m, const std::vector<RowGroup>& groups);
void aggregate_rows_weighted(Eigen::MatrixXd& m, const std::vector<WeightedRowGroup>& groups);

}  // namespace serial

// OpenMP implementations; work is partitioned by output row (or column for
// column-indexed kernels), preserving the serial accumulation order.
namespace par {

Eigen::VectorXd row_means(const Eigen::MatrixXd& m);
Eigen::VectorXd row_variances(const Eigen::MatrixXd& m, const Eigen::VectorXd& means);
void scale_rows(Eigen::MatrixXd& m, const Eigen::VectorXd& factors);
void subtract_row_offsets(Eigen::MatrixXd& m, const Eigen::VectorXd& offsets);
void add_gaussian_rows(Eigen::MatrixXd& m, const Eigen::VectorXd& sigmas, std::uint64_t seed);
void fill_uniform_rows(Eigen::MatrixXd& m, const Eigen::VectorXd& lows,
                       const Eigen::VectorXd& highs, std::uint64_t seed);
Eigen::VectorXd group_imbalance(const Eigen::MatrixXd& m,
                                const std::vector<Eigen::Index>& parent_rows,
                                const std::vector<Eigen::Index>& child_rows);
void aggregate_rows(Eigen::MatrixXd& m, const std::vector<RowGroup>& groups);
void aggregate_rows_weighted(Eigen::MatrixXd& m, const std::vector<WeightedRowGroup>& groups);

}  // namespace par

// Default entry points: parallel when OpenMP is enabled and more than one
// worker is allowed, serial otherwise. Results are identical either way.

Eigen::VectorXd row_means(const Eigen::MatrixXd& m);
Eigen::VectorXd row_variances(const Eigen::MatrixXd& m, const Eigen::VectorXd& means);
void scale_rows(Eigen::MatrixXd& m, const Eigen::VectorXd& factors);
void subtract_row_offsets(Eigen::MatrixXd& m, const Eigen::VectorXd& offsets);
void add_gaussian_rows(Eigen::MatrixXd& m, const Eigen::VectorXd& sigmas, std::uint64_t seed);
void fill_uniform_rows(Eigen::MatrixXd& m, const Eigen::VectorXd& lows,
                       const Eigen::VectorXd& highs, std::uint64_t seed);
Eigen::VectorXd group_imbalance(const Eigen::MatrixXd& m,
                                const std::vector<Eigen::Index>& parent_rows,
                                const std::vector<Eigen::Index>& child_rows);
void aggregate_rows(Eigen::MatrixXd& m, const std::vector<RowGroup>& groups);
void aggregate_rows_weighted(Eigen::MatrixXd& m, const std::vector<WeightedRowGroup>& groups);

}  // namespace gridtop::kernels
