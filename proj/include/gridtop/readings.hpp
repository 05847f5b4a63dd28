#pragma once

#include <span>
#include <vector>

#include <Eigen/Core>

#include "gridtop/types.hpp"

namespace gridtop {

/// Measurement noise parameters shared by the simulator and the
/// identification pipeline.
struct NoiseConfig {
    double loss_low_pct{5.0};        // technical-loss percentage range
    double loss_high_pct{10.0};
    double accuracy_class_pct{0.5};  // ANSI meter accuracy class (percent)
    double interval_minutes{15.0};   // reading interval T
    std::uint64_t rng_seed{0};
};

/// (n x N) energy matrix in watt-hours. Row r belongs to meter
/// node_order()[r]; all N columns share one node order.
class ReadingsMatrix {
public:
    ReadingsMatrix(Eigen::MatrixXd values, std::vector<NodeId> node_order,
                   double interval_minutes);

    Eigen::Index rows() const { return values_.rows(); }
    Eigen::Index samples() const { return values_.cols(); }
    const Eigen::MatrixXd& values() const { return values_; }
    const std::vector<NodeId>& node_order() const { return node_order_; }
    double interval_minutes() const { return interval_minutes_; }

    /// Row index of a meter, or -1 if the meter is not in this matrix.
    Eigen::Index row_of(NodeId id) const;

    /// Copy of the rows for the given meters, in the given order.
    ReadingsMatrix select_rows(std::span<const NodeId> ids) const;

private:
    Eigen::MatrixXd values_;
    std::vector<NodeId> node_order_;
    double interval_minutes_{};
};

}  // namespace gridtop
