#include "gridtop/readings.hpp"

#include <string>
#include <unordered_map>

#include "gridtop/errors.hpp"

namespace gridtop {

ReadingsMatrix::ReadingsMatrix(Eigen::MatrixXd values, std::vector<NodeId> node_order,
                               double interval_minutes)
    : values_(std::move(values)),
      node_order_(std::move(node_order)),
      interval_minutes_(interval_minutes) {
    if (static_cast<std::size_t>(values_.rows()) != node_order_.size())
        throw Error("readings row count does not match node order");
    if (interval_minutes_ <= 0) throw Error("reading interval must be positive");
    if (!values_.allFinite()) throw Error("readings contain non-finite values");
}

Eigen::Index ReadingsMatrix::row_of(NodeId id) const {
    for (std::size_t r = 0; r < node_order_.size(); ++r)
        if (node_order_[r] == id) return static_cast<Eigen::Index>(r);
    return -1;
}

ReadingsMatrix ReadingsMatrix::select_rows(std::span<const NodeId> ids) const {
    std::unordered_map<NodeId, Eigen::Index> row_of_id;
    row_of_id.reserve(node_order_.size());
    for (std::size_t r = 0; r < node_order_.size(); ++r)
        row_of_id.emplace(node_order_[r], static_cast<Eigen::Index>(r));

    Eigen::MatrixXd out(static_cast<Eigen::Index>(ids.size()), values_.cols());
    std::vector<NodeId> order;
    order.reserve(ids.size());
    for (std::size_t r = 0; r < ids.size(); ++r) {
        const auto it = row_of_id.find(ids[r]);
        if (it == row_of_id.end())
            throw Error("readings matrix has no row for meter " + std::to_string(ids[r]));
        out.row(static_cast<Eigen::Index>(r)) = values_.row(it->second);
        order.push_back(ids[r]);
    }
    return ReadingsMatrix(std::move(out), std::move(order), interval_minutes_);
}

}  // namespace gridtop
