#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "gridtop/network.hpp"
#include "gridtop/types.hpp"

namespace gridtop {

/// Signed node-by-edge matrix for one consecutive layer pair.
///
/// Rows are ordered parents first, then children, each group by ascending
/// NodeId; columns are ordered by child id. Each column carries exactly one
/// -1 (the row the edge leaves) and one +1 (the row it enters), so the
/// parent block A_d holds the -1 entries and the child block A_i is a
/// permutation of the identity.
class IncidenceMatrix {
public:
    IncidenceMatrix(Eigen::MatrixXi entries, std::vector<NodeId> node_order,
                    std::vector<Edge> edge_order, std::size_t parent_count);

    const Eigen::MatrixXi& entries() const { return entries_; }
    const std::vector<NodeId>& node_order() const { return node_order_; }
    const std::vector<Edge>& edge_order() const { return edge_order_; }

    std::size_t parent_count() const { return parent_count_; }
    std::size_t child_count() const { return node_order_.size() - parent_count_; }

    std::vector<Eigen::Index> parent_rows() const;
    std::vector<Eigen::Index> child_rows() const;

    /// A_d: rows belonging to parent nodes.
    Eigen::MatrixXi parent_block() const;
    /// A_i: rows belonging to child nodes.
    Eigen::MatrixXi child_block() const;

private:
    Eigen::MatrixXi entries_;
    std::vector<NodeId> node_order_;
    std::vector<Edge> edge_order_;
    std::size_t parent_count_{};
};

/// Incidence matrix of the edges between two consecutive layers of net.
IncidenceMatrix build_incidence(const LayeredNetwork& net, int parent_level, int child_level);

/// Vertical split [A_d; A_i]; stacking the two blocks reproduces A exactly.
std::pair<Eigen::MatrixXi, Eigen::MatrixXi> split_incidence(const IncidenceMatrix& a);

/// Unique two-layer forest encoded by A (parents level 2, children level 1).
LayeredNetwork reconstruct_from_incidence(const IncidenceMatrix& a);

}  // namespace gridtop
