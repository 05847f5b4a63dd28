#include "gridtop/incidence.hpp"

#include <numeric>
#include <string>

#include "gridtop/errors.hpp"

namespace gridtop {

namespace {

void check_column_pattern(const Eigen::MatrixXi& entries) {
    for (Eigen::Index j = 0; j < entries.cols(); ++j) {
        int plus = 0, minus = 0;
        for (Eigen::Index i = 0; i < entries.rows(); ++i) {
            const int v = entries(i, j);
            if (v == 1) ++plus;
            else if (v == -1) ++minus;
            else if (v != 0)
                throw MalformedColumn("column " + std::to_string(j) +
                                      " has an entry outside {-1, 0, +1}");
        }
        if (plus != 1 || minus != 1)
            throw MalformedColumn("column " + std::to_string(j) +
                                  " must have exactly one +1 and one -1");
    }
}

}  // namespace

IncidenceMatrix::IncidenceMatrix(Eigen::MatrixXi entries, std::vector<NodeId> node_order,
                                 std::vector<Edge> edge_order, std::size_t parent_count)
    : entries_(std::move(entries)),
      node_order_(std::move(node_order)),
      edge_order_(std::move(edge_order)),
      parent_count_(parent_count) {
    if (static_cast<std::size_t>(entries_.rows()) != node_order_.size())
        throw Error("incidence row count does not match node order");
    if (static_cast<std::size_t>(entries_.cols()) != edge_order_.size())
        throw Error("incidence column count does not match edge order");
    if (parent_count_ > node_order_.size())
        throw Error("parent row count exceeds node count");
    check_column_pattern(entries_);
}

std::vector<Eigen::Index> IncidenceMatrix::parent_rows() const {
    std::vector<Eigen::Index> rows(parent_count_);
    std::iota(rows.begin(), rows.end(), Eigen::Index{0});
    return rows;
}

std::vector<Eigen::Index> IncidenceMatrix::child_rows() const {
    std::vector<Eigen::Index> rows(child_count());
    std::iota(rows.begin(), rows.end(), static_cast<Eigen::Index>(parent_count_));
    return rows;
}

Eigen::MatrixXi IncidenceMatrix::parent_block() const {
    return entries_.topRows(static_cast<Eigen::Index>(parent_count_));
}

Eigen::MatrixXi IncidenceMatrix::child_block() const {
    return entries_.bottomRows(static_cast<Eigen::Index>(child_count()));
}

IncidenceMatrix build_incidence(const LayeredNetwork& net, int parent_level, int child_level) {
    if (parent_level != child_level + 1)
        throw NonConsecutiveLayers("parent layer " + std::to_string(parent_level) +
                                   " is not directly above child layer " +
                                   std::to_string(child_level));
    const Layer& parents = net.layer(parent_level);
    const Layer& children = net.layer(child_level);

    std::vector<NodeId> node_order = parents.members;
    node_order.insert(node_order.end(), children.members.begin(), children.members.end());

    std::vector<Eigen::Index> row_of(static_cast<std::size_t>(net.node_count()), -1);
    for (std::size_t r = 0; r < node_order.size(); ++r)
        row_of[static_cast<std::size_t>(node_order[r])] = static_cast<Eigen::Index>(r);

    // One column per child, ordered by child id; the child block comes out
    // as the identity.
    std::vector<Edge> edge_order;
    edge_order.reserve(children.members.size());
    for (NodeId child : children.members) {
        const auto parent = net.parent_of(child);
        if (!parent)
            throw OrphanChild("child node " + std::to_string(child) + " has no parent edge");
        edge_order.push_back(Edge{*parent, child});
    }

    Eigen::MatrixXi entries = Eigen::MatrixXi::Zero(static_cast<Eigen::Index>(node_order.size()),
                                                    static_cast<Eigen::Index>(edge_order.size()));
    for (std::size_t j = 0; j < edge_order.size(); ++j) {
        const Edge& e = edge_order[j];
        entries(row_of[static_cast<std::size_t>(e.parent)], static_cast<Eigen::Index>(j)) = -1;
        entries(row_of[static_cast<std::size_t>(e.child)], static_cast<Eigen::Index>(j)) = 1;
    }
    return IncidenceMatrix(std::move(entries), std::move(node_order), std::move(edge_order),
                           parents.members.size());
}

std::pair<Eigen::MatrixXi, Eigen::MatrixXi> split_incidence(const IncidenceMatrix& a) {
    if (a.parent_count() == 0) throw EmptyParentSet("incidence matrix has no parent rows");
    return {a.parent_block(), a.child_block()};
}

LayeredNetwork reconstruct_from_incidence(const IncidenceMatrix& a) {
    const auto& entries = a.entries();
    const auto& node_order = a.node_order();
    const auto parent_count = static_cast<Eigen::Index>(a.parent_count());

    std::vector<NodeInfo> nodes;
    nodes.reserve(node_order.size());
    for (std::size_t r = 0; r < node_order.size(); ++r) {
        const int level = static_cast<Eigen::Index>(r) < parent_count ? 2 : 1;
        nodes.push_back(NodeInfo{node_order[r], "n" + std::to_string(node_order[r]),
                                 Role::Unknown, level});
    }

    std::vector<Edge> edges;
    edges.reserve(static_cast<std::size_t>(entries.cols()));
    for (Eigen::Index j = 0; j < entries.cols(); ++j) {
        Eigen::Index from = -1, to = -1;
        for (Eigen::Index i = 0; i < entries.rows(); ++i) {
            if (entries(i, j) == -1) from = i;
            else if (entries(i, j) == 1) to = i;
        }
        if (from < 0 || to < 0)
            throw MalformedColumn("column " + std::to_string(j) + " lacks a +1/-1 pair");
        if (from >= parent_count || to < parent_count)
            throw MalformedColumn("column " + std::to_string(j) +
                                  " is directed against the parent/child row split");
        edges.push_back(Edge{node_order[static_cast<std::size_t>(from)],
                             node_order[static_cast<std::size_t>(to)]});
    }
    return LayeredNetwork(std::move(nodes), std::move(edges));
}

}  // namespace gridtop
