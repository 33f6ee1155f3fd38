#pragma once

#include "condrank/linalg.hpp"

#include <string>
#include <vector>

namespace condrank {

/// Directed labeled edge between node indices (0-based).
struct Edge {
    Index start = 0;
    Index end = 0;
    double label = 0.0;
};

/// Nodes with features plus a multiset of directed labeled edges.
struct GraphDataset {
    std::vector<std::string> node_ids;
    RealMatrix features;  // one row per node
    std::vector<Edge> edges;

    [[nodiscard]] Index node_count() const { return static_cast<Index>(node_ids.size()); }
    [[nodiscard]] Index edge_count() const { return static_cast<Index>(edges.size()); }
};

/// p x p matrix with Y(end, start) = label of edge start -> end, so that
/// vec(Y) is the label vector under the global edge index start * p + end.
struct LabelMatrix {
    RealMatrix values;
};

/// Which edges form a conditioning group: those leaving a node or those
/// entering it.
enum class Conditioning { Outgoing, Incoming };

/// Edges grouped by their conditioning node.
struct BlockStructure {
    std::vector<Index> group_of_edge;          // per edge, the conditioning node
    std::vector<Index> group_sizes;            // per node, number of edges (l_i)
    std::vector<std::vector<Index>> members;   // per node, the edge indices
};

/// Gather map from training edges to the p^2 pair index space.
struct Bookkeeping {
    Index node_count = 0;
    std::vector<Index> pair_index;  // per edge, start * p + end

    [[nodiscard]] Index edge_count() const { return static_cast<Index>(pair_index.size()); }

    /// B v: picks one entry of the length-p^2 vector per edge.
    [[nodiscard]] RealVector gather(const RealVector& pairs) const;

    /// B^T w: adds each edge entry into its pair slot.
    [[nodiscard]] RealVector scatter(const RealVector& per_edge) const;
};

namespace graph {

/// Flat pair index of the edge start -> end among p nodes.
constexpr Index pair_index(Index start, Index end, Index p) { return start * p + end; }

/// Checks node index ranges, feature row count and label finiteness.
void validate(const GraphDataset& ds);

/// True when every ordered pair (loops included) occurs exactly once.
bool is_complete(const GraphDataset& ds);

/// Requires a complete graph; throws IncompleteGraph naming the first missing
/// or duplicated pair.
LabelMatrix build_label_matrix(const GraphDataset& ds);

Bookkeeping build_bookkeeping(const GraphDataset& ds);

BlockStructure build_block_structure(const GraphDataset& ds,
                                     Conditioning conditioning = Conditioning::Outgoing);

/// Subtracts the group mean within every conditioning group, i.e. v - Q Q^T v.
RealVector apply_block_centering(const BlockStructure& bs, const RealVector& v);

/// Labels of the edges in dataset order.
RealVector edge_labels(const GraphDataset& ds);

}  // namespace graph
}  // namespace condrank
