#include "condrank/graph.hpp"

#include "condrank/errors.hpp"

#include <cmath>
#include <string>

namespace condrank {

RealVector Bookkeeping::gather(const RealVector& pairs) const {
    if (pairs.size() != node_count * node_count) {
        throw InvalidInput("bookkeeping gather: expected length " +
                           std::to_string(node_count * node_count));
    }
    RealVector out(edge_count());
    for (Index k = 0; k < edge_count(); ++k) {
        out(k) = pairs(pair_index[static_cast<std::size_t>(k)]);
    }
    return out;
}

RealVector Bookkeeping::scatter(const RealVector& per_edge) const {
    if (per_edge.size() != edge_count()) {
        throw InvalidInput("bookkeeping scatter: expected length " + std::to_string(edge_count()));
    }
    RealVector out = RealVector::Zero(node_count * node_count);
    for (Index k = 0; k < edge_count(); ++k) {
        out(pair_index[static_cast<std::size_t>(k)]) += per_edge(k);
    }
    return out;
}

namespace graph {

namespace {

std::string pair_name(const GraphDataset& ds, Index start, Index end) {
    auto name = [&](Index i) {
        const auto idx = static_cast<std::size_t>(i);
        return idx < ds.node_ids.size() ? ds.node_ids[idx] : std::to_string(i);
    };
    return "(" + name(start) + " -> " + name(end) + ")";
}

}  // namespace

void validate(const GraphDataset& ds) {
    const Index p = ds.node_count();
    if (ds.features.rows() != p && ds.features.size() != 0) {
        throw InvalidInput("dataset has " + std::to_string(p) + " node ids but " +
                           std::to_string(ds.features.rows()) + " feature rows");
    }
    for (std::size_t k = 0; k < ds.edges.size(); ++k) {
        const Edge& e = ds.edges[k];
        if (e.start < 0 || e.start >= p || e.end < 0 || e.end >= p) {
            throw InvalidInput("edge " + std::to_string(k) + " references a node index out of range");
        }
        if (!std::isfinite(e.label)) {
            throw InvalidInput("edge " + std::to_string(k) + " has a non-finite label");
        }
    }
}

bool is_complete(const GraphDataset& ds) {
    const Index p = ds.node_count();
    if (ds.edge_count() != p * p) {
        return false;
    }
    std::vector<char> seen(static_cast<std::size_t>(p * p), 0);
    for (const Edge& e : ds.edges) {
        if (e.start < 0 || e.start >= p || e.end < 0 || e.end >= p) {
            return false;
        }
        char& slot = seen[static_cast<std::size_t>(pair_index(e.start, e.end, p))];
        if (slot != 0) {
            return false;
        }
        slot = 1;
    }
    return true;
}

LabelMatrix build_label_matrix(const GraphDataset& ds) {
    validate(ds);
    const Index p = ds.node_count();
    if (p == 0) {
        throw IncompleteGraph("dataset has no nodes");
    }
    RealMatrix y(p, p);
    std::vector<char> seen(static_cast<std::size_t>(p * p), 0);
    for (const Edge& e : ds.edges) {
        char& slot = seen[static_cast<std::size_t>(pair_index(e.start, e.end, p))];
        if (slot != 0) {
            throw IncompleteGraph("duplicate edge " + pair_name(ds, e.start, e.end));
        }
        slot = 1;
        y(e.end, e.start) = e.label;
    }
    for (Index start = 0; start < p; ++start) {
        for (Index end = 0; end < p; ++end) {
            if (seen[static_cast<std::size_t>(pair_index(start, end, p))] == 0) {
                throw IncompleteGraph("missing edge " + pair_name(ds, start, end));
            }
        }
    }
    return {std::move(y)};
}

Bookkeeping build_bookkeeping(const GraphDataset& ds) {
    validate(ds);
    Bookkeeping b;
    b.node_count = ds.node_count();
    b.pair_index.reserve(ds.edges.size());
    for (const Edge& e : ds.edges) {
        b.pair_index.push_back(pair_index(e.start, e.end, b.node_count));
    }
    return b;
}

BlockStructure build_block_structure(const GraphDataset& ds, Conditioning conditioning) {
    validate(ds);
    const auto p = static_cast<std::size_t>(ds.node_count());
    BlockStructure bs;
    bs.group_sizes.assign(p, 0);
    bs.members.resize(p);
    bs.group_of_edge.reserve(ds.edges.size());
    for (std::size_t k = 0; k < ds.edges.size(); ++k) {
        const Edge& e = ds.edges[k];
        const Index node = conditioning == Conditioning::Outgoing ? e.start : e.end;
        bs.group_of_edge.push_back(node);
        bs.group_sizes[static_cast<std::size_t>(node)] += 1;
        bs.members[static_cast<std::size_t>(node)].push_back(static_cast<Index>(k));
    }
    return bs;
}

RealVector apply_block_centering(const BlockStructure& bs, const RealVector& v) {
    const auto q = static_cast<Index>(bs.group_of_edge.size());
    if (v.size() != q) {
        throw InvalidInput("apply_block_centering: vector length " + std::to_string(v.size()) +
                           " != edge count " + std::to_string(q));
    }
    // Q^T v, scaled straight to group means: (Q Q^T v)_e = mean of e's group.
    std::vector<double> mean(bs.group_sizes.size(), 0.0);
    for (Index k = 0; k < q; ++k) {
        mean[static_cast<std::size_t>(bs.group_of_edge[static_cast<std::size_t>(k)])] += v(k);
    }
    for (std::size_t g = 0; g < mean.size(); ++g) {
        if (bs.group_sizes[g] > 0) {
            mean[g] /= static_cast<double>(bs.group_sizes[g]);
        }
    }
    RealVector out(q);
    for (Index k = 0; k < q; ++k) {
        out(k) = v(k) - mean[static_cast<std::size_t>(bs.group_of_edge[static_cast<std::size_t>(k)])];
    }
    return out;
}

RealVector edge_labels(const GraphDataset& ds) {
    RealVector y(ds.edge_count());
    for (std::size_t k = 0; k < ds.edges.size(); ++k) {
        y(static_cast<Index>(k)) = ds.edges[k].label;
    }
    return y;
}

}  // namespace graph
}  // namespace condrank
