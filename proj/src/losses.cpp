#include "condrank/losses.hpp"

#include "condrank/errors.hpp"

#include <cstdint>
#include <string>

namespace condrank::losses {

double pairwise_rank_loss(const GroupedScores& groups) {
    double cost = 0.0;
    std::int64_t pairs = 0;
    for (const auto& group : groups) {
        for (const ScoredEdge& low : group) {
            for (const ScoredEdge& high : group) {
                if (!(low.label < high.label)) {
                    continue;
                }
                ++pairs;
                const double diff = low.prediction - high.prediction;
                if (diff > 0.0) {
                    cost += 1.0;
                } else if (diff == 0.0) {
                    cost += 0.5;
                }
            }
        }
    }
    if (pairs == 0) {
        throw UndefinedLoss("pairwise rank loss: no group contains two distinct labels");
    }
    return cost / static_cast<double>(pairs);
}

double regression_loss(const RealVector& predictions, const RealVector& labels) {
    if (predictions.size() != labels.size()) {
        throw InvalidInput("regression_loss: " + std::to_string(predictions.size()) +
                           " predictions vs " + std::to_string(labels.size()) + " labels");
    }
    return (labels - predictions).squaredNorm();
}

double centered_squared_loss(const GroupedScores& groups) {
    double total = 0.0;
    for (const auto& group : groups) {
        if (group.empty()) {
            throw InvalidInput("centered_squared_loss: empty group");
        }
        for (const ScoredEdge& a : group) {
            for (const ScoredEdge& b : group) {
                const double d = a.label - b.label - a.prediction + b.prediction;
                total += d * d;
            }
        }
    }
    return total;
}

GroupedScores group_by_node(const GraphDataset& ds, const RealVector& predictions,
                            Conditioning conditioning) {
    if (predictions.size() != ds.edge_count()) {
        throw InvalidInput("group_by_node: prediction count does not match edge count");
    }
    const BlockStructure bs = graph::build_block_structure(ds, conditioning);
    GroupedScores out;
    for (const auto& members : bs.members) {
        if (members.empty()) {
            continue;
        }
        auto& group = out.emplace_back();
        group.reserve(members.size());
        for (Index k : members) {
            group.push_back({predictions(k), ds.edges[static_cast<std::size_t>(k)].label});
        }
    }
    return out;
}

}  // namespace condrank::losses
