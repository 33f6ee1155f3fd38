#pragma once

#include "condrank/graph.hpp"
#include "condrank/linalg.hpp"

#include <vector>

namespace condrank {

struct ScoredEdge {
    double prediction = 0.0;
    double label = 0.0;
};

/// One list of (prediction, label) per conditioning node.
using GroupedScores = std::vector<std::vector<ScoredEdge>>;

namespace losses {

/// Fraction of mis-ordered pairs. Within every group, each pair with
/// label_a < label_b costs 1 if prediction_a > prediction_b, 1/2 on a
/// prediction tie, 0 otherwise; equal labels form no pair. The sum is
/// divided by the number of such pairs over all groups. Throws UndefinedLoss
/// when no group has two distinct labels.
double pairwise_rank_loss(const GroupedScores& groups);

/// Sum of squared residuals.
double regression_loss(const RealVector& predictions, const RealVector& labels);

/// Sum over groups and ordered pairs (a, b) in the group of
/// (y_a - y_b - h_a + h_b)^2.
double centered_squared_loss(const GroupedScores& groups);

/// Groups edge predictions by conditioning node; nodes without edges are
/// dropped.
GroupedScores group_by_node(const GraphDataset& ds, const RealVector& predictions,
                            Conditioning conditioning = Conditioning::Outgoing);

}  // namespace losses
}  // namespace condrank
