#pragma once

#include "condrank/graph.hpp"
#include "condrank/kernels.hpp"
#include "condrank/linalg.hpp"
#include "condrank/solvers.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace condrank {

/// A trained conditional ranking model. Immutable once built.
///
/// Scores follow the dual expansion over all training node pairs: for a
/// start node s and an end node e, raw(s, e) = k_e^T A k_s where k_s, k_e are
/// base-kernel evaluations against the training nodes. Symmetric models
/// report (raw(s, e) + raw(e, s)) / 2 and reciprocal models
/// (raw(s, e) - raw(e, s)) / 2.
struct Model {
    DualCoefficients dual;
    NodeKernelConfig kernel;
    PairwiseKind pairwise = PairwiseKind::Ordinary;
    /// Training node features; empty (p x 0) for precomputed kernels.
    RealMatrix train_features;

    Objective objective = Objective::Regression;
    double lambda = 0.0;
    SolverKind solver = SolverKind::ClosedForm;
    int iterations = 0;
    double residual = 0.0;

    [[nodiscard]] Index node_count() const { return dual.values.rows(); }
};

/// One entry of a conditional ranking.
struct RankedCandidate {
    Index candidate = 0;  // row in the candidate matrix
    double score = 0.0;
};

namespace model {

inline constexpr int kFormatVersion = 1;
inline constexpr const char* kFormatTag = "condrank-model";

/// What train_model does when the iterative solver breaks down.
enum class BreakdownPolicy {
    Throw,
    /// Keep the best iterate seen before the breakdown, as an early-stopped
    /// solution.
    KeepBestIterate,
};

/// Builds the base kernel over the dataset's features, trains, and packages
/// the result. `broke_down`, when given, reports whether a breakdown was
/// absorbed under KeepBestIterate.
Model train_model(const GraphDataset& ds, const NodeKernelConfig& kernel, const TrainConfig& cfg,
                  BreakdownPolicy policy = BreakdownPolicy::Throw, bool* broke_down = nullptr);

/// Score grid H (t x s): H(e, s) is the score of the edge start s -> end e.
/// Symmetric and reciprocal models need identical start and end sets.
RealMatrix predict_scores(const Model& m, const RealMatrix& start_feats,
                          const RealMatrix& end_feats);

/// As predict_scores, from base-kernel rows against the training nodes
/// (s x p and t x p). `same_set` states that start and end nodes coincide.
RealMatrix predict_scores_from_kernels(const Model& m, const RealMatrix& k_start,
                                       const RealMatrix& k_end, bool same_set);

/// Ranks candidates by descending score of condition -> candidate
/// (Outgoing) or candidate -> condition (Incoming). Ties keep ascending
/// candidate order.
std::vector<RankedCandidate> rank_candidates(const Model& m, const RealVector& condition_feats,
                                             const RealMatrix& candidate_feats,
                                             Conditioning direction = Conditioning::Outgoing);

void save_model(const Model& m, const std::filesystem::path& path);
Model load_model(const std::filesystem::path& path);

void write_model(const Model& m, std::ostream& out);
Model read_model(std::istream& in);

}  // namespace model
}  // namespace condrank
