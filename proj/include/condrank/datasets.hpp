#pragma once

#include "condrank/graph.hpp"
#include "condrank/linalg.hpp"

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace condrank {

/// Rock-paper-scissors tournament settings. `w` controls how strongly each
/// player prefers one move: 1 gives near-uniform play, large values give
/// near-pure strategies.
struct RpsConfig {
    Index n_train_players = 100;
    Index n_train_games = 1000;
    Index n_test_players = 100;
    double w = 1.0;
    std::uint64_t seed = 0;
};

struct RpsData {
    /// Players with their move probabilities (rock, paper, scissors) as
    /// features; each game yields winner -> loser labeled +1 and
    /// loser -> winner labeled -1.
    GraphDataset train;
    std::vector<std::string> test_ids;
    RealMatrix test_features;
    /// test_win_prob(i, j): probability that test player i beats j in a game
    /// without a tie.
    RealMatrix test_win_prob;
};

struct NodeTable {
    std::vector<std::string> ids;
    RealMatrix features;
};

/// Predicted or reference score of one directed pair.
struct ScoredPair {
    std::string start;
    std::string end;
    double score = 0.0;
};

namespace datasets {

using Strategy = std::array<double, 3>;

/// Probability that a player with `first` beats one with `second`,
/// conditioned on the game not being a tie.
double rps_win_probability(const Strategy& first, const Strategy& second);

RpsData gen_rps(const RpsConfig& cfg);

/// Writes train_nodes.csv, train_edges.csv, test_nodes.csv and
/// test_truth.csv (start,end,label over all ordered pairs of distinct test
/// players).
void write_rps_files(const RpsData& data, const std::filesystem::path& out_dir);

/// `id,f1,...,fd` header, one row per node.
NodeTable read_nodes_csv(const std::filesystem::path& path);
void write_nodes_csv(const std::filesystem::path& path, const std::vector<std::string>& ids,
                     const RealMatrix& features);

/// `start,end,label` header; ids resolved against `ids`.
std::vector<Edge> read_edges_csv(const std::filesystem::path& path,
                                 const std::vector<std::string>& ids);
void write_edges_csv(const std::filesystem::path& path, const std::vector<std::string>& ids,
                     const std::vector<Edge>& edges);

/// `start,end,score` rows, start-major. grid(e, s) scores start s -> end e.
void write_predictions_csv(const std::filesystem::path& path,
                           const std::vector<std::string>& start_ids,
                           const std::vector<std::string>& end_ids, const RealMatrix& grid);

/// Reads `start,end,<value>` files (predictions or ground truth) without id
/// resolution.
std::vector<ScoredPair> read_scored_pairs_csv(const std::filesystem::path& path);

/// Complete directed graph (loops included) over p nodes with standard
/// normal features (d columns) and standard normal labels.
GraphDataset random_complete_graph(Index p, Index d, std::uint64_t seed);

/// q edges between uniformly drawn (start, end) pairs; duplicates possible.
GraphDataset random_graph(Index p, Index q, Index d, std::uint64_t seed);

/// Nodes plus edges in one dataset.
GraphDataset load_graph(const std::filesystem::path& nodes_path,
                        const std::filesystem::path& edges_path);

}  // namespace datasets
}  // namespace condrank
