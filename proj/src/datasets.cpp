#include "condrank/datasets.hpp"

#include "condrank/errors.hpp"
#include "condrank/random.hpp"
#include "condrank/text.hpp"

#include <fstream>
#include <unordered_map>

namespace condrank::datasets {

namespace {

constexpr int kMoves = 3;

// Move m beats move m' when m == m' + 1 (mod 3): paper > rock,
// scissors > paper, rock > scissors.
constexpr bool beats(int m, int other) { return m == (other + 1) % kMoves; }

Strategy draw_strategy(Rng& rng, double w) {
    Strategy s{};
    for (double& u : s) {
        u = rng.uniform();
    }
    s[rng.below(kMoves)] *= w;
    const double total = s[0] + s[1] + s[2];
    for (double& u : s) {
        u /= total;
    }
    return s;
}

int draw_move(Rng& rng, const Strategy& s) {
    const double u = rng.uniform();
    if (u < s[0]) return 0;
    if (u < s[0] + s[1]) return 1;
    return 2;
}

}  // namespace

double rps_win_probability(const Strategy& first, const Strategy& second) {
    // The no-tie mass is summed directly rather than as 1 - tie, which cancels
    // badly for near-pure strategies.
    double win = 0.0;
    double loss = 0.0;
    for (int m = 0; m < kMoves; ++m) {
        for (int o = 0; o < kMoves; ++o) {
            if (beats(m, o)) {
                win += first[m] * second[o];
            } else if (beats(o, m)) {
                loss += first[m] * second[o];
            }
        }
    }
    const double decided = win + loss;
    return decided > 0.0 ? win / decided : 0.5;
}

RpsData gen_rps(const RpsConfig& cfg) {
    if (cfg.n_train_players < 2 || cfg.n_test_players < 1 || cfg.n_train_games < 1) {
        throw InvalidInput("rps: need at least 2 training players, 1 test player and 1 game");
    }
    if (!(cfg.w >= 1.0) || !std::isfinite(cfg.w)) {
        throw InvalidInput("rps: w must be >= 1");
    }
    Rng rng(cfg.seed);
    RpsData data;

    std::vector<Strategy> train(static_cast<std::size_t>(cfg.n_train_players));
    for (auto& s : train) {
        s = draw_strategy(rng, cfg.w);
    }
    std::vector<Strategy> test(static_cast<std::size_t>(cfg.n_test_players));
    for (auto& s : test) {
        s = draw_strategy(rng, cfg.w);
    }

    auto to_features = [](const std::vector<Strategy>& players) {
        RealMatrix f(static_cast<Index>(players.size()), kMoves);
        for (std::size_t i = 0; i < players.size(); ++i) {
            for (int m = 0; m < kMoves; ++m) {
                f(static_cast<Index>(i), m) = players[i][m];
            }
        }
        return f;
    };

    data.train.features = to_features(train);
    for (Index i = 0; i < cfg.n_train_players; ++i) {
        data.train.node_ids.push_back("p" + std::to_string(i));
    }
    data.train.edges.reserve(static_cast<std::size_t>(2 * cfg.n_train_games));
    const auto n = static_cast<std::uint64_t>(cfg.n_train_players);
    for (Index g = 0; g < cfg.n_train_games; ++g) {
        const auto a = static_cast<Index>(rng.below(n));
        auto b = static_cast<Index>(rng.below(n - 1));
        if (b >= a) {
            ++b;
        }
        const Strategy& sa = train[static_cast<std::size_t>(a)];
        const Strategy& sb = train[static_cast<std::size_t>(b)];
        bool a_wins = false;
        if (sa[0] * sb[0] + sa[1] * sb[1] + sa[2] * sb[2] >= 1.0) {
            a_wins = rng.below(2) == 0;
        } else {
            while (true) {
                const int ma = draw_move(rng, sa);
                const int mb = draw_move(rng, sb);
                if (ma != mb) {
                    a_wins = beats(ma, mb);
                    break;
                }
            }
        }
        const Index winner = a_wins ? a : b;
        const Index loser = a_wins ? b : a;
        data.train.edges.push_back({winner, loser, 1.0});
        data.train.edges.push_back({loser, winner, -1.0});
    }

    data.test_features = to_features(test);
    for (Index i = 0; i < cfg.n_test_players; ++i) {
        data.test_ids.push_back("t" + std::to_string(i));
    }
    data.test_win_prob.resize(cfg.n_test_players, cfg.n_test_players);
    for (Index i = 0; i < cfg.n_test_players; ++i) {
        for (Index j = 0; j < cfg.n_test_players; ++j) {
            data.test_win_prob(i, j) = rps_win_probability(test[static_cast<std::size_t>(i)],
                                                           test[static_cast<std::size_t>(j)]);
        }
    }
    return data;
}

namespace {

std::ofstream open_for_write(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot open '" + path.string() + "' for writing");
    }
    return out;
}

void finish_write(std::ofstream& out, const std::filesystem::path& path) {
    out.flush();
    if (!out) {
        throw IoError("failed writing '" + path.string() + "'");
    }
}

// Line-oriented CSV reader that tracks line numbers for error messages.
class CsvReader {
public:
    explicit CsvReader(const std::filesystem::path& path) : path_(path), in_(path, std::ios::binary) {
        if (!in_) {
            throw IoError("cannot open '" + path.string() + "'");
        }
    }

    bool next(std::vector<std::string>& fields) {
        std::string raw;
        while (std::getline(in_, raw)) {
            ++line_;
            if (!raw.empty() && raw.back() == '\r') {
                raw.pop_back();
            }
            if (text::trim(raw).empty()) {
                continue;
            }
            fields = text::split_csv(raw);
            return true;
        }
        return false;
    }

    [[noreturn]] void fail(const std::string& message) const {
        throw MalformedFile(path_.string() + ":" + std::to_string(line_) + ": " + message);
    }

    double number(const std::string& field, const char* column) const {
        try {
            return text::parse_double(field);
        } catch (const InvalidInput&) {
            fail(std::string("non-numeric ") + column + " '" + field + "'");
        }
    }

private:
    std::filesystem::path path_;
    std::ifstream in_;
    int line_ = 0;
};

}  // namespace

NodeTable read_nodes_csv(const std::filesystem::path& path) {
    CsvReader csv(path);
    std::vector<std::string> fields;
    if (!csv.next(fields)) {
        csv.fail("missing header 'id,f1,...,fd'");
    }
    if (fields.empty() || fields[0] != "id" || fields.size() < 2) {
        csv.fail("header must be 'id,f1,...,fd' with at least one feature column");
    }
    const std::size_t d = fields.size() - 1;
    NodeTable table;
    std::vector<std::vector<double>> rows;
    std::unordered_map<std::string, int> seen;
    while (csv.next(fields)) {
        if (fields.size() != d + 1) {
            csv.fail("expected " + std::to_string(d + 1) + " columns, found " +
                     std::to_string(fields.size()));
        }
        if (fields[0].empty()) {
            csv.fail("empty node id");
        }
        if (!seen.emplace(fields[0], 1).second) {
            csv.fail("duplicate node id '" + fields[0] + "'");
        }
        std::vector<double> row(d);
        for (std::size_t j = 0; j < d; ++j) {
            row[j] = csv.number(fields[j + 1], "feature");
        }
        table.ids.push_back(fields[0]);
        rows.push_back(std::move(row));
    }
    table.features.resize(static_cast<Index>(rows.size()), static_cast<Index>(d));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            table.features(static_cast<Index>(i), static_cast<Index>(j)) = rows[i][j];
        }
    }
    return table;
}

void write_nodes_csv(const std::filesystem::path& path, const std::vector<std::string>& ids,
                     const RealMatrix& features) {
    if (static_cast<Index>(ids.size()) != features.rows()) {
        throw InvalidInput("write_nodes_csv: id count does not match feature rows");
    }
    auto out = open_for_write(path);
    out << "id";
    for (Index j = 0; j < features.cols(); ++j) {
        out << ",f" << (j + 1);
    }
    out << '\n';
    for (Index i = 0; i < features.rows(); ++i) {
        out << ids[static_cast<std::size_t>(i)];
        for (Index j = 0; j < features.cols(); ++j) {
            out << ',' << text::format_double(features(i, j));
        }
        out << '\n';
    }
    finish_write(out, path);
}

std::vector<Edge> read_edges_csv(const std::filesystem::path& path,
                                 const std::vector<std::string>& ids) {
    std::unordered_map<std::string, Index> index;
    for (std::size_t i = 0; i < ids.size(); ++i) {
        index.emplace(ids[i], static_cast<Index>(i));
    }
    CsvReader csv(path);
    std::vector<std::string> fields;
    std::vector<Edge> edges;
    if (!csv.next(fields)) {
        return edges;
    }
    if (fields != std::vector<std::string>{"start", "end", "label"}) {
        csv.fail("header must be 'start,end,label'");
    }
    while (csv.next(fields)) {
        if (fields.size() != 3) {
            csv.fail("expected 3 columns, found " + std::to_string(fields.size()));
        }
        Edge e;
        for (int c = 0; c < 2; ++c) {
            const auto it = index.find(fields[static_cast<std::size_t>(c)]);
            if (it == index.end()) {
                csv.fail("unknown node id '" + fields[static_cast<std::size_t>(c)] + "'");
            }
            (c == 0 ? e.start : e.end) = it->second;
        }
        e.label = csv.number(fields[2], "label");
        edges.push_back(e);
    }
    return edges;
}

void write_edges_csv(const std::filesystem::path& path, const std::vector<std::string>& ids,
                     const std::vector<Edge>& edges) {
    auto out = open_for_write(path);
    out << "start,end,label\n";
    for (const Edge& e : edges) {
        out << ids.at(static_cast<std::size_t>(e.start)) << ','
            << ids.at(static_cast<std::size_t>(e.end)) << ',' << text::format_double(e.label)
            << '\n';
    }
    finish_write(out, path);
}

void write_predictions_csv(const std::filesystem::path& path,
                           const std::vector<std::string>& start_ids,
                           const std::vector<std::string>& end_ids, const RealMatrix& grid) {
    if (grid.cols() != static_cast<Index>(start_ids.size()) ||
        grid.rows() != static_cast<Index>(end_ids.size())) {
        throw InvalidInput("write_predictions_csv: grid shape does not match id lists");
    }
    auto out = open_for_write(path);
    out << "start,end,score\n";
    for (Index s = 0; s < grid.cols(); ++s) {
        for (Index e = 0; e < grid.rows(); ++e) {
            out << start_ids[static_cast<std::size_t>(s)] << ','
                << end_ids[static_cast<std::size_t>(e)] << ',' << text::format_double(grid(e, s))
                << '\n';
        }
    }
    finish_write(out, path);
}

std::vector<ScoredPair> read_scored_pairs_csv(const std::filesystem::path& path) {
    CsvReader csv(path);
    std::vector<std::string> fields;
    std::vector<ScoredPair> pairs;
    if (!csv.next(fields)) {
        return pairs;
    }
    if (fields.size() != 3 || fields[0] != "start" || fields[1] != "end" ||
        (fields[2] != "score" && fields[2] != "label")) {
        csv.fail("header must be 'start,end,score' or 'start,end,label'");
    }
    while (csv.next(fields)) {
        if (fields.size() != 3) {
            csv.fail("expected 3 columns, found " + std::to_string(fields.size()));
        }
        pairs.push_back({fields[0], fields[1], csv.number(fields[2], "value")});
    }
    return pairs;
}

void write_rps_files(const RpsData& data, const std::filesystem::path& out_dir) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) {
        throw IoError("cannot create directory '" + out_dir.string() + "': " + ec.message());
    }
    write_nodes_csv(out_dir / "train_nodes.csv", data.train.node_ids, data.train.features);
    write_edges_csv(out_dir / "train_edges.csv", data.train.node_ids, data.train.edges);
    write_nodes_csv(out_dir / "test_nodes.csv", data.test_ids, data.test_features);
    std::vector<Edge> truth;
    const Index t = data.test_win_prob.rows();
    truth.reserve(static_cast<std::size_t>(t * (t - 1)));
    for (Index i = 0; i < t; ++i) {
        for (Index j = 0; j < t; ++j) {
            if (i != j) {
                truth.push_back({i, j, data.test_win_prob(i, j)});
            }
        }
    }
    write_edges_csv(out_dir / "test_truth.csv", data.test_ids, truth);
}

namespace {

GraphDataset random_nodes(Index p, Index d, Rng& rng) {
    if (p < 1 || d < 1) {
        throw InvalidInput("random graph needs p >= 1 and d >= 1");
    }
    GraphDataset ds;
    ds.features.resize(p, d);
    for (Index i = 0; i < p; ++i) {
        ds.node_ids.push_back("n" + std::to_string(i));
        for (Index j = 0; j < d; ++j) {
            ds.features(i, j) = rng.gaussian();
        }
    }
    return ds;
}

}  // namespace

GraphDataset random_complete_graph(Index p, Index d, std::uint64_t seed) {
    Rng rng(seed);
    GraphDataset ds = random_nodes(p, d, rng);
    ds.edges.reserve(static_cast<std::size_t>(p * p));
    for (Index start = 0; start < p; ++start) {
        for (Index end = 0; end < p; ++end) {
            ds.edges.push_back({start, end, rng.gaussian()});
        }
    }
    return ds;
}

GraphDataset random_graph(Index p, Index q, Index d, std::uint64_t seed) {
    Rng rng(seed);
    GraphDataset ds = random_nodes(p, d, rng);
    ds.edges.reserve(static_cast<std::size_t>(q));
    const auto n = static_cast<std::uint64_t>(p);
    for (Index k = 0; k < q; ++k) {
        const auto start = static_cast<Index>(rng.below(n));
        const auto end = static_cast<Index>(rng.below(n));
        ds.edges.push_back({start, end, rng.gaussian()});
    }
    return ds;
}

GraphDataset load_graph(const std::filesystem::path& nodes_path,
                        const std::filesystem::path& edges_path) {
    NodeTable nodes = read_nodes_csv(nodes_path);
    GraphDataset ds;
    ds.edges = read_edges_csv(edges_path, nodes.ids);
    ds.node_ids = std::move(nodes.ids);
    ds.features = std::move(nodes.features);
    return ds;
}

}  // namespace condrank::datasets
