#include "condrank/cli.hpp"

#include "condrank/datasets.hpp"
#include "condrank/errors.hpp"
#include "condrank/losses.hpp"
#include "condrank/model.hpp"
#include "condrank/text.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <map>
#include <ostream>

namespace condrank::cli {

std::vector<BenchRow> run_bench(const std::vector<Index>& sizes, SolverKind solver, int repeats,
                                std::uint64_t seed) {
    if (repeats < 1) {
        throw InvalidInput("bench: repeats must be >= 1");
    }
    std::vector<BenchRow> rows;
    for (Index p : sizes) {
        const GraphDataset ds = datasets::random_complete_graph(p, 3, seed);
        const RealMatrix k =
            kernels::node_kernel_matrix(ds.features, ds.features, NodeKernelConfig::gaussian(0.5));
        TrainConfig cfg;
        cfg.solver = solver;
        cfg.lambda = 1.0;
        std::vector<double> times;
        for (int r = 0; r < repeats; ++r) {
            const auto t0 = std::chrono::steady_clock::now();
            const DualCoefficients a = solvers::train(k, ds, cfg);
            const auto t1 = std::chrono::steady_clock::now();
            if (!a.values.allFinite()) {
                throw Divergence("bench: non-finite coefficients");
            }
            times.push_back(std::chrono::duration<double>(t1 - t0).count());
        }
        std::sort(times.begin(), times.end());
        rows.push_back({p, ds.edge_count(), times[times.size() / 2]});
    }
    return rows;
}

namespace {

Conditioning parse_direction(const std::string& name) {
    if (name == "outgoing") return Conditioning::Outgoing;
    if (name == "incoming") return Conditioning::Incoming;
    throw InvalidInput("unknown direction '" + name + "'");
}

std::vector<Index> parse_sizes(const std::string& list) {
    std::vector<Index> sizes;
    for (const std::string& field : text::split_csv(list)) {
        const double v = text::parse_double(field);
        if (v < 1 || v != static_cast<double>(static_cast<Index>(v))) {
            throw InvalidInput("bench: invalid size '" + field + "'");
        }
        sizes.push_back(static_cast<Index>(v));
    }
    return sizes;
}

struct GenRpsArgs {
    Index players = 100;
    Index games = 1000;
    Index test_players = 100;
    double w = 1.0;
    std::uint64_t seed = 0;
    std::string out_dir;
};

struct TrainArgs {
    std::string nodes;
    std::string edges;
    std::string objective = "regression";
    std::string pairwise = "ordinary";
    std::string kernel = "linear";
    double gamma = 1.0;
    double lambda = 0x1p-30;
    std::string solver = "closed";
    int max_iter = 200;
    double tol = 1e-10;
    std::string out_model;
};

struct PredictArgs {
    std::string model;
    std::string start_nodes;
    std::string end_nodes;
    std::string out;
};

struct RankArgs {
    std::string model;
    std::string nodes;
    std::string candidates;
    std::string condition;
    std::string direction = "outgoing";
};

struct EvaluateArgs {
    std::string predictions;
    std::string truth;
    std::string direction = "outgoing";
};

struct BenchArgs {
    std::string sizes = "100,200,400";
    std::string solver = "closed";
    int repeats = 3;
    std::string out;
};

void cmd_gen_rps(const GenRpsArgs& a, std::ostream& out) {
    RpsConfig cfg;
    cfg.n_train_players = a.players;
    cfg.n_train_games = a.games;
    cfg.n_test_players = a.test_players;
    cfg.w = a.w;
    cfg.seed = a.seed;
    const RpsData data = datasets::gen_rps(cfg);
    datasets::write_rps_files(data, a.out_dir);
    out << "wrote " << data.train.node_count() << " training players, "
        << data.train.edge_count() << " edges, " << data.test_ids.size() << " test players to "
        << a.out_dir << '\n';
}

void cmd_train(const TrainArgs& a, std::ostream& out, std::ostream& err) {
    const GraphDataset ds = datasets::load_graph(a.nodes, a.edges);
    TrainConfig cfg;
    cfg.objective = parse_objective(a.objective);
    cfg.pairwise = parse_pairwise_kind(a.pairwise);
    cfg.lambda = a.lambda;
    if (a.solver == "closed") {
        cfg.solver = SolverKind::ClosedForm;
    } else if (a.solver == "iterative") {
        cfg.solver = SolverKind::Iterative;
    } else {
        throw InvalidInput("unknown solver '" + a.solver + "'");
    }
    cfg.iterative.max_iter = a.max_iter;
    cfg.iterative.residual_tol = a.tol;
    NodeKernelConfig kernel;
    if (a.kernel == "linear") {
        kernel = NodeKernelConfig::linear();
    } else if (a.kernel == "gaussian") {
        kernel = NodeKernelConfig::gaussian(a.gamma);
    } else {
        throw InvalidInput("unknown kernel '" + a.kernel + "'");
    }
    const auto t0 = std::chrono::steady_clock::now();
    bool broke_down = false;
    const Model m = model::train_model(ds, kernel, cfg, model::BreakdownPolicy::KeepBestIterate,
                                       &broke_down);
    if (broke_down) {
        err << "warning: solver breakdown after " << m.iterations
            << " iterations; keeping the best iterate (relative residual "
            << text::format_double(m.residual) << ")\n";
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    model::save_model(m, a.out_model);
    out << "trained nodes=" << ds.node_count() << " edges=" << ds.edge_count()
        << " solver=" << a.solver << " iterations=" << m.iterations
        << " residual=" << text::format_double(m.residual) << " seconds=" << seconds << '\n';
}

void cmd_predict(const PredictArgs& a, std::ostream& out) {
    const Model m = model::load_model(a.model);
    const NodeTable starts = datasets::read_nodes_csv(a.start_nodes);
    const NodeTable ends = a.end_nodes.empty() ? starts : datasets::read_nodes_csv(a.end_nodes);
    const RealMatrix grid = model::predict_scores(m, starts.features, ends.features);
    datasets::write_predictions_csv(a.out, starts.ids, ends.ids, grid);
    out << "wrote " << grid.size() << " scores to " << a.out << '\n';
}

void cmd_rank(const RankArgs& a, std::ostream& out) {
    const Model m = model::load_model(a.model);
    const NodeTable nodes = datasets::read_nodes_csv(a.nodes);
    const auto it = std::find(nodes.ids.begin(), nodes.ids.end(), a.condition);
    if (it == nodes.ids.end()) {
        throw InvalidInput("condition node '" + a.condition + "' not found in " + a.nodes);
    }
    const RealVector condition =
        nodes.features.row(static_cast<Index>(it - nodes.ids.begin())).transpose();

    NodeTable candidates;
    if (a.candidates.empty()) {
        std::vector<Index> keep;
        for (std::size_t i = 0; i < nodes.ids.size(); ++i) {
            if (nodes.ids[i] != a.condition) {
                candidates.ids.push_back(nodes.ids[i]);
                keep.push_back(static_cast<Index>(i));
            }
        }
        candidates.features.resize(static_cast<Index>(keep.size()), nodes.features.cols());
        for (std::size_t r = 0; r < keep.size(); ++r) {
            candidates.features.row(static_cast<Index>(r)) = nodes.features.row(keep[r]);
        }
    } else {
        candidates = datasets::read_nodes_csv(a.candidates);
    }
    const auto ranking = model::rank_candidates(m, condition, candidates.features,
                                                parse_direction(a.direction));
    out << "rank,id,score\n";
    for (std::size_t r = 0; r < ranking.size(); ++r) {
        out << (r + 1) << ',' << candidates.ids[static_cast<std::size_t>(ranking[r].candidate)]
            << ',' << text::format_double(ranking[r].score) << '\n';
    }
}

void cmd_evaluate(const EvaluateArgs& a, std::ostream& out) {
    const Conditioning direction = parse_direction(a.direction);
    const auto predictions = datasets::read_scored_pairs_csv(a.predictions);
    const auto truth = datasets::read_scored_pairs_csv(a.truth);
    std::map<std::pair<std::string, std::string>, double> predicted;
    for (const ScoredPair& s : predictions) {
        predicted[{s.start, s.end}] = s.score;
    }
    std::map<std::string, std::vector<ScoredEdge>> groups;
    double squared = 0.0;
    for (const ScoredPair& t : truth) {
        const auto it = predicted.find({t.start, t.end});
        if (it == predicted.end()) {
            throw InvalidInput("no prediction for pair (" + t.start + " -> " + t.end + ")");
        }
        const std::string& key = direction == Conditioning::Outgoing ? t.start : t.end;
        groups[key].push_back({it->second, t.score});
        squared += (t.score - it->second) * (t.score - it->second);
    }
    GroupedScores grouped;
    for (auto& [key, items] : groups) {
        grouped.push_back(std::move(items));
    }
    const double rank_loss = losses::pairwise_rank_loss(grouped);
    out << "pairs=" << truth.size() << '\n';
    out << "rank_loss=" << text::format_double(rank_loss) << '\n';
    out << "regression_loss=" << text::format_double(squared) << '\n';
}

void cmd_bench(const BenchArgs& a, std::ostream& out) {
    SolverKind solver = SolverKind::ClosedForm;
    if (a.solver == "iterative") {
        solver = SolverKind::Iterative;
    } else if (a.solver != "closed") {
        throw InvalidInput("unknown solver '" + a.solver + "'");
    }
    const auto rows = run_bench(parse_sizes(a.sizes), solver, a.repeats);
    std::ofstream file;
    std::ostream* sink = &out;
    if (!a.out.empty()) {
        file.open(a.out, std::ios::binary);
        if (!file) {
            throw IoError("cannot open '" + a.out + "' for writing");
        }
        sink = &file;
    }
    *sink << "p,q,seconds\n";
    for (const BenchRow& r : rows) {
        *sink << r.p << ',' << r.q << ',' << text::format_double(r.seconds) << '\n';
    }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Conditional ranking with Kronecker pairwise kernels", "condrank"};
    app.require_subcommand(1, 1);

    GenRpsArgs gen;
    auto* gen_cmd = app.add_subcommand("gen-rps", "Generate a rock-paper-scissors benchmark");
    gen_cmd->add_option("--players", gen.players, "Training players")->capture_default_str();
    gen_cmd->add_option("--games", gen.games, "Training games")->capture_default_str();
    gen_cmd->add_option("--test-players", gen.test_players, "Test players")->capture_default_str();
    gen_cmd->add_option("--w", gen.w, "Strategy imbalance (>= 1)")->capture_default_str();
    gen_cmd->add_option("--seed", gen.seed, "Random seed")->capture_default_str();
    gen_cmd->add_option("--out-dir", gen.out_dir, "Output directory")->required();

    TrainArgs train;
    auto* train_cmd = app.add_subcommand("train", "Train a model");
    train_cmd->add_option("--nodes", train.nodes, "Nodes CSV")->required();
    train_cmd->add_option("--edges", train.edges, "Edges CSV")->required();
    train_cmd->add_option("--objective", train.objective)
        ->check(CLI::IsMember({"regression", "ranking"}))
        ->capture_default_str();
    train_cmd->add_option("--pairwise", train.pairwise)
        ->check(CLI::IsMember({"ordinary", "symmetric", "reciprocal"}))
        ->capture_default_str();
    train_cmd->add_option("--kernel", train.kernel)
        ->check(CLI::IsMember({"linear", "gaussian"}))
        ->capture_default_str();
    train_cmd->add_option("--gamma", train.gamma, "Gaussian kernel width")->capture_default_str();
    train_cmd->add_option("--lambda", train.lambda, "Regularization")->capture_default_str();
    train_cmd->add_option("--solver", train.solver)
        ->check(CLI::IsMember({"closed", "iterative"}))
        ->capture_default_str();
    train_cmd->add_option("--max-iter", train.max_iter)->capture_default_str();
    train_cmd->add_option("--tol", train.tol, "Relative residual tolerance")->capture_default_str();
    train_cmd->add_option("--out-model", train.out_model)->required();

    PredictArgs predict;
    auto* predict_cmd = app.add_subcommand("predict", "Score all start x end node pairs");
    predict_cmd->add_option("--model", predict.model)->required();
    predict_cmd->add_option("--start-nodes", predict.start_nodes)->required();
    predict_cmd->add_option("--end-nodes", predict.end_nodes, "Defaults to the start nodes");
    predict_cmd->add_option("--out", predict.out)->required();

    RankArgs rank;
    auto* rank_cmd = app.add_subcommand("rank", "Rank candidates conditioned on one node");
    rank_cmd->add_option("--model", rank.model)->required();
    rank_cmd->add_option("--nodes", rank.nodes, "Nodes CSV containing the condition node")
        ->required();
    rank_cmd->add_option("--condition", rank.condition, "Condition node id")->required();
    rank_cmd->add_option("--candidates", rank.candidates,
                         "Candidate nodes CSV (default: the other nodes)");
    rank_cmd->add_option("--direction", rank.direction)
        ->check(CLI::IsMember({"outgoing", "incoming"}))
        ->capture_default_str();

    EvaluateArgs evaluate;
    auto* eval_cmd = app.add_subcommand("evaluate", "Rank and regression loss of predictions");
    eval_cmd->add_option("--predictions", evaluate.predictions)->required();
    eval_cmd->add_option("--truth", evaluate.truth)->required();
    eval_cmd->add_option("--direction", evaluate.direction)
        ->check(CLI::IsMember({"outgoing", "incoming"}))
        ->capture_default_str();

    BenchArgs bench;
    auto* bench_cmd = app.add_subcommand("bench", "Time training on complete graphs");
    bench_cmd->add_option("--sizes", bench.sizes, "Comma-separated node counts")
        ->capture_default_str();
    bench_cmd->add_option("--solver", bench.solver)
        ->check(CLI::IsMember({"closed", "iterative"}))
        ->capture_default_str();
    bench_cmd->add_option("--repeats", bench.repeats)->capture_default_str();
    bench_cmd->add_option("--out", bench.out, "CSV path (default: stdout)");

    try {
        app.parse(std::vector<std::string>(args.rbegin(), args.rend()));
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        err << "error: usage: " << e.what() << '\n';
        return 2;
    }

    try {
        if (gen_cmd->parsed()) {
            cmd_gen_rps(gen, out);
        } else if (train_cmd->parsed()) {
            cmd_train(train, out, err);
        } else if (predict_cmd->parsed()) {
            cmd_predict(predict, out);
        } else if (rank_cmd->parsed()) {
            cmd_rank(rank, out);
        } else if (eval_cmd->parsed()) {
            cmd_evaluate(evaluate, out);
        } else if (bench_cmd->parsed()) {
            cmd_bench(bench, out);
        }
    } catch (const Error& e) {
        err << "error: " << e.category() << ": " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        err << "error: internal: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

}  // namespace condrank::cli
