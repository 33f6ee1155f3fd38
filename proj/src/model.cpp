#include "condrank/model.hpp"

#include "condrank/errors.hpp"
#include "condrank/text.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <sstream>

namespace condrank::model {

Model train_model(const GraphDataset& ds, const NodeKernelConfig& kernel, const TrainConfig& cfg,
                  BreakdownPolicy policy, bool* broke_down) {
    const RealMatrix k = kernels::node_kernel_matrix(ds.features, ds.features, kernel);
    IterativeStats stats;
    Model m;
    if (broke_down != nullptr) {
        *broke_down = false;
    }
    try {
        m.dual = solvers::train(k, ds, cfg, &stats);
    } catch (SolverBreakdown& e) {
        if (policy == BreakdownPolicy::Throw) {
            throw;
        }
        m.dual = std::move(e.last_iterate);
        if (broke_down != nullptr) {
            *broke_down = true;
        }
    }
    m.kernel = kernel;
    m.pairwise = cfg.pairwise;
    m.train_features = ds.features;
    m.objective = cfg.objective;
    m.lambda = cfg.lambda;
    m.solver = cfg.solver;
    if (cfg.solver == SolverKind::Iterative) {
        m.iterations = stats.iterations;
        m.residual = stats.relative_residual;
    }
    return m;
}

namespace {

void require_features(const Model& m, const RealMatrix& feats, const char* what) {
    if (m.kernel.type == NodeKernelConfig::Type::Precomputed) {
        throw UnsupportedCombination(
            "model uses a precomputed kernel; supply kernel rows instead of features");
    }
    if (feats.cols() != m.train_features.cols()) {
        throw InvalidInput(std::string(what) + " have " + std::to_string(feats.cols()) +
                           " features, the model expects " +
                           std::to_string(m.train_features.cols()));
    }
}

}  // namespace

RealMatrix predict_scores_from_kernels(const Model& m, const RealMatrix& k_start,
                                       const RealMatrix& k_end, bool same_set) {
    const Index p = m.node_count();
    if (k_start.cols() != p || k_end.cols() != p) {
        throw InvalidInput("kernel rows must have one column per training node (" +
                           std::to_string(p) + ")");
    }
    const RealMatrix& a = m.dual.values;
    const RealMatrix raw = k_end * a * k_start.transpose();
    if (m.pairwise == PairwiseKind::Ordinary) {
        return raw;
    }
    if (!same_set || k_start.rows() != k_end.rows()) {
        throw UnsupportedCombination(std::string(to_string(m.pairwise)) +
                                     " models score square grids over a single node set only");
    }
    if (m.pairwise == PairwiseKind::Symmetric) {
        return 0.5 * (raw + raw.transpose());
    }
    return 0.5 * (raw - raw.transpose());
}

RealMatrix predict_scores(const Model& m, const RealMatrix& start_feats,
                          const RealMatrix& end_feats) {
    require_features(m, start_feats, "start nodes");
    require_features(m, end_feats, "end nodes");
    const bool same_set = start_feats.rows() == end_feats.rows() && start_feats == end_feats;
    const RealMatrix k_start = kernels::node_kernel_matrix(start_feats, m.train_features, m.kernel);
    const RealMatrix k_end = same_set
                                 ? k_start
                                 : kernels::node_kernel_matrix(end_feats, m.train_features, m.kernel);
    return predict_scores_from_kernels(m, k_start, k_end, same_set);
}

std::vector<RankedCandidate> rank_candidates(const Model& m, const RealVector& condition_feats,
                                             const RealMatrix& candidate_feats,
                                             Conditioning direction) {
    if (candidate_feats.rows() < 1) {
        throw InvalidInput("rank_candidates: no candidates");
    }
    require_features(m, candidate_feats, "candidates");
    if (condition_feats.size() != m.train_features.cols()) {
        throw InvalidInput("condition node has " + std::to_string(condition_feats.size()) +
                           " features, the model expects " +
                           std::to_string(m.train_features.cols()));
    }
    const RealVector k_cond =
        kernels::node_kernel_matrix(condition_feats.transpose(), m.train_features, m.kernel)
            .transpose();
    const RealMatrix k_cand = kernels::node_kernel_matrix(candidate_feats, m.train_features, m.kernel);
    const RealMatrix& a = m.dual.values;

    // raw(condition -> j) and raw(j -> condition) for every candidate j.
    const RealVector outgoing = k_cand * (a * k_cond);
    const RealVector incoming = k_cand * (a.transpose() * k_cond);
    const RealVector& forward = direction == Conditioning::Outgoing ? outgoing : incoming;
    const RealVector& backward = direction == Conditioning::Outgoing ? incoming : outgoing;

    RealVector scores;
    switch (m.pairwise) {
        case PairwiseKind::Ordinary:
            scores = forward;
            break;
        case PairwiseKind::Symmetric:
            scores = 0.5 * (forward + backward);
            break;
        case PairwiseKind::Reciprocal:
            scores = 0.5 * (forward - backward);
            break;
    }

    std::vector<RankedCandidate> out(static_cast<std::size_t>(scores.size()));
    for (Index j = 0; j < scores.size(); ++j) {
        out[static_cast<std::size_t>(j)] = {j, scores(j)};
    }
    std::stable_sort(out.begin(), out.end(), [](const RankedCandidate& x, const RankedCandidate& y) {
        return x.score > y.score;
    });
    return out;
}

namespace {

std::string_view kernel_name(NodeKernelConfig::Type type) {
    switch (type) {
        case NodeKernelConfig::Type::Linear:
            return "linear";
        case NodeKernelConfig::Type::Gaussian:
            return "gaussian";
        case NodeKernelConfig::Type::Precomputed:
            return "precomputed";
    }
    return "linear";
}

void write_block(std::ostream& out, const RealMatrix& m) {
    for (Index i = 0; i < m.rows(); ++i) {
        for (Index j = 0; j < m.cols(); ++j) {
            if (j > 0) {
                out << ' ';
            }
            out << text::format_double(m(i, j));
        }
        out << '\n';
    }
}

class ModelReader {
public:
    explicit ModelReader(std::istream& in) : in_(in) {}

    std::vector<std::string> line(const char* expecting) {
        std::string raw;
        if (!std::getline(in_, raw)) {
            throw MalformedFile("model file truncated: expected " + std::string(expecting));
        }
        ++line_no_;
        if (!raw.empty() && raw.back() == '\r') {
            raw.pop_back();
        }
        std::istringstream ss(raw);
        std::vector<std::string> tokens;
        for (std::string tok; ss >> tok;) {
            tokens.push_back(tok);
        }
        return tokens;
    }

    std::string field(const char* key) {
        auto tokens = line(key);
        if (tokens.size() != 2 || tokens[0] != key) {
            fail(std::string("expected '") + key + " <value>'");
        }
        return tokens[1];
    }

    double number(const std::string& tok) {
        try {
            return text::parse_double(tok);
        } catch (const InvalidInput&) {
            fail("invalid number '" + tok + "'");
        }
    }

    Index count(const std::string& tok) {
        const double v = number(tok);
        if (v < 0 || v != static_cast<double>(static_cast<Index>(v))) {
            fail("invalid count '" + tok + "'");
        }
        return static_cast<Index>(v);
    }

    RealMatrix block(Index rows, Index cols, const char* what) {
        RealMatrix m(rows, cols);
        for (Index i = 0; i < rows; ++i) {
            auto tokens = line(what);
            if (static_cast<Index>(tokens.size()) != cols) {
                fail(std::string(what) + " row has " + std::to_string(tokens.size()) +
                     " values, expected " + std::to_string(cols));
            }
            for (Index j = 0; j < cols; ++j) {
                m(i, j) = number(tokens[static_cast<std::size_t>(j)]);
            }
        }
        return m;
    }

    [[noreturn]] void fail(const std::string& message) const {
        throw MalformedFile("model file line " + std::to_string(line_no_) + ": " + message);
    }

private:
    std::istream& in_;
    int line_no_ = 0;
};

}  // namespace

void write_model(const Model& m, std::ostream& out) {
    out << kFormatTag << '\n';
    out << "version " << kFormatVersion << '\n';
    out << "kernel " << kernel_name(m.kernel.type);
    if (m.kernel.type == NodeKernelConfig::Type::Gaussian) {
        out << ' ' << text::format_double(m.kernel.gamma);
    }
    out << '\n';
    out << "pairwise " << to_string(m.pairwise) << '\n';
    out << "objective " << to_string(m.objective) << '\n';
    out << "solver " << (m.solver == SolverKind::ClosedForm ? "closed" : "iterative") << '\n';
    out << "lambda " << text::format_double(m.lambda) << '\n';
    out << "iterations " << m.iterations << '\n';
    out << "residual " << text::format_double(m.residual) << '\n';
    out << "nodes " << m.node_count() << '\n';
    out << "feature_dim " << m.train_features.cols() << '\n';
    out << "features\n";
    write_block(out, m.train_features);
    out << "dual\n";
    write_block(out, m.dual.values);
    out << "end\n";
}

Model read_model(std::istream& in) {
    ModelReader reader(in);
    auto tag = reader.line("format tag");
    if (tag.size() != 1 || tag[0] != kFormatTag) {
        reader.fail("not a condrank model file");
    }
    const std::string version = reader.field("version");
    if (version != std::to_string(kFormatVersion)) {
        throw VersionMismatch("model file version " + version + " is not supported (expected " +
                              std::to_string(kFormatVersion) + ")");
    }

    Model m;
    auto kernel = reader.line("kernel");
    if (kernel.size() == 2 && kernel[0] == "kernel" && kernel[1] == "linear") {
        m.kernel = NodeKernelConfig::linear();
    } else if (kernel.size() == 2 && kernel[0] == "kernel" && kernel[1] == "precomputed") {
        m.kernel = NodeKernelConfig::precomputed();
    } else if (kernel.size() == 3 && kernel[0] == "kernel" && kernel[1] == "gaussian") {
        const double gamma = reader.number(kernel[2]);
        if (!(gamma > 0.0)) {
            reader.fail("gaussian gamma must be positive");
        }
        m.kernel = NodeKernelConfig{NodeKernelConfig::Type::Gaussian, gamma};
    } else {
        reader.fail("invalid kernel line");
    }

    try {
        m.pairwise = parse_pairwise_kind(reader.field("pairwise"));
        m.objective = parse_objective(reader.field("objective"));
    } catch (const InvalidInput& e) {
        reader.fail(e.what());
    }
    const std::string solver = reader.field("solver");
    if (solver == "closed") {
        m.solver = SolverKind::ClosedForm;
    } else if (solver == "iterative") {
        m.solver = SolverKind::Iterative;
    } else {
        reader.fail("unknown solver '" + solver + "'");
    }
    m.lambda = reader.number(reader.field("lambda"));
    m.iterations = static_cast<int>(reader.count(reader.field("iterations")));
    m.residual = reader.number(reader.field("residual"));
    const Index p = reader.count(reader.field("nodes"));
    const Index d = reader.count(reader.field("feature_dim"));
    if (p < 1) {
        reader.fail("model has no training nodes");
    }
    if ((m.kernel.type == NodeKernelConfig::Type::Precomputed) != (d == 0)) {
        reader.fail("feature dimension inconsistent with kernel type");
    }
    if (reader.line("features") != std::vector<std::string>{"features"}) {
        reader.fail("expected 'features'");
    }
    m.train_features = reader.block(p, d, "features");
    if (reader.line("dual") != std::vector<std::string>{"dual"}) {
        reader.fail("expected 'dual'");
    }
    m.dual.values = reader.block(p, p, "dual");
    if (reader.line("end") != std::vector<std::string>{"end"}) {
        reader.fail("expected 'end'");
    }
    return m;
}

void save_model(const Model& m, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot open '" + path.string() + "' for writing");
    }
    write_model(m, out);
    if (!out) {
        throw IoError("failed writing '" + path.string() + "'");
    }
}

Model load_model(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open '" + path.string() + "'");
    }
    return read_model(in);
}

}  // namespace condrank::model
