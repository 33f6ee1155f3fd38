#include "condrank/solvers.hpp"

#include "condrank/random.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace condrank {

std::string_view to_string(Objective objective) {
    return objective == Objective::Regression ? "regression" : "ranking";
}

Objective parse_objective(std::string_view name) {
    if (name == "regression") return Objective::Regression;
    if (name == "ranking") return Objective::Ranking;
    throw InvalidInput("unknown objective '" + std::string(name) + "'");
}

namespace solvers {

namespace {

constexpr double kPsdTolerance = 1e-8;
constexpr double kJitterScale = 1e-8;
constexpr double kBreakdown = 1e-300;

void require_positive_lambda(double lambda) {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) {
        throw InvalidInput("closed-form training requires lambda > 0");
    }
}

void require_label_shape(const RealMatrix& k, const LabelMatrix& y) {
    if (y.values.rows() != k.rows() || y.values.cols() != k.rows()) {
        throw InvalidInput("label matrix must be " + std::to_string(k.rows()) + "x" +
                           std::to_string(k.rows()));
    }
    linalg::require_finite(y.values, "label matrix");
}

CholeskyFactor cholesky_with_jitter(RealMatrix& k) {
    try {
        return linalg::cholesky(k);
    } catch (const NotPositiveDefinite&) {
        const double jitter = kJitterScale * k.trace() / static_cast<double>(k.rows());
        if (!(jitter > 0.0)) {
            throw NotPositiveDefinite("kernel matrix is not positive definite (trace <= 0)");
        }
        k.diagonal().array() += jitter;
        try {
            return linalg::cholesky(k);
        } catch (const NotPositiveDefinite&) {
            throw NotPositiveDefinite("kernel matrix is not positive definite after jitter");
        }
    }
}

}  // namespace

DualCoefficients solve_rls_closed_form(const RealMatrix& k, const LabelMatrix& y, double lambda) {
    require_positive_lambda(lambda);
    linalg::require_symmetric(k, "kernel matrix");
    require_label_shape(k, y);

    const EigenDecomposition eig = linalg::sym_eig(k);
    const double top = eig.values.cwiseAbs().maxCoeff();
    if (eig.values.minCoeff() < -kPsdTolerance * top) {
        throw NotPositiveSemidefinite("kernel matrix has eigenvalue " +
                                      std::to_string(eig.values.minCoeff()));
    }
    const RealMatrix& u = eig.vectors;
    const RealVector& ev = eig.values;

    // Eigenbasis of K (x) K: the shift is applied to each product of eigenvalues.
    const RealMatrix e = u.transpose() * y.values * u;
    const RealMatrix inv_shift =
        ((ev * ev.transpose()).array() + lambda).cwiseInverse().matrix();
    return {u * linalg::hadamard(inv_shift, e) * u.transpose()};
}

DualCoefficients solve_rankrls_closed_form(const RealMatrix& k, const LabelMatrix& y,
                                           double lambda, Conditioning conditioning) {
    require_positive_lambda(lambda);
    linalg::require_symmetric(k, "kernel matrix");
    require_label_shape(k, y);

    if (conditioning == Conditioning::Incoming) {
        // Swapping start and end of every edge maps incoming groups onto
        // outgoing ones and leaves K (x) K invariant.
        DualCoefficients swapped =
            solve_rankrls_closed_form(k, LabelMatrix{y.values.transpose()}, lambda);
        return {swapped.values.transpose()};
    }

    const Index p = k.rows();
    RealMatrix kj = k;
    const CholeskyFactor chol = cholesky_with_jitter(kj);
    const RealMatrix& g = chol.lower;
    const RealMatrix c = linalg::centering_matrix(p);

    // G^T C G = W diag(sigma) W^T.
    const RealMatrix gcg = g.transpose() * c * g;
    const EigenDecomposition inner = linalg::sym_eig(0.5 * (gcg + gcg.transpose()));
    const EigenDecomposition outer = linalg::sym_eig(kj);

    // The normal equations K(x)K (L K(x)K + lambda I) a = K(x)K L y reduce to
    // (L K(x)K + lambda I) a = L y, where L K(x)K = K (x) C K and
    // C K = V diag(sigma) V^-1 with V = G^-T W and V^-1 = W^T G^T.
    const RealMatrix centered = c * y.values;
    const RealMatrix e =
        inner.vectors.transpose() * (g.transpose() * centered) * outer.vectors;

    // Entry (i, j) pairs eigenvalue i of C K with eigenvalue j of K.
    const RealMatrix inv_shift =
        ((inner.values * outer.values.transpose()).array() + lambda).cwiseInverse().matrix();
    const RealMatrix left_vectors =
        g.transpose().triangularView<Eigen::Upper>().solve(inner.vectors);
    return {left_vectors * linalg::hadamard(inv_shift, e) * outer.vectors.transpose()};
}

DualCoefficients solve_with_label_transform(const RealMatrix& k, const LabelMatrix& y,
                                            double lambda, PairwiseKind kind) {
    require_label_shape(k, y);
    switch (kind) {
        case PairwiseKind::Symmetric:
            return solve_rls_closed_form(
                k, LabelMatrix{0.5 * (y.values + y.values.transpose())}, lambda);
        case PairwiseKind::Reciprocal:
            return solve_rls_closed_form(
                k, LabelMatrix{0.5 * (y.values - y.values.transpose())}, lambda);
        case PairwiseKind::Ordinary:
            break;
    }
    throw InvalidInput("label transform applies to symmetric or reciprocal kinds only");
}

InversionCheck check_inversion_identity(const RealMatrix& n, double lambda, std::uint64_t seed,
                                        int probes) {
    if (n.rows() != n.cols() || n.rows() == 0) {
        throw InvalidInput("check_inversion_identity: N must be square");
    }
    if (!(lambda > 0.0)) {
        throw InvalidInput("check_inversion_identity: lambda must be positive");
    }
    constexpr Index kMaxSide = 8;
    const Index p = n.rows();
    if (p > kMaxSide) {
        throw ResourceLimit("check_inversion_identity: p = " + std::to_string(p) +
                            " exceeds the explicit-build limit of 8");
    }
    const Index m = p * p;
    const RealMatrix nbar = linalg::kron(n, n);
    RealMatrix sym(m, m);
    RealMatrix skew(m, m);
    for (Index j = 0; j < m; ++j) {
        const RealVector unit = RealVector::Unit(m, j);
        sym.col(j) = linalg::apply_symmetrizer(unit, p);
        skew.col(j) = linalg::apply_skew_symmetrizer(unit, p);
    }
    const RealMatrix shift = lambda * RealMatrix::Identity(m, m);

    Rng rng(seed);
    InversionCheck out;
    for (int t = 0; t < probes; ++t) {
        RealVector probe(m);
        for (Index i = 0; i < m; ++i) {
            probe(i) = rng.uniform(-1.0, 1.0);
        }
        const RealVector inner = linalg::dense_solve(nbar + shift, sym * probe);
        const RealVector lhs_s = linalg::dense_solve(sym * nbar * sym + shift, probe);
        const RealVector rhs_s = sym * inner + skew * probe / lambda;
        out.symmetric_deviation =
            std::max(out.symmetric_deviation, (lhs_s - rhs_s).cwiseAbs().maxCoeff());

        const RealVector inner_a = linalg::dense_solve(nbar + shift, skew * probe);
        const RealVector lhs_a = linalg::dense_solve(skew * nbar * skew + shift, probe);
        const RealVector rhs_a = skew * inner_a + sym * probe / lambda;
        out.skew_deviation = std::max(out.skew_deviation, (lhs_a - rhs_a).cwiseAbs().maxCoeff());
    }
    return out;
}

namespace {

void require_kernel_for(const RealMatrix& k, const GraphDataset& ds) {
    linalg::require_symmetric(k, "kernel matrix");
    if (k.rows() != ds.node_count()) {
        throw InvalidInput("kernel matrix is " + std::to_string(k.rows()) + "x" +
                           std::to_string(k.cols()) + " but the dataset has " +
                           std::to_string(ds.node_count()) + " nodes");
    }
    graph::validate(ds);
}

// Pi w for the configured objective.
class LossWeighting {
public:
    LossWeighting(const GraphDataset& ds, const TrainConfig& cfg)
        : ranking_(cfg.objective == Objective::Ranking),
          blocks_(graph::build_block_structure(ds, cfg.conditioning)) {}

    [[nodiscard]] RealVector apply(const RealVector& w) const {
        return ranking_ ? graph::apply_block_centering(blocks_, w) : w;
    }

private:
    bool ranking_;
    BlockStructure blocks_;
};

}  // namespace

DualCoefficients solve_iterative(const RealMatrix& k, const GraphDataset& ds,
                                 const TrainConfig& cfg, IterativeStats* stats) {
    require_kernel_for(k, ds);
    if (!(cfg.lambda >= 0.0) || !std::isfinite(cfg.lambda)) {
        throw InvalidInput("lambda must be non-negative");
    }
    if (cfg.iterative.max_iter < 0) {
        throw InvalidInput("max_iter must be non-negative");
    }
    const Index p = ds.node_count();
    const Index n = p * p;
    const Bookkeeping book = graph::build_bookkeeping(ds);
    const LossWeighting weighting(ds, cfg);

    auto op = [&](const RealVector& x) -> RealVector {
        const RealVector kx = kernels::pairwise_operator_apply(cfg.pairwise, k, k, x);
        RealVector out = book.scatter(weighting.apply(book.gather(kx)));
        out += cfg.lambda * x;
        return out;
    };

    const RealVector b = book.scatter(weighting.apply(graph::edge_labels(ds)));
    const double b_norm = b.norm();

    RealVector x = RealVector::Zero(n);
    RealVector best = x;
    double best_res = 1.0;
    IterativeStats local;
    auto finish = [&]() {
        local.relative_residual = best_res;
        if (stats != nullptr) {
            *stats = local;
        }
        return DualCoefficients{linalg::unvec(best, p)};
    };
    if (b_norm == 0.0) {
        best_res = 0.0;
        local.converged = true;
        return finish();
    }

    auto breakdown = [&](const char* where) {
        local.relative_residual = best_res;
        if (stats != nullptr) {
            *stats = local;
        }
        throw SolverBreakdown(std::string("BiCGSTAB breakdown (") + where + ") at iteration " +
                                  std::to_string(local.iterations),
                              DualCoefficients{linalg::unvec(best, p)});
    };

    RealVector r = b;
    const RealVector r_hat = r;
    RealVector dir = RealVector::Zero(n);
    RealVector v = RealVector::Zero(n);
    double rho_prev = 1.0;
    double alpha = 1.0;
    double omega = 1.0;

    auto record = [&](double res) {
        if (!std::isfinite(res)) {
            throw Divergence("BiCGSTAB residual became non-finite at iteration " +
                             std::to_string(local.iterations));
        }
        if (res < best_res) {
            best_res = res;
            best = x;
        }
        if (cfg.iterative.callback) {
            cfg.iterative.callback(local.iterations, DualCoefficients{linalg::unvec(x, p)});
        }
    };

    for (int it = 1; it <= cfg.iterative.max_iter; ++it) {
        local.iterations = it;
        const double rho = r_hat.dot(r);
        if (std::abs(rho) < kBreakdown) {
            breakdown("rho");
        }
        if (it == 1) {
            dir = r;
        } else {
            const double beta = (rho / rho_prev) * (alpha / omega);
            dir = r + beta * (dir - omega * v);
        }
        v = op(dir);
        const double denom = r_hat.dot(v);
        if (std::abs(denom) < kBreakdown) {
            breakdown("r_hat.v");
        }
        alpha = rho / denom;
        RealVector s = r - alpha * v;
        const double s_res = s.norm() / b_norm;
        if (s_res <= cfg.iterative.residual_tol) {
            x += alpha * dir;
            r = std::move(s);
            record(s_res);
            local.converged = true;
            break;
        }
        const RealVector t = op(s);
        const double tt = t.squaredNorm();
        if (tt < kBreakdown) {
            breakdown("t.t");
        }
        omega = t.dot(s) / tt;
        x += alpha * dir + omega * s;
        r = s - omega * t;
        const double res = r.norm() / b_norm;
        record(res);
        if (res <= cfg.iterative.residual_tol) {
            local.converged = true;
            break;
        }
        if (std::abs(omega) < kBreakdown) {
            breakdown("omega");
        }
        rho_prev = rho;
    }
    return finish();
}

DualCoefficients solve_dense_oracle(const RealMatrix& k, const GraphDataset& ds,
                                    const TrainConfig& cfg, std::int64_t cap) {
    require_kernel_for(k, ds);
    const Index p = ds.node_count();
    const Index n = p * p;
    const Index q = ds.edge_count();
    if (static_cast<std::int64_t>(n) * n > cap || static_cast<std::int64_t>(q) * n > cap) {
        throw ResourceLimit("dense oracle: explicit system too large for p = " +
                            std::to_string(p) + ", q = " + std::to_string(q));
    }
    const RealMatrix kbar = kernels::pairwise_kernel_matrix(cfg.pairwise, k, cap);

    RealMatrix gather = RealMatrix::Zero(q, n);
    for (Index e = 0; e < q; ++e) {
        const Edge& edge = ds.edges[static_cast<std::size_t>(e)];
        gather(e, graph::pair_index(edge.start, edge.end, p)) = 1.0;
    }
    RealMatrix weight = RealMatrix::Identity(q, q);
    if (cfg.objective == Objective::Ranking) {
        const BlockStructure bs = graph::build_block_structure(ds, cfg.conditioning);
        for (const auto& members : bs.members) {
            const double inv = members.empty() ? 0.0 : 1.0 / static_cast<double>(members.size());
            for (Index a : members) {
                for (Index b : members) {
                    weight(a, b) -= inv;
                }
            }
        }
    }
    const RealMatrix projected = gather.transpose() * weight;
    const RealMatrix system = projected * gather * kbar + cfg.lambda * RealMatrix::Identity(n, n);
    const RealVector rhs = projected * graph::edge_labels(ds);
    return {linalg::unvec(linalg::dense_solve(system, rhs), p)};
}

DualCoefficients train(const RealMatrix& k, const GraphDataset& ds, const TrainConfig& cfg,
                       IterativeStats* stats) {
    if (cfg.solver == SolverKind::Iterative) {
        return solve_iterative(k, ds, cfg, stats);
    }
    require_positive_lambda(cfg.lambda);
    if (cfg.objective == Objective::Ranking && cfg.pairwise != PairwiseKind::Ordinary) {
        throw UnsupportedCombination(
            "closed-form ranking supports only the ordinary pairwise kernel; use the iterative "
            "solver for " + std::string(to_string(cfg.pairwise)));
    }
    require_kernel_for(k, ds);
    const LabelMatrix y = graph::build_label_matrix(ds);
    if (cfg.objective == Objective::Ranking) {
        return solve_rankrls_closed_form(k, y, cfg.lambda, cfg.conditioning);
    }
    if (cfg.pairwise == PairwiseKind::Ordinary) {
        return solve_rls_closed_form(k, y, cfg.lambda);
    }
    return solve_with_label_transform(k, y, cfg.lambda, cfg.pairwise);
}

}  // namespace solvers
}  // namespace condrank
