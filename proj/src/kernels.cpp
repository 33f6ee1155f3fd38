#include "condrank/kernels.hpp"

#include "condrank/errors.hpp"

#include <cmath>
#include <string>

namespace condrank {

NodeKernelConfig NodeKernelConfig::gaussian(double gamma) {
    if (!(gamma > 0.0) || !std::isfinite(gamma)) {
        throw InvalidInput("gaussian kernel requires gamma > 0");
    }
    return {Type::Gaussian, gamma};
}

std::string_view to_string(PairwiseKind kind) {
    switch (kind) {
        case PairwiseKind::Ordinary:
            return "ordinary";
        case PairwiseKind::Symmetric:
            return "symmetric";
        case PairwiseKind::Reciprocal:
            return "reciprocal";
    }
    return "ordinary";
}

PairwiseKind parse_pairwise_kind(std::string_view name) {
    if (name == "ordinary") return PairwiseKind::Ordinary;
    if (name == "symmetric") return PairwiseKind::Symmetric;
    if (name == "reciprocal") return PairwiseKind::Reciprocal;
    throw InvalidInput("unknown pairwise kind '" + std::string(name) + "'");
}

namespace kernels {

RealMatrix node_kernel_matrix(const RealMatrix& rows_a, const RealMatrix& rows_b,
                              const NodeKernelConfig& cfg) {
    if (rows_a.cols() != rows_b.cols()) {
        throw InvalidInput("node_kernel_matrix: feature dimensions differ (" +
                           std::to_string(rows_a.cols()) + " vs " +
                           std::to_string(rows_b.cols()) + ")");
    }
    switch (cfg.type) {
        case NodeKernelConfig::Type::Linear:
            return rows_a * rows_b.transpose();
        case NodeKernelConfig::Type::Gaussian: {
            if (!(cfg.gamma > 0.0)) {
                throw InvalidInput("gaussian kernel requires gamma > 0");
            }
            RealMatrix out(rows_a.rows(), rows_b.rows());
            for (Index j = 0; j < rows_b.rows(); ++j) {
                for (Index i = 0; i < rows_a.rows(); ++i) {
                    const double dist2 = (rows_a.row(i) - rows_b.row(j)).squaredNorm();
                    out(i, j) = std::exp(-cfg.gamma * dist2);
                }
            }
            return out;
        }
        case NodeKernelConfig::Type::Precomputed:
            break;
    }
    throw UnsupportedCombination(
        "node_kernel_matrix: precomputed kernels must be supplied as matrices");
}

double pairwise_kernel_value(PairwiseKind kind, double k_start_start, double k_end_end,
                             double k_start_end, double k_end_start) {
    switch (kind) {
        case PairwiseKind::Ordinary:
            return k_start_start * k_end_end;
        case PairwiseKind::Symmetric:
            return 0.5 * (k_start_start * k_end_end + k_start_end * k_end_start);
        case PairwiseKind::Reciprocal:
            return 0.5 * (k_start_start * k_end_end - k_start_end * k_end_start);
    }
    return 0.0;
}

RealMatrix pairwise_kernel_matrix(PairwiseKind kind, const RealMatrix& k, std::int64_t cap) {
    const std::int64_t rows = static_cast<std::int64_t>(k.rows()) * k.rows();
    const std::int64_t cols = static_cast<std::int64_t>(k.cols()) * k.cols();
    if (rows * cols > cap) {
        throw ResourceLimit("pairwise_kernel_matrix: " + std::to_string(rows) + "x" +
                            std::to_string(cols) +
                            " exceeds the materialization cap; use the implicit operator");
    }
    RealMatrix out = linalg::kron(k, k);
    if (kind == PairwiseKind::Ordinary) {
        return out;
    }
    for (Index c = 0; c < out.cols(); ++c) {
        const RealVector column = out.col(c);
        out.col(c) = kind == PairwiseKind::Symmetric
                         ? linalg::apply_symmetrizer(column, k.rows())
                         : linalg::apply_skew_symmetrizer(column, k.rows());
    }
    return out;
}

RealVector pairwise_operator_apply(PairwiseKind kind, const RealMatrix& k_left,
                                   const RealMatrix& k_right, const RealVector& v) {
    if (kind != PairwiseKind::Ordinary) {
        if (k_left.rows() != k_left.cols() || k_left.rows() != k_right.rows() ||
            k_left.cols() != k_right.cols()) {
            throw InvalidInput(
                "pairwise_operator_apply: symmetric and reciprocal kinds need equal square "
                "kernel matrices");
        }
    }
    RealVector out = linalg::kron_matvec(k_left, k_right, v);
    switch (kind) {
        case PairwiseKind::Ordinary:
            return out;
        case PairwiseKind::Symmetric:
            return linalg::apply_symmetrizer(out, k_right.rows());
        case PairwiseKind::Reciprocal:
            return linalg::apply_skew_symmetrizer(out, k_right.rows());
    }
    return out;
}

}  // namespace kernels
}  // namespace condrank
