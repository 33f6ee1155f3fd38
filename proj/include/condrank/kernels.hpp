#pragma once

#include "condrank/linalg.hpp"

#include <cstdint>
#include <string>
#include <string_view>

namespace condrank {

/// Base kernel between two nodes.
struct NodeKernelConfig {
    enum class Type { Linear, Gaussian, Precomputed };

    Type type = Type::Linear;
    double gamma = 1.0;  // Gaussian only: exp(-gamma * |x - y|^2)

    static NodeKernelConfig linear() { return {Type::Linear, 1.0}; }
    static NodeKernelConfig gaussian(double gamma);
    static NodeKernelConfig precomputed() { return {Type::Precomputed, 1.0}; }
};

/// Edge kernel built from a node kernel.
enum class PairwiseKind { Ordinary, Symmetric, Reciprocal };

std::string_view to_string(PairwiseKind kind);
PairwiseKind parse_pairwise_kind(std::string_view name);

namespace kernels {

/// Default bound on the number of entries of an explicitly built edge-kernel
/// matrix.
inline constexpr std::int64_t kMaterializationCap = 100'000'000;

/// Entry (i, j) is the base kernel between row i of `rows_a` and row j of
/// `rows_b`.
RealMatrix node_kernel_matrix(const RealMatrix& rows_a, const RealMatrix& rows_b,
                              const NodeKernelConfig& cfg);

/// Kernel between edges e = (v, v') and f = (w, w') from the four base kernel
/// values k(v, w), k(v', w'), k(v, w') and k(v', w).
double pairwise_kernel_value(PairwiseKind kind, double k_start_start, double k_end_end,
                             double k_start_end, double k_end_start);

/// Explicit r^2 x p^2 edge-kernel matrix for the base kernel matrix K (r x p).
/// Row (h * r + i) is the edge (v_h -> v_i); columns likewise over the p
/// nodes of the second set.
RealMatrix pairwise_kernel_matrix(PairwiseKind kind, const RealMatrix& k,
                                  std::int64_t cap = kMaterializationCap);

/// Implicit action of the edge-kernel matrix on v in O(p^3).
RealVector pairwise_operator_apply(PairwiseKind kind, const RealMatrix& k_left,
                                   const RealMatrix& k_right, const RealVector& v);

}  // namespace kernels
}  // namespace condrank
