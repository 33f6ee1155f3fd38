#pragma once

#include "condrank/kernels.hpp"
#include "condrank/linalg.hpp"
#include "condrank/random.hpp"

#include <Eigen/LU>

#include <cmath>

namespace condrank::testing {

inline RealMatrix random_matrix(Rng& rng, Index rows, Index cols) {
    RealMatrix m(rows, cols);
    for (Index j = 0; j < cols; ++j) {
        for (Index i = 0; i < rows; ++i) {
            m(i, j) = rng.uniform(-1.0, 1.0);
        }
    }
    return m;
}

inline RealVector random_vector(Rng& rng, Index n) {
    RealVector v(n);
    for (Index i = 0; i < n; ++i) {
        v(i) = rng.uniform(-1.0, 1.0);
    }
    return v;
}

inline RealMatrix random_symmetric(Rng& rng, Index n) {
    const RealMatrix b = random_matrix(rng, n, n);
    return b + b.transpose();
}

/// B B^T + shift I: positive definite for shift > 0.
inline RealMatrix random_pd(Rng& rng, Index n, double shift = 1.0) {
    const RealMatrix b = random_matrix(rng, n, n);
    return b * b.transpose() + shift * RealMatrix::Identity(n, n);
}

/// Kronecker product from its entry formula
/// (M (x) N)(i*rN + k, j*cN + l) = M(i, j) N(k, l).
inline RealMatrix explicit_kron(const RealMatrix& m, const RealMatrix& n) {
    RealMatrix out(m.rows() * n.rows(), m.cols() * n.cols());
    for (Index i = 0; i < m.rows(); ++i)
        for (Index j = 0; j < m.cols(); ++j)
            for (Index k = 0; k < n.rows(); ++k)
                for (Index l = 0; l < n.cols(); ++l)
                    out(i * n.rows() + k, j * n.cols() + l) = m(i, j) * n(k, l);
    return out;
}

/// Commutation matrix P with P vec(M) = vec(M^T), from its sum-of-outer-
/// products definition.
inline RealMatrix explicit_commutation(Index s) {
    RealMatrix p = RealMatrix::Zero(s * s, s * s);
    for (Index i = 0; i < s; ++i)
        for (Index j = 0; j < s; ++j)
            p(i * s + j, j * s + i) = 1.0;
    return p;
}

inline double max_abs(const RealMatrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

inline double relative_error(const RealMatrix& got, const RealMatrix& want) {
    const double scale = want.norm();
    return (got - want).norm() / (scale > 0.0 ? scale : 1.0);
}

/// Column-stacking vectorization through Eigen's column-major storage.
inline RealVector stack_columns(const RealMatrix& m) {
    return Eigen::Map<const RealVector>(m.data(), m.size());
}

inline RealMatrix reshape_square(const RealVector& v, Index p) {
    return Eigen::Map<const RealMatrix>(v.data(), p, p);
}

inline RealMatrix explicit_centering(Index l) {
    return RealMatrix::Identity(l, l) -
           RealMatrix::Constant(l, l, 1.0 / static_cast<double>(l));
}

/// Reference solver for the explicit systems (full-pivot LU, independent of
/// the library's elimination).
inline RealVector reference_solve(const RealMatrix& m, const RealVector& b) {
    return m.fullPivLu().solve(b);
}

/// Dual matrix of (K (x) K + lambda I) a = vec(Y).
inline RealMatrix explicit_rls(const RealMatrix& k, const RealMatrix& y, double lambda) {
    const Index p = k.rows();
    const RealMatrix sys = explicit_kron(k, k) + lambda * RealMatrix::Identity(p * p, p * p);
    return reshape_square(reference_solve(sys, stack_columns(y)), p);
}

/// Dual matrix of (K (x) CK + lambda I) a = (I (x) C) vec(Y).
inline RealMatrix explicit_rankrls(const RealMatrix& k, const RealMatrix& y, double lambda) {
    const Index p = k.rows();
    const RealMatrix c = explicit_centering(p);
    const RealMatrix sys = explicit_kron(k, c * k) + lambda * RealMatrix::Identity(p * p, p * p);
    const RealVector rhs = explicit_kron(RealMatrix::Identity(p, p), c) * stack_columns(y);
    return reshape_square(reference_solve(sys, rhs), p);
}

/// Relative residual of the RankRLS normal equations
/// (Kb L Kb + lambda Kb) a = Kb L y over a complete graph, L = I (x) C.
inline double rankrls_normal_residual(const RealMatrix& k, const RealMatrix& y, double lambda,
                                      const RealMatrix& a) {
    const Index p = k.rows();
    const RealMatrix kb = explicit_kron(k, k);
    const RealMatrix l = explicit_kron(RealMatrix::Identity(p, p), explicit_centering(p));
    const RealVector av = stack_columns(a);
    const RealVector rhs = kb * l * stack_columns(y);
    return (kb * l * kb * av + lambda * kb * av - rhs).norm() / rhs.norm();
}

/// Score of the edge start -> end as the dual sum over all training pairs,
/// sum_{h,i} a(i, h) k_pair((h -> i), (start -> end)). `k_start` and `k_end`
/// hold base-kernel values against the training nodes.
inline double dual_sum_score(PairwiseKind kind, const RealMatrix& a, const RealVector& k_start,
                             const RealVector& k_end) {
    double total = 0.0;
    for (Index h = 0; h < a.cols(); ++h)
        for (Index i = 0; i < a.rows(); ++i)
            total += a(i, h) * kernels::pairwise_kernel_value(kind, k_start(h), k_end(i),
                                                              k_end(h), k_start(i));
    return total;
}

}  // namespace condrank::testing
