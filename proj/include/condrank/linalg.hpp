#pragma once

#include <Eigen/Dense>

#include <cstddef>

namespace condrank {

using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Symmetric eigendecomposition M = V diag(values) V^T with eigenvalues in
/// ascending order and orthonormal eigenvector columns.
struct EigenDecomposition {
    RealMatrix vectors;
    RealVector values;
};

/// Lower-triangular G with M = G G^T.
struct CholeskyFactor {
    RealMatrix lower;
};

namespace linalg {

inline constexpr double kSymmetryTolerance = 1e-10;
inline constexpr double kPivotTolerance = 1e-12;

/// Throws InvalidInput unless `m` is square and symmetric within
/// kSymmetryTolerance relative to its largest entry.
void require_symmetric(const RealMatrix& m, const char* what);

/// Throws InvalidInput if any entry is NaN or infinite.
void require_finite(const RealMatrix& m, const char* what);

EigenDecomposition sym_eig(const RealMatrix& m);

/// Throws NotPositiveDefinite on a non-positive pivot.
CholeskyFactor cholesky(const RealMatrix& m);

/// Column-stacking vectorization: vec(M)[j*rows + i] = M(i, j).
RealVector vec(const RealMatrix& m);

/// Inverse of vec for a square p x p matrix.
RealMatrix unvec(const RealVector& v, Index p);

/// Inverse of vec for a rows x cols matrix.
RealMatrix unvec(const RealVector& v, Index rows, Index cols);

/// (M (x) N) v computed as vec(N V M^T) with V = unvec(v); the Kronecker
/// product is never formed.
RealVector kron_matvec(const RealMatrix& m, const RealMatrix& n, const RealVector& v);

/// Explicit Kronecker product. Only for small operands (tests, dense oracles).
RealMatrix kron(const RealMatrix& m, const RealMatrix& n);

/// P v = vec(M^T) where M = unvec(v, p).
RealVector apply_commutation(const RealVector& v, Index p);

/// S v = 1/2 vec(M + M^T).
RealVector apply_symmetrizer(const RealVector& v, Index p);

/// A v = 1/2 vec(M - M^T).
RealVector apply_skew_symmetrizer(const RealVector& v, Index p);

RealMatrix hadamard(const RealMatrix& m, const RealMatrix& n);

/// l x l centering matrix I - (1/l) 1 1^T.
RealMatrix centering_matrix(Index l);

/// Gaussian elimination with partial pivoting. Throws SingularMatrix when a
/// pivot falls below kPivotTolerance times the largest entry of `m`.
RealVector dense_solve(const RealMatrix& m, const RealVector& b);

/// Side length p of a vector of length p^2; throws InvalidInput otherwise.
Index square_side(const RealVector& v);

}  // namespace linalg
}  // namespace condrank
