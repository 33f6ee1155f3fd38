#include "condrank/linalg.hpp"

#include "condrank/errors.hpp"

#include <cmath>
#include <string>
#include <utility>

namespace condrank::linalg {

namespace {

std::string shape(const RealMatrix& m) {
    return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

}  // namespace

void require_finite(const RealMatrix& m, const char* what) {
    if (!m.allFinite()) {
        throw InvalidInput(std::string(what) + " contains non-finite entries");
    }
}

void require_symmetric(const RealMatrix& m, const char* what) {
    if (m.rows() != m.cols() || m.rows() == 0) {
        throw InvalidInput(std::string(what) + " must be square and non-empty, got " + shape(m));
    }
    require_finite(m, what);
    const double scale = m.cwiseAbs().maxCoeff();
    const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
    if (asym > kSymmetryTolerance * scale) {
        throw InvalidInput(std::string(what) + " is not symmetric (max asymmetry " +
                           std::to_string(asym) + ")");
    }
}

EigenDecomposition sym_eig(const RealMatrix& m) {
    require_symmetric(m, "sym_eig input");
    // Average with the transpose so the solver sees an exactly symmetric matrix.
    const RealMatrix sym = 0.5 * (m + m.transpose());
    Eigen::SelfAdjointEigenSolver<RealMatrix> solver(sym, Eigen::ComputeEigenvectors);
    if (solver.info() != Eigen::Success) {
        throw InvalidInput("symmetric eigensolver did not converge");
    }
    return {solver.eigenvectors(), solver.eigenvalues()};
}

CholeskyFactor cholesky(const RealMatrix& m) {
    require_symmetric(m, "cholesky input");
    Eigen::LLT<RealMatrix> llt(m);
    if (llt.info() != Eigen::Success) {
        throw NotPositiveDefinite("cholesky: non-positive pivot");
    }
    RealMatrix lower = llt.matrixL();
    if ((lower.diagonal().array() <= 0.0).any()) {
        throw NotPositiveDefinite("cholesky: non-positive pivot");
    }
    return {std::move(lower)};
}

RealVector vec(const RealMatrix& m) {
    return Eigen::Map<const RealVector>(m.data(), m.size());
}

RealMatrix unvec(const RealVector& v, Index rows, Index cols) {
    if (rows < 0 || cols < 0 || v.size() != rows * cols) {
        throw InvalidInput("unvec: vector of length " + std::to_string(v.size()) +
                           " cannot be reshaped to " + std::to_string(rows) + "x" +
                           std::to_string(cols));
    }
    return Eigen::Map<const RealMatrix>(v.data(), rows, cols);
}

RealMatrix unvec(const RealVector& v, Index p) { return unvec(v, p, p); }

Index square_side(const RealVector& v) {
    const auto p = static_cast<Index>(std::llround(std::sqrt(static_cast<double>(v.size()))));
    if (p * p != v.size()) {
        throw InvalidInput("vector length " + std::to_string(v.size()) + " is not a perfect square");
    }
    return p;
}

RealVector kron_matvec(const RealMatrix& m, const RealMatrix& n, const RealVector& v) {
    if (v.size() != m.cols() * n.cols()) {
        throw InvalidInput("kron_matvec: vector length " + std::to_string(v.size()) +
                           " does not match " + shape(m) + " (x) " + shape(n));
    }
    const auto block = Eigen::Map<const RealMatrix>(v.data(), n.cols(), m.cols());
    const RealMatrix out = n * block * m.transpose();
    return vec(out);
}

RealMatrix kron(const RealMatrix& m, const RealMatrix& n) {
    RealMatrix out(m.rows() * n.rows(), m.cols() * n.cols());
    for (Index i = 0; i < m.rows(); ++i) {
        for (Index j = 0; j < m.cols(); ++j) {
            out.block(i * n.rows(), j * n.cols(), n.rows(), n.cols()) = m(i, j) * n;
        }
    }
    return out;
}

namespace {

void require_square_length(const RealVector& v, Index p, const char* what) {
    if (p < 0 || v.size() != p * p) {
        throw InvalidInput(std::string(what) + ": vector length " + std::to_string(v.size()) +
                           " != p^2 with p = " + std::to_string(p));
    }
}

}  // namespace

RealVector apply_commutation(const RealVector& v, Index p) {
    require_square_length(v, p, "apply_commutation");
    const auto m = Eigen::Map<const RealMatrix>(v.data(), p, p);
    const RealMatrix t = m.transpose();
    return vec(t);
}

RealVector apply_symmetrizer(const RealVector& v, Index p) {
    require_square_length(v, p, "apply_symmetrizer");
    const auto m = Eigen::Map<const RealMatrix>(v.data(), p, p);
    const RealMatrix s = 0.5 * (m + m.transpose());
    return vec(s);
}

RealVector apply_skew_symmetrizer(const RealVector& v, Index p) {
    require_square_length(v, p, "apply_skew_symmetrizer");
    const auto m = Eigen::Map<const RealMatrix>(v.data(), p, p);
    const RealMatrix a = 0.5 * (m - m.transpose());
    return vec(a);
}

RealMatrix hadamard(const RealMatrix& m, const RealMatrix& n) {
    if (m.rows() != n.rows() || m.cols() != n.cols()) {
        throw InvalidInput("hadamard: shape mismatch " + shape(m) + " vs " + shape(n));
    }
    return m.cwiseProduct(n);
}

RealMatrix centering_matrix(Index l) {
    if (l < 1) {
        throw InvalidInput("centering_matrix: size must be positive");
    }
    return RealMatrix::Identity(l, l) -
           RealMatrix::Constant(l, l, 1.0 / static_cast<double>(l));
}

RealVector dense_solve(const RealMatrix& m, const RealVector& b) {
    if (m.rows() != m.cols()) {
        throw InvalidInput("dense_solve: matrix must be square, got " + shape(m));
    }
    if (b.size() != m.rows()) {
        throw InvalidInput("dense_solve: right-hand side length mismatch");
    }
    require_finite(m, "dense_solve matrix");
    const Index n = m.rows();
    RealMatrix a = m;
    RealVector x = b;
    const double scale = n > 0 ? a.cwiseAbs().maxCoeff() : 0.0;
    const double threshold = kPivotTolerance * scale;

    for (Index k = 0; k < n; ++k) {
        Index pivot = k;
        a.col(k).tail(n - k).cwiseAbs().maxCoeff(&pivot);
        pivot += k;
        if (!(std::abs(a(pivot, k)) > threshold)) {
            throw SingularMatrix("dense_solve: pivot below tolerance at column " + std::to_string(k));
        }
        if (pivot != k) {
            a.row(k).swap(a.row(pivot));
            std::swap(x(k), x(pivot));
        }
        const Index rest = n - k - 1;
        if (rest == 0) {
            continue;
        }
        const RealVector factors = a.col(k).tail(rest) / a(k, k);
        a.bottomRightCorner(rest, rest).noalias() -= factors * a.row(k).tail(rest);
        x.tail(rest) -= factors * x(k);
    }
    for (Index k = n - 1; k >= 0; --k) {
        const double tail = a.row(k).tail(n - k - 1).dot(x.tail(n - k - 1));
        x(k) = (x(k) - tail) / a(k, k);
    }
    return x;
}

}  // namespace condrank::linalg
