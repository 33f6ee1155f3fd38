#pragma once

#include "condrank/errors.hpp"
#include "condrank/graph.hpp"
#include "condrank/kernels.hpp"
#include "condrank/linalg.hpp"

#include <cstdint>
#include <functional>

namespace condrank {

/// Dual weights of a pairwise model: values(end, start) is the coefficient of
/// edge start -> end, so vec(values) follows the global edge index.
struct DualCoefficients {
    RealMatrix values;
};

enum class Objective { Regression, Ranking };
enum class SolverKind { ClosedForm, Iterative };

struct IterativeOptions {
    int max_iter = 200;
    double residual_tol = 1e-10;
    /// Called after every iteration with the current iterate.
    std::function<void(int, const DualCoefficients&)> callback;
};

struct TrainConfig {
    Objective objective = Objective::Regression;
    PairwiseKind pairwise = PairwiseKind::Ordinary;
    double lambda = 0x1p-30;
    SolverKind solver = SolverKind::ClosedForm;
    IterativeOptions iterative;
    Conditioning conditioning = Conditioning::Outgoing;
};

struct IterativeStats {
    int iterations = 0;
    double relative_residual = 1.0;  // of the returned iterate
    bool converged = false;
};

/// BiCGSTAB hit a vanishing denominator. Carries the best iterate seen.
class SolverBreakdown : public Error {
public:
    SolverBreakdown(const std::string& message, DualCoefficients last)
        : Error("solver-breakdown", message), last_iterate(std::move(last)) {}

    DualCoefficients last_iterate;
};

std::string_view to_string(Objective objective);
Objective parse_objective(std::string_view name);

namespace solvers {

/// Solves (K (x) K + lambda I) vec(A) = vec(Y) through the eigendecomposition
/// of K in O(p^3).
DualCoefficients solve_rls_closed_form(const RealMatrix& k, const LabelMatrix& y, double lambda);

/// Solves (K (x) C K + lambda I) vec(A) = vec(C Y) with C the p x p centering
/// matrix, i.e. RankRLS over a complete graph with the ordinary Kronecker
/// kernel. Incoming conditioning solves the transposed problem.
DualCoefficients solve_rankrls_closed_form(const RealMatrix& k, const LabelMatrix& y,
                                           double lambda,
                                           Conditioning conditioning = Conditioning::Outgoing);

/// RLS with the symmetric or reciprocal Kronecker kernel, computed as ordinary
/// RLS on the (anti)symmetrized labels. The caller's prediction rule must apply
/// the matching symmetrization.
DualCoefficients solve_with_label_transform(const RealMatrix& k, const LabelMatrix& y,
                                            double lambda, PairwiseKind kind);

struct InversionCheck {
    double symmetric_deviation = 0.0;
    double skew_deviation = 0.0;

    [[nodiscard]] double max() const {
        return symmetric_deviation > skew_deviation ? symmetric_deviation : skew_deviation;
    }
};

/// Compares (S Nb S + lambda I)^-1 with S (Nb + lambda I)^-1 S + A / lambda
/// (and the skew counterpart) on random probe vectors, Nb = N (x) N built
/// explicitly. Limited to p <= 8.
InversionCheck check_inversion_identity(const RealMatrix& n, double lambda,
                                        std::uint64_t seed = 1, int probes = 4);

/// BiCGSTAB on (B^T P B Kop + lambda I) vec(A) = B^T P y, where P is the block
/// centering for ranking and the identity for regression, and Kop applies the
/// configured pairwise kernel implicitly. Works for any edge multiset. The
/// best-residual iterate is returned.
DualCoefficients solve_iterative(const RealMatrix& k, const GraphDataset& ds,
                                 const TrainConfig& cfg, IterativeStats* stats = nullptr);

/// Same system as solve_iterative, assembled explicitly and solved densely.
DualCoefficients solve_dense_oracle(const RealMatrix& k, const GraphDataset& ds,
                                    const TrainConfig& cfg,
                                    std::int64_t cap = kernels::kMaterializationCap);

/// Dispatches on cfg.solver, cfg.objective and cfg.pairwise.
DualCoefficients train(const RealMatrix& k, const GraphDataset& ds, const TrainConfig& cfg,
                       IterativeStats* stats = nullptr);

}  // namespace solvers
}  // namespace condrank
