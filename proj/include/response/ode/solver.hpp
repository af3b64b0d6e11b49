#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "response/multiplier/domain.hpp"
#include "response/multiplier/multiplier.hpp"
#include "response/ode/problem.hpp"

namespace response::ode {

/// T_ε(U) = ε L_ε⁻¹ [f − ĝ(U)] with the multiplier table cached.
class PicardMap {
public:
    PicardMap(cplx eps, const OdeProblem& prob, int jobs = 1);

    FourierField operator()(const FourierField& U) const;
    const multiplier::ScaledInverse& inverse() const noexcept { return inverse_; }
    multiplier::ScaledInverse& inverse() noexcept { return inverse_; }
    cplx eps() const noexcept { return inverse_.eps(); }

private:
    const OdeProblem* prob_;
    multiplier::ScaledInverse inverse_;
};

/// One application of T_ε.
FourierField picard_step(const FourierField& U, cplx eps, const OdeProblem& prob);

/// Equation residual field ε(ω·∂)²U + (ω·∂)U + ε(AU + ĝ(U)) − εf.
FourierField residual_field(const FourierField& U, cplx eps, const OdeProblem& prob);
/// Its norm in `norm`.
double residual(const FourierField& U, cplx eps, const OdeProblem& prob, const NormSpec& norm = {});

/// Picard iteration from `initial` (default 0).  Stops when the increment
/// is ≤ tol and the equation residual is ≤ κ·tol.  Never throws on
/// non-convergence; the status says what happened.
std::pair<FourierField, SolveReport> solve_fixed_point(cplx eps, const OdeProblem& prob, const SolverConfig& cfg,
                                                       const std::optional<FourierField>& initial = std::nullopt);

/// Same with a caller-owned map (fault injection, repeated solves).
std::pair<FourierField, SolveReport> solve_fixed_point(const PicardMap& map, const OdeProblem& prob,
                                                       const SolverConfig& cfg,
                                                       const std::optional<FourierField>& initial = std::nullopt);

struct SweepRow {
    cplx eps{};
    SolveReport report;
    double sol_norm = 0.0;
    FourierField solution;
    int chain = 0;
};

/// Solves at every ε.  Samples on the same ray from the origin form a
/// chain, visited by |ε| descending with warm starts; chains run in
/// parallel on cfg.jobs threads.  Rows come back sorted by (arg ε, −|ε|)
/// so the output does not depend on the thread count.  Failed solves are
/// flagged in their row and the chain continues from the last good
/// solution.
std::vector<SweepRow> sweep_epsilon(const std::vector<cplx>& eps_list, const OdeProblem& prob, const SolverConfig& cfg);
std::vector<SweepRow> sweep_epsilon(const multiplier::EpsilonDomain& dom, int count, const OdeProblem& prob,
                                    const SolverConfig& cfg);

}  // namespace response::ode
