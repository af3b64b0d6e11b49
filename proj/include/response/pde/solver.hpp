#pragma once

#include <optional>
#include <utility>

#include "response/ode/probes.hpp"
#include "response/pde/multiplier.hpp"

namespace response::pde {

using ode::SolveReport;
using ode::SolverConfig;

/// h(U) = (U²)_xx, the product on the 3/2-rule grid.
FourierField boussinesq_nonlinearity(const FourierField& U);

/// T_ε(U) = ε N_ε⁻¹ [h(U) + f] with the table cached.
class PdePicardMap {
public:
    PdePicardMap(cplx eps, const PdeProblem& prob, int jobs = 1);

    FourierField operator()(const FourierField& U) const;
    const NInverse& inverse() const noexcept { return inverse_; }
    NInverse& inverse() noexcept { return inverse_; }
    cplx eps() const noexcept { return inverse_.eps(); }

private:
    const PdeProblem* prob_;
    NInverse inverse_;
};

/// ε(ω·∂)²U + (ω·∂)U − εβ∂⁴U − ε∂²U − ε(U²)_xx − εf.
FourierField pde_residual_field(const FourierField& U, cplx eps, const PdeProblem& prob);
double pde_residual(const FourierField& U, cplx eps, const PdeProblem& prob, const NormSpec& norm = {});

/// Picard iteration of T_ε.  Every iterate is checked for a zero j = 0
/// slice and, for real ε, Hermitian symmetry; a violation ends the solve
/// with status failed.  Local hypothesis: iterates must stay in the ball.
std::pair<FourierField, SolveReport> pde_solve_fixed_point(cplx eps, const PdeProblem& prob, const SolverConfig& cfg,
                                                           const std::optional<FourierField>& initial = std::nullopt);
std::pair<FourierField, SolveReport> pde_solve_fixed_point(const PdePicardMap& map, const PdeProblem& prob,
                                                           const SolverConfig& cfg,
                                                           const std::optional<FourierField>& initial = std::nullopt);

/// f = ε⁻¹ N_ε W − h(W), so that W solves the PDE at ε exactly on the lattice.
FourierField manufactured_forcing(cplx eps, double beta, const FourierField& W);

/// Circle probe in ε of the PDE solution map.
ode::AnalyticityProbe pde_analyticity_probe(cplx center, double radius, const PdeProblem& prob, const SolverConfig& cfg,
                                            int points = 32);

}  // namespace response::pde
