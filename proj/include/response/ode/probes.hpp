#pragma once

#include <functional>
#include <vector>

#include "response/ode/solver.hpp"

namespace response::ode {

/// Returns the solution at ε or throws (any failure aborts the probe).
using SolveAt = std::function<FourierField(cplx eps)>;

struct AnalyticityProbe {
    explicit AnalyticityProbe(const SpectralLattice& lattice) : derivative(lattice) {}

    cplx center{};
    double radius = 0.0;
    int points = 0;
    /// ‖a_n‖·radius^n for n = 0..points/2, a_n the discrete Taylor coefficients.
    std::vector<double> taylor_norms;
    /// Geometric fit over the entries above the roundoff floor.
    double decay_ratio = 0.0;
    double decay_r_squared = 0.0;
    int fitted_terms = 0;
    /// ‖a_1 − FD‖ with a central difference of step 0.05·radius along the real axis.
    double cauchy_vs_fd = 0.0;
    double cauchy_vs_fd_relative = 0.0;
    FourierField derivative;
};

/// Discrete Cauchy transform of ε ↦ U_ε on the circle |ε − center| = radius
/// with `points` nodes; solves run in parallel on `jobs` threads.
AnalyticityProbe analyticity_probe(const SolveAt& solve, cplx center, double radius, int points,
                                   const NormSpec& norm, int jobs = 1);

/// ODE front end: every node solved from zero with `cfg`; a node that does
/// not converge throws NumericalError.
AnalyticityProbe analyticity_probe(cplx center, double radius, const OdeProblem& prob, const SolverConfig& cfg,
                                   int points = 32);

struct RateRow {
    double s = 0.0;
    std::vector<double> increments;  ///< ‖U_{n+1} − U_n‖_{H^s}
    double fitted_log_rate = 0.0;    ///< slope of log increments per step
    double r_squared = 0.0;
    int fitted_steps = 0;
    double predicted_from_ratio = 0.0;  ///< (1−s)·log(measured L² ratio)
    double predicted_from_bound = 0.0;  ///< (1−s)·log(C_emp·M)
    double relative_error = 0.0;        ///< |fitted − predicted_from_ratio| / |predicted_from_ratio|
};

struct LowRegularityResult {
    explicit LowRegularityResult(const SpectralLattice& lattice) : solution(lattice) {}

    FourierField solution;
    SolveReport report;
    double l2_log_ratio = 0.0;  ///< fitted L² log contraction rate
    double bound = 0.0;         ///< C_emp·M
    std::vector<RateRow> rows;
};

/// Contraction in L² (ρ = 0, m = 0, no ball) with the H^s increments of
/// every iterate recorded for each s.  Requires C_emp·M < 1, M = lip_hat.
LowRegularityResult low_regularity_solve(cplx eps, const OdeProblem& prob, const SolverConfig& cfg,
                                         const std::vector<double>& s_grid);

struct TimeCrosscheck {
    double tracking_error = 0.0;    ///< sup |x(t) − U(ωt)| over [t_start, horizon]
    double attraction_error = 0.0;  ///< |x_pert(T) − U(ωT)|
    double slow_rate = 0.0;         ///< slowest decay rate of the linearization at 0
    double predicted_attraction = 0.0;
    std::size_t steps = 0;
};

/// Integrates ε x'' + x' + ε(Ax + ĝ(x)) = ε f(ωt) with a stiff BDF
/// scheme from x(0) = U(0), x'(0) = (ω·∂U)(0), and again with x(0) shifted
/// by `perturbation` in every component.  Real ε > 0 only.
TimeCrosscheck time_integration_crosscheck(double eps, const OdeProblem& prob, const FourierField& U,
                                           double horizon, double perturbation, double t_start = 0.0,
                                           double sample_dt = 0.01, double abs_tol = 1e-12, double rel_tol = 1e-12);

}  // namespace response::ode
