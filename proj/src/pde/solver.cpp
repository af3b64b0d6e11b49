#include "response/pde/solver.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "response/common/error.hpp"
#include "response/spectral/norm.hpp"
#include "response/spectral/operators.hpp"

namespace response::pde {

using ode::Hypothesis;
using ode::Status;
using spectral::norm;

FourierField boussinesq_nonlinearity(const FourierField& U) {
    if (!U.lattice().has_space()) throw InputError("(U^2)_xx needs a lattice with a spatial variable");
    return spectral::spatial_derivative(spectral::product(U, U), 2);
}

PdePicardMap::PdePicardMap(cplx eps, const PdeProblem& prob, int jobs)
    : prob_(&prob), inverse_(eps, prob.lattice, prob.beta, jobs) {}

FourierField PdePicardMap::operator()(const FourierField& U) const {
    return inverse_.apply(boussinesq_nonlinearity(U) + prob_->forcing);
}

FourierField pde_residual_field(const FourierField& U, cplx eps, const PdeProblem& prob) {
    using spectral::directional_derivative;
    using spectral::spatial_derivative;
    auto r = eps * directional_derivative(U, 2);
    r += directional_derivative(U, 1);
    r -= (eps * prob.beta) * spatial_derivative(U, 4);
    r -= eps * spatial_derivative(U, 2);
    r -= eps * boussinesq_nonlinearity(U);
    r -= eps * prob.forcing;
    return r;
}

double pde_residual(const FourierField& U, cplx eps, const PdeProblem& prob, const NormSpec& spec) {
    return norm(pde_residual_field(U, eps, prob), spec);
}

std::pair<FourierField, SolveReport> pde_solve_fixed_point(cplx eps, const PdeProblem& prob, const SolverConfig& cfg,
                                                           const std::optional<FourierField>& initial) {
    cfg.validate();
    prob.validate();
    try {
        const PdePicardMap map(eps, prob, cfg.jobs);
        return pde_solve_fixed_point(map, prob, cfg, initial);
    } catch (const ResonanceError& e) {
        SolveReport rep;
        rep.eps = eps;
        rep.norm = cfg.norm;
        rep.status = Status::resonant;
        rep.message = e.what();
        return {FourierField(prob.lattice), rep};
    }
}

namespace {

// Empty when U keeps the zero-average and (real ε) Hermitian structure.
std::string invariant_violation(const FourierField& U, bool real_eps) {
    if (U.zero_slice_max() != 0.0) return fmt::format("j = 0 slice became nonzero ({:.3e})", U.zero_slice_max());
    if (real_eps) {
        const double defect = U.hermitian_defect();
        if (defect > 1e-12 * U.max_abs()) return fmt::format("iterate lost Hermitian symmetry ({:.3e})", defect);
    }
    return {};
}

}  // namespace

std::pair<FourierField, SolveReport> pde_solve_fixed_point(const PdePicardMap& map, const PdeProblem& prob,
                                                           const SolverConfig& cfg,
                                                           const std::optional<FourierField>& initial) {
    cfg.validate();
    SolveReport rep;
    rep.eps = map.eps();
    rep.norm = cfg.norm;
    const auto& inv = map.inverse();
    rep.c_emp = inv.smoothing_constant();
    rep.kappa = 1.0 + inv.forward_sup_norm();
    const bool real_eps = rep.eps.imag() == 0.0;

    FourierField U = initial ? *initial : FourierField(prob.lattice);
    if (!(U.lattice() == prob.lattice)) throw InputError("initial guess lives on a different lattice");

    try {
        const auto first = map(FourierField(prob.lattice));
        rep.first_iterate_norm = norm(first, cfg.norm);
        rep.smallness_held = rep.first_iterate_norm <= 0.5 * cfg.ball_radius;
        // U ↦ εN⁻¹(U²)_xx: C_emp·r² ≤ r/2 on the ball, Lipschitz 2r·C_emp.
        rep.lip_ball = 2 * cfg.ball_radius;
        rep.contraction_held = rep.c_emp * cfg.ball_radius <= 0.5;

        rep.status = Status::max_iter;
        for (int it = 1; it <= cfg.max_iter; ++it) {
            auto next = map(U);
            const double inc = norm(next - U, cfg.norm);
            if (!rep.increments.empty()) {
                const double prev = rep.increments.back();
                rep.ratios.push_back(prev > 0.0 ? inc / prev : 0.0);
            }
            rep.increments.push_back(inc);
            U = std::move(next);
            rep.iterations = it;
            if (!std::isfinite(inc)) {
                rep.status = Status::failed;
                rep.message = "increment is not finite";
                break;
            }
            if (auto bad = invariant_violation(U, real_eps); !bad.empty()) {
                rep.status = Status::failed;
                rep.message = fmt::format("iterate {}: {}", it, bad);
                break;
            }
            if (cfg.hypothesis == Hypothesis::local && norm(U, cfg.norm) > cfg.ball_radius) {
                rep.status = Status::left_ball;
                rep.message = fmt::format("iterate {} left the ball of radius {}", it, cfg.ball_radius);
                break;
            }
            if (inc <= cfg.tol && pde_residual(U, rep.eps, prob, cfg.norm) <= rep.kappa * cfg.tol) break;
        }

        rep.fixed_point_residual = norm(U - map(U), cfg.norm);
        rep.residual = pde_residual(U, rep.eps, prob, cfg.norm);
        rep.sol_norm = norm(U, cfg.norm);
        rep.tail_norm = spectral::tail_norm(U, cfg.norm);

        const bool stopped = rep.status == Status::left_ball || rep.status == Status::failed;
        if (!stopped && rep.fixed_point_residual <= cfg.tol && rep.residual <= rep.kappa * cfg.tol) {
            rep.status = Status::converged;
        } else if (!stopped) {
            rep.message = fmt::format("no convergence in {} iterations (increment {:.3e}, residual {:.3e})",
                                      rep.iterations, rep.increments.empty() ? 0.0 : rep.increments.back(),
                                      rep.residual);
        }
    } catch (const NumericalError& e) {
        rep.status = Status::failed;
        rep.message = e.what();
    } catch (const OverflowError& e) {
        rep.status = Status::failed;
        rep.message = e.what();
    }
    return {std::move(U), std::move(rep)};
}

FourierField manufactured_forcing(cplx eps, double beta, const FourierField& W) {
    const auto& lattice = W.lattice();
    if (!lattice.has_space()) throw InputError("manufactured forcing needs a lattice with a spatial variable");
    if (W.zero_slice_max() != 0.0) throw InputError("manufactured field must have a zero j = 0 slice");
    FourierField f(lattice);
    for (std::size_t m = 0; m < lattice.num_modes(); ++m) {
        f.at(m) = n_multiplier(eps, lattice.k_dot_omega(m), lattice.j(m), beta) * W.at(m) / eps;
    }
    f -= boussinesq_nonlinearity(W);
    return f;
}

ode::AnalyticityProbe pde_analyticity_probe(cplx center, double radius, const PdeProblem& prob, const SolverConfig& cfg,
                                            int points) {
    SolverConfig inner = cfg;
    inner.jobs = 1;
    auto solve = [&](cplx e) {
        auto [U, rep] = pde_solve_fixed_point(e, prob, inner);
        if (!rep.converged()) {
            throw NumericalError(fmt::format("analyticity probe: PDE solve at eps = {}{:+}i ended with {} ({})",
                                             e.real(), e.imag(), ode::to_string(rep.status), rep.message));
        }
        return U;
    };
    return ode::analyticity_probe(solve, center, radius, points, cfg.norm, cfg.jobs);
}

}  // namespace response::pde
