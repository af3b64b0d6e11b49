#include "response/ode/solver.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include <fmt/format.h>

#include "response/common/error.hpp"
#include "response/common/parallel.hpp"
#include "response/spectral/norm.hpp"
#include "response/spectral/operators.hpp"

namespace response::ode {

using spectral::compose;
using spectral::norm;

void OdeProblem::validate() const {
    if (lattice.has_space()) throw InputError("ODE problems live on a lattice without a spatial variable");
    if (linear.n() != lattice.n()) throw InputError("A and the lattice disagree on n", "A");
    if (g_hat.n() != lattice.n()) throw InputError("nonlinearity and the lattice disagree on n", "nonlinearity");
    if (!(forcing.lattice() == lattice)) throw InputError("forcing lives on a different lattice", "forcing");
    double mean = 0.0;
    for (auto c : forcing.mode(lattice.zero_mode())) mean = std::max(mean, std::abs(c));
    if (mean > 0.0) throw InputError(fmt::format("forcing must have zero mean (|f̂_0| = {:.3e})", mean), "forcing");
    const double defect = forcing.hermitian_defect();
    if (defect > 1e-12 * std::max(1.0, forcing.max_abs())) {
        throw InputError(fmt::format("forcing is not real-valued (Hermitian defect {:.3e})", defect), "forcing");
    }
}

void SolverConfig::validate() const {
    if (!(tol > 0.0)) throw InputError("tol must be > 0", "solver.tol");
    if (max_iter < 1) throw InputError("max_iter must be ≥ 1", "solver.max_iter");
    if (!(ball_radius > 0.0)) throw InputError("ball_radius must be > 0", "solver.ball_radius");
    if (jobs < 1) throw InputError("jobs must be ≥ 1", "jobs");
    norm.validate();
}

std::string to_string(Status s) {
    switch (s) {
        case Status::converged: return "converged";
        case Status::max_iter: return "max_iter";
        case Status::left_ball: return "left_ball";
        case Status::resonant: return "resonant";
        case Status::failed: return "failed";
    }
    return "unknown";
}

std::string to_string(Hypothesis h) { return h == Hypothesis::local ? "local" : "global"; }

PicardMap::PicardMap(cplx eps, const OdeProblem& prob, int jobs)
    : prob_(&prob), inverse_(eps, prob.linear, prob.lattice, multiplier::Backend::automatic, jobs) {}

FourierField PicardMap::operator()(const FourierField& U) const {
    if (prob_->g_hat.is_zero()) return inverse_.apply(prob_->forcing);
    return inverse_.apply(prob_->forcing - compose(U, prob_->g_hat));
}

FourierField picard_step(const FourierField& U, cplx eps, const OdeProblem& prob) {
    return PicardMap(eps, prob)(U);
}

FourierField residual_field(const FourierField& U, cplx eps, const OdeProblem& prob) {
    const auto& lattice = prob.lattice;
    const int n = lattice.n();
    const auto& A = prob.linear.A();
    FourierField out(lattice);
    for (std::size_t m = 0; m < lattice.num_modes(); ++m) {
        const double a = lattice.k_dot_omega(m);
        const cplx d = -eps * (a * a) + cplx(0.0, a);
        const auto u = U.mode(m);
        auto r = out.mode(m);
        for (int i = 0; i < n; ++i) {
            cplx acc = d * u[i];
            for (int j = 0; j < n; ++j) acc += eps * A(i, j) * u[j];
            r[i] = acc - eps * prob.forcing.at(m, i);
        }
    }
    if (!prob.g_hat.is_zero()) {
        auto g = compose(U, prob.g_hat);
        g *= eps;
        out += g;
    }
    return out;
}

double residual(const FourierField& U, cplx eps, const OdeProblem& prob, const NormSpec& spec) {
    return norm(residual_field(U, eps, prob), spec);
}

std::pair<FourierField, SolveReport> solve_fixed_point(cplx eps, const OdeProblem& prob, const SolverConfig& cfg,
                                                       const std::optional<FourierField>& initial) {
    cfg.validate();
    prob.validate();
    try {
        const PicardMap map(eps, prob, cfg.jobs);
        return solve_fixed_point(map, prob, cfg, initial);
    } catch (const ResonanceError& e) {
        SolveReport rep;
        rep.eps = eps;
        rep.norm = cfg.norm;
        rep.status = Status::resonant;
        rep.message = e.what();
        return {FourierField(prob.lattice), rep};
    }
}

std::pair<FourierField, SolveReport> solve_fixed_point(const PicardMap& map, const OdeProblem& prob,
                                                       const SolverConfig& cfg,
                                                       const std::optional<FourierField>& initial) {
    cfg.validate();
    SolveReport rep;
    rep.eps = map.eps();
    rep.norm = cfg.norm;
    const auto& inv = map.inverse();
    rep.c_emp = inv.sup_norm();
    rep.kappa = 1.0 + inv.forward_sup_norm();

    FourierField U = initial ? *initial : FourierField(prob.lattice);
    if (!(U.lattice() == prob.lattice)) throw InputError("initial guess lives on a different lattice");

    try {
        const auto first = map(FourierField(prob.lattice));
        rep.first_iterate_norm = norm(first, cfg.norm);
        rep.smallness_held = rep.first_iterate_norm <= 0.5 * cfg.ball_radius;
        if (cfg.hypothesis == Hypothesis::local) {
            rep.lip_ball = prob.g_hat.lipschitz_on_ball(cfg.ball_radius);
            rep.contraction_held = prob.g_hat.vanishes_to_second_order() && rep.c_emp * rep.lip_ball <= 0.5;
        } else {
            rep.lip_ball = prob.g_hat.lip_hat();
            rep.contraction_held = rep.c_emp * rep.lip_ball < 1.0;
        }

        rep.status = Status::max_iter;
        if (prob.g_hat.is_zero()) {
            U = first;
            rep.iterations = 1;
            rep.increments.push_back(norm(U - (initial ? *initial : FourierField(prob.lattice)), cfg.norm));
        } else {
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
                if (cfg.hypothesis == Hypothesis::local && norm(U, cfg.norm) > cfg.ball_radius) {
                    rep.status = Status::left_ball;
                    rep.message = fmt::format("iterate {} left the ball of radius {}", it, cfg.ball_radius);
                    break;
                }
                if (inc <= cfg.tol && residual(U, rep.eps, prob, cfg.norm) <= rep.kappa * cfg.tol) break;
            }
        }

        rep.fixed_point_residual = norm(U - map(U), cfg.norm);
        rep.residual = residual(U, rep.eps, prob, cfg.norm);
        rep.sol_norm = norm(U, cfg.norm);
        rep.tail_norm = spectral::tail_norm(U, cfg.norm);
        if (prob.g_hat.accepts_complex() || rep.eps.imag() == 0.0) rep.aliasing = spectral::compose_aliasing(U, prob.g_hat);

        const bool left = rep.status == Status::left_ball || rep.status == Status::failed;
        if (!left && rep.fixed_point_residual <= cfg.tol && rep.residual <= rep.kappa * cfg.tol) {
            rep.status = Status::converged;
        } else if (!left) {
            rep.status = Status::max_iter;
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

namespace {

long long ray_key(cplx e) { return std::llround(std::arg(e) * 1e9); }

}  // namespace

std::vector<SweepRow> sweep_epsilon(const std::vector<cplx>& eps_list, const OdeProblem& prob,
                                    const SolverConfig& cfg) {
    cfg.validate();
    prob.validate();
    std::map<long long, std::vector<cplx>> rays;
    for (auto e : eps_list) {
        if (e == 0.0) throw InputError("eps = 0 is not admissible", "eps");
        rays[ray_key(e)].push_back(e);
    }
    std::vector<std::vector<cplx>> chains;
    for (auto& [key, v] : rays) {
        std::sort(v.begin(), v.end(), [](cplx a, cplx b) { return std::abs(a) > std::abs(b); });
        chains.push_back(v);
    }

    std::vector<std::vector<SweepRow>> results(chains.size());
    SolverConfig inner = cfg;
    inner.jobs = 1;
    parallel_for(chains.size(), cfg.jobs, [&](std::size_t c) {
        std::optional<FourierField> warm;
        for (auto e : chains[c]) {
            auto [U, rep] = solve_fixed_point(e, prob, inner, warm);
            SweepRow row{e, rep, rep.sol_norm, U, static_cast<int>(c)};
            if (rep.converged()) warm = U;
            results[c].push_back(std::move(row));
        }
    });

    std::vector<SweepRow> rows;
    for (auto& r : results) {
        for (auto& row : r) rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<SweepRow> sweep_epsilon(const multiplier::EpsilonDomain& dom, int count, const OdeProblem& prob,
                                    const SolverConfig& cfg) {
    return sweep_epsilon(multiplier::sample_domain(dom, count), prob, cfg);
}

}  // namespace response::ode
