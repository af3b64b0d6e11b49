#include "response/ode/probes.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "response/common/error.hpp"
#include "response/common/fit.hpp"
#include "response/common/parallel.hpp"
#include "response/spectral/norm.hpp"

namespace response::ode {

using spectral::norm;

AnalyticityProbe analyticity_probe(const SolveAt& solve, cplx center, double radius, int points,
                                   const NormSpec& spec, int jobs) {
    if (!(radius > 0.0)) throw InputError("probe radius must be > 0", "radius");
    if (points < 4) throw InputError("probe needs at least 4 circle points", "points");

    std::vector<std::optional<FourierField>> slots(points + 2);
    const double h = 0.05 * radius;
    parallel_for(slots.size(), jobs, [&](std::size_t i) {
        cplx e;
        if (i < static_cast<std::size_t>(points)) {
            e = center + std::polar(radius, 2 * std::numbers::pi * i / points);
        } else {
            e = center + (i == static_cast<std::size_t>(points) ? h : -h);
        }
        slots[i] = solve(e);
    });

    const auto& lattice = slots[0]->lattice();
    AnalyticityProbe out(lattice);
    out.center = center;
    out.radius = radius;
    out.points = points;

    // a_n r^n = (1/P) Σ_j U_j e^{−2πi nj/P}
    for (int nidx = 0; nidx <= points / 2; ++nidx) {
        FourierField c(lattice);
        for (int j = 0; j < points; ++j) {
            auto term = *slots[j];
            term *= std::polar(1.0 / points, -2 * std::numbers::pi * nidx * j / points);
            c += term;
        }
        out.taylor_norms.push_back(norm(c, spec));
        if (nidx == 1) {
            c *= 1.0 / radius;
            out.derivative = c;
        }
    }

    auto fd = *slots[points] - *slots[points + 1];
    fd *= 1.0 / (2 * h);
    out.cauchy_vs_fd = norm(out.derivative - fd, spec);
    const double dn = norm(out.derivative, spec);
    out.cauchy_vs_fd_relative = dn > 0.0 ? out.cauchy_vs_fd / dn : out.cauchy_vs_fd;

    // Terms at the roundoff floor of the largest one carry no decay information.
    const double top = *std::max_element(out.taylor_norms.begin(), out.taylor_norms.end());
    std::vector<double> kept;
    for (double v : out.taylor_norms) {
        if (v <= 1e-12 * top) break;
        kept.push_back(v);
    }
    out.fitted_terms = static_cast<int>(kept.size());
    if (kept.size() >= 2) {
        const auto fit = fit_geometric(kept);
        out.decay_ratio = std::exp(fit.slope);
        out.decay_r_squared = fit.r_squared;
    } else {
        out.decay_ratio = 0.0;  // nothing above the floor beyond order 0
        out.decay_r_squared = 1.0;
    }
    return out;
}

AnalyticityProbe analyticity_probe(cplx center, double radius, const OdeProblem& prob, const SolverConfig& cfg,
                                   int points) {
    SolverConfig inner = cfg;
    inner.jobs = 1;
    auto solve = [&](cplx e) {
        auto [U, rep] = solve_fixed_point(e, prob, inner);
        if (!rep.converged()) {
            throw NumericalError(fmt::format("analyticity probe: solve at eps = {}{:+}i ended with {} ({})", e.real(),
                                             e.imag(), to_string(rep.status), rep.message));
        }
        return U;
    };
    return analyticity_probe(solve, center, radius, points, cfg.norm, cfg.jobs);
}

LowRegularityResult low_regularity_solve(cplx eps, const OdeProblem& prob, const SolverConfig& cfg,
                                         const std::vector<double>& s_grid) {
    cfg.validate();
    prob.validate();
    for (double s : s_grid) {
        if (!(s >= 0.0 && s < 1.0)) throw InputError(fmt::format("s = {} is outside [0, 1)", s), "s_grid");
    }
    const PicardMap map(eps, prob, cfg.jobs);
    const double M = prob.g_hat.lip_hat();
    const double bound = map.inverse().sup_norm() * M;
    if (!(bound < 1.0)) {
        throw InputError(fmt::format("C_emp·M = {:.4g} ≥ 1: no global contraction", bound), "nonlinearity.lip");
    }

    SolverConfig l2 = cfg;
    l2.norm = {};
    l2.hypothesis = Hypothesis::global;

    LowRegularityResult res(prob.lattice);
    res.bound = bound;
    for (double s : s_grid) {
        RateRow row;
        row.s = s;
        res.rows.push_back(row);
    }

    FourierField U(prob.lattice);
    SolveReport rep;
    rep.eps = eps;
    rep.norm = l2.norm;
    rep.c_emp = map.inverse().sup_norm();
    rep.kappa = 1.0 + map.inverse().forward_sup_norm();
    rep.lip_ball = M;
    rep.contraction_held = true;
    rep.status = Status::max_iter;
    for (int it = 1; it <= l2.max_iter; ++it) {
        auto next = map(U);
        const auto diff = next - U;
        const double inc = norm(diff, l2.norm);
        if (!rep.increments.empty() && rep.increments.back() > 0.0) rep.ratios.push_back(inc / rep.increments.back());
        rep.increments.push_back(inc);
        for (auto& row : res.rows) row.increments.push_back(norm(diff, {0.0, row.s}));
        U = std::move(next);
        rep.iterations = it;
        if (inc <= l2.tol && residual(U, eps, prob, l2.norm) <= rep.kappa * l2.tol) break;
    }
    rep.fixed_point_residual = norm(U - map(U), l2.norm);
    rep.residual = residual(U, eps, prob, l2.norm);
    rep.sol_norm = norm(U, l2.norm);
    rep.tail_norm = spectral::tail_norm(U, l2.norm);
    rep.first_iterate_norm = rep.increments.empty() ? 0.0 : rep.increments.front();
    rep.smallness_held = true;
    if (rep.fixed_point_residual <= l2.tol && rep.residual <= rep.kappa * l2.tol) rep.status = Status::converged;

    // Fit only the steps whose increments sit well above roundoff.
    auto fit_rows = [&](const std::vector<double>& inc, double& slope, double& r2, int& used) {
        const double floor = 1e-13 * std::max(rep.sol_norm, 1e-300);
        std::vector<double> kept;
        for (double v : inc) {
            if (v <= floor) break;
            kept.push_back(v);
        }
        used = static_cast<int>(kept.size());
        if (kept.size() < 2) {
            slope = -std::numeric_limits<double>::infinity();
            r2 = 1.0;
            return;
        }
        const auto fit = fit_geometric(kept);
        slope = fit.slope;
        r2 = fit.r_squared;
    };
    double l2_r2 = 0.0;
    int l2_used = 0;
    fit_rows(rep.increments, res.l2_log_ratio, l2_r2, l2_used);

    for (auto& row : res.rows) {
        fit_rows(row.increments, row.fitted_log_rate, row.r_squared, row.fitted_steps);
        row.predicted_from_ratio = (1.0 - row.s) * res.l2_log_ratio;
        row.predicted_from_bound = bound > 0.0 ? (1.0 - row.s) * std::log(bound) : -std::numeric_limits<double>::infinity();
        row.relative_error = std::abs(row.fitted_log_rate - row.predicted_from_ratio) /
                             std::max(std::abs(row.predicted_from_ratio), 1e-300);
    }
    res.solution = std::move(U);
    res.report = std::move(rep);
    return res;
}

}  // namespace response::ode
