#include "response/verification/newton.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>
#include <fmt/format.h>

#include "response/common/error.hpp"
#include "response/multiplier/multiplier.hpp"
#include "response/ode/solver.hpp"
#include "response/pde/solver.hpp"
#include "response/spectral/norm.hpp"
#include "response/spectral/transform.hpp"

namespace response::verification {

namespace {

using spectral::SpectralLattice;

constexpr double kTarget = 1e-12;
constexpr std::size_t kMaxUnknowns = 20000;

double smallest_singular_value(const Eigen::MatrixXcd& J) {
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(J);
    return svd.singularValues()(svd.singularValues().size() - 1);
}

// Damped Newton over a packed unknown vector.  F maps unknowns to the
// residual vector, jac builds the dense Jacobian at the current point.
template <typename Residual, typename Jac>
std::pair<Eigen::VectorXcd, int> damped_newton(Eigen::VectorXcd x, Residual&& F, Jac&& jac, double& final_norm) {
    Eigen::VectorXcd r = F(x);
    double rn = r.norm();
    int it = 0;
    int stalled = 0;
    for (; it < 50 && rn > 1e-15 && stalled < 3; ++it) {
        const Eigen::MatrixXcd J = jac(x);
        Eigen::PartialPivLU<Eigen::MatrixXcd> lu(J);
        if (!(lu.rcond() > 1e-15)) {
            throw NumericalError(fmt::format("Newton Jacobian is singular (smallest singular value {:.3e})",
                                             smallest_singular_value(J)));
        }
        const Eigen::VectorXcd dx = -lu.solve(r);
        if (!dx.allFinite()) {
            throw NumericalError(fmt::format("Newton step is not finite (smallest singular value {:.3e})",
                                             smallest_singular_value(J)));
        }
        double t = 1.0;
        Eigen::VectorXcd trial = x + dx;
        Eigen::VectorXcd rt = F(trial);
        while (rt.norm() > (1 - 1e-4 * t) * rn && t > 1.0 / 1024) {
            t /= 2;
            trial = x + t * dx;
            rt = F(trial);
        }
        stalled = rt.norm() < rn ? 0 : stalled + 1;
        if (rt.norm() < rn || t == 1.0) {
            x = std::move(trial);
            r = std::move(rt);
            rn = r.norm();
        }
    }
    final_norm = rn;
    return {x, it};
}

}  // namespace

NewtonResult newton_oracle(cplx eps, const ode::OdeProblem& full, int K_small) {
    if (K_small < 1 || K_small > 8) throw InputError("K_small must be in [1, 8]", "K_small");
    const SpectralLattice lat = full.lattice.with_cutoff(K_small);
    const ode::OdeProblem prob{lat, full.linear, full.g_hat, spectral::transfer(full.forcing, lat)};
    const int n = lat.n();
    const std::size_t unknowns = lat.size();
    if (unknowns > kMaxUnknowns) throw InputError(fmt::format("{} unknowns exceed the oracle limit", unknowns));

    // Jacobian entries of ĝ are needed at wavevector differences up to 2K.
    const SpectralLattice wide(lat.omega(), 2 * K_small, n * n, std::nullopt);
    spectral::GridShape grid = prob.g_hat.kind() == spectral::NonlinearitySpec::Kind::polynomial
                                   ? spectral::dealiased_grid(lat, std::max(1, prob.g_hat.degree()))
                                   : spectral::oversampled_grid(lat, prob.g_hat.oversample());
    for (auto& e : grid.extents) e = std::max(e, spectral::fft_size_at_least(4 * K_small + 1));

    auto pack = [&](const FourierField& u) {
        Eigen::VectorXcd x(unknowns);
        for (std::size_t i = 0; i < unknowns; ++i) x(i) = u.coeffs()[i];
        return x;
    };
    auto unpack = [&](const Eigen::VectorXcd& x) {
        FourierField u(lat);
        for (std::size_t i = 0; i < unknowns; ++i) u.coeffs()[i] = x(i);
        return u;
    };
    auto F = [&](const Eigen::VectorXcd& x) { return pack(ode::residual_field(unpack(x), eps, prob)); };
    auto jac = [&](const Eigen::VectorXcd& x) {
        Eigen::MatrixXcd J = Eigen::MatrixXcd::Zero(unknowns, unknowns);
        for (std::size_t m = 0; m < lat.num_modes(); ++m) {
            J.block(m * n, m * n, n, n) = multiplier::mode_matrix(eps, lat.k_dot_omega(m), prob.linear);
        }
        if (prob.g_hat.is_zero()) return J;
        const auto vals = spectral::synthesize(unpack(x), grid);
        spectral::GridValues dg{grid, n * n, std::vector<cplx>(grid.points() * n * n)};
        std::vector<cplx> point(n), d(static_cast<std::size_t>(n) * n);
        for (std::size_t p = 0; p < grid.points(); ++p) {
            for (int c = 0; c < n; ++c) point[c] = vals.component(c)[p];
            prob.g_hat.jacobian(point, d);
            for (int c = 0; c < n * n; ++c) dg.component(c)[p] = d[c];
        }
        const auto coeff = spectral::analyze(dg, wide);
        std::vector<int> diff(lat.d());
        for (std::size_t m = 0; m < lat.num_modes(); ++m) {
            const auto km = lat.k(m);
            for (std::size_t q = 0; q < lat.num_modes(); ++q) {
                const auto kq = lat.k(q);
                for (int i = 0; i < lat.d(); ++i) diff[i] = km[i] - kq[i];
                const auto w = wide.index_of(diff);
                for (int r = 0; r < n; ++r) {
                    for (int c = 0; c < n; ++c) J(m * n + r, q * n + c) += eps * coeff.at(w, r * n + c);
                }
            }
        }
        return J;
    };

    NewtonResult out{FourierField(lat)};
    out.unknowns = unknowns;
    auto [x, iters] = damped_newton(Eigen::VectorXcd::Zero(unknowns), F, jac, out.residual);
    out.solution = unpack(x);
    out.iterations = iters;
    if (!(out.residual <= kTarget)) {
        throw NumericalError(fmt::format("Newton oracle stalled at residual {:.3e}", out.residual));
    }
    return out;
}

NewtonResult newton_oracle(cplx eps, const pde::PdeProblem& full, int K_small, int J_small) {
    if (K_small < 1 || K_small > 8 || J_small < 1 || J_small > 8) {
        throw InputError("K_small and J_small must be in [1, 8]");
    }
    const SpectralLattice lat = full.lattice.with_cutoff(K_small, J_small);
    const pde::PdeProblem prob{lat, full.beta, spectral::transfer(full.forcing, lat)};
    std::vector<std::size_t> modes;
    for (std::size_t m = 0; m < lat.num_modes(); ++m) {
        if (lat.j(m) != 0) modes.push_back(m);
    }
    const std::size_t unknowns = modes.size();
    if (unknowns > kMaxUnknowns) throw InputError(fmt::format("{} unknowns exceed the oracle limit", unknowns));

    auto pack = [&](const FourierField& u) {
        Eigen::VectorXcd x(unknowns);
        for (std::size_t i = 0; i < unknowns; ++i) x(i) = u.at(modes[i]);
        return x;
    };
    auto unpack = [&](const Eigen::VectorXcd& x) {
        FourierField u(lat);
        for (std::size_t i = 0; i < unknowns; ++i) u.at(modes[i]) = x(i);
        return u;
    };
    auto F = [&](const Eigen::VectorXcd& x) { return pack(pde::pde_residual_field(unpack(x), eps, prob)); };
    // d/dU of −ε(U²)_xx is δ ↦ 2ε j²·(U δ), the product truncated to the lattice.
    std::vector<std::vector<int>> kvec(unknowns);
    for (std::size_t a = 0; a < unknowns; ++a) kvec[a] = lat.k(modes[a]);
    auto jac = [&](const Eigen::VectorXcd& x) {
        const auto U = unpack(x);
        Eigen::MatrixXcd J = Eigen::MatrixXcd::Zero(unknowns, unknowns);
        std::vector<int> diff(lat.d());
        for (std::size_t a = 0; a < unknowns; ++a) {
            const std::size_t m = modes[a];
            const int jm = lat.j(m);
            J(a, a) = pde::n_multiplier(eps, lat.k_dot_omega(m), jm, prob.beta);
            for (std::size_t b = 0; b < unknowns; ++b) {
                for (int i = 0; i < lat.d(); ++i) diff[i] = kvec[a][i] - kvec[b][i];
                const int dj = jm - lat.j(modes[b]);
                if (!lat.contains(diff, dj)) continue;
                J(a, b) += 2.0 * eps * double(jm * jm) * U.at(lat.index_of(diff, dj));
            }
        }
        return J;
    };

    NewtonResult out{FourierField(lat)};
    out.unknowns = unknowns;
    auto [x, iters] = damped_newton(Eigen::VectorXcd::Zero(unknowns), F, jac, out.residual);
    out.solution = unpack(x);
    out.iterations = iters;
    if (!(out.residual <= kTarget)) {
        throw NumericalError(fmt::format("Newton oracle stalled at residual {:.3e}", out.residual));
    }
    return out;
}

}  // namespace response::verification
