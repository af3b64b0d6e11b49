// Acceptance gate: one PASS/FAIL line per criterion.  `acceptance 3 9`
// runs a subset.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <numbers>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "response/cli/run.hpp"
#include "response/common/error.hpp"
#include "response/common/fit.hpp"
#include "response/multiplier/multiplier.hpp"
#include "response/ode/probes.hpp"
#include "response/pde/solver.hpp"
#include "response/spectral/norm.hpp"
#include "response/verification/liouville.hpp"
#include "response/verification/newton.hpp"

namespace fs = std::filesystem;
using namespace response;
using cplx = std::complex<double>;
using multiplier::EpsilonDomain;
using multiplier::LinearPart;
using ode::OdeProblem;
using ode::SolverConfig;
using spectral::FourierField;
using spectral::NonlinearitySpec;
using spectral::SpectralLattice;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string sci(double x) { return fmt::format("{:.3e}", x); }

// λ = 1, ĝ = 0.1x³, f = 0.2 cos θ, ω = 1.
OdeProblem cubic_example(int K = 16) {
    const auto lat = SpectralLattice::torus({1.0}, K, 1);
    FourierField f(lat);
    f.add_cos(std::vector<int>{1}, 0, 0, 0.2);
    return {lat, LinearPart::scalar(1.0), NonlinearitySpec::polynomial({{0, 0, 0, 0.1}}), f};
}

double l2_diff(const FourierField& a, const FourierField& b) { return spectral::norm(a - b, {}); }

// ---------------------------------------------------------------------------

Outcome c1_identity() {
    std::mt19937_64 rng(101);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0.0;
    std::string worst_case;
    for (int c = 0; c < 1000; ++c) {
        const int size = 1 + static_cast<int>(u(rng) * 4) % 4;
        const double lambda = (u(rng) < 0.5 ? -1 : 1) * (0.1 + 4.9 * u(rng));
        const double mag = std::pow(10.0, -4 + 3 * u(rng));
        cplx eps;
        if (c % 2 == 0) {
            eps = u(rng) < 0.5 ? -mag : mag;
        } else {
            eps = std::polar(mag, (2 * u(rng) - 1) * std::numbers::pi / 3);
        }
        const double a = -50 + 100 * u(rng);

        // A = Φ J Φ⁻¹ with J lower bidiagonal and a well-conditioned Φ.
        Eigen::MatrixXd J = Eigen::MatrixXd::Zero(size, size);
        for (int i = 0; i < size; ++i) {
            J(i, i) = lambda;
            if (i > 0) J(i, i - 1) = 1.0;
        }
        Eigen::MatrixXd phi = Eigen::MatrixXd::Identity(size, size);
        if (c % 3 != 0)
            for (int i = 0; i < size; ++i)
                for (int j = 0; j < size; ++j) phi(i, j) += 0.3 * (2 * u(rng) - 1);
        const Eigen::MatrixXd A = phi * J * phi.inverse();
        const LinearPart lin(A, {{lambda, size}}, phi);

        // Forward matrix straight from the definition.
        Eigen::MatrixXcd L = (-eps * a * a + cplx(0, a)) * Eigen::MatrixXcd::Identity(size, size) + eps * A.cast<cplx>();
        for (auto backend : {multiplier::Backend::jordan, multiplier::Backend::dense}) {
            const auto inv = multiplier::mode_inverse(eps, a, lin, backend);
            const double defect = multiplier::operator_norm(L * inv - Eigen::MatrixXcd::Identity(size, size));
            if (defect > worst) {
                worst = defect;
                worst_case = fmt::format("size {}, lambda {:.3g}, eps {:.3g}{:+.3g}i, a {:.4g}", size, lambda,
                                         eps.real(), eps.imag(), a);
            }
        }
    }
    return {worst <= 1e-12, fmt::format("max ||L L^-1 - I|| = {} over 1000 cases x 2 backends (worst: {})", sci(worst), worst_case)};
}

Outcome c2_real_bound() {
    double worst_ratio = std::numeric_limits<double>::infinity();
    double worst_lib = 0.0;
    std::size_t evals = 0;
    for (double e : {1e-1, 1e-2, 1e-3, 1e-4}) {
        for (double eps : {e, -e}) {
            for (double lambda : {0.5, -0.5, 1.0, -1.0, 3.0, -3.0}) {
                const double bound = std::abs(eps * lambda);
                for (long i = -50000; i <= 50000; ++i) {
                    const double a = i * 1e-3;
                    const double abs_l = std::abs(multiplier::l_eps(eps, lambda, a));
                    // independent evaluation from |l|² = ε²(λ − a²)² + a²
                    const double direct = std::sqrt(eps * eps * (lambda - a * a) * (lambda - a * a) + a * a);
                    worst_lib = std::max(worst_lib, std::abs(abs_l - direct) / direct);
                    worst_ratio = std::min(worst_ratio, abs_l / bound);
                    ++evals;
                }
                worst_lib = std::max(worst_lib, std::abs(multiplier::real_inf_abs_l(eps, lambda) - bound) / bound);
            }
        }
    }
    return {worst_ratio >= 1 - 1e-9 && worst_lib <= 1e-14,
            fmt::format("min |l|/|eps lambda| = {:.15f} over {} evaluations; library vs direct |l| rel diff {}",
                        worst_ratio, evals, sci(worst_lib))};
}

Outcome c3_closed_form() {
    const auto lat = SpectralLattice::torus({1.0}, 8, 1);
    FourierField f(lat);
    f.add_cos(std::vector<int>{1}, 0, 0, 1.0);
    const OdeProblem prob{lat, LinearPart::scalar(1.0), NonlinearitySpec::zero(1), f};
    std::vector<double> eps_list;
    for (int i = 0; i <= 12; ++i) eps_list.push_back(std::pow(10.0, -4 + 3.0 * i / 12));
    std::mt19937_64 rng(3);
    for (int i = 0; i < 8; ++i) eps_list.push_back(std::pow(10.0, std::uniform_real_distribution<double>(-4, -1)(rng)));

    double coef_err = 0.0, res = 0.0;
    SolverConfig cfg;
    for (double eps : eps_list) {
        auto [U, rep] = ode::solve_fixed_point(eps, prob, cfg);
        if (!rep.converged()) return {false, fmt::format("solve at eps = {} ended with {}", eps, ode::to_string(rep.status))};
        // ε sin θ = (ε/2i)(e^{iθ} − e^{−iθ})
        FourierField exact(lat);
        exact.at(lat.index_of(std::vector<int>{1})) = cplx(0, -eps / 2);
        exact.at(lat.index_of(std::vector<int>{-1})) = cplx(0, eps / 2);
        coef_err = std::max(coef_err, (U - exact).max_abs());
        res = std::max(res, ode::residual(U, eps, prob));
    }
    return {coef_err <= 1e-13 && res <= 1e-13,
            fmt::format("max coefficient error {}, max residual {} over {} eps in [1e-4, 1e-1]", sci(coef_err), sci(res),
                        eps_list.size())};
}

Outcome c4_newton() {
    const auto prob = cubic_example(16);
    SolverConfig cfg;
    cfg.tol = 1e-14;
    auto [U, rep] = ode::solve_fixed_point(0.05, prob, cfg);
    if (!rep.converged()) return {false, "Picard did not converge: " + ode::to_string(rep.status)};
    const auto nr = verification::newton_oracle(0.05, prob, 8);
    const double diff = (spectral::transfer(U, nr.solution.lattice()) - nr.solution).max_abs();
    const double max_ratio = rep.ratios.empty() ? 0.0 : *std::max_element(rep.ratios.begin(), rep.ratios.end());
    // Fit over the increments above the roundoff floor of the solution.
    std::vector<double> kept;
    for (double v : rep.increments)
        if (v > 1e-13 * rep.sol_norm) kept.push_back(v);
    const auto fit = fit_geometric(kept);
    const bool ok = diff <= 1e-8 && max_ratio < 1.0 && !rep.ratios.empty() && fit.r_squared >= 0.99;
    return {ok, fmt::format("Picard(K=16) vs Newton(K=8) max diff {}; {} ratios, max {}; geometric fit R^2 = {:.5f} over {} increments",
                            sci(diff), rep.ratios.size(), sci(max_ratio), fit.r_squared, kept.size())};
}

Outcome c5_overlap() {
    const auto prob = cubic_example(16);
    const double s = 0.02;
    SolverConfig cfg;
    cfg.tol = 1e-14;
    std::vector<cplx> lower, upper;
    for (double f : {1.0, 1.25, 1.5, 1.75, 2.0}) {
        lower.emplace_back(f * s);
        lower.emplace_back(-f * s);
    }
    for (double f : {1.5, 1.75, 2.0, 2.5, 3.0}) {
        upper.emplace_back(f * s);
        upper.emplace_back(-f * s);
    }
    // Each annulus is swept on its own: chains descend |eps| with warm starts
    // from different outermost points.
    const auto ra = ode::sweep_epsilon(lower, prob, cfg);
    const auto rb = ode::sweep_epsilon(upper, prob, cfg);
    double worst = 0.0;
    int shared = 0;
    for (const auto& a : ra) {
        if (!a.report.converged()) return {false, fmt::format("sweep point {} failed", a.eps.real())};
        for (const auto& b : rb) {
            if (!b.report.converged()) return {false, fmt::format("sweep point {} failed", b.eps.real())};
            if (std::abs(a.eps - b.eps) > 1e-15) continue;
            worst = std::max(worst, (a.solution - b.solution).max_abs());
            ++shared;
        }
    }
    return {shared == 6 && worst <= 1e-8,
            fmt::format("annuli sigma = 0.02 and 0.03: max difference {} at {} shared eps", sci(worst), shared)};
}

Outcome c6_continuity() {
    const auto prob = cubic_example(16);
    SolverConfig cfg;
    cfg.tol = 1e-14;
    std::vector<cplx> ladder;
    for (int i = 0; i <= 12; ++i) ladder.emplace_back(std::pow(10.0, -1 - i / 4.0));
    const auto rows = ode::sweep_epsilon(ladder, prob, cfg);  // sorted by |eps| descending
    bool monotone = true;
    for (const auto& r : rows)
        if (!r.report.converged()) return {false, fmt::format("rung {} failed", r.eps.real())};
    for (std::size_t i = 1; i < rows.size(); ++i) monotone = monotone && rows[i].sol_norm < rows[i - 1].sol_norm;
    const double ratio = rows.back().sol_norm / rows.front().sol_norm;

    // Local slope ‖dU/dε‖ from a central difference at each rung.
    auto slope = [&](double eps) {
        const double h = 1e-3 * eps;
        auto [up, r1] = ode::solve_fixed_point(eps + h, prob, cfg);
        auto [dn, r2] = ode::solve_fixed_point(eps - h, prob, cfg);
        return l2_diff(up, dn) / (2 * h);
    };
    std::vector<double> slopes;
    for (const auto& r : rows) slopes.push_back(slope(r.eps.real()));
    double worst = 0.0;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const double de = std::abs(rows[i].eps - rows[i - 1].eps);
        const double allowed = 5 * de * std::max(slopes[i], slopes[i - 1]);
        worst = std::max(worst, l2_diff(rows[i].solution, rows[i - 1].solution) / allowed);
    }
    // Linear theory: U = ε L⁻¹ f + O(ε³) and |l_ε(a)| is nondecreasing in ε, so the
    // ratio is 1e-3 up to the cubic correction.
    const bool ok = monotone && ratio <= 1e-3 && worst <= 1.0;
    return {ok, fmt::format("sol_norm monotone: {}; final/initial = {:.15e} (need <= 1e-3); max neighbor diff / (5 |de| slope) = {:.3f}",
                            monotone ? "yes" : "no", ratio, worst)};
}

Outcome c7_analyticity() {
    const auto lat = SpectralLattice::torus({1.0, std::numbers::sqrt2}, 16, 1);
    FourierField f(lat);
    f.add_cos(std::vector<int>{1, 0}, 0, 0, 0.2);
    f.add_sin(std::vector<int>{0, 1}, 0, 0, 0.1);
    const OdeProblem prob{lat, LinearPart::scalar(1.0), NonlinearitySpec::polynomial({{0, 0, 0, 0.1}}), f};
    const auto dom = EpsilonDomain::cone(0.02, 5.0);
    const cplx center = 1.5 * dom.sigma;
    const double radius = 0.2 * dom.sigma;
    for (int i = 0; i < 32; ++i) {
        if (!dom.contains(center + std::polar(radius, 2 * std::numbers::pi * i / 32)))
            return {false, "probe circle leaves the cone"};
    }
    SolverConfig cfg;
    cfg.tol = 1e-14;
    const auto p = ode::analyticity_probe(center, radius, prob, cfg, 32);
    return {p.decay_ratio <= 0.5 && p.cauchy_vs_fd <= 1e-6,
            fmt::format("cone sigma=0.02 mu=5, circle r=0.2 sigma, P=32: Taylor decay ratio {:.4g} (R^2 {:.4f}, {} terms); "
                        "|Cauchy - FD| = {} (relative {})",
                        p.decay_ratio, p.decay_r_squared, p.fitted_terms, sci(p.cauchy_vs_fd), sci(p.cauchy_vs_fd_relative))};
}

Outcome c8_low_regularity() {
    const auto lat = SpectralLattice::torus({1.0, std::numbers::sqrt2}, 32, 1);
    FourierField f(lat);
    for (int k = 1; k <= 32; ++k) f.add_sin(std::vector<int>{k, 0}, 0, 0, 0.1 * (k % 2 == 1 ? 1 : -1) / k);
    spectral::PiecewiseLinear abs_x;
    abs_x.breakpoints = {0.0};
    abs_x.slopes = {-0.05, 0.05};
    const OdeProblem prob{lat, LinearPart::scalar(1.0), NonlinearitySpec::piecewise({abs_x}, 0.05), f};
    SolverConfig cfg;
    cfg.tol = 1e-14;
    cfg.max_iter = 60;
    cfg.hypothesis = ode::Hypothesis::global;
    const auto res = ode::low_regularity_solve(0.05, prob, cfg, {0.0, 0.25, 0.5, 0.75});
    bool ok = true;
    std::string rows;
    for (const auto& r : res.rows) {
        ok = ok && r.relative_error <= 0.2;
        rows += fmt::format(" s={}: fitted {:.4f} vs (1-s)log(ratio) {:.4f} (err {:.0f}%);", r.s, r.fitted_log_rate,
                            r.predicted_from_ratio, 100 * r.relative_error);
    }
    return {ok, fmt::format("L2 log ratio {:.4f}, C_emp M = {:.4g};{}", res.l2_log_ratio, res.bound, rows)};
}

// 0.01 cos θ₁ cos x and its forcing built here from the symbol and the closed
// form (W²)_xx = −1e-4 (1 + cos 2θ₁) cos 2x.
struct Manufactured {
    FourierField W, f;
};

Manufactured manufactured(const SpectralLattice& lat, double eps, double beta) {
    FourierField W(lat), f(lat);
    const std::vector<int> k1{1, 0}, k0{0, 0}, k2{2, 0};
    W.add_cos(k1, 1, 0, 0.005);
    W.add_cos(k1, -1, 0, 0.005);
    for (std::size_t m = 0; m < lat.num_modes(); ++m) {
        if (W.at(m) == cplx(0)) continue;
        const double a = lat.k_dot_omega(m);
        const double j = lat.j(m);
        const cplx N = -eps * a * a + cplx(0, a) - eps * (beta * j * j * j * j - j * j);
        f.at(m) = N / eps * W.at(m);
    }
    // −h = 1e-4 cos 2x + 0.5e-4 [cos(2θ₁ + 2x) + cos(2θ₁ − 2x)]
    f.add_cos(k0, 2, 0, 1e-4);
    f.add_cos(k2, 2, 0, 0.5e-4);
    f.add_cos(k2, -2, 0, 0.5e-4);
    return {W, f};
}

Outcome c9_manufactured() {
    const double eps = 0.02, beta = 2.0;
    SolverConfig cfg;
    cfg.tol = 1e-15;
    cfg.max_iter = 100;
    auto solve = [&](int KJ) {
        const auto lat = SpectralLattice::torus_with_space({1.0, std::numbers::sqrt2}, KJ, KJ);
        auto m = manufactured(lat, eps, beta);
        const double forcing_gap = (pde::manufactured_forcing(eps, beta, m.W) - m.f).max_abs();
        pde::PdeProblem prob{lat, beta, m.f};
        prob.validate();
        auto [U, rep] = pde::pde_solve_fixed_point(eps, prob, cfg);
        const double res_w = pde::pde_residual(m.W, eps, prob);
        return std::tuple{U, rep, m.W, res_w, forcing_gap};
    };
    auto [U32, rep32, W32, res32, gap32] = solve(32);
    auto [U48, rep48, W48, res48, gap48] = solve(48);
    if (!rep32.converged() || !rep48.converged())
        return {false, fmt::format("solves ended with {} / {}", ode::to_string(rep32.status), ode::to_string(rep48.status))};
    const double recover = (U32 - W32).max_abs();
    const double refine = (spectral::transfer(U48, U32.lattice()) - U32).max_abs();
    const double outside = spectral::norm(U48 - spectral::transfer(spectral::transfer(U48, U32.lattice()), U48.lattice()), {});
    const bool ok = recover <= 1e-9 && std::max(res32, res48) <= 1e-12 && std::max(refine, outside) <= 1e-8 &&
                    std::max(gap32, gap48) <= 1e-15;
    return {ok, fmt::format("d=2, K=J=32: |U - W| = {}, PDE residual of W = {}, {} iterations; K=J=48 change {} "
                            "(mass outside the K=32 box {}); library vs closed-form forcing {}",
                            sci(recover), sci(std::max(res32, res48)), rep32.iterations, sci(refine), sci(outside),
                            sci(std::max(gap32, gap48)))};
}

Outcome c10_pde_bound() {
    std::vector<double> cs;
    double min_axis = std::numeric_limits<double>::infinity();
    std::string detail;
    for (double sigma : {1e-1, 1e-2, 1e-3}) {
        const auto nb = pde::n_bound(EpsilonDomain::cone(sigma, 100.0), 2.0, 32, 9, 50.0, 1e-3);
        const auto axis = pde::n_imaginary_probe(1.5 * sigma, 2.0, 32);
        cs.push_back(nb.c_sup);
        min_axis = std::min(min_axis, axis.has_root ? axis.inverse_norm : 0.0);
        detail += fmt::format(" sigma={:g}: C_emp={:.5f}, C_inf={:.4g}, axis {};", sigma, nb.c_sup, nb.c_inf, sci(axis.inverse_norm));
    }
    const double lo = *std::min_element(cs.begin(), cs.end()), hi = *std::max_element(cs.begin(), cs.end());
    const double mid = 0.5 * (lo + hi);
    const bool ok = hi <= 1.2 * mid && lo >= 0.8 * mid && min_axis > 1e6;
    return {ok, fmt::format("beta=2, mu=100, J=32, a in [-50,50] step 1e-3: spread {:.2f}% about the midpoint;{}",
                            100 * (hi - lo) / (2 * mid), detail)};
}

Outcome c11_time_domain() {
    const auto prob = cubic_example(24);
    SolverConfig cfg;
    cfg.tol = 1e-15;
    auto [U, rep] = ode::solve_fixed_point(0.05, prob, cfg);
    if (!rep.converged()) return {false, "Picard did not converge"};
    const auto tc = ode::time_integration_crosscheck(0.05, prob, U, 200.0, 0.1, 20.0, 0.01, 1e-13, 1e-13);
    const bool ok = tc.tracking_error <= 1e-6 && tc.attraction_error <= 1e-6;
    return {ok, fmt::format("tracking sup error on [20,200] = {}; perturbed orbit at t=200 = {} (linear prediction {} "
                            "from slowest rate {:.5f}); {} steps",
                            sci(tc.tracking_error), sci(tc.attraction_error), sci(tc.predicted_attraction), tc.slow_rate,
                            tc.steps)};
}

Outcome c12_liouville() {
    const auto liou = verification::build_liouville({1, 4, 1.0});
    if (liou.witnesses.empty() || liou.witnesses[0].k.empty()) return {false, "no witness built"};
    const auto k = liou.witnesses[0].k;
    const std::vector<double> ladder{1e-1, 1e-2, 1e-3, 1e-4};
    SolverConfig cfg;
    cfg.tol = 1e-15;
    const auto g = NonlinearitySpec::zero(1);

    double worst_cf = 0.0;
    auto run = [&](const std::vector<double>& omega) {
        const auto prob = verification::witness_problem(omega, {k}, 4, 0.1, g);
        const auto res = verification::nondiff_probe(prob, ladder, cfg);
        // Independent quotient: (U_ε − U_ε')/(ε − ε') = i a f̂ / (l_ε l_ε') per mode.
        for (const auto& row : res.rows) {
            double sum = 0.0;
            for (std::size_t m = 0; m < prob.lattice.num_modes(); ++m) {
                const cplx fk = prob.forcing.at(m);
                if (fk == cplx(0)) continue;
                const double a = prob.lattice.k_dot_omega(m);
                const cplx l1 = -row.eps * a * a + cplx(0, a) + row.eps;
                const cplx l2 = -row.eps_next * a * a + cplx(0, a) + row.eps_next;
                sum += std::norm(cplx(0, a) * fk / (l1 * l2));
            }
            worst_cf = std::max(worst_cf, std::abs(row.quotient - std::sqrt(sum)) / std::sqrt(sum));
        }
        return res;
    };
    const auto lr = run(liou.omega);
    const auto gr = run(verification::golden_omega());
    const bool ok = lr.min_growth >= 10 && gr.max_growth <= 2 && worst_cf <= 1e-9;
    return {ok, fmt::format("witness k = ({}, {}) with log10|k.w| = {:.3f}; Liouville growth per decade min {:.4g}; "
                            "golden max {:.4g}; closed form vs numerics rel {}",
                            k[0], k[1], liou.witnesses[0].log10_abs_kw, lr.min_growth, gr.max_growth, sci(worst_cf))};
}

Outcome c13_fault() {
    const fs::path src = RESPONSE_SOURCE_DIR;
    const auto scratch = fs::temp_directory_path() / "response_acceptance";
    auto verify = [&](const char* file, std::optional<std::string> fault) {
        cli::RunConfig cfg;
        cfg.command = "verify";
        cfg.problem = cli::read_json(src / "problems" / file);
        cfg.output_dir = scratch / "verify";
        cfg.inject_fault = std::move(fault);
        return cli::run(cfg);
    };
    int baseline_failures = 0, missed = 0, tried = 0;
    for (const char* file : {"cubic.json", "boussinesq.json"}) baseline_failures += verify(file, std::nullopt) != 0;

    // Every mode of the ODE lattice.
    const auto ode_pf = cli::parse_problem(src / "problems/cubic.json");
    for (std::size_t m = 0; m < ode_pf.ode().lattice.num_modes(); ++m, ++tried)
        missed += verify("cubic.json", fmt::format("multiplier:{}", m)) != cli::exit_certification;

    // PDE: corners, axes and interior of the lattice with j ≠ 0.
    const auto pde_pf = cli::parse_problem(src / "problems/boussinesq.json");
    const auto& lat = pde_pf.pde().lattice;
    std::set<std::size_t> modes;
    const int K = lat.K(), J = lat.J();
    for (int k1 : {-K, -1, 0, 1, K})
        for (int k2 : {-K, 0, K})
            for (int j : {-J, -1, 1, J}) modes.insert(lat.index_of(std::vector<int>{k1, k2}, j));
    for (auto m : modes) {
        ++tried;
        missed += verify("boussinesq.json", fmt::format("multiplier:{}", m)) != cli::exit_certification;
    }
    return {baseline_failures == 0 && missed == 0,
            fmt::format("unfaulted verify exit 0 on both examples: {}; 2x faults injected at {} modes "
                        "({} ODE, {} PDE), exits other than 3: {}",
                        baseline_failures == 0 ? "yes" : "no", tried, ode_pf.ode().lattice.num_modes(), modes.size(), missed)};
}

struct Criterion {
    int id;
    const char* name;
    double limit_s;  // 0: no runtime limit
    std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
    spdlog::set_level(spdlog::level::off);
    const std::vector<Criterion> all{
        {1, "multiplier identity suite", 5, c1_identity},
        {2, "real-eps exact lower bound", 10, c2_real_bound},
        {3, "closed-form response", 0, c3_closed_form},
        {4, "Newton oracle equivalence", 30, c4_newton},
        {5, "sigma-overlap uniqueness", 0, c5_overlap},
        {6, "eps -> 0 continuity", 0, c6_continuity},
        {7, "analyticity probe", 0, c7_analyticity},
        {8, "low-regularity rate", 60, c8_low_regularity},
        {9, "PDE manufactured solution", 120, c9_manufactured},
        {10, "PDE bound certification", 0, c10_pde_bound},
        {11, "time-domain cross-check", 0, c11_time_domain},
        {12, "Liouville demonstration", 0, c12_liouville},
        {13, "fault injection", 0, c13_fault},
    };
    std::set<int> only;
    for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));

    int failed = 0;
    for (const auto& c : all) {
        if (!only.empty() && !only.count(c.id)) continue;
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, fmt::format("exception: {}", e.what())};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::string timing = fmt::format("{:.2f} s", secs);
        if (c.limit_s > 0) {
            timing += fmt::format(" (limit {:g} s)", c.limit_s);
            if (secs >= c.limit_s) {
                o.pass = false;
                o.detail += "; runtime limit exceeded";
            }
        }
        failed += o.pass ? 0 : 1;
        std::printf("[%s] criterion %2d  %s: %s [%s]\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(),
                    timing.c_str());
        std::fflush(stdout);
    }
    std::printf("%d criteria failed\n", failed);
    return failed == 0 ? 0 : 1;
}
