#include "response/cli/run.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>

#include <fmt/chrono.h>
#include <fmt/format.h>
#include <fmt/ranges.h>
#include <openssl/evp.h>
#include <spdlog/spdlog.h>

#include "response/common/error.hpp"
#include "response/common/fit.hpp"
#include "response/ode/probes.hpp"
#include "response/pde/solver.hpp"
#include "response/spectral/norm.hpp"
#include "response/verification/certify.hpp"
#include "response/verification/liouville.hpp"
#include "response/verification/newton.hpp"

namespace response::cli {

namespace fs = std::filesystem;
using spectral::FourierField;
using spectral::NormSpec;
using spectral::SpectralLattice;

namespace {

/// Non-convergence surfaced as exit 2 after result.json was written.
class NotConverged : public Error {
public:
    using Error::Error;
};

std::string sha256_hex(const std::string& data) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1) {
        throw Error("SHA-256 digest failed");
    }
    std::string out;
    for (unsigned int i = 0; i < len; ++i) out += fmt::format("{:02x}", md[i]);
    return out;
}

json cplx_json(cplx z) { return {{"re", z.real()}, {"im", z.imag()}}; }

json lattice_json(const SpectralLattice& lat) {
    const auto& nr = lat.nonresonance();
    return {{"d", lat.d()},
            {"n", lat.n()},
            {"K", lat.K()},
            {"J", lat.J()},
            {"omega", lat.omega()},
            {"modes", lat.num_modes()},
            {"min_abs_k_dot_omega", nr.min_abs},
            {"min_abs_argmin", nr.argmin}};
}

json norm_json(const NormSpec& s) { return {{"rho", s.rho}, {"m", s.m}}; }

json fit_json(const std::vector<double>& values) {
    std::vector<double> kept;
    for (double v : values)
        if (v > 0.0) kept.push_back(v);
    if (kept.size() < 2) return nullptr;
    const auto f = fit_geometric(kept);
    return {{"rate", std::exp(f.slope)}, {"log_rate", f.slope}, {"r_squared", f.r_squared}, {"points", f.points}};
}

json report_json(const ode::SolveReport& r) {
    return {{"status", ode::to_string(r.status)},
            {"message", r.message},
            {"eps", cplx_json(r.eps)},
            {"norm", norm_json(r.norm)},
            {"iterations", r.iterations},
            {"increments", r.increments},
            {"ratios", r.ratios},
            {"max_ratio", r.ratios.empty() ? json(nullptr) : json(*std::max_element(r.ratios.begin(), r.ratios.end()))},
            {"ratio_fit", fit_json(r.increments)},
            {"fixed_point_residual", r.fixed_point_residual},
            {"residual", r.residual},
            {"sol_norm", r.sol_norm},
            {"tail_norm", r.tail_norm},
            {"aliasing", r.aliasing},
            {"constants",
             {{"c_emp", r.c_emp},
              {"kappa", r.kappa},
              {"lip_ball", r.lip_ball},
              {"first_iterate_norm", r.first_iterate_norm},
              {"smallness_held", r.smallness_held},
              {"contraction_held", r.contraction_held}}}};
}

std::vector<std::string> coordinate_header(const SpectralLattice& lat) {
    std::vector<std::string> h;
    for (int i = 1; i <= lat.d(); ++i) h.push_back(fmt::format("k{}", i));
    if (lat.has_space()) h.push_back("j");
    if (lat.n() > 1) h.push_back("component");
    return h;
}

// Index-sorted and magnitude-sorted spectra; weight_rho_m is e^{ρ|k|₁}(1+|k|²)^{m/2},
// so abs·weight is the mode's share of the norm.
void write_spectra(const fs::path& dir, const std::string& stem, const FourierField& U, const NormSpec& spec) {
    const auto& lat = U.lattice();
    struct Row {
        std::string key;
        cplx c;
        double weight;
    };
    std::vector<Row> rows;
    for (std::size_t m = 0; m < lat.num_modes(); ++m) {
        auto idx = lat.k(m);
        if (lat.has_space()) idx.push_back(lat.j(m));
        const double w = std::exp(0.5 * spectral::log_weight(lat, m, spec));
        for (int c = 0; c < lat.n(); ++c) {
            auto key = fmt::format("{}", fmt::join(idx, ","));
            if (lat.n() > 1) key += fmt::format(",{}", c);
            rows.push_back({std::move(key), U.at(m, c), w});
        }
    }
    const auto header = fmt::format("{},re,im,abs,weight_rho_m\n", fmt::join(coordinate_header(lat), ","));
    auto dump = [&](const fs::path& path) {
        std::ofstream out(path);
        out << header;
        for (const auto& r : rows)
            out << fmt::format("{},{:.17g},{:.17g},{:.17g},{:.17g}\n", r.key, r.c.real(), r.c.imag(), std::abs(r.c), r.weight);
    };
    dump(dir / (stem + ".csv"));
    std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) { return std::abs(a.c) > std::abs(b.c); });
    dump(dir / (stem + "_by_magnitude.csv"));
}

void write_json(const fs::path& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw InputError(fmt::format("cannot write {}", path.string()), "output_dir");
    out << j.dump(2) << '\n';
}

double opt_double(const json& o, const char* key, double def) {
    if (!o.contains(key)) return def;
    if (!o[key].is_number()) throw InputError("expected a number", fmt::format("/options/{}", key));
    return o[key].get<double>();
}

int opt_int(const json& o, const char* key, int def) {
    if (!o.contains(key)) return def;
    if (!o[key].is_number_integer()) throw InputError("expected an integer", fmt::format("/options/{}", key));
    return o[key].get<int>();
}

std::vector<double> opt_list(const json& o, const char* key, std::vector<double> def) {
    if (!o.contains(key)) return def;
    const auto& v = o[key];
    if (!v.is_array()) throw InputError("expected an array", fmt::format("/options/{}", key));
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!v[i].is_number()) throw InputError("expected a number", fmt::format("/options/{}/{}", key, i));
        out.push_back(v[i].get<double>());
    }
    return out;
}

// Problem-level "solver" block, then the config's on top.
ode::SolverConfig solver_config(const json& problem_solver, const json& config_solver, int jobs) {
    ode::SolverConfig cfg;
    auto apply = [&](const json& s, const std::string& base) {
        if (s.is_null()) return;
        if (!s.is_object()) throw InputError("expected an object", base);
        for (const auto& [key, v] : s.items()) {
            const auto path = base + "/" + key;
            auto num = [&] {
                if (!v.is_number()) throw InputError("expected a number", path);
                return v.get<double>();
            };
            auto integer = [&] {
                if (!v.is_number_integer()) throw InputError("expected an integer", path);
                return v.get<int>();
            };
            if (key == "tol") cfg.tol = num();
            else if (key == "max_iter") cfg.max_iter = integer();
            else if (key == "ball_radius") cfg.ball_radius = num();
            else if (key == "rho") cfg.norm.rho = num();
            else if (key == "m") cfg.norm.m = num();
            else if (key == "burn_in") cfg.burn_in = integer();
            else if (key == "hypothesis") {
                const auto h = v.get<std::string>();
                if (h == "local") cfg.hypothesis = ode::Hypothesis::local;
                else if (h == "global") cfg.hypothesis = ode::Hypothesis::global;
                else throw InputError(fmt::format("unknown hypothesis '{}' (local, global)", h), path);
            } else {
                throw InputError("unknown solver field", path);
            }
        }
    };
    apply(problem_solver, "/problem/solver");
    apply(config_solver, "/solver");
    cfg.jobs = jobs;
    try {
        cfg.validate();
    } catch (const InputError& e) {
        if (!e.path().empty() && e.path()[0] == '/') throw;
        std::string msg = e.what();
        if (!e.path().empty() && msg.rfind(e.path() + ": ", 0) == 0) msg = msg.substr(e.path().size() + 2);
        throw InputError(msg, "/solver");
    }
    return cfg;
}

json solver_json(const ode::SolverConfig& c) {
    return {{"tol", c.tol},
            {"max_iter", c.max_iter},
            {"ball_radius", c.ball_radius},
            {"norm", norm_json(c.norm)},
            {"hypothesis", ode::to_string(c.hypothesis)},
            {"burn_in", c.burn_in}};
}

json domain_json(const multiplier::EpsilonDomain& d) {
    json j{{"kind", d.kind == multiplier::EpsilonDomain::Kind::complex_cone ? "cone" : "annulus"}, {"sigma", d.sigma}};
    if (d.kind == multiplier::EpsilonDomain::Kind::complex_cone) j["mu"] = d.mu;
    return j;
}

struct Fault {
    std::optional<std::size_t> mode;  // default chosen per problem
};

std::optional<Fault> parse_fault(const std::optional<std::string>& name) {
    if (!name) return std::nullopt;
#ifndef RESPONSE_FAULT_INJECTION
    throw InputError("this build has no fault injection", "--inject-fault");
#else
    if (*name == "multiplier") return Fault{};
    const std::string prefix = "multiplier:";
    if (name->rfind(prefix, 0) == 0) {
        try {
            std::size_t used = 0;
            const auto m = std::stoull(name->substr(prefix.size()), &used);
            if (used == name->size() - prefix.size()) return Fault{static_cast<std::size_t>(m)};
        } catch (const std::exception&) {
        }
    }
    throw InputError(fmt::format("unknown fault '{}' (multiplier or multiplier:<mode>)", *name), "--inject-fault");
#endif
}

struct Context {
    const RunConfig& config;
    fs::path dir;
    std::optional<ProblemFile> problem;
    json result;
    int exit_code = exit_ok;
};

const ProblemFile& need_problem(Context& ctx) {
    if (!ctx.problem) throw InputError("this command needs a problem", "/problem");
    return *ctx.problem;
}

ode::SolverConfig context_solver(Context& ctx) {
    const json ps = ctx.problem && ctx.problem->document.contains("solver") ? ctx.problem->document["solver"] : json();
    auto cfg = solver_config(ps, ctx.config.solver, ctx.config.jobs);
    ctx.result["solver"] = solver_json(cfg);
    return cfg;
}

void finish_solve(Context& ctx, const FourierField& U, const ode::SolveReport& rep) {
    ctx.result["report"] = report_json(rep);
    write_spectra(ctx.dir, "spectrum", U, rep.norm);
    if (!rep.converged()) {
        ctx.exit_code = exit_not_converged;
        throw NotConverged(fmt::format("solver ended with status {}: {}", ode::to_string(rep.status), rep.message));
    }
}

void cmd_solve_ode(Context& ctx) {
    const auto& pf = need_problem(ctx);
    if (pf.is_pde()) throw InputError("solve-ode needs kind = ode", "/problem/kind");
    const auto cfg = context_solver(ctx);
    const auto eps = pf.working_eps();
    ctx.result["eps"] = cplx_json(eps);
    auto [U, rep] = ode::solve_fixed_point(eps, pf.ode(), cfg);
    finish_solve(ctx, U, rep);
}

void cmd_solve_pde(Context& ctx) {
    const auto& pf = need_problem(ctx);
    if (!pf.is_pde()) throw InputError("solve-pde needs kind = pde", "/problem/kind");
    const auto cfg = context_solver(ctx);
    const auto eps = pf.working_eps();
    ctx.result["eps"] = cplx_json(eps);
    const pde::PdePicardMap map(eps, pf.pde(), cfg.jobs);
    auto [U, rep] = pde::pde_solve_fixed_point(map, pf.pde(), cfg);
    ctx.result["smoothing_constant"] = map.inverse().smoothing_constant();
    ctx.result["identity_defect"] = map.inverse().identity_defect();
    finish_solve(ctx, U, rep);
}

std::vector<cplx> sweep_points(const ProblemFile& pf, const json& opts) {
    const auto& e = pf.document["epsilon"];
    if (e.contains("ladder")) {
        std::vector<cplx> out;
        const auto& l = e["ladder"];
        if (!l.is_array() || l.empty()) throw InputError("expected a non-empty array", "/problem/epsilon/ladder");
        for (std::size_t i = 0; i < l.size(); ++i) {
            if (!l[i].is_number()) throw InputError("expected a number", fmt::format("/problem/epsilon/ladder/{}", i));
            out.emplace_back(l[i].get<double>(), 0.0);
        }
        return out;
    }
    const int samples = e.contains("samples") ? e["samples"].get<int>() : opt_int(opts, "samples", 9);
    return multiplier::sample_domain(pf.domain, samples);
}

void cmd_sweep(Context& ctx) {
    const auto& pf = need_problem(ctx);
    const auto cfg = context_solver(ctx);
    const auto points = sweep_points(pf, ctx.config.options);

    json rows = json::array();
    std::ofstream csv(ctx.dir / "sweep.csv");
    csv << "eps_re,eps_im,status,iterations,sol_norm,residual,c_emp,max_ratio\n";
    int failed = 0;
    auto add = [&](cplx eps, const ode::SolveReport& rep) {
        if (!rep.converged()) ++failed;
        const double mr = rep.ratios.empty() ? 0.0 : *std::max_element(rep.ratios.begin(), rep.ratios.end());
        rows.push_back(report_json(rep));
        rows.back()["flagged"] = !rep.converged();
        csv << fmt::format("{:.17g},{:.17g},{},{},{:.17g},{:.17g},{:.17g},{:.17g}\n", eps.real(), eps.imag(),
                           ode::to_string(rep.status), rep.iterations, rep.sol_norm, rep.residual, rep.c_emp, mr);
    };
    if (pf.is_pde()) {
        // Warm starts along the given order; a failed point restarts the next from zero.
        std::optional<FourierField> warm;
        for (const auto& eps : points) {
            auto [U, rep] = pde::pde_solve_fixed_point(eps, pf.pde(), cfg, warm);
            if (rep.converged()) warm = U;
            else warm.reset();
            add(eps, rep);
        }
    } else {
        for (const auto& row : ode::sweep_epsilon(points, pf.ode(), cfg)) add(row.eps, row.report);
    }
    ctx.result["rows"] = rows;
    ctx.result["flagged"] = failed;
    if (failed > 0) spdlog::warn("sweep: {} of {} points did not converge (flagged)", failed, points.size());
}

void cmd_probe(Context& ctx) {
    const auto& pf = need_problem(ctx);
    const auto cfg = context_solver(ctx);
    const auto& o = ctx.config.options;
    const auto center = pf.working_eps();
    const double radius = opt_double(o, "radius", 0.2 * pf.domain.sigma);
    const int points = opt_int(o, "points", 32);
    if (!pf.domain.contains(center, 1e-9)) throw InputError("probe center outside the domain", "/problem/epsilon/value");
    for (int i = 0; i < points; ++i) {
        const auto e = center + std::polar(radius, 2 * std::numbers::pi * i / points);
        if (!pf.domain.contains(e, 1e-9)) {
            spdlog::warn("probe circle leaves the declared domain at eps = {:.6g}{:+.6g}i", e.real(), e.imag());
            break;
        }
    }
    const auto probe = pf.is_pde() ? pde::pde_analyticity_probe(center, radius, pf.pde(), cfg, points)
                                   : ode::analyticity_probe(center, radius, pf.ode(), cfg, points);
    ctx.result["probe"] = {{"center", cplx_json(probe.center)},
                           {"radius", probe.radius},
                           {"points", probe.points},
                           {"taylor_norms", probe.taylor_norms},
                           {"decay_ratio", probe.decay_ratio},
                           {"decay_r_squared", probe.decay_r_squared},
                           {"fitted_terms", probe.fitted_terms},
                           {"cauchy_vs_fd", probe.cauchy_vs_fd},
                           {"cauchy_vs_fd_relative", probe.cauchy_vs_fd_relative},
                           {"norm", norm_json(cfg.norm)}};
    write_spectra(ctx.dir, "derivative_spectrum", probe.derivative, cfg.norm);
}

void cmd_low_reg(Context& ctx) {
    const auto& pf = need_problem(ctx);
    if (pf.is_pde()) throw InputError("low-reg needs kind = ode", "/problem/kind");
    const auto cfg = context_solver(ctx);
    const auto s_grid = opt_list(ctx.config.options, "s", {0.0, 0.25, 0.5, 0.75});
    const auto eps = pf.working_eps();
    ctx.result["eps"] = cplx_json(eps);
    const auto res = ode::low_regularity_solve(eps, pf.ode(), cfg, s_grid);
    json rows = json::array();
    for (const auto& r : res.rows) {
        rows.push_back({{"s", r.s},
                        {"norm", norm_json({0.0, r.s})},
                        {"increments", r.increments},
                        {"fitted_log_rate", r.fitted_log_rate},
                        {"r_squared", r.r_squared},
                        {"fitted_steps", r.fitted_steps},
                        {"predicted_from_ratio", r.predicted_from_ratio},
                        {"predicted_from_bound", r.predicted_from_bound},
                        {"relative_error", r.relative_error}});
    }
    ctx.result["low_regularity"] = {{"l2_log_ratio", res.l2_log_ratio}, {"bound", res.bound}, {"rows", rows}};
    finish_solve(ctx, res.solution, res.report);
}

std::size_t default_fault_mode(const SpectralLattice& lat) {
    std::vector<int> k(lat.d(), 0);
    k[0] = 1;
    return lat.index_of(k, lat.has_space() ? 1 : 0);
}

std::vector<cplx> random_samples(const multiplier::EpsilonDomain& dom, int count, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> radius(dom.sigma, 2 * dom.sigma), unit(-1.0, 1.0);
    std::vector<cplx> out;
    for (int i = 0; i < count; ++i) {
        const double r = radius(rng), u = unit(rng);
        if (dom.kind == multiplier::EpsilonDomain::Kind::complex_cone) {
            out.push_back(std::polar(r, u * dom.half_angle()));
        } else {
            out.emplace_back(u < 0 ? -r : r, 0.0);
        }
    }
    return out;
}

void cmd_verify(Context& ctx) {
    const auto& pf = need_problem(ctx);
    const auto cfg = context_solver(ctx);
    const auto& o = ctx.config.options;
    const int samples = opt_int(o, "samples", pf.document["epsilon"].value("samples", 9));
    const int random = opt_int(o, "random_samples", 4);
    const double agree_tol = opt_double(o, "agreement_tol", 1e-8);

    std::optional<verification::FaultInjection> fault;
    if (auto f = parse_fault(ctx.config.inject_fault)) {
        const auto& lat = pf.is_pde() ? pf.pde().lattice : pf.ode().lattice;
        const auto mode = f->mode.value_or(default_fault_mode(lat));
        if (mode >= lat.num_modes()) throw InputError(fmt::format("mode {} is outside the lattice", mode), "--inject-fault");
        if (lat.has_space() && lat.j(mode) == 0) throw InputError("PDE fault mode must have j != 0", "--inject-fault");
        fault = verification::FaultInjection{mode, 2.0};
        ctx.result["fault"] = {{"mode", mode}, {"factor", 2.0}};
        spdlog::info("injecting a 2x fault at mode {}", mode);
    }

    const auto report = pf.is_pde() ? verification::certify_bounds(pf.pde().beta, pf.pde().lattice, pf.domain, samples,
                                                                   fault, cfg.jobs)
                                    : verification::certify_bounds(pf.ode().linear, pf.ode().lattice, pf.domain,
                                                                   samples, fault, cfg.jobs);
    auto failures = report.failures;
    json rows = json::array();
    for (const auto& r : report.rows) {
        rows.push_back({{"eps", cplx_json(r.eps)},
                        {"empirical", r.empirical},
                        {"certified", r.certified},
                        {"analytic", r.analytic},
                        {"identity_defect", r.identity_defect},
                        {"ok", r.ok}});
    }

    // Seeded extra samples of the domain.
    json extra = json::array();
    for (const auto& eps : random_samples(pf.domain, random, ctx.config.seed)) {
        json row{{"eps", cplx_json(eps)}};
        try {
            if (pf.is_pde()) {
                const pde::NInverse inv(eps, pf.pde().lattice, pf.pde().beta, cfg.jobs);
                row["identity_defect"] = inv.identity_defect();
                row["sup_norm"] = inv.sup_norm();
                if (!(inv.identity_defect() <= 1e-10))
                    failures.push_back(fmt::format("random sample {:.6g}{:+.6g}i: identity defect {:.3e}", eps.real(),
                                                   eps.imag(), inv.identity_defect()));
            } else {
                const auto g = multiplier::gamma_bound(eps, pf.ode().linear, pf.ode().lattice);
                row["empirical"] = g.empirical;
                row["certified"] = g.certified;
                row["analytic"] = g.analytic;
            }
            row["ok"] = true;
        } catch (const CertificationError& e) {
            row["ok"] = false;
            failures.push_back(fmt::format("random sample {:.6g}{:+.6g}i: {}", eps.real(), eps.imag(), e.what()));
        }
        extra.push_back(row);
    }

    // Picard on the full lattice against Newton on a small one.
    const auto eps = pf.working_eps();
    json agreement;
    if (pf.is_pde()) {
        const int Ks = std::min(pf.pde().lattice.K(), opt_int(o, "newton_K", 4));
        const int Js = std::min(pf.pde().lattice.J(), opt_int(o, "newton_J", 4));
        auto [U, rep] = pde::pde_solve_fixed_point(eps, pf.pde(), cfg);
        if (!rep.converged()) {
            ctx.result["report"] = report_json(rep);
            ctx.exit_code = exit_not_converged;
            throw NotConverged(fmt::format("Picard at the working eps ended with {}", ode::to_string(rep.status)));
        }
        const auto nr = verification::newton_oracle(eps, pf.pde(), Ks, Js);
        const double diff = (spectral::transfer(U, nr.solution.lattice()) - nr.solution).max_abs();
        agreement = {{"eps", cplx_json(eps)}, {"K", Ks}, {"J", Js}, {"max_abs_difference", diff},
                     {"newton_iterations", nr.iterations}, {"newton_residual", nr.residual}, {"tolerance", agree_tol}};
        if (!(diff <= agree_tol)) failures.push_back(fmt::format("Newton/Picard disagree by {:.3e}", diff));
    } else {
        const int Ks = std::min(pf.ode().lattice.K(), opt_int(o, "newton_K", 8));
        auto [U, rep] = ode::solve_fixed_point(eps, pf.ode(), cfg);
        if (!rep.converged()) {
            ctx.result["report"] = report_json(rep);
            ctx.exit_code = exit_not_converged;
            throw NotConverged(fmt::format("Picard at the working eps ended with {}", ode::to_string(rep.status)));
        }
        const auto nr = verification::newton_oracle(eps, pf.ode(), Ks);
        const double diff = (spectral::transfer(U, nr.solution.lattice()) - nr.solution).max_abs();
        agreement = {{"eps", cplx_json(eps)}, {"K", Ks}, {"max_abs_difference", diff},
                     {"newton_iterations", nr.iterations}, {"newton_residual", nr.residual}, {"tolerance", agree_tol}};
        if (!(diff <= agree_tol)) failures.push_back(fmt::format("Newton/Picard disagree by {:.3e}", diff));
    }

    ctx.result["certification"] = {{"kind", report.kind},
                                   {"domain", domain_json(report.domain)},
                                   {"rows", rows},
                                   {"random_samples", extra},
                                   {"c_emp", report.c_emp},
                                   {"c_inf", report.c_inf},
                                   {"imaginary_axis_norm", report.imaginary_axis_norm},
                                   {"axis_refused", report.axis_refused}};
    ctx.result["agreement"] = agreement;
    ctx.result["failures"] = failures;
    ctx.result["passed"] = failures.empty();
    if (!failures.empty()) {
        ctx.exit_code = exit_certification;
        throw CertificationError(fmt::format("{} check(s) failed; first: {}", failures.size(), failures.front()));
    }
}

json nondiff_json(const verification::NondiffResult& r) {
    json rows = json::array();
    for (const auto& q : r.rows) {
        rows.push_back({{"eps", q.eps}, {"eps_next", q.eps_next}, {"quotient", q.quotient},
                        {"closed_form", q.closed_form}, {"relative_error", q.relative_error}});
    }
    return {{"rows", rows},
            {"growth_per_decade", r.growth_per_decade},
            {"min_growth", r.min_growth},
            {"max_growth", r.max_growth},
            {"single_mode_prediction", r.single_mode_prediction}};
}

void cmd_liouville(Context& ctx) {
    const auto& o = ctx.config.options;
    const auto cfg = context_solver(ctx);
    verification::LiouvilleSpec spec;
    spec.levels = opt_int(o, "levels", 1);
    spec.q1 = opt_int(o, "q1", 4);
    spec.c = opt_double(o, "c", 1.0);
    const int K = opt_int(o, "K", 4);
    const double rho = opt_double(o, "rho", 0.1);
    const auto ladder = opt_list(o, "ladder", {1e-1, 1e-2, 1e-3, 1e-4});
    const double min_growth = opt_double(o, "min_growth", 10.0);
    const double max_control = opt_double(o, "max_control_growth", 2.0);
    const double cf_tol = opt_double(o, "closed_form_tol", 1e-9);

    const auto liou = verification::build_liouville(spec);
    json witnesses = json::array();
    std::vector<std::vector<int>> ks;
    for (const auto& w : liou.witnesses) {
        witnesses.push_back({{"level", w.level}, {"p", w.p}, {"q", w.q}, {"k", w.k},
                             {"log10_abs_k_dot_omega", w.log10_abs_kw}, {"log10_bound", w.log10_bound},
                             {"verified", w.verified}, {"usable_in_double", w.usable_in_double}});
        if (w.usable_in_double && !w.k.empty()) {
            int top = 0;
            for (int v : w.k) top = std::max(top, std::abs(v));
            if (top <= K) ks.push_back(w.k);
        }
    }
    ctx.result["liouville"] = {{"omega", liou.omega}, {"alpha", liou.alpha}, {"levels_built", liou.levels_built},
                               {"truncation", liou.truncation}, {"witnesses", witnesses}};
    if (ks.empty()) throw InputError("no witness usable in double precision fits the lattice", "/options/K");

    const auto g = spectral::NonlinearitySpec::zero(1);
    const auto lr = verification::nondiff_probe(verification::witness_problem(liou.omega, ks, K, rho, g), ladder, cfg);
    const auto gr =
        verification::nondiff_probe(verification::witness_problem(verification::golden_omega(), ks, K, rho, g), ladder, cfg);
    ctx.result["quotients"] = {{"liouville", nondiff_json(lr)}, {"golden", nondiff_json(gr)}};

    std::ofstream csv(ctx.dir / "quotients.csv");
    csv << "frequency,eps,eps_next,quotient,closed_form,relative_error\n";
    for (const auto& [name, res] : {std::pair{"liouville", &lr}, std::pair{"golden", &gr}}) {
        for (const auto& q : res->rows)
            csv << fmt::format("{},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}\n", name, q.eps, q.eps_next, q.quotient,
                               q.closed_form, q.relative_error);
    }

    std::vector<std::string> failures;
    if (!(lr.min_growth >= min_growth))
        failures.push_back(fmt::format("Liouville growth {:.4g} per decade < {}", lr.min_growth, min_growth));
    if (!(gr.max_growth <= max_control))
        failures.push_back(fmt::format("control growth {:.4g} per decade > {}", gr.max_growth, max_control));
    for (const auto* r : {&lr, &gr})
        for (const auto& q : r->rows)
            if (!(q.relative_error <= cf_tol))
                failures.push_back(fmt::format("closed form mismatch {:.3e} at eps = {}", q.relative_error, q.eps));
    ctx.result["expectations"] = {{"min_growth", min_growth}, {"max_control_growth", max_control},
                                  {"closed_form_tol", cf_tol}};
    ctx.result["failures"] = failures;
    ctx.result["passed"] = failures.empty();
    if (!failures.empty()) {
        ctx.exit_code = exit_certification;
        throw CertificationError(failures.front());
    }
}

std::string now_utc() {
    return fmt::format("{:%Y-%m-%dT%H:%M:%SZ}", fmt::gmtime(std::chrono::system_clock::to_time_t(std::chrono::system_clock::now())));
}

}  // namespace

RunConfig load_config(const fs::path& path) {
    const auto doc = read_json(path);
    if (!doc.is_object()) throw InputError("config must be an object", "/");
    RunConfig cfg;
    cfg.source = doc;
    if (!doc.contains("command") || !doc["command"].is_string()) throw InputError("missing or non-string field", "/command");
    cfg.command = doc["command"].get<std::string>();
    if (doc.contains("problem")) {
        const auto& p = doc["problem"];
        if (p.is_string()) {
            const fs::path file = path.parent_path() / p.get<std::string>();
            if (!fs::exists(file)) throw InputError(fmt::format("problem file {} does not exist", file.string()), "/problem");
            cfg.problem = read_json(file);
        } else if (p.is_object()) {
            cfg.problem = p;
        } else {
            throw InputError("expected a path or an object", "/problem");
        }
    }
    if (doc.contains("solver")) cfg.solver = doc["solver"];
    if (doc.contains("options")) {
        if (!doc["options"].is_object()) throw InputError("expected an object", "/options");
        cfg.options = doc["options"];
    }
    if (doc.contains("output_dir")) {
        if (!doc["output_dir"].is_string()) throw InputError("expected a string", "/output_dir");
        cfg.output_dir = path.parent_path() / doc["output_dir"].get<std::string>();
    }
    if (doc.contains("seed")) {
        if (!doc["seed"].is_number_unsigned()) throw InputError("expected a non-negative integer", "/seed");
        cfg.seed = doc["seed"].get<std::uint64_t>();
    }
    if (doc.contains("jobs")) {
        if (!doc["jobs"].is_number_integer()) throw InputError("expected an integer", "/jobs");
        cfg.jobs = doc["jobs"].get<int>();
    }
    return cfg;
}

int run(const RunConfig& config) {
    const auto started = std::chrono::steady_clock::now();
    const auto started_utc = now_utc();
    const fs::path dir = config.output_dir;
    try {
        fs::create_directories(dir);
        for (const char* stale : {"result.json", "error.json", "metadata.json"}) fs::remove(dir / stale);
    } catch (const fs::filesystem_error& e) {
        spdlog::error("output directory {}: {}", dir.string(), e.what());
        return exit_input;
    }

    Context ctx{config, dir, std::nullopt, json::object()};
    json error;
    try {
        if (config.jobs < 1) throw InputError("jobs must be ≥ 1", "--jobs");
        static const std::vector<std::string> commands{"solve-ode", "solve-pde", "sweep", "probe-analytic",
                                                       "low-reg",   "verify",    "demo-liouville"};
        if (std::find(commands.begin(), commands.end(), config.command) == commands.end())
            throw InputError(fmt::format("unknown command '{}'", config.command), "/command");
        if (config.inject_fault && config.command != "verify") {
            parse_fault(config.inject_fault);
            throw InputError("fault injection applies to verify only", "--inject-fault");
        }

        ctx.result["command"] = config.command;
        ctx.result["seed"] = config.seed;
        ctx.result["options"] = config.options;
        if (!config.problem.is_null()) {
            try {
                ctx.problem = parse_problem(config.problem);
            } catch (const InputError& e) {
                std::string msg = e.what();
                if (!e.path().empty() && msg.rfind(e.path() + ": ", 0) == 0) msg = msg.substr(e.path().size() + 2);
                throw InputError(msg, "/problem" + (e.path().empty() || e.path() == "/" ? std::string() : e.path()));
            }
            ctx.result["problem"] = ctx.problem->document;
            ctx.result["problem_hash"] = sha256_hex(ctx.problem->document.dump());
            ctx.result["warnings"] = ctx.problem->warnings;
            for (const auto& w : ctx.problem->warnings) spdlog::warn("{}", w);
            const auto& lat = ctx.problem->is_pde() ? ctx.problem->pde().lattice : ctx.problem->ode().lattice;
            ctx.result["lattice"] = lattice_json(lat);
            ctx.result["domain"] = domain_json(ctx.problem->domain);
        } else {
            ctx.result["problem_hash"] = sha256_hex(config.options.dump());
        }
        spdlog::info("running {} into {}", config.command, dir.string());

        if (config.command == "solve-ode") cmd_solve_ode(ctx);
        else if (config.command == "solve-pde") cmd_solve_pde(ctx);
        else if (config.command == "sweep") cmd_sweep(ctx);
        else if (config.command == "probe-analytic") cmd_probe(ctx);
        else if (config.command == "low-reg") cmd_low_reg(ctx);
        else if (config.command == "verify") cmd_verify(ctx);
        else cmd_liouville(ctx);
    } catch (const NotConverged& e) {
        error = {{"type", "not_converged"}, {"message", e.what()}};
        ctx.exit_code = exit_not_converged;
    } catch (const CertificationError& e) {
        error = {{"type", "certification"}, {"message", e.what()}};
        ctx.exit_code = exit_certification;
    } catch (const InputError& e) {
        error = {{"type", "input"}, {"message", e.what()}, {"path", e.path()}};
        ctx.exit_code = exit_input;
    } catch (const ResonanceError& e) {
        error = {{"type", "resonance"}, {"message", e.what()}, {"k", e.k()}, {"j", e.j()}};
        ctx.exit_code = exit_input;
    } catch (const NumericalError& e) {
        error = {{"type", "numerical"}, {"message", e.what()}};
        ctx.exit_code = exit_not_converged;
    } catch (const OverflowError& e) {
        error = {{"type", "overflow"}, {"message", e.what()}};
        ctx.exit_code = exit_not_converged;
    } catch (const std::exception& e) {
        error = {{"type", "internal"}, {"message", e.what()}};
        ctx.exit_code = exit_internal;
    }

    ctx.result["exit_code"] = ctx.exit_code;
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    try {
        if (ctx.result.contains("command")) write_json(dir / "result.json", ctx.result);
        if (!error.is_null()) {
            error["exit_code"] = ctx.exit_code;
            error["command"] = config.command;
            error["seed"] = config.seed;
            write_json(dir / "error.json", error);
            spdlog::error("{} failed (exit {}): {}", config.command, ctx.exit_code, error["message"].get<std::string>());
        }
        write_json(dir / "metadata.json", {{"started_utc", started_utc},
                                           {"finished_utc", now_utc()},
                                           {"elapsed_seconds", elapsed},
                                           {"jobs", config.jobs},
#ifdef RESPONSE_FAULT_INJECTION
                                           {"fault_injection_build", true},
#else
                                           {"fault_injection_build", false},
#endif
                                           {"config", config.source}});
    } catch (const std::exception& e) {
        spdlog::error("writing outputs: {}", e.what());
        if (ctx.exit_code == exit_ok) ctx.exit_code = exit_input;
    }
    return ctx.exit_code;
}

}  // namespace response::cli
