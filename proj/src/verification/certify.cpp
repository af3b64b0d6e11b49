#include "response/verification/certify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "response/common/error.hpp"
#include "response/common/parallel.hpp"

namespace response::verification {

namespace {

constexpr double kDefectLimit = 1e-10;

std::string eps_str(cplx e) { return fmt::format("{:.6g}{:+.6g}i", e.real(), e.imag()); }

void collect(CertifyReport& rep) {
    for (const auto& r : rep.rows) {
        if (r.ok) continue;
        rep.failures.push_back(fmt::format("eps = {}: lattice {:.17g} vs bound {:.17g} ({}), identity defect {:.3e}",
                                           eps_str(r.eps), r.empirical, r.certified,
                                           r.analytic ? "exact" : "scan", r.identity_defect));
    }
}

}  // namespace

CertifyReport certify_bounds(const multiplier::LinearPart& linear, const spectral::SpectralLattice& lattice,
                             const multiplier::EpsilonDomain& domain, int samples,
                             const std::optional<FaultInjection>& fault, int jobs) {
    domain.validate();
    CertifyReport rep;
    rep.kind = "ode";
    rep.domain = domain;
    const auto eps = multiplier::sample_domain(domain, samples);
    rep.rows.resize(eps.size());
    std::vector<std::string> errors(eps.size());
    parallel_for(eps.size(), jobs, [&](std::size_t i) {
        auto& row = rep.rows[i];
        row.eps = eps[i];
        try {
            multiplier::ScaledInverse inv(eps[i], linear, lattice);
            if (fault) inv.perturb_mode(fault->mode, fault->factor);
            row.empirical = inv.sup_norm() / std::abs(eps[i]);
            const auto cert = multiplier::gamma_certificate(eps[i], linear, lattice);
            row.certified = cert.value;
            row.analytic = cert.analytic;
            row.identity_defect = inv.identity_defect();
            const double slack = cert.analytic ? 1e-9 : 1e-6;
            row.ok = row.identity_defect <= kDefectLimit && row.empirical <= row.certified * (1 + slack);
        } catch (const ResonanceError& e) {
            row.ok = true;
            errors[i] = fmt::format("eps = {}: {}", eps_str(eps[i]), e.what());
        }
    });
    collect(rep);
    for (auto& e : errors) {
        if (!e.empty()) rep.failures.push_back(std::move(e));
    }
    for (const auto& r : rep.rows) rep.c_emp = std::max(rep.c_emp, domain.sigma * r.certified);
    const auto probe = multiplier::imaginary_axis_probe(1.5 * domain.sigma, linear);
    rep.imaginary_axis_norm = probe.inverse_norm;
    rep.axis_refused = probe.has_root && probe.inverse_norm > 1e6;
    return rep;
}

CertifyReport certify_bounds(double beta, const spectral::SpectralLattice& lattice,
                             const multiplier::EpsilonDomain& domain, int samples,
                             const std::optional<FaultInjection>& fault, int jobs, double scan_step) {
    domain.validate();
    if (!lattice.has_space()) throw InputError("PDE certification needs a lattice with a spatial variable");
    CertifyReport rep;
    rep.kind = "pde";
    rep.domain = domain;
    const auto eps = multiplier::sample_domain(domain, samples);
    double a_max = 50.0;
    for (std::size_t m = 0; m < lattice.num_modes(); ++m) a_max = std::max(a_max, 1.01 * std::abs(lattice.k_dot_omega(m)));

    rep.rows.resize(eps.size());
    std::vector<double> inf_n(eps.size());
    std::vector<std::string> errors(eps.size());
    parallel_for(eps.size(), jobs, [&](std::size_t i) {
        auto& row = rep.rows[i];
        row.eps = eps[i];
        try {
            pde::NInverse inv(eps[i], lattice, beta);
            if (fault) inv.perturb_mode(fault->mode, fault->factor);
            row.identity_defect = inv.identity_defect();
            const auto scan = pde::scan_n_multiplier(eps[i], beta, lattice.J(), a_max, scan_step);
            inf_n[i] = scan.inf_n;
            row.certified = scan.sup_tilde;
            row.analytic = eps[i].imag() == 0.0;
            bool exact_ok = true;
            for (std::size_t m = 0; m < lattice.num_modes(); ++m) {
                const int j = lattice.j(m);
                if (j == 0) continue;
                const double a = lattice.k_dot_omega(m);
                const double inv_abs = std::abs(inv.mode(m) / eps[i]);
                row.empirical = std::max(row.empirical, inv_abs * (a * a + double(j) * j));
                if (row.analytic && inv_abs > (1 + 1e-9) / pde::real_inf_abs_n(eps[i].real(), j, beta)) exact_ok = false;
            }
            row.ok = exact_ok && row.identity_defect <= kDefectLimit && row.empirical <= row.certified * (1 + 1e-6);
        } catch (const ResonanceError& e) {
            errors[i] = fmt::format("eps = {}: {}", eps_str(eps[i]), e.what());
        }
    });
    collect(rep);
    for (auto& e : errors) {
        if (!e.empty()) rep.failures.push_back(std::move(e));
    }
    rep.c_inf = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < eps.size(); ++i) {
        rep.c_emp = std::max(rep.c_emp, domain.sigma * rep.rows[i].certified);
        rep.c_inf = std::min(rep.c_inf, inf_n[i] / domain.sigma);
    }
    const auto probe = pde::n_imaginary_probe(1.5 * domain.sigma, beta, lattice.J());
    rep.imaginary_axis_norm = probe.inverse_norm;
    rep.axis_refused = probe.has_root && probe.inverse_norm > 1e6;
    return rep;
}

}  // namespace response::verification
