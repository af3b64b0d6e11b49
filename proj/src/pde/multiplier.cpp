#include "response/pde/multiplier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/tools/minima.hpp>
#include <fmt/format.h>
#include <fmt/ranges.h>

#include "response/common/error.hpp"
#include "response/common/parallel.hpp"
#include "response/multiplier/multiplier.hpp"

namespace response::pde {

cplx n_multiplier(cplx eps, double a, int j, double beta) {
    const double jj = static_cast<double>(j) * j;
    return -eps * (a * a) + cplx(0.0, a) - eps * (beta * jj * jj - jj);
}

NInverse::NInverse(cplx eps, const SpectralLattice& lattice, double beta, int jobs)
    : eps_(eps), lattice_(lattice), beta_(beta), table_(lattice.num_modes()) {
    if (!lattice.has_space()) throw InputError("N_eps needs a lattice with a spatial variable");
    if (eps == 0.0) throw InputError("eps must be nonzero", "eps");
    parallel_for(lattice.num_modes(), jobs, [&](std::size_t m) {
        const int j = lattice.j(m);
        if (j == 0) {
            table_[m] = 0.0;
            return;
        }
        const cplx den = n_multiplier(eps, lattice.k_dot_omega(m), j, beta);
        if (den == 0.0) {
            throw ResonanceError(fmt::format("N_eps vanishes at k = ({}), j = {}", fmt::join(lattice.k(m), ", "), j),
                                 lattice.k(m), j);
        }
        table_[m] = eps / den;
    });
    refresh_norms();
}

void NInverse::refresh_norms() {
    smoothing_ = sup_ = forward_sup_ = 0.0;
    for (std::size_t m = 0; m < table_.size(); ++m) {
        const int j = lattice_.j(m);
        if (j == 0) continue;
        const double v = std::abs(table_[m]);
        sup_ = std::max(sup_, v);
        const double s = v * (1.0 + lattice_.euclid_sq(m));
        if (s > smoothing_) {
            smoothing_ = s;
            smoothing_mode_ = m;
        }
        forward_sup_ = std::max(forward_sup_, std::abs(n_multiplier(eps_, lattice_.k_dot_omega(m), j, beta_)));
    }
}

FourierField NInverse::apply(const FourierField& V) const {
    if (!(V.lattice() == lattice_)) throw InputError("field and multiplier live on different lattices");
    const double zs = V.zero_slice_max();
    if (zs > 1e-14 * std::max(1.0, V.max_abs())) {
        throw InputError(fmt::format("N_eps^-1 needs a zero j = 0 slice (|V_j=0| = {:.3e})", zs));
    }
    FourierField out(lattice_);
    for (std::size_t m = 0; m < table_.size(); ++m) out.at(m) = table_[m] * V.at(m);
    return out;
}

double NInverse::identity_defect() const {
    double worst = 0.0;
    for (std::size_t m = 0; m < table_.size(); ++m) {
        const int j = lattice_.j(m);
        if (j == 0) continue;
        const cplx prod = n_multiplier(eps_, lattice_.k_dot_omega(m), j, beta_) * (table_[m] / eps_);
        worst = std::max(worst, std::abs(prod - 1.0));
    }
    return worst;
}

void NInverse::perturb_mode(std::size_t m, cplx factor) {
    table_.at(m) *= factor;
    refresh_norms();
}

FourierField apply_N_inverse(cplx eps, double beta, const FourierField& V) {
    return NInverse(eps, V.lattice(), beta).apply(V);
}

NScan scan_n_multiplier(cplx eps, double beta, int J, double a_max, double step) {
    if (!(a_max > 0.0) || !(step > 0.0)) throw InputError("scan window and step must be positive");
    if (J < 1) throw InputError("scan needs J >= 1");
    const auto count = static_cast<std::size_t>(std::floor(2 * a_max / step + 1e-9)) + 1;
    NScan res;
    res.inf_n = std::numeric_limits<double>::infinity();
    std::vector<double> lo(count), hi(count);

    for (int j = 1; j <= J; ++j) {
        const double t = static_cast<double>(j) * j;
        auto low = [&](double a) { return std::abs(n_multiplier(eps, a, j, beta)) / t; };
        auto high = [&](double a) { return (a * a + t) / std::abs(n_multiplier(eps, a, j, beta)); };
        auto consider = [&](double a) {
            const double l = low(a), h = high(a);
            if (l < res.inf_n) {
                res.inf_n = l;
                res.a_at_inf = a;
                res.j_at_inf = j;
            }
            if (h > res.sup_tilde) {
                res.sup_tilde = h;
                res.a_at_sup = a;
                res.j_at_sup = j;
            }
        };
        for (std::size_t i = 0; i < count; ++i) {
            const double a = -a_max + i * step;
            lo[i] = low(a);
            hi[i] = high(a);
            consider(a);
        }
        res.evaluations += count;
        for (std::size_t i = 0; i < count; ++i) {
            const double a0 = -a_max + (i == 0 ? 0 : i - 1) * step;
            const double a1 = -a_max + std::min(i + 1, count - 1) * step;
            const bool lmin = (i == 0 || lo[i] <= lo[i - 1]) && (i + 1 == count || lo[i] <= lo[i + 1]);
            const bool hmax = (i == 0 || hi[i] >= hi[i - 1]) && (i + 1 == count || hi[i] >= hi[i + 1]);
            std::uintmax_t iters = 100;
            if (lmin) {
                const auto r = boost::math::tools::brent_find_minima(low, a0, a1, 52, iters);
                consider(r.first);
                res.evaluations += iters;
            }
            iters = 100;
            if (hmax) {
                const auto r = boost::math::tools::brent_find_minima([&](double a) { return -high(a); }, a0, a1, 52,
                                                                     iters);
                consider(r.first);
                res.evaluations += iters;
            }
        }
    }
    return res;
}

NBound n_bound(const multiplier::EpsilonDomain& dom, double beta, int J, int samples, double a_max, double step,
               int jobs) {
    dom.validate();
    const auto eps = multiplier::sample_domain(dom, samples);
    std::vector<NScan> scans(eps.size());
    parallel_for(eps.size(), jobs, [&](std::size_t i) { scans[i] = scan_n_multiplier(eps[i], beta, J, a_max, step); });
    NBound out;
    out.sigma = dom.sigma;
    out.samples = static_cast<int>(eps.size());
    out.c_inf = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < eps.size(); ++i) {
        const double cs = dom.sigma * scans[i].sup_tilde;
        if (cs > out.c_sup) {
            out.c_sup = cs;
            out.eps_at_sup = eps[i];
        }
        out.c_inf = std::min(out.c_inf, scans[i].inf_n / dom.sigma);
    }
    return out;
}

double real_inf_abs_n(double eps, int j, double beta) {
    const double jj = static_cast<double>(j) * j;
    return multiplier::real_inf_abs_l(eps, jj - beta * jj * jj);
}

NImaginaryProbe n_imaginary_probe(double s, double beta, int J) {
    if (s == 0.0) throw InputError("imaginary probe needs s != 0");
    NImaginaryProbe best;
    best.s = s;
    for (int j = 1; j <= J; ++j) {
        const double jj = static_cast<double>(j) * j;
        const double c = beta * jj * jj - jj;
        const double disc = 1 - 4 * s * s * c;
        if (disc < 0) continue;
        const double a = 2 * s * c / (1 + std::sqrt(disc));
        const double mag = std::abs(n_multiplier(cplx(0.0, s), a, j, beta));
        const double inv = mag == 0.0 ? std::numeric_limits<double>::infinity() : 1.0 / mag;
        if (!best.has_root || inv > best.inverse_norm) {
            best.j = j;
            best.a_root = a;
            best.inverse_norm = inv;
            best.has_root = true;
        }
    }
    return best;
}

IllPosedness ill_posedness_witness(double beta, int j, double t) {
    const double jj = static_cast<double>(j) * j;
    const double c = beta * jj * jj - jj;
    if (!(c > 0.0)) throw InputError(fmt::format("beta j^4 - j^2 = {} is not positive at j = {}", c, j));
    IllPosedness out;
    out.j = j;
    out.rate = std::sqrt(c);
    out.log10_growth = t * out.rate / std::log(10.0);
    out.time_to_1e6 = std::log(1e6) / out.rate;
    return out;
}

}  // namespace response::pde
