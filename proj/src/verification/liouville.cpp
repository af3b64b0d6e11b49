#include "response/verification/liouville.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/mpfr.hpp>
#include <fmt/format.h>

#include "response/common/error.hpp"
#include "response/common/parallel.hpp"
#include "response/multiplier/multiplier.hpp"
#include "response/spectral/norm.hpp"

namespace response::verification {

namespace mp = boost::multiprecision;
using mp::mpfr_float;
using mp::mpz_int;
using cplx = std::complex<double>;

namespace {

// exp(q²) needs about q²/ln 2 bits; beyond this the construction stops.
constexpr double kMaxExponent = 2e5;

bool fits_int(const mpz_int& v) {
    return v <= mpz_int(std::numeric_limits<int>::max()) && v >= mpz_int(-std::numeric_limits<int>::max());
}

}  // namespace

std::vector<double> golden_omega() { return {1.0, (1.0 + std::sqrt(5.0)) / 2.0}; }

LiouvilleResult build_liouville(const LiouvilleSpec& spec) {
    if (spec.levels < 0 || spec.levels > 4) throw InputError("levels must be in [0, 4]", "levels");
    if (spec.q1 < 2) throw InputError("q1 must be at least 2", "q1");
    if (!(spec.c > 0.0)) throw InputError("c must be positive", "c");
    LiouvilleResult out;
    if (spec.levels == 0) {
        out.omega = {1.0, std::numbers::sqrt2};
        out.alpha = fmt::format("{:.17g}", std::numbers::sqrt2);
        return out;
    }

    // Convergents of [0; q1, a_2, ...]: p_{-1} = 1, q_{-1} = 0, p_0 = 0, q_0 = 1.
    std::vector<mpz_int> p{1, 0}, q{0, 1};
    p.push_back(1);
    q.push_back(spec.q1);
    int built = 0;
    for (int n = 1; n <= spec.levels; ++n) {
        const mpz_int& qn = q.back();
        const double qd = qn.convert_to<double>();
        if (qd * qd > kMaxExponent) {
            out.truncation = fmt::format("level {} needs q_{} >= exp({:.4g}), beyond the extended precision budget", n,
                                         n + 1, qd * qd);
            break;
        }
        const auto digits = static_cast<unsigned>(qd * qd / std::log(10.0)) + 40;
        const mpfr_float e = exp(mpfr_float(mpfr_float(qd * qd), digits));
        mpz_int E(ceil(e).convert_to<mpz_int>());
        mpz_int a = (E - q[q.size() - 2] + qn - 1) / qn;
        if (a < 1) a = 1;
        p.push_back(a * p.back() + p[p.size() - 2]);
        q.push_back(a * qn + q[q.size() - 2]);
        built = n;
    }
    out.levels_built = built;
    if (built == 0) throw InputError(out.truncation, "levels");

    const mpz_int& P = p.back();
    const mpz_int& Q = q.back();
    const double log10_Q = static_cast<double>(mp::msb(Q) + 1) * std::log10(2.0);
    const auto digits = static_cast<unsigned>(2 * log10_Q) + 60;
    const mpfr_float alpha = mpfr_float(P, digits) / mpfr_float(Q, digits);
    out.alpha = alpha.str(40);
    const double alpha_d = alpha.convert_to<double>();
    out.omega = {1.0, alpha_d};

    // Level n uses convergent index n + 1 in the vectors (two seeds in front).
    for (int n = 1; n <= built; ++n) {
        const mpz_int& pn = p[n + 1];
        const mpz_int& qn = q[n + 1];
        Witness w;
        w.level = n;
        w.p = pn.str();
        w.q = qn.str();
        if (fits_int(pn) && fits_int(qn)) w.k = {-pn.convert_to<int>(), qn.convert_to<int>()};
        // k·ω = (q_n P − p_n Q)/Q exactly.
        const mpz_int num = abs(qn * P - pn * Q);
        const mpfr_float kw = mpfr_float(num, digits) / mpfr_float(Q, digits);
        w.log10_abs_kw = log10(kw).convert_to<double>();
        const double qd = qn.convert_to<double>();
        w.log10_bound = std::log10(spec.c) - qd * qd / std::log(10.0);
        w.verified = num != 0 && w.log10_abs_kw <= w.log10_bound + 1e-12 * std::abs(w.log10_bound);
        if (!w.k.empty()) {
            const double kw_d = std::abs(w.k[0] * 1.0 + w.k[1] * alpha_d);
            const double exact = std::pow(10.0, w.log10_abs_kw);
            w.usable_in_double = exact > 0.0 && std::abs(kw_d - exact) <= 1e-6 * exact;
        }
        out.witnesses.push_back(std::move(w));
    }
    return out;
}

ControlScan control_scan(const std::vector<double>& omega, double radius) {
    using real50 = mp::cpp_bin_float_50;
    const int d = static_cast<int>(omega.size());
    if (d < 1 || d > 3) throw InputError("control scan supports d = 1..3");
    const int R = static_cast<int>(std::floor(radius));
    ControlScan out;
    out.min_scaled = std::numeric_limits<double>::infinity();
    std::vector<int> k(d, -R);
    for (;;) {
        long sq = 0;
        for (int v : k) sq += static_cast<long>(v) * v;
        if (sq > 0 && sq <= radius * radius) {
            real50 dot = 0;
            for (int i = 0; i < d; ++i) dot += real50(k[i]) * real50(omega[i]);
            const double norm = std::sqrt(static_cast<double>(sq));
            const real50 scaled = abs(dot) * exp(real50(norm));
            const double s = scaled.convert_to<double>();
            if (s <= 1.0) ++out.witnesses;
            if (s < out.min_scaled) {
                out.min_scaled = s;
                out.argmin = k;
            }
        }
        int i = 0;
        while (i < d && k[i] == R) k[i++] = -R;
        if (i == d) break;
        ++k[i];
    }
    return out;
}

ode::OdeProblem witness_problem(const std::vector<double>& omega, const std::vector<std::vector<int>>& ks, int K,
                                double rho, spectral::NonlinearitySpec g, double lambda) {
    const auto lat = spectral::SpectralLattice::torus(omega, K, 1);
    spectral::FourierField f(lat);
    for (const auto& k : ks) {
        if (!lat.contains(k)) throw InputError(fmt::format("forced mode does not fit in K = {}", K));
        int l1 = 0;
        for (int v : k) l1 += std::abs(v);
        f.add_cos(k, 0, 0, 2 * std::exp(-rho * l1));
    }
    return {lat, multiplier::LinearPart::scalar(lambda), std::move(g), f};
}

NondiffResult nondiff_probe(const ode::OdeProblem& prob, const std::vector<double>& ladder,
                            const ode::SolverConfig& cfg) {
    if (ladder.size() < 2) throw InputError("ladder needs at least two rungs", "ladder");
    for (std::size_t i = 0; i < ladder.size(); ++i) {
        if (!(ladder[i] > 0.0) || (i > 0 && !(ladder[i] < ladder[i - 1]))) {
            throw InputError("ladder must be positive and strictly decreasing", "ladder");
        }
    }
    std::vector<std::optional<spectral::FourierField>> sol(ladder.size());
    ode::SolverConfig inner = cfg;
    inner.jobs = 1;
    parallel_for(ladder.size(), cfg.jobs, [&](std::size_t i) {
        auto [U, rep] = ode::solve_fixed_point(ladder[i], prob, inner);
        if (!rep.converged()) {
            throw NumericalError(fmt::format("ladder rung eps = {} ended with {} ({})", ladder[i],
                                             ode::to_string(rep.status), rep.message));
        }
        sol[i] = std::move(U);
    });

    const auto& lat = prob.lattice;
    const bool closed = prob.g_hat.is_zero() && lat.n() == 1;
    const double lambda = prob.linear.A()(0, 0);
    NondiffResult out;
    for (std::size_t i = 0; i + 1 < ladder.size(); ++i) {
        QuotientRow row;
        row.eps = ladder[i];
        row.eps_next = ladder[i + 1];
        row.quotient = spectral::norm(*sol[i] - *sol[i + 1], {}) / (row.eps - row.eps_next);
        if (closed) {
            // (ε f/l_ε − ε' f/l_ε')/(ε − ε') = i a f / (l_ε l_ε')
            spectral::FourierField cf(lat);
            for (std::size_t m = 0; m < lat.num_modes(); ++m) {
                const double a = lat.k_dot_omega(m);
                cf.at(m) = cplx(0.0, a) * prob.forcing.at(m) /
                           (multiplier::l_eps(row.eps, lambda, a) * multiplier::l_eps(row.eps_next, lambda, a));
            }
            row.closed_form = spectral::norm(cf, {});
            row.relative_error = std::abs(row.quotient - row.closed_form) / row.closed_form;
        } else {
            row.closed_form = std::numeric_limits<double>::quiet_NaN();
            row.relative_error = std::numeric_limits<double>::quiet_NaN();
        }
        out.rows.push_back(row);
    }
    out.min_growth = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < out.rows.size(); ++i) {
        const double decades = std::log10(out.rows[i].eps / out.rows[i + 1].eps);
        const double g = std::pow(out.rows[i + 1].quotient / out.rows[i].quotient, 1.0 / decades);
        out.growth_per_decade.push_back(g);
        out.min_growth = std::min(out.min_growth, g);
        out.max_growth = std::max(out.max_growth, g);
    }
    for (std::size_t m = lat.zero_mode() + 1; m < lat.num_modes(); ++m) {
        const double f = std::abs(prob.forcing.at(m));
        if (f > 0.0) out.single_mode_prediction.push_back(f / std::abs(lat.k_dot_omega(m)));
    }
    return out;
}

}  // namespace response::verification
