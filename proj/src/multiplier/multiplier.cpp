#include "response/multiplier/multiplier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/tools/minima.hpp>
#include <fmt/format.h>
#include <fmt/ranges.h>

#include "response/common/error.hpp"
#include "response/common/parallel.hpp"

namespace response::multiplier {

cplx l_eps(cplx eps, double lambda, double a) { return -eps * (a * a) + cplx(0.0, a) + eps * lambda; }

Eigen::MatrixXcd block_forward(cplx eps, double lambda, int size, double a) {
    Eigen::MatrixXcd b = Eigen::MatrixXcd::Zero(size, size);
    const cplx l = l_eps(eps, lambda, a);
    for (int i = 0; i < size; ++i) {
        b(i, i) = l;
        if (i > 0) b(i, i - 1) = eps;
    }
    return b;
}

Eigen::MatrixXcd block_inverse(cplx eps, double lambda, int size, double a) {
    if (size < 1) throw InputError("block size must be ≥ 1");
    const cplx l = l_eps(eps, lambda, a);
    const cplx inv = 1.0 / l;
    if (l == 0.0 || !std::isfinite(inv.real()) || !std::isfinite(inv.imag())) {
        throw ResonanceError(fmt::format("l_eps vanishes at a = {} (eps = {}{:+}i, lambda = {})", a, eps.real(),
                                         eps.imag(), lambda),
                             {});
    }
    Eigen::MatrixXcd b = Eigen::MatrixXcd::Zero(size, size);
    cplx diag = inv;  // (−ε)^r l^{−(r+1)}
    for (int r = 0; r < size; ++r) {
        for (int i = r; i < size; ++i) b(i, i - r) = diag;
        diag *= -eps * inv;
    }
    return b;
}

Eigen::MatrixXcd mode_matrix(cplx eps, double a, const LinearPart& linear) {
    const int n = linear.n();
    Eigen::MatrixXcd m = eps * linear.A().cast<cplx>();
    const cplx d = -eps * (a * a) + cplx(0.0, a);
    for (int i = 0; i < n; ++i) m(i, i) += d;
    return m;
}

Eigen::MatrixXcd mode_inverse(cplx eps, double a, const LinearPart& linear, Backend backend) {
    if (backend == Backend::automatic) backend = linear.has_jordan() ? Backend::jordan : Backend::dense;
    const int n = linear.n();

    if (backend == Backend::jordan) {
        if (!linear.has_jordan()) throw InputError("jordan backend requested without Jordan data");
        Eigen::MatrixXcd binv = Eigen::MatrixXcd::Zero(n, n);
        int at = 0;
        for (const auto& b : linear.blocks()) {
            binv.block(at, at, b.size, b.size) = block_inverse(eps, b.lambda, b.size, a);
            at += b.size;
        }
        if (n == 1 && linear.phi()(0, 0) == 1.0) return binv;
        return linear.phi().cast<cplx>() * binv * linear.phi_inverse().cast<cplx>();
    }

    const Eigen::MatrixXcd m = mode_matrix(eps, a, linear);
    if (n == 1) {
        if (m(0, 0) == 0.0) throw ResonanceError(fmt::format("singular mode matrix at a = {}", a), {});
        return Eigen::MatrixXcd::Constant(1, 1, 1.0 / m(0, 0));
    }
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(m);
    const double rc = lu.rcond();
    if (!(rc > 1e-15)) {
        throw ResonanceError(fmt::format("singular mode matrix at a = {} (rcond = {:.2e})", a, rc), {});
    }
    return lu.inverse();
}

Eigen::VectorXcd mode_solve(cplx eps, double a, const LinearPart& linear, const Eigen::VectorXcd& rhs,
                            Backend backend) {
    if (rhs.size() != linear.n()) throw InputError("rhs has the wrong dimension");
    if (backend == Backend::automatic) backend = linear.has_jordan() ? Backend::jordan : Backend::dense;
    if (backend == Backend::dense && linear.n() > 1) {
        const Eigen::MatrixXcd m = mode_matrix(eps, a, linear);
        Eigen::PartialPivLU<Eigen::MatrixXcd> lu(m);
        if (!(lu.rcond() > 1e-15)) throw ResonanceError(fmt::format("singular mode matrix at a = {}", a), {});
        return lu.solve(rhs);
    }
    return mode_inverse(eps, a, linear, backend) * rhs;
}

double operator_norm(const Eigen::MatrixXcd& m) {
    if (m.size() == 1) return std::abs(m(0, 0));
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
    return svd.singularValues()(0);
}

ScaledInverse::ScaledInverse(cplx eps, const LinearPart& linear, const SpectralLattice& lattice, Backend backend,
                             int jobs)
    : eps_(eps), linear_(linear), lattice_(lattice), table_(lattice.num_modes()) {
    if (lattice.n() != linear.n()) {
        throw InputError(fmt::format("lattice carries {} components, A is {}×{}", lattice.n(), linear.n(), linear.n()));
    }
    if (eps == 0.0) throw InputError("eps must be nonzero", "eps");
    parallel_for(lattice.num_modes(), jobs, [&](std::size_t m) {
        try {
            table_[m] = eps * mode_inverse(eps, lattice.k_dot_omega(m), linear, backend);
        } catch (const ResonanceError& e) {
            throw ResonanceError(fmt::format("{} for k = ({})", e.what(), fmt::join(lattice.k(m), ", ")),
                                 lattice.k(m), lattice.j(m));
        }
    });
    refresh_norms();
}

void ScaledInverse::refresh_norms() {
    sup_ = 0.0;
    forward_sup_ = 0.0;
    for (std::size_t m = 0; m < table_.size(); ++m) {
        const double s = operator_norm(table_[m]);
        if (s > sup_) {
            sup_ = s;
            sup_mode_ = m;
        }
        forward_sup_ = std::max(forward_sup_, operator_norm(mode_matrix(eps_, lattice_.k_dot_omega(m), linear_)));
    }
}

FourierField ScaledInverse::apply(const FourierField& f) const {
    if (!(f.lattice() == lattice_)) throw InputError("field and multiplier live on different lattices");
    FourierField out(lattice_);
    const int n = lattice_.n();
    for (std::size_t m = 0; m < table_.size(); ++m) {
        const auto in = f.mode(m);
        auto dst = out.mode(m);
        if (n == 1) {
            dst[0] = table_[m](0, 0) * in[0];
            continue;
        }
        for (int r = 0; r < n; ++r) {
            cplx acc = 0.0;
            for (int c = 0; c < n; ++c) acc += table_[m](r, c) * in[c];
            dst[r] = acc;
        }
    }
    return out;
}

double ScaledInverse::identity_defect() const {
    double worst = 0.0;
    const auto id = Eigen::MatrixXcd::Identity(linear_.n(), linear_.n());
    for (std::size_t m = 0; m < table_.size(); ++m) {
        const Eigen::MatrixXcd prod = mode_matrix(eps_, lattice_.k_dot_omega(m), linear_) * (table_[m] / eps_);
        worst = std::max(worst, (prod - id).cwiseAbs().maxCoeff());
    }
    return worst;
}

void ScaledInverse::perturb_mode(std::size_t m, cplx factor) {
    table_.at(m) *= factor;
    refresh_norms();
}

FourierField apply_scaled_inverse(cplx eps, const LinearPart& linear, const FourierField& f, Backend backend) {
    return ScaledInverse(eps, linear, f.lattice(), backend).apply(f);
}

double real_inf_abs_l(double eps, double lambda) {
    if (2 * eps * eps * lambda <= 1.0) return std::abs(eps * lambda);
    return std::sqrt(lambda - 1.0 / (4 * eps * eps));
}

namespace {

double inverse_norm_at(cplx eps, const LinearPart& linear, double a) {
    try {
        return operator_norm(mode_inverse(eps, a, linear));
    } catch (const ResonanceError&) {
        return std::numeric_limits<double>::infinity();
    }
}

}  // namespace

ScanResult scan_inverse_norm(cplx eps, const LinearPart& linear, double a_max, double step) {
    if (!(a_max > 0.0) || !(step > 0.0)) throw InputError("scan window and step must be positive");
    const auto count = static_cast<std::size_t>(std::floor(2 * a_max / step + 1e-9)) + 1;
    ScanResult res;
    std::vector<double> f(count);
    for (std::size_t i = 0; i < count; ++i) f[i] = inverse_norm_at(eps, linear, -a_max + i * step);
    res.evaluations = count;

    auto consider = [&](double a, double v) {
        if (v > res.sup || (std::isinf(v) && !std::isinf(res.sup))) {
            res.sup = v;
            res.a_at_sup = a;
        }
    };
    auto refine = [&](double lo, double hi) {
        std::uintmax_t iters = 100;
        const auto r = boost::math::tools::brent_find_minima(
            [&](double a) { return -inverse_norm_at(eps, linear, a); }, lo, hi, 52, iters);
        res.evaluations += iters;
        consider(r.first, -r.second);
    };

    for (std::size_t i = 0; i < count; ++i) {
        consider(-a_max + i * step, f[i]);
        const bool left = i == 0 || f[i] >= f[i - 1];
        const bool right = i + 1 == count || f[i] >= f[i + 1];
        if (left && right && std::isfinite(f[i])) {
            refine(-a_max + (i == 0 ? i : i - 1) * step, -a_max + std::min(i + 1, count - 1) * step);
        }
    }
    // Where the structure sits: a = 0 and a² = |λ|, plus a ≈ −Im(ε)·λ.
    std::vector<double> anchors{0.0};
    for (double lam : linear.eigenvalues()) {
        anchors.push_back(std::sqrt(std::abs(lam)));
        anchors.push_back(-std::sqrt(std::abs(lam)));
        anchors.push_back(-eps.imag() * lam);
    }
    for (double a : anchors) {
        if (std::abs(a) > a_max) continue;
        consider(a, inverse_norm_at(eps, linear, a));
        refine(std::max(-a_max, a - step), std::min(a_max, a + step));
    }
    return res;
}

double scan_window(const LinearPart& linear, const SpectralLattice& lattice) {
    double lam = 0.0, kw = 0.0;
    for (double l : linear.eigenvalues()) lam = std::max(lam, std::sqrt(std::abs(l)));
    for (std::size_t m = 0; m < lattice.num_modes(); ++m) kw = std::max(kw, std::abs(lattice.k_dot_omega(m)));
    return 2 * std::max(lam, kw);
}

GammaCertificate gamma_certificate(cplx eps, const LinearPart& linear, const SpectralLattice& lattice) {
    GammaCertificate out;
    if (eps.imag() == 0.0 && linear.has_jordan()) {
        const double e = eps.real();
        double worst = 0.0;
        for (const auto& b : linear.blocks()) {
            const double m = real_inf_abs_l(e, b.lambda);
            double s = 0.0, term = 1.0 / m;
            for (int r = 0; r < b.size; ++r) {
                s += term;
                term *= std::abs(e) / m;
            }
            worst = std::max(worst, s);
        }
        out.value = linear.phi_condition() * worst;
        out.analytic = true;
        return out;
    }
    out.value = scan_inverse_norm(eps, linear, scan_window(linear, lattice)).sup;
    return out;
}

GammaBound gamma_bound(cplx eps, const LinearPart& linear, const SpectralLattice& lattice) {
    const ScaledInverse inv(eps, linear, lattice);
    GammaBound gb;
    gb.empirical = inv.sup_norm() / std::abs(eps);
    gb.argmax_mode = inv.sup_mode();
    const auto cert = gamma_certificate(eps, linear, lattice);
    gb.certified = cert.value;
    gb.analytic = cert.analytic;
    if (gb.analytic && gb.empirical > gb.certified * (1 + 1e-9)) {
        throw CertificationError(fmt::format("lattice sup {:.17g} exceeds the analytic bound {:.17g} at eps = {}",
                                             gb.empirical, gb.certified, eps.real()));
    }
    if (!gb.analytic && gb.empirical > gb.certified * (1 + 1e-6)) {
        throw CertificationError(fmt::format("lattice sup {:.17g} exceeds the dense-scan sup {:.17g}", gb.empirical,
                                             gb.certified));
    }
    return gb;
}

ImaginaryProbe imaginary_axis_probe(double s, const LinearPart& linear) {
    if (s == 0.0) throw InputError("imaginary probe needs s ≠ 0");
    ImaginaryProbe best;
    best.s = s;
    for (double lam : linear.eigenvalues()) {
        const double disc = 1 + 4 * s * s * lam;
        if (disc < 0) continue;
        // Small root of s a² − a − s λ = 0, in cancellation-free form.
        const double a = -2 * s * lam / (1 + std::sqrt(disc));
        const Eigen::MatrixXcd m = mode_matrix(cplx(0.0, s), a, linear);
        double smin;
        if (m.size() == 1) {
            smin = std::abs(m(0, 0));
        } else {
            Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
            smin = svd.singularValues()(m.rows() - 1);
        }
        const double norm = smin == 0.0 ? std::numeric_limits<double>::infinity() : 1.0 / smin;
        if (!best.has_root || norm > best.inverse_norm) {
            best.lambda = lam;
            best.a_root = a;
            best.inverse_norm = norm;
            best.has_root = true;
        }
    }
    return best;
}

}  // namespace response::multiplier
