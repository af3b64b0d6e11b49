#include "response/spectral/nonlinearity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "response/common/error.hpp"

namespace response::spectral {

void PiecewiseLinear::validate() const {
    if (slopes.size() != breakpoints.size() + 1) {
        throw InputError(fmt::format("piecewise-linear map needs {} slopes for {} breakpoints, got {}",
                                     breakpoints.size() + 1, breakpoints.size(), slopes.size()));
    }
    if (!std::is_sorted(breakpoints.begin(), breakpoints.end()) ||
        std::adjacent_find(breakpoints.begin(), breakpoints.end()) != breakpoints.end()) {
        throw InputError("breakpoints must be strictly increasing");
    }
    for (double v : slopes) {
        if (!std::isfinite(v)) throw InputError("non-finite slope");
    }
    if (!std::isfinite(value_at_zero)) throw InputError("non-finite value_at_zero");
}

double PiecewiseLinear::slope_at(double x) const {
    // Left-continuous: a point on a breakpoint takes the slope to its left.
    const auto it = std::lower_bound(breakpoints.begin(), breakpoints.end(), x);
    return slopes[static_cast<std::size_t>(it - breakpoints.begin())];
}

double PiecewiseLinear::operator()(double x) const {
    // Integrate the slope from 0 to x across the breakpoints in between.
    double value = value_at_zero;
    double lo = std::min(0.0, x), hi = std::max(0.0, x);
    double pos = lo;
    double acc = 0.0;
    for (double b : breakpoints) {
        if (b <= lo) continue;
        if (b >= hi) break;
        acc += slope_at(0.5 * (pos + b)) * (b - pos);
        pos = b;
    }
    if (hi > pos) acc += slope_at(0.5 * (pos + hi)) * (hi - pos);
    value += (x >= 0.0) ? acc : -acc;
    return value;
}

double PiecewiseLinear::lipschitz() const {
    double l = 0.0;
    for (double s : slopes) l = std::max(l, std::abs(s));
    return l;
}

NonlinearitySpec NonlinearitySpec::zero(int n) {
    return polynomial(std::vector<std::vector<double>>(static_cast<std::size_t>(n)), 0.0);
}

NonlinearitySpec NonlinearitySpec::polynomial(std::vector<std::vector<double>> coeffs) {
    NonlinearitySpec g;
    g.kind_ = Kind::polynomial;
    g.n_ = static_cast<int>(coeffs.size());
    g.poly_ = std::move(coeffs);
    g.name_ = "polynomial";
    const int deg = g.degree();
    if (deg >= 2) {
        g.lip_hat_ = std::numeric_limits<double>::infinity();
    } else {
        double l = 0.0;
        for (const auto& c : g.poly_) {
            if (c.size() > 1) l = std::max(l, std::abs(c[1]));
        }
        g.lip_hat_ = l;
    }
    if (g.n_ < 1) throw InputError("polynomial nonlinearity needs at least one component");
    return g;
}

NonlinearitySpec NonlinearitySpec::polynomial(std::vector<std::vector<double>> coeffs, double lip_hat) {
    auto g = polynomial(std::move(coeffs));
    if (!(lip_hat >= 0.0)) throw InputError("lip_hat must be ≥ 0", "nonlinearity.lip");
    g.lip_hat_ = lip_hat;
    return g;
}

NonlinearitySpec NonlinearitySpec::callable(int n, PointMap map, PointJacobian jacobian, double lip_hat,
                                            std::string name) {
    if (n < 1) throw InputError("callable nonlinearity needs n ≥ 1");
    if (!map) throw InputError("callable nonlinearity needs a map");
    if (!(lip_hat >= 0.0)) throw InputError("lip_hat must be ≥ 0", "nonlinearity.lip");
    NonlinearitySpec g;
    g.kind_ = Kind::callable;
    g.n_ = n;
    g.map_ = std::move(map);
    g.jac_ = std::move(jacobian);
    g.lip_hat_ = lip_hat;
    g.name_ = std::move(name);
    return g;
}

NonlinearitySpec NonlinearitySpec::piecewise(std::vector<PiecewiseLinear> components) {
    double l = 0.0;
    for (const auto& p : components) {
        p.validate();
        l = std::max(l, p.lipschitz());
    }
    return piecewise(std::move(components), l);
}

NonlinearitySpec NonlinearitySpec::piecewise(std::vector<PiecewiseLinear> components, double lip_hat) {
    if (components.empty()) throw InputError("piecewise-linear nonlinearity needs at least one component");
    if (!(lip_hat >= 0.0)) throw InputError("lip_hat must be ≥ 0", "nonlinearity.lip");
    NonlinearitySpec g;
    g.kind_ = Kind::piecewise_linear;
    g.n_ = static_cast<int>(components.size());
    for (const auto& p : components) {
        p.validate();
        if (p.lipschitz() > lip_hat * (1.0 + 1e-12)) {
            throw InputError(fmt::format("declared lip {} is below the largest slope {}", lip_hat, p.lipschitz()),
                             "nonlinearity.lip");
        }
    }
    g.pwl_ = std::move(components);
    g.lip_hat_ = lip_hat;
    g.name_ = "piecewise_linear";
    return g;
}

void NonlinearitySpec::set_oversample(int factor) {
    if (factor < 2) throw InputError("oversample factor must be ≥ 2", "nonlinearity.oversample");
    oversample_ = factor;
}

int NonlinearitySpec::degree() const {
    if (kind_ != Kind::polynomial) throw InputError("degree() is only defined for polynomial nonlinearities");
    int deg = 0;
    for (const auto& c : poly_) {
        for (int p = static_cast<int>(c.size()) - 1; p > deg; --p) {
            if (c[p] != 0.0) {
                deg = p;
                break;
            }
        }
    }
    return deg;
}

bool NonlinearitySpec::is_zero() const noexcept {
    if (kind_ != Kind::polynomial) return false;
    for (const auto& c : poly_) {
        for (double v : c) {
            if (v != 0.0) return false;
        }
    }
    return true;
}

void NonlinearitySpec::apply(std::span<const cplx> x, std::span<cplx> out) const {
    switch (kind_) {
        case Kind::polynomial:
            for (int c = 0; c < n_; ++c) {
                const auto& co = poly_[c];
                cplx acc = 0.0;
                for (auto p = co.size(); p-- > 0;) acc = acc * x[c] + co[p];  // Horner
                out[c] = acc;
            }
            break;
        case Kind::callable:
            map_(x, out);
            break;
        case Kind::piecewise_linear:
            for (int c = 0; c < n_; ++c) out[c] = pwl_[c](x[c].real());
            break;
    }
}

void NonlinearitySpec::jacobian(std::span<const cplx> x, std::span<cplx> jac) const {
    std::fill(jac.begin(), jac.end(), cplx{});
    switch (kind_) {
        case Kind::polynomial:
            for (int c = 0; c < n_; ++c) {
                const auto& co = poly_[c];
                cplx acc = 0.0;
                for (auto p = co.size(); p-- > 1;) acc = acc * x[c] + static_cast<double>(p) * co[p];
                jac[c * n_ + c] = acc;
            }
            break;
        case Kind::piecewise_linear:
            for (int c = 0; c < n_; ++c) jac[c * n_ + c] = pwl_[c].slope_at(x[c].real());
            break;
        case Kind::callable:
            if (jac_) {
                jac_(x, jac);
            } else {
                // Central differences, column by column.
                std::vector<cplx> xp(x.begin(), x.end()), fp(n_), fm(n_);
                for (int col = 0; col < n_; ++col) {
                    const double h = 1e-6 * std::max(1.0, std::abs(x[col]));
                    xp[col] = x[col] + h;
                    map_(xp, fp);
                    xp[col] = x[col] - h;
                    map_(xp, fm);
                    xp[col] = x[col];
                    for (int r = 0; r < n_; ++r) jac[r * n_ + col] = (fp[r] - fm[r]) / (2.0 * h);
                }
            }
            break;
    }
}

bool NonlinearitySpec::vanishes_to_second_order() const {
    std::vector<cplx> zero(n_), value(n_), jac(static_cast<std::size_t>(n_) * n_);
    apply(zero, value);
    jacobian(zero, jac);
    for (auto v : value) {
        if (std::abs(v) > 1e-14) return false;
    }
    for (auto v : jac) {
        if (std::abs(v) > 1e-12) return false;
    }
    return true;
}

double NonlinearitySpec::lipschitz_on_ball(double radius) const {
    if (kind_ != Kind::polynomial) return lip_hat_;
    double l = 0.0;
    for (const auto& co : poly_) {
        double s = 0.0;
        for (std::size_t p = 1; p < co.size(); ++p) s += p * std::abs(co[p]) * std::pow(radius, p - 1.0);
        l = std::max(l, s);
    }
    return std::min(l, lip_hat_);
}

}  // namespace response::spectral
