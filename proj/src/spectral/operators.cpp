#include "response/spectral/operators.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include <fmt/format.h>

#include "response/common/error.hpp"
#include "response/common/fit.hpp"
#include "response/spectral/transform.hpp"

namespace response::spectral {

FourierField product(const FourierField& u, const FourierField& v) {
    if (!(u.lattice() == v.lattice())) throw InputError("product: fields live on different lattices");
    const auto grid = dealiased_grid(u.lattice(), 2);
    auto gu = synthesize(u, grid);
    const auto gv = synthesize(v, grid);
    for (std::size_t i = 0; i < gu.data.size(); ++i) gu.data[i] *= gv.data[i];
    return analyze(gu, u.lattice());
}

namespace {

GridShape compose_grid(const SpectralLattice& lattice, const NonlinearitySpec& g, int refine) {
    if (g.kind() == NonlinearitySpec::Kind::polynomial) return dealiased_grid(lattice, std::max(1, g.degree()));
    return oversampled_grid(lattice, g.oversample() * refine);
}

FourierField compose_on(const FourierField& u, const NonlinearitySpec& g, const GridShape& grid) {
    const auto& lattice = u.lattice();
    const int n = lattice.n();
    if (g.n() != n) {
        throw InputError(fmt::format("nonlinearity has {} components, field has {}", g.n(), n));
    }
    if (g.is_zero()) return FourierField(lattice);

    auto values = synthesize(u, grid);
    const std::size_t points = grid.points();

    if (!g.accepts_complex()) {
        double scale = 0.0, imag = 0.0;
        for (const auto& z : values.data) {
            scale = std::max(scale, std::abs(z));
            imag = std::max(imag, std::abs(z.imag()));
        }
        if (imag > 1e-10 * std::max(1.0, scale)) {
            throw InputError(fmt::format("{} needs real grid values (max |Im| = {:.3e})", g.name(), imag));
        }
    }

    GridValues out{grid, n, std::vector<cplx>(values.data.size())};
    std::vector<cplx> x(n), y(n);
    for (std::size_t p = 0; p < points; ++p) {
        for (int c = 0; c < n; ++c) x[c] = values.data[c * points + p];
        g.apply(x, y);
        for (int c = 0; c < n; ++c) {
            if (!std::isfinite(y[c].real()) || !std::isfinite(y[c].imag())) {
                throw NumericalError(fmt::format("{} returned a non-finite value at grid node {}", g.name(), p));
            }
            out.data[c * points + p] = y[c];
        }
    }
    return analyze(out, lattice);
}

}  // namespace

FourierField compose(const FourierField& u, const NonlinearitySpec& g) {
    return compose_on(u, g, compose_grid(u.lattice(), g, 1));
}

FourierField compose(const FourierField& u, const NonlinearitySpec& g, const GridShape& grid) {
    return compose_on(u, g, grid);
}

double compose_aliasing(const FourierField& u, const NonlinearitySpec& g) {
    if (g.kind() == NonlinearitySpec::Kind::polynomial) return 0.0;
    const auto coarse = compose_on(u, g, compose_grid(u.lattice(), g, 1));
    const auto fine = compose_on(u, g, compose_grid(u.lattice(), g, 2));
    return (coarse - fine).max_abs();
}

FourierField directional_derivative(const FourierField& u, int order) {
    if (order < 0) throw InputError("derivative order must be ≥ 0");
    const auto& lattice = u.lattice();
    FourierField out = u;
    for (std::size_t m = 0; m < lattice.num_modes(); ++m) {
        const cplx factor = std::pow(cplx(0.0, lattice.k_dot_omega(m)), order);
        for (auto& c : out.mode(m)) c *= factor;
    }
    return out;
}

FourierField spatial_derivative(const FourierField& u, int order) {
    const auto& lattice = u.lattice();
    if (!lattice.has_space()) throw InputError("spatial derivative needs a lattice with a spatial variable");
    if (order < 0) throw InputError("derivative order must be ≥ 0");
    FourierField out = u;
    for (std::size_t m = 0; m < lattice.num_modes(); ++m) {
        const cplx factor = std::pow(cplx(0.0, lattice.j(m)), order);
        for (auto& c : out.mode(m)) c *= factor;
    }
    return out;
}

CauchyFit cauchy_decay_fit(const FourierField& u) {
    const auto& lattice = u.lattice();
    const double top = u.max_abs();
    if (top == 0.0) throw InputError("cauchy_decay_fit: zero field");

    std::vector<double> x, y;
    std::map<int, int> shells;
    for (std::size_t m = 0; m < lattice.num_modes(); ++m) {
        double a = 0.0;
        for (auto c : u.mode(m)) a = std::max(a, std::abs(c));
        if (a <= 1e-14 * top) continue;
        x.push_back(lattice.l1(m));
        y.push_back(std::log(a));
        ++shells[lattice.l1(m)];
    }
    if (x.size() < 3 || shells.size() < 2) {
        throw InputError(fmt::format("cauchy_decay_fit needs at least 3 nonzero modes on 2 shells, got {} on {}",
                                     x.size(), shells.size()));
    }
    const auto fit = fit_line(x, y);
    return {std::exp(fit.intercept), -fit.slope, fit.r_squared, fit.points};
}

}  // namespace response::spectral
