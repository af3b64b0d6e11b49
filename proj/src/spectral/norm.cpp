#include "response/spectral/norm.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include <fmt/format.h>

#include "response/common/error.hpp"

namespace response::spectral {

double log_weight(const SpectralLattice& lattice, std::size_t mode, const NormSpec& spec) {
    double lw = 2.0 * spec.rho * lattice.l1(mode);
    if (spec.m != 0.0) lw += spec.m * std::log(static_cast<double>(lattice.euclid_sq(mode)) + 1.0);
    return lw;
}

namespace {

template <typename Pred>
double weighted_norm(const FourierField& u, const NormSpec& spec, Pred include) {
    spec.validate();
    const auto& lattice = u.lattice();
    const int n = lattice.n();

    // log of each term |û_k|² w_k, then a log-sum-exp.
    std::vector<double> log_terms;
    log_terms.reserve(lattice.num_modes());
    double top = -std::numeric_limits<double>::infinity();
    for (std::size_t m = 0; m < lattice.num_modes(); ++m) {
        if (!include(m)) continue;
        double s = 0.0;
        for (int c = 0; c < n; ++c) s += std::norm(u.at(m, c));
        if (!std::isfinite(s)) throw NumericalError("non-finite Fourier coefficient in norm");
        if (s == 0.0) continue;
        const double t = std::log(s) + log_weight(lattice, m, spec);
        log_terms.push_back(t);
        top = std::max(top, t);
    }
    if (log_terms.empty()) return 0.0;

    double sum = 0.0;
    for (double t : log_terms) sum += std::exp(t - top);
    const double log_norm = 0.5 * (top + std::log(sum));
    if (log_norm >= std::log(std::numeric_limits<double>::max())) {
        throw OverflowError(fmt::format("weighted norm exceeds the double range (log ‖u‖ = {:.1f}, ρ = {}, m = {})",
                                        log_norm, spec.rho, spec.m));
    }
    return std::exp(log_norm);
}

}  // namespace

double norm(const FourierField& u, const NormSpec& spec) {
    return weighted_norm(u, spec, [](std::size_t) { return true; });
}

double tail_norm(const FourierField& u, const NormSpec& spec) {
    const auto& lattice = u.lattice();
    return weighted_norm(u, spec, [&](std::size_t m) { return lattice.on_boundary(m); });
}

}  // namespace response::spectral
