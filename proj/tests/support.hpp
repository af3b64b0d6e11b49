#pragma once

#include <cmath>
#include <random>

#include "response/spectral/field.hpp"

namespace testing {

using response::spectral::cplx;
using response::spectral::FourierField;
using response::spectral::SpectralLattice;

inline std::mt19937_64& rng() {
    static std::mt19937_64 gen(20240611);
    return gen;
}

inline double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng()); }

inline int uniform_int(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng()); }

/// Random field with coefficients decaying like e^{-decay |k|₁}.  When
/// `real` the field is Hermitian symmetric; with a spatial variable the
/// j = 0 slice is left at zero when `zero_mean_x`.
inline FourierField random_field(const SpectralLattice& lattice, bool real = true, double decay = 0.0,
                                 bool zero_mean_x = false) {
    FourierField u(lattice);
    const int n = lattice.n();
    for (std::size_t m = 0; m < lattice.num_modes(); ++m) {
        if (zero_mean_x && lattice.has_space() && lattice.j(m) == 0) continue;
        const double scale = std::exp(-decay * lattice.l1(m));
        for (int c = 0; c < n; ++c) u.at(m, c) = scale * cplx(uniform(-1, 1), uniform(-1, 1));
    }
    if (real) {
        for (std::size_t m = 0; m < lattice.num_modes(); ++m) {
            const auto mm = lattice.mirror(m);
            if (mm < m) continue;
            for (int c = 0; c < n; ++c) {
                if (mm == m) {
                    u.at(m, c) = u.at(m, c).real();
                } else {
                    u.at(mm, c) = std::conj(u.at(m, c));
                }
            }
        }
    }
    return u;
}

inline double max_diff(const FourierField& a, const FourierField& b) { return (a - b).max_abs(); }

}  // namespace testing
