#include "response/spectral/transform.hpp"

#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "fft.hpp"
#include "response/common/error.hpp"

namespace response::spectral {

std::size_t GridShape::points() const {
    std::size_t p = 1;
    for (int e : extents) p *= static_cast<std::size_t>(e);
    return p;
}

std::span<cplx> GridValues::component(int c) {
    const std::size_t p = shape.points();
    return {data.data() + static_cast<std::size_t>(c) * p, p};
}

std::span<const cplx> GridValues::component(int c) const {
    const std::size_t p = shape.points();
    return {data.data() + static_cast<std::size_t>(c) * p, p};
}

int fft_size_at_least(int min_size) {
    for (int n = std::max(1, min_size);; ++n) {
        int r = n;
        for (int f : {2, 3, 5, 7}) {
            while (r % f == 0) r /= f;
        }
        if (r == 1) return n;
    }
}

namespace {

std::vector<int> cutoffs(const SpectralLattice& lattice) {
    std::vector<int> c(lattice.d(), lattice.K());
    if (lattice.has_space()) c.push_back(lattice.J());
    return c;
}

// Grid offset of every lattice mode (k_i mod N_i, row-major).
std::vector<std::size_t> grid_positions(const SpectralLattice& lattice, const GridShape& grid) {
    const auto cut = cutoffs(lattice);
    const int rank = static_cast<int>(cut.size());
    if (static_cast<int>(grid.extents.size()) != rank) {
        throw InputError(fmt::format("grid rank {} does not match lattice rank {}", grid.extents.size(), rank));
    }
    for (int i = 0; i < rank; ++i) {
        if (grid.extents[i] < 2 * cut[i] + 1) {
            throw InputError(fmt::format("grid too small: {} nodes in dimension {} cannot resolve cutoff {}",
                                         grid.extents[i], i, cut[i]));
        }
    }
    std::vector<std::size_t> gstride(rank, 1);
    for (int i = rank - 2; i >= 0; --i) gstride[i] = gstride[i + 1] * grid.extents[i + 1];

    std::vector<std::size_t> pos(lattice.num_modes());
    std::vector<int> idx(rank, 0);
    for (std::size_t m = 0; m < lattice.num_modes(); ++m) {
        std::size_t g = 0;
        for (int i = 0; i < rank; ++i) {
            const int ki = idx[i] - cut[i];
            const int wrapped = ki < 0 ? ki + grid.extents[i] : ki;
            g += static_cast<std::size_t>(wrapped) * gstride[i];
        }
        pos[m] = g;
        for (int i = rank - 1; i >= 0; --i) {
            if (++idx[i] < 2 * cut[i] + 1) break;
            idx[i] = 0;
        }
    }
    return pos;
}

}  // namespace

GridShape dealiased_grid(const SpectralLattice& lattice, int degree) {
    if (degree < 1) throw InputError("dealiasing degree must be ≥ 1");
    GridShape g;
    for (int c : cutoffs(lattice)) g.extents.push_back(fft_size_at_least((degree + 1) * c + 1));
    return g;
}

GridShape oversampled_grid(const SpectralLattice& lattice, int factor) {
    if (factor < 1) throw InputError("oversample factor must be ≥ 1", "oversample");
    GridShape g;
    for (int c : cutoffs(lattice)) g.extents.push_back(fft_size_at_least(factor * (2 * c + 1)));
    return g;
}

GridValues synthesize(const FourierField& u, const GridShape& grid) {
    const auto& lattice = u.lattice();
    const auto pos = grid_positions(lattice, grid);
    const int n = lattice.n();
    const std::size_t points = grid.points();

    GridValues out{grid, n, std::vector<cplx>(points * n)};
    detail::FftBuffer buf(points);
    for (int c = 0; c < n; ++c) {
        buf.zero();
        for (std::size_t m = 0; m < lattice.num_modes(); ++m) buf.data()[pos[m]] = u.at(m, c);
        detail::transform_inplace(buf, grid.extents, +1);
        std::copy(buf.data(), buf.data() + points, out.component(c).begin());
    }
    return out;
}

FourierField analyze(const GridValues& values, const SpectralLattice& lattice) {
    if (values.n != lattice.n()) throw InputError("component count of grid values and lattice differ");
    const auto pos = grid_positions(lattice, values.shape);
    const std::size_t points = values.shape.points();
    const double scale = 1.0 / static_cast<double>(points);

    FourierField out(lattice);
    detail::FftBuffer buf(points);
    for (int c = 0; c < values.n; ++c) {
        const auto src = values.component(c);
        std::copy(src.begin(), src.end(), buf.data());
        detail::transform_inplace(buf, values.shape.extents, -1);
        for (std::size_t m = 0; m < lattice.num_modes(); ++m) out.at(m, c) = buf.data()[pos[m]] * scale;
    }
    return out;
}

std::vector<cplx> evaluate(const FourierField& u, std::span<const double> theta, double x) {
    const auto& lattice = u.lattice();
    if (static_cast<int>(theta.size()) != lattice.d()) throw InputError("evaluate: θ has the wrong dimension");

    // Per-dimension tables of e^{i k θ_i}, k = −cut..cut.
    auto cut = cutoffs(lattice);
    std::vector<double> angles(theta.begin(), theta.end());
    if (lattice.has_space()) angles.push_back(x);
    const int rank = static_cast<int>(cut.size());
    std::vector<std::vector<cplx>> phase(rank);
    for (int i = 0; i < rank; ++i) {
        phase[i].resize(2 * cut[i] + 1);
        for (int k = -cut[i]; k <= cut[i]; ++k) phase[i][k + cut[i]] = std::polar(1.0, k * angles[i]);
    }

    const int n = lattice.n();
    std::vector<cplx> out(n);
    std::vector<int> idx(rank, 0);
    for (std::size_t m = 0; m < lattice.num_modes(); ++m) {
        cplx e = 1.0;
        for (int i = 0; i < rank; ++i) e *= phase[i][idx[i]];
        for (int c = 0; c < n; ++c) out[c] += u.at(m, c) * e;
        for (int i = rank - 1; i >= 0; --i) {
            if (++idx[i] < 2 * cut[i] + 1) break;
            idx[i] = 0;
        }
    }
    return out;
}

}  // namespace response::spectral
