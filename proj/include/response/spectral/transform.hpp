#pragma once

#include <span>
#include <vector>

#include "response/spectral/field.hpp"

namespace response::spectral {

/// Uniform collocation grid: extents[i] nodes θ = 2π·p/extents[i] per dimension.
struct GridShape {
    std::vector<int> extents;

    std::size_t points() const;
};

/// Values of an n-component function on a grid, component-major:
/// data[c * points + p], p row-major over the extents.
struct GridValues {
    GridShape shape;
    int n = 1;
    std::vector<cplx> data;

    std::span<cplx> component(int c);
    std::span<const cplx> component(int c) const;
};

/// Smallest FFT-friendly size (factors 2, 3, 5, 7) that is ≥ min_size.
int fft_size_at_least(int min_size);

/// Grid on which a polynomial of `degree` in fields of this lattice is
/// analyzed back onto the lattice without aliasing: N ≥ (degree+1)·K + 1.
/// degree = 2 is the 3/2 rule.
GridShape dealiased_grid(const SpectralLattice& lattice, int degree);

/// Grid with at least `factor`·(2K+1) nodes per dimension.
GridShape oversampled_grid(const SpectralLattice& lattice, int factor);

/// u(θ) = Σ_k û_k e^{ik·θ} on the grid.  Throws if the grid cannot hold
/// the lattice (fewer than 2K+1 nodes in a dimension).
GridValues synthesize(const FourierField& u, const GridShape& grid);

/// Discrete Fourier coefficients of grid values, truncated to the lattice.
FourierField analyze(const GridValues& values, const SpectralLattice& lattice);

/// Point evaluation of the series at (θ[, x]).
std::vector<cplx> evaluate(const FourierField& u, std::span<const double> theta, double x = 0.0);

}  // namespace response::spectral
