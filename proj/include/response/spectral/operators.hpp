#pragma once

#include "response/spectral/field.hpp"
#include "response/spectral/nonlinearity.hpp"
#include "response/spectral/transform.hpp"

namespace response::spectral {

/// Componentwise product u·v truncated to the lattice, computed on the
/// 3/2-rule grid (exact convolution).
FourierField product(const FourierField& u, const FourierField& v);

/// Pseudo-spectral ĝ∘u.  Polynomials use the exact dealiased grid; other
/// kinds use oversample·(2K+1) nodes per dimension.  Piecewise-linear maps
/// require real grid values.
FourierField compose(const FourierField& u, const NonlinearitySpec& g);
/// Same on an explicit grid (must hold the lattice).
FourierField compose(const FourierField& u, const NonlinearitySpec& g, const GridShape& grid);

/// Aliasing estimate for compose: max coefficient difference between the
/// configured grid and one twice as fine.  Zero for polynomials.
double compose_aliasing(const FourierField& u, const NonlinearitySpec& g);

/// (ω·∂_θ)^order u: coefficient k multiplied by (i k·ω)^order.
FourierField directional_derivative(const FourierField& u, int order = 1);

/// ∂_x^order u on a lattice with a spatial variable: coefficient (k, j)
/// multiplied by (i j)^order.
FourierField spatial_derivative(const FourierField& u, int order);

/// Fit of |û_k| ≤ M e^{−ρ|k|₁} by least squares of log|û_k| against |k|₁.
struct CauchyFit {
    double M = 0.0;
    double rho = 0.0;
    double r_squared = 0.0;
    int modes = 0;
};

/// Coefficients below 1e-14·max are treated as zero.  Needs at least three
/// nonzero modes over two distinct |k|₁ shells.
CauchyFit cauchy_decay_fit(const FourierField& u);

}  // namespace response::spectral
