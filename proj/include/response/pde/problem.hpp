#pragma once

#include <complex>
#include <string>

#include "response/spectral/field.hpp"

namespace response::pde {

using cplx = std::complex<double>;
using spectral::FourierField;
using spectral::NormSpec;
using spectral::SpectralLattice;

/// Admissibility of β: 1/√β must not be an integer, otherwise βj⁴ − j²
/// vanishes at j = 1/√β.
struct BetaCheck {
    bool accepted = false;
    long offending = 0;    ///< the integer 1/√β when rejected
    double min_gap = 0.0;  ///< min over 1 ≤ j ≤ J of |βj⁴ − j²|
    int argmin_j = 0;
    std::string warning;  ///< set when min_gap is small enough to hurt conditioning
};

/// Rejects iff 1/√β is an integer within 1e-12.  J bounds the gap scan.
BetaCheck check_beta(double beta, int J);

/// ε u_tt + u_t = εβ u_xxxx + ε u_xx + ε(u²)_xx + ε f on T^d × T,
/// solved for the hull U(θ, x) with u(t, x) = U(ωt, x).
struct PdeProblem {
    SpectralLattice lattice;
    double beta = 2.0;
    FourierField forcing;

    /// Lattice has a spatial variable, β admissible, forcing real with a
    /// zero j = 0 slice.
    void validate() const;
};

}  // namespace response::pde
