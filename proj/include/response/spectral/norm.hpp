#pragma once

#include "response/spectral/field.hpp"

namespace response::spectral {

/// log of the weight e^{2ρ|k|₁}(|k|²+1)^m attached to |û_k|² (|k|, |k|²
/// include the spatial index for PDE lattices).
double log_weight(const SpectralLattice& lattice, std::size_t mode, const NormSpec& spec);

/// ‖u‖_{ρ,m} = (Σ_k |û_k|² e^{2ρ|k|₁}(|k|²+1)^m)^{1/2} over the lattice.
///
/// Weights are combined in log space, so large ρ·K is harmless unless the
/// norm itself leaves the double range (OverflowError).
double norm(const FourierField& u, const NormSpec& spec);

/// Norm restricted to the outermost shell of the lattice (|k_i| = K or
/// |j| = J); a truncation diagnostic.
double tail_norm(const FourierField& u, const NormSpec& spec);

}  // namespace response::spectral
