#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <vector>

namespace response::spectral {

using cplx = std::complex<double>;

/// Smallest |k·ω| over 0 < |k|₁ ≤ bound and the vector attaining it.
/// The argmin is the shortest such k, sign-normalized so its first nonzero
/// entry is positive.
struct NonResonance {
    double min_abs = 0.0;
    std::vector<int> argmin;
    bool resonant = false;  ///< min_abs is at roundoff level of the dot product
};

NonResonance check_nonresonance(std::span<const double> omega, int l1_bound);

/// Truncated Fourier index set over T^d (optionally × T for a spatial
/// variable): |k_i| ≤ K for each angle, |j| ≤ J for the spatial index.
///
/// Modes are stored row-major over (k_1, …, k_d[, j]) with offsets K (J),
/// so the mode of (−k, −j) is num_modes() − 1 − m.  The frequency vector
/// is checked for non-resonance on |k|₁ ≤ 2K at construction, which covers
/// every wavevector a product of two lattice fields can produce along a
/// coordinate axis.
///
/// Copies are cheap: per-mode tables are shared and immutable.
class SpectralLattice {
public:
    /// Angular lattice T^d with n-vector values.
    static SpectralLattice torus(std::vector<double> omega, int K, int n = 1);
    /// Scalar lattice over T^d × T with spatial cutoff J.
    static SpectralLattice torus_with_space(std::vector<double> omega, int K, int J);

    SpectralLattice(std::vector<double> omega, int K, int n, std::optional<int> J);

    int d() const noexcept;
    int K() const noexcept;
    int J() const noexcept;  ///< 0 without a spatial variable
    int n() const noexcept;
    bool has_space() const noexcept;
    int rank() const noexcept { return d() + (has_space() ? 1 : 0); }
    const std::vector<double>& omega() const noexcept;

    /// Per-dimension extents 2K+1 (…, 2J+1).
    std::vector<int> extents() const;
    std::size_t num_modes() const noexcept;
    std::size_t size() const noexcept { return num_modes() * static_cast<std::size_t>(n()); }

    std::size_t zero_mode() const noexcept { return num_modes() / 2; }
    std::size_t mirror(std::size_t mode) const noexcept { return num_modes() - 1 - mode; }

    double k_dot_omega(std::size_t mode) const noexcept;
    /// |k|₁ + |j|, the exponent of the analytic weight.
    int l1(std::size_t mode) const noexcept;
    /// |k|² + j² (Euclidean), the base of the Sobolev weight.
    int euclid_sq(std::size_t mode) const noexcept;
    int j(std::size_t mode) const noexcept;
    std::vector<int> k(std::size_t mode) const;
    /// True when some |k_i| = K or |j| = J.
    bool on_boundary(std::size_t mode) const;

    bool contains(std::span<const int> k, int j = 0) const noexcept;
    std::size_t index_of(std::span<const int> k, int j = 0) const;

    /// Smallest |k·ω| found by the construction-time scan.
    const NonResonance& nonresonance() const noexcept;

    /// Same ω and n with different cutoffs.
    SpectralLattice with_cutoff(int K, std::optional<int> J = std::nullopt) const;

    friend bool operator==(const SpectralLattice& a, const SpectralLattice& b);

private:
    struct Tables;
    std::shared_ptr<const Tables> tables_;
};

}  // namespace response::spectral
