#pragma once

#include <complex>
#include <vector>

namespace response::multiplier {

using cplx = std::complex<double>;

/// Admissible ε: the cone Ω(σ,μ) = {Re ε ≥ μ|Im ε|, σ ≤ |ε| ≤ 2σ} or the
/// real annulus σ ≤ |ε| ≤ 2σ.
struct EpsilonDomain {
    enum class Kind { complex_cone, real_annulus };

    Kind kind = Kind::real_annulus;
    double sigma = 0.01;
    double mu = 0.0;  ///< cone only

    static EpsilonDomain cone(double sigma, double mu);
    static EpsilonDomain annulus(double sigma);

    void validate() const;
    /// Membership with relative slack on the inequalities.
    bool contains(cplx eps, double slack = 1e-12) const;
    /// Half-aperture of the cone, atan(1/μ).
    double half_angle() const;
};

/// Deterministic samples of the domain.  The first samples are anchors on
/// the circle |ε| = 1.5σ, the boundary rays and the arcs |ε| = σ, 2σ; the
/// rest fill a polar grid.  Annulus samples alternate between the
/// positive and negative halves.
std::vector<cplx> sample_domain(const EpsilonDomain& dom, int count);

}  // namespace response::multiplier
