#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "response/multiplier/domain.hpp"
#include "response/multiplier/linear_part.hpp"
#include "response/spectral/field.hpp"

namespace response::multiplier {

using spectral::FourierField;
using spectral::SpectralLattice;

/// Scalar factor of a Jordan block of L_ε(a): −εa² + ia + ελ.
cplx l_eps(cplx eps, double lambda, double a);

/// The block l·I + ε·N of L_ε(a) in the Jordan basis (N = ones below the
/// diagonal).
Eigen::MatrixXcd block_forward(cplx eps, double lambda, int size, double a);

/// Closed-form inverse of block_forward: lower-triangular Toeplitz with
/// (−ε)^r l^{−(r+1)} on the r-th subdiagonal.  Throws ResonanceError when l
/// vanishes.
Eigen::MatrixXcd block_inverse(cplx eps, double lambda, int size, double a);

/// L_ε(a) = −εa²I + iaI + εA.
Eigen::MatrixXcd mode_matrix(cplx eps, double a, const LinearPart& linear);

enum class Backend { automatic, dense, jordan };

/// L_ε(a)⁻¹.  dense: LU on the mode matrix; jordan: Φ·B⁻¹·Φ⁻¹ from the
/// closed-form block inverses.  automatic prefers jordan when available.
Eigen::MatrixXcd mode_inverse(cplx eps, double a, const LinearPart& linear, Backend backend = Backend::automatic);

/// Solves L_ε(a)·x = rhs.
Eigen::VectorXcd mode_solve(cplx eps, double a, const LinearPart& linear, const Eigen::VectorXcd& rhs,
                            Backend backend = Backend::automatic);

/// Spectral norm (largest singular value).
double operator_norm(const Eigen::MatrixXcd& m);

/// ε·L_ε(k·ω)⁻¹ tabulated over a lattice, applied modewise.
class ScaledInverse {
public:
    ScaledInverse(cplx eps, const LinearPart& linear, const SpectralLattice& lattice,
                  Backend backend = Backend::automatic, int jobs = 1);

    cplx eps() const noexcept { return eps_; }
    const SpectralLattice& lattice() const noexcept { return lattice_; }
    const Eigen::MatrixXcd& mode(std::size_t m) const { return table_[m]; }

    FourierField apply(const FourierField& f) const;

    /// max_k ‖ε L_ε⁻¹(k·ω)‖ over the lattice and the mode attaining it.
    double sup_norm() const noexcept { return sup_; }
    std::size_t sup_mode() const noexcept { return sup_mode_; }
    /// max_k ‖L_ε(k·ω)‖ over the lattice.
    double forward_sup_norm() const noexcept { return forward_sup_; }

    /// max_k ‖L_ε(k·ω)·(table_k/ε) − I‖_max, recomputed from the stored table.
    double identity_defect() const;

    /// Test hook: multiplies the stored inverse of one mode by `factor`.
    void perturb_mode(std::size_t m, cplx factor);

private:
    void refresh_norms();

    cplx eps_;
    LinearPart linear_;
    SpectralLattice lattice_;
    std::vector<Eigen::MatrixXcd> table_;
    double sup_ = 0.0, forward_sup_ = 0.0;
    std::size_t sup_mode_ = 0;
};

/// Coefficient k of the result is ε·L_ε(k·ω)⁻¹ f̂_k.
FourierField apply_scaled_inverse(cplx eps, const LinearPart& linear, const FourierField& f,
                                  Backend backend = Backend::automatic);

/// inf over real a of |l_ε(a)| for real ε: |ελ| when 2ε²λ ≤ 1, otherwise
/// sqrt(λ − 1/(4ε²)).
double real_inf_abs_l(double eps, double lambda);

/// Largest ‖L_ε(a)⁻¹‖ over a ∈ [−a_max, a_max]: grid of the given step
/// (plus a = 0 and a = ±√|λ|), every grid local maximum refined by Brent.
struct ScanResult {
    double sup = 0.0;
    double a_at_sup = 0.0;
    std::size_t evaluations = 0;
};
ScanResult scan_inverse_norm(cplx eps, const LinearPart& linear, double a_max, double step = 1e-3);

/// Window used for the a-scan: 2·max(√|λ|_max, max |k·ω| on the lattice).
double scan_window(const LinearPart& linear, const SpectralLattice& lattice);

struct GammaBound {
    double empirical = 0.0;  ///< max over lattice modes of ‖L_ε⁻¹(k·ω)‖
    double certified = 0.0;  ///< analytic bound (real ε) or dense-scan sup (complex ε)
    bool analytic = false;
    std::size_t argmax_mode = 0;
};

/// Bound on ‖L_ε⁻¹(a)‖ over all real a: for real ε with Jordan data
/// cond(Φ)·max over blocks of Σ_r |ε|^r / m^{r+1}, m the exact infimum of
/// |l|; otherwise the dense scan over scan_window.
struct GammaCertificate {
    double value = 0.0;
    bool analytic = false;
};
GammaCertificate gamma_certificate(cplx eps, const LinearPart& linear, const SpectralLattice& lattice);

/// Lattice supremum of ‖L_ε⁻¹‖ and its gamma_certificate.  Throws
/// CertificationError if the lattice value exceeds the bound.
GammaBound gamma_bound(cplx eps, const LinearPart& linear, const SpectralLattice& lattice);

/// Purely imaginary ε = i·s: evaluates ‖L_ε(a)⁻¹‖ = 1/σ_min at the double
/// nearest a real root of −s a² + a + s λ = 0.
struct ImaginaryProbe {
    double s = 0.0;
    double lambda = 0.0;
    double a_root = 0.0;
    double inverse_norm = 0.0;
    bool has_root = false;
};
ImaginaryProbe imaginary_axis_probe(double s, const LinearPart& linear);

}  // namespace response::multiplier
