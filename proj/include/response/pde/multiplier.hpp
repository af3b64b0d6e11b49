#pragma once

#include <cstddef>
#include <vector>

#include "response/multiplier/domain.hpp"
#include "response/pde/problem.hpp"

namespace response::pde {

/// Symbol of N_ε at (a, j): −εa² + ia − ε(βj⁴ − j²).
cplx n_multiplier(cplx eps, double a, int j, double beta);

/// ε·N_ε⁻¹ tabulated over a lattice with a spatial variable.  The j = 0
/// slice is mapped to zero.
class NInverse {
public:
    NInverse(cplx eps, const SpectralLattice& lattice, double beta, int jobs = 1);

    cplx eps() const noexcept { return eps_; }
    double beta() const noexcept { return beta_; }
    const SpectralLattice& lattice() const noexcept { return lattice_; }
    cplx mode(std::size_t m) const { return table_[m]; }

    /// Modewise product.  V must have a zero j = 0 slice.
    FourierField apply(const FourierField& V) const;

    /// max over j ≠ 0 of |ε/N|·(1 + |k|² + j²): the exact constant of
    /// ‖ε N⁻¹ V‖_{ρ,m} ≤ C ‖V‖_{ρ,m−2} on the lattice.
    double smoothing_constant() const noexcept { return smoothing_; }
    std::size_t smoothing_mode() const noexcept { return smoothing_mode_; }
    /// max |ε/N| and max |N| over j ≠ 0.
    double sup_norm() const noexcept { return sup_; }
    double forward_sup_norm() const noexcept { return forward_sup_; }

    /// max over j ≠ 0 of |N·(table/ε) − 1|.
    double identity_defect() const;

    /// Test hook: multiplies one stored entry by `factor`.
    void perturb_mode(std::size_t m, cplx factor);

private:
    void refresh_norms();

    cplx eps_;
    SpectralLattice lattice_;
    double beta_;
    std::vector<cplx> table_;
    double smoothing_ = 0.0, sup_ = 0.0, forward_sup_ = 0.0;
    std::size_t smoothing_mode_ = 0;
};

/// One-shot version of NInverse::apply.
FourierField apply_N_inverse(cplx eps, double beta, const FourierField& V);

/// Continuous-a scan of the PDE multiplier at one ε over a ∈ [−a_max, a_max]
/// and t = j², 1 ≤ j ≤ J.
struct NScan {
    double inf_n = 0.0;      ///< inf |den|/t
    double sup_tilde = 0.0;  ///< sup (a² + t)/|den|
    double a_at_inf = 0.0, a_at_sup = 0.0;
    int j_at_inf = 0, j_at_sup = 0;
    std::size_t evaluations = 0;
};
NScan scan_n_multiplier(cplx eps, double beta, int J, double a_max = 50.0, double step = 1e-3);

/// Scan over samples of a domain: C_sup = σ·max sup_tilde, C_inf = min inf_n / σ.
struct NBound {
    double sigma = 0.0;
    double c_sup = 0.0;
    double c_inf = 0.0;
    cplx eps_at_sup{};
    int samples = 0;
};
NBound n_bound(const multiplier::EpsilonDomain& dom, double beta, int J, int samples = 9, double a_max = 50.0,
               double step = 1e-3, int jobs = 1);

/// Exact lower bound of |den(a, j)| over real a for real ε (the scalar ODE
/// infimum with λ = j² − βj⁴).
double real_inf_abs_n(double eps, int j, double beta);

/// ε = i·s: 1/|den| at the double nearest the small real root of
/// −s a² + a − s(βj⁴ − j²) = 0, maximized over 1 ≤ j ≤ J.
struct NImaginaryProbe {
    double s = 0.0;
    int j = 0;
    double a_root = 0.0;
    double inverse_norm = 0.0;
    bool has_root = false;
};
NImaginaryProbe n_imaginary_probe(double s, double beta, int J);

/// Forward growth of the undamped problem: the j-mode grows like
/// e^{t√(βj⁴ − j²)}.
struct IllPosedness {
    int j = 0;
    double rate = 0.0;           ///< √(βj⁴ − j²)
    double log10_growth = 0.0;   ///< log10 of the growth factor at time t
    double time_to_1e6 = 0.0;    ///< ln(1e6)/rate
};
IllPosedness ill_posedness_witness(double beta, int j, double t = 1.0);

}  // namespace response::pde
