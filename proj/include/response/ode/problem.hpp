#pragma once

#include <complex>
#include <string>
#include <vector>

#include "response/multiplier/linear_part.hpp"
#include "response/spectral/field.hpp"
#include "response/spectral/nonlinearity.hpp"

namespace response::ode {

using cplx = std::complex<double>;
using multiplier::LinearPart;
using spectral::FourierField;
using spectral::NonlinearitySpec;
using spectral::NormSpec;
using spectral::SpectralLattice;

/// ε x'' + x' + ε (A x + ĝ(x)) = ε f(ωt), solved for the hull U with
/// x(t) = U(ωt).
struct OdeProblem {
    SpectralLattice lattice;
    LinearPart linear;
    NonlinearitySpec g_hat;
    FourierField forcing;

    /// Shapes agree, forcing is real and has zero mean.
    void validate() const;
};

/// local: ĝ vanishes to second order at 0, contraction only in a ball
/// (iterates leaving it abort the solve).  global: ĝ globally Lipschitz
/// with small constant, no ball check.
enum class Hypothesis { local, global };

struct SolverConfig {
    double tol = 1e-12;
    int max_iter = 200;
    double ball_radius = 1.0;
    NormSpec norm{};
    Hypothesis hypothesis = Hypothesis::local;
    /// Ratios recorded before this iteration are not required to be < 1.
    int burn_in = 2;
    int jobs = 1;

    void validate() const;
};

enum class Status { converged, max_iter, left_ball, resonant, failed };

std::string to_string(Status s);
std::string to_string(Hypothesis h);

struct SolveReport {
    Status status = Status::failed;
    std::string message;
    cplx eps{};
    NormSpec norm{};
    int iterations = 0;
    std::vector<double> increments;  ///< ‖U_{n+1} − U_n‖
    std::vector<double> ratios;      ///< increments[n+1] / increments[n]
    double fixed_point_residual = 0.0;  ///< ‖U − T_ε(U)‖ of the returned U
    double residual = 0.0;              ///< equation residual of the returned U
    double kappa = 0.0;                 ///< 1 + max ‖L_ε(k·ω)‖
    double c_emp = 0.0;                 ///< max ‖ε L_ε⁻¹(k·ω)‖
    double lip_ball = 0.0;              ///< Lip(ĝ) on the ball (pointwise bound)
    double first_iterate_norm = 0.0;    ///< ‖ε L_ε⁻¹ f‖
    bool smallness_held = false;        ///< first iterate within r/2
    bool contraction_held = false;      ///< c_emp·lip ≤ 1/2 (local) or < 1 (global)
    double sol_norm = 0.0;
    double tail_norm = 0.0;
    double aliasing = 0.0;  ///< compose_aliasing of the solution

    bool converged() const noexcept { return status == Status::converged; }
};

}  // namespace response::ode
