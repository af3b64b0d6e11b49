#pragma once

#include "response/ode/problem.hpp"
#include "response/pde/problem.hpp"

namespace response::verification {

using cplx = std::complex<double>;
using spectral::FourierField;

struct NewtonResult {
    FourierField solution;
    int iterations = 0;
    double residual = 0.0;  ///< L² norm of the truncated-system residual
    std::size_t unknowns = 0;
};

/// Damped Newton on the full truncated coefficient system of the ODE at
/// cutoff K_small (forcing restricted to that lattice), dense Jacobian with
/// the nonlinearity's derivative taken by grid collocation.  Throws
/// NumericalError when the Jacobian is singular (with its smallest singular
/// value) or the residual does not reach 1e-12.
NewtonResult newton_oracle(cplx eps, const ode::OdeProblem& prob, int K_small);

/// Same for the PDE on the lattice with cutoffs K_small (angles) and
/// J_small (space).  The unknowns are the j ≠ 0 modes.
NewtonResult newton_oracle(cplx eps, const pde::PdeProblem& prob, int K_small, int J_small);

}  // namespace response::verification
