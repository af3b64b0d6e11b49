#pragma once

#include <numbers>
#include <vector>

#include "response/ode/problem.hpp"

namespace testing {

using response::ode::OdeProblem;
using response::spectral::NonlinearitySpec;

/// x'' ε + x' + ε(λx + ĝ(x)) = ε·amp·cos θ₁ on T^d.
inline OdeProblem scalar_problem(NonlinearitySpec g, double amp = 1.0, int K = 16,
                                 std::vector<double> omega = {1.0}, double lambda = 1.0) {
    const auto lat = response::spectral::SpectralLattice::torus(omega, K, 1);
    response::spectral::FourierField f(lat);
    std::vector<int> k(omega.size(), 0);
    k[0] = 1;
    f.add_cos(k, 0, 0, amp);
    return {lat, response::multiplier::LinearPart::scalar(lambda), std::move(g), f};
}

inline NonlinearitySpec cubic(double c = 0.1) { return NonlinearitySpec::polynomial({{0, 0, 0, c}}); }

/// The cubic example: λ = 1, ĝ = 0.1x³, f = 0.2 cos θ, ω = 1.
inline OdeProblem cubic_problem(int K = 16) { return scalar_problem(cubic(), 0.2, K); }

}  // namespace testing

#include "response/pde/problem.hpp"

namespace testing {

using response::pde::PdeProblem;

/// amp·cos θ₁·cos x = (amp/2)[cos(θ₁ + x) + cos(θ₁ − x)].
inline response::spectral::FourierField cos_theta_cos_x(const response::spectral::SpectralLattice& lat, double amp) {
    response::spectral::FourierField u(lat);
    std::vector<int> k(lat.d(), 0);
    k[0] = 1;
    u.add_cos(k, 1, 0, amp / 2);
    u.add_cos(k, -1, 0, amp / 2);
    return u;
}

/// β = 2, ω = (1, √2), f = amp·cos θ₁·cos x.
inline PdeProblem boussinesq_problem(int K, int J, double amp = 1e-3, double beta = 2.0) {
    const auto lat = response::spectral::SpectralLattice::torus_with_space({1.0, std::numbers::sqrt2}, K, J);
    return {lat, beta, cos_theta_cos_x(lat, amp)};
}

}  // namespace testing
