#include <algorithm>
#include <cmath>
#include <numbers>
#include <limits>
#include <vector>

#include <fmt/format.h>
#include <gsl/gsl_errno.h>
#include <gsl/gsl_odeiv2.h>

#include "response/common/error.hpp"
#include "response/ode/probes.hpp"
#include "response/spectral/operators.hpp"
#include "response/spectral/transform.hpp"

namespace response::ode {

namespace {

std::vector<double> angles(const std::vector<double>& omega, double t) {
    std::vector<double> th(omega.size());
    for (std::size_t i = 0; i < omega.size(); ++i) th[i] = std::fmod(omega[i] * t, 2 * std::numbers::pi);
    return th;
}

// State y = [x; x'].
struct System {
    double eps;
    const OdeProblem* prob;
    FourierField dforcing;
};

int rhs(double t, const double y[], double dydt[], void* params) {
    const auto& sys = *static_cast<const System*>(params);
    const auto* prob = sys.prob;
    const int n = prob->lattice.n();
    const auto f = spectral::evaluate(prob->forcing, angles(prob->lattice.omega(), t));
    std::vector<cplx> u(n), g(n);
    for (int i = 0; i < n; ++i) u[i] = y[i];
    prob->g_hat.apply(u, g);
    const auto& A = prob->linear.A();
    for (int i = 0; i < n; ++i) {
        double ax = 0.0;
        for (int j = 0; j < n; ++j) ax += A(i, j) * y[j];
        dydt[i] = y[n + i];
        dydt[n + i] = f[i].real() - y[n + i] / sys.eps - ax - g[i].real();
    }
    return GSL_SUCCESS;
}

int jacobian(double t, const double y[], double* dfdy, double dfdt[], void* params) {
    const auto& sys = *static_cast<const System*>(params);
    const auto* prob = sys.prob;
    const int n = prob->lattice.n();
    const int dim = 2 * n;
    std::vector<cplx> u(n), dg(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i) u[i] = y[i];
    prob->g_hat.jacobian(u, dg);
    const auto& A = prob->linear.A();
    std::fill(dfdy, dfdy + dim * dim, 0.0);
    for (int i = 0; i < n; ++i) {
        dfdy[i * dim + n + i] = 1.0;
        dfdy[(n + i) * dim + n + i] = -1.0 / sys.eps;
        for (int j = 0; j < n; ++j) dfdy[(n + i) * dim + j] = -A(i, j) - dg[i * n + j].real();
    }
    const auto df = spectral::evaluate(sys.dforcing, angles(prob->lattice.omega(), t));
    for (int i = 0; i < n; ++i) {
        dfdt[i] = 0.0;
        dfdt[n + i] = df[i].real();
    }
    return GSL_SUCCESS;
}

}  // namespace

TimeCrosscheck time_integration_crosscheck(double eps, const OdeProblem& prob, const FourierField& U, double horizon,
                                           double perturbation, double t_start, double sample_dt, double abs_tol,
                                           double rel_tol) {
    if (!(eps > 0.0)) throw InputError("time integration needs real eps > 0", "eps");
    if (!(horizon > 0.0) || !(sample_dt > 0.0)) throw InputError("horizon and sample step must be positive");
    const int n = prob.lattice.n();
    const auto& omega = prob.lattice.omega();
    const auto dU = spectral::directional_derivative(U);

    System sys{eps, &prob, spectral::directional_derivative(prob.forcing)};

    auto initial = [&](double shift) {
        std::vector<double> x(2 * n);
        const auto u0 = spectral::evaluate(U, angles(omega, 0.0));
        const auto v0 = spectral::evaluate(dU, angles(omega, 0.0));
        for (int i = 0; i < n; ++i) {
            x[i] = u0[i].real() + shift;
            x[n + i] = v0[i].real();
        }
        return x;
    };
    auto distance = [&](const std::vector<double>& x, double t) {
        const auto u = spectral::evaluate(U, angles(omega, t));
        double d = 0.0;
        for (int i = 0; i < n; ++i) d = std::max(d, std::abs(x[i] - u[i].real()));
        return d;
    };

    TimeCrosscheck out;
    gsl_set_error_handler_off();
    gsl_odeiv2_system ode{rhs, jacobian, static_cast<std::size_t>(2 * n), &sys};
    auto run = [&](std::vector<double> y, auto&& observe) {
        // BDF handles the 1/ε damping without the step restriction of explicit schemes.
        gsl_odeiv2_driver* drv = gsl_odeiv2_driver_alloc_y_new(&ode, gsl_odeiv2_step_msbdf, 1e-3 * eps, abs_tol, rel_tol);
        if (drv == nullptr) throw NumericalError("time integration: driver allocation failed");
        double t = 0.0;
        const auto samples = static_cast<std::size_t>(std::ceil(horizon / sample_dt - 1e-9));
        for (std::size_t k = 1; k <= samples; ++k) {
            const double ti = std::min(horizon, k * sample_dt);
            const int status = gsl_odeiv2_driver_apply(drv, &t, ti, y.data());
            if (status != GSL_SUCCESS) {
                gsl_odeiv2_driver_free(drv);
                throw NumericalError(fmt::format("time integration failed at t = {:.6g}: {}", t, gsl_strerror(status)));
            }
            observe(y, t);
        }
        out.steps += drv->n;
        gsl_odeiv2_driver_free(drv);
        return y;
    };

    run(initial(0.0), [&](const std::vector<double>& y, double t) {
        if (t >= t_start - 1e-12) out.tracking_error = std::max(out.tracking_error, distance(y, t));
    });
    const auto yp = run(initial(perturbation), [](const std::vector<double>&, double) {});
    out.attraction_error = distance(yp, horizon);

    // Slowest root of ε r² + r + ελ = 0 over the spectrum of A.
    double slow = -std::numeric_limits<double>::infinity(), weight = 1.0;
    for (double lam : prob.linear.eigenvalues()) {
        const double disc = 1 - 4 * eps * eps * lam;
        double r1, r2;
        if (disc >= 0) {
            r1 = (-1 + std::sqrt(disc)) / (2 * eps);
            r2 = (-1 - std::sqrt(disc)) / (2 * eps);
        } else {
            r1 = r2 = -1 / (2 * eps);
        }
        if (r1 > slow) {
            slow = r1;
            weight = r1 != r2 ? std::abs(r2 / (r2 - r1)) : 1.0;
        }
    }
    out.slow_rate = slow;
    out.predicted_attraction = std::abs(perturbation) * weight * std::exp(slow * horizon);
    return out;
}

}  // namespace response::ode
