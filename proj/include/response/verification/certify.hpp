#pragma once

#include <optional>
#include <string>
#include <vector>

#include "response/multiplier/domain.hpp"
#include "response/multiplier/multiplier.hpp"
#include "response/pde/multiplier.hpp"

namespace response::verification {

using cplx = std::complex<double>;

/// Test hook: scale the stored multiplier of one lattice mode after
/// tabulation, at every sampled ε.
struct FaultInjection {
    std::size_t mode = 0;
    cplx factor = 2.0;
};

struct CertifyRow {
    cplx eps{};
    double empirical = 0.0;  ///< lattice sup from the stored table
    double certified = 0.0;  ///< analytic (real ε) or dense-scan bound
    bool analytic = false;
    double identity_defect = 0.0;
    bool ok = true;
};

struct CertifyReport {
    std::string kind;  ///< "ode" or "pde"
    multiplier::EpsilonDomain domain;
    std::vector<CertifyRow> rows;
    /// σ·max certified bound: the measured C(λ,μ) or C(β,μ).
    double c_emp = 0.0;
    /// PDE only: min inf |N(a,t)| / σ over the samples.
    double c_inf = 0.0;
    /// 1/|multiplier| at the nearest root on the imaginary axis, s = 1.5σ.
    double imaginary_axis_norm = 0.0;
    bool axis_refused = false;
    std::vector<std::string> failures;
    bool passed() const noexcept { return failures.empty(); }
};

/// Γ bounds of the ODE multiplier over samples of the domain.  Exact
/// inequalities (real ε) and the identity defect ≤ 1e-10 are hard checks;
/// complex ε is checked against the dense scan with relative slack 1e-6.
CertifyReport certify_bounds(const multiplier::LinearPart& linear, const spectral::SpectralLattice& lattice,
                             const multiplier::EpsilonDomain& domain, int samples,
                             const std::optional<FaultInjection>& fault = std::nullopt, int jobs = 1);

/// PDE version: identity defect, exact real-ε infimum per mode, and the
/// lattice Ñ values against the dense a-scan.
CertifyReport certify_bounds(double beta, const spectral::SpectralLattice& lattice,
                             const multiplier::EpsilonDomain& domain, int samples,
                             const std::optional<FaultInjection>& fault = std::nullopt, int jobs = 1,
                             double scan_step = 1e-3);

}  // namespace response::verification
