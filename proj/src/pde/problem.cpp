#include "response/pde/problem.hpp"

#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "response/common/error.hpp"

namespace response::pde {

BetaCheck check_beta(double beta, int J) {
    if (!(beta > 0.0) || !std::isfinite(beta)) throw InputError(fmt::format("beta = {} must be positive", beta), "beta");
    BetaCheck out;
    const double r = 1.0 / std::sqrt(beta);
    const double nearest = std::round(r);
    out.accepted = !(nearest >= 1.0 && std::abs(r - nearest) <= 1e-12);
    if (!out.accepted) out.offending = static_cast<long>(nearest);

    out.min_gap = std::numeric_limits<double>::infinity();
    for (int j = 1; j <= std::max(J, 1); ++j) {
        const double jj = static_cast<double>(j) * j;
        const double gap = std::abs(beta * jj * jj - jj);
        if (gap < out.min_gap) {
            out.min_gap = gap;
            out.argmin_j = j;
        }
    }
    if (out.accepted && out.min_gap < 1e-6) {
        out.warning = fmt::format("beta = {:.17g} is nearly excluded: |beta j^4 - j^2| = {:.3e} at j = {}", beta,
                                  out.min_gap, out.argmin_j);
    }
    return out;
}

void PdeProblem::validate() const {
    if (!lattice.has_space()) throw InputError("PDE problems need a lattice with a spatial variable");
    if (lattice.n() != 1) throw InputError("PDE problems are scalar");
    const auto bc = check_beta(beta, lattice.J());
    if (!bc.accepted) {
        throw InputError(fmt::format("1/sqrt(beta) = {} is an integer, so beta j^4 - j^2 vanishes at j = {}",
                                     bc.offending, bc.offending),
                         "beta");
    }
    if (!(forcing.lattice() == lattice)) throw InputError("forcing lives on a different lattice", "forcing");
    const double zs = forcing.zero_slice_max();
    if (zs > 0.0) throw InputError(fmt::format("forcing must have zero spatial mean (|f_j=0| = {:.3e})", zs), "forcing");
    const double defect = forcing.hermitian_defect();
    if (defect > 1e-12 * std::max(1.0, forcing.max_abs())) {
        throw InputError(fmt::format("forcing is not real-valued (Hermitian defect {:.3e})", defect), "forcing");
    }
}

}  // namespace response::pde
