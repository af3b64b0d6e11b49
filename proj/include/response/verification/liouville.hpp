#pragma once

#include <string>
#include <vector>

#include "response/ode/probes.hpp"

namespace response::verification {

/// Continued fraction α = [0; q₁, a₂, …] whose convergent denominators
/// obey q_{n+1} ≥ exp(q_n²); ω = (1, α).
struct LiouvilleSpec {
    int levels = 1;
    long q1 = 4;
    /// Witnesses must satisfy |k·ω| ≤ c·exp(−q_n²).
    double c = 1.0;
};

struct Witness {
    int level = 0;
    std::string p, q;  ///< decimal, may exceed 64 bits
    std::vector<int> k;  ///< (−p, q) when both fit in int, else empty
    double log10_abs_kw = 0.0;  ///< log10 |k·ω|, extended precision
    double log10_bound = 0.0;   ///< log10 (c·exp(−q²))
    bool verified = false;
    /// |k·ω| evaluated in double agrees with the extended value to 1e-6.
    bool usable_in_double = false;
};

struct LiouvilleResult {
    std::vector<double> omega;
    std::string alpha;  ///< leading digits of α
    std::vector<Witness> witnesses;
    int levels_built = 0;
    std::string truncation;  ///< why fewer levels than requested were built
};

/// levels = 0 gives the fallback ω = (1, √2) with no witnesses.  levels > 4
/// is rejected.
LiouvilleResult build_liouville(const LiouvilleSpec& spec);

/// Exhaustive scan of 0 < |k| ≤ radius (Euclidean) in extended precision:
/// the smallest |k·ω|·e^{|k|} and the k attaining it.  Any value ≤ 1 is a
/// witness of |k·ω| ≤ e^{−|k|}.
struct ControlScan {
    double min_scaled = 0.0;
    std::vector<int> argmin;
    int witnesses = 0;
};
ControlScan control_scan(const std::vector<double>& omega, double radius = 50.0);

/// ω = (1, (1+√5)/2).
std::vector<double> golden_omega();

/// Scalar linear-part ODE on ω with forcing e^{−ρ|k|₁}·cos(k·θ) on each
/// given wavevector; ĝ taken from `g`.
ode::OdeProblem witness_problem(const std::vector<double>& omega, const std::vector<std::vector<int>>& ks, int K,
                                double rho, spectral::NonlinearitySpec g, double lambda = 1.0);

struct QuotientRow {
    double eps = 0.0, eps_next = 0.0;
    double quotient = 0.0;  ///< ‖U_ε − U_ε'‖/|ε − ε'| in L²
    /// Cancellation-free modewise value i a f̂ / (l_ε l_ε') for ĝ = 0 and
    /// A = λ; NaN otherwise.
    double closed_form = 0.0;
    double relative_error = 0.0;
};

struct NondiffResult {
    std::vector<QuotientRow> rows;
    /// Growth of the quotient per decade of ε between consecutive rows.
    std::vector<double> growth_per_decade;
    double min_growth = 0.0, max_growth = 0.0;
    /// |f̂_k|/|k·ω| for every forced mode with k > 0 (the ε → 0 limit).
    std::vector<double> single_mode_prediction;
};

/// Solves along the real ladder (geometric toward 0) and tabulates the
/// difference quotients between consecutive rungs.  Throws NumericalError
/// when a rung does not converge.
NondiffResult nondiff_probe(const ode::OdeProblem& prob, const std::vector<double>& ladder,
                            const ode::SolverConfig& cfg);

}  // namespace response::verification
