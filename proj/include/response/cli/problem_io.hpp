#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "response/multiplier/domain.hpp"
#include "response/ode/problem.hpp"
#include "response/pde/problem.hpp"

namespace response::cli {

using json = nlohmann::json;
using cplx = std::complex<double>;

/// A loaded problem document.
struct ProblemFile {
    std::variant<ode::OdeProblem, pde::PdeProblem> problem;
    multiplier::EpsilonDomain domain;
    std::optional<cplx> eps;  ///< "epsilon.value"
    json document;            ///< the parsed document, keys sorted
    std::vector<std::string> warnings;

    bool is_pde() const noexcept { return problem.index() == 1; }
    const ode::OdeProblem& ode() const { return std::get<0>(problem); }
    const pde::PdeProblem& pde() const { return std::get<1>(problem); }
    /// The working ε: epsilon.value, else 1.5σ.
    cplx working_eps() const { return eps.value_or(cplx(1.5 * domain.sigma, 0.0)); }
};

/// Frequencies: numbers, decimal strings, or one of sqrt2, sqrt3, sqrt5,
/// golden (optionally prefixed by an integer factor, e.g. "2*sqrt2").
double parse_frequency(const json& v, const std::string& path);

/// Loads and validates a problem.  Schema violations and failed invariants
/// raise InputError naming the JSON path; a resonant ω raises InputError
/// naming the offending k.
ProblemFile parse_problem(const json& doc);
ProblemFile parse_problem(const std::filesystem::path& path);

/// Reads a JSON file (InputError on I/O or syntax errors).
json read_json(const std::filesystem::path& path);

}  // namespace response::cli
