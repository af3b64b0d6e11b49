#include "response/cli/problem_io.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <regex>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "response/common/error.hpp"

namespace response::cli {

namespace {

// Library errors name bare fields; rebase them under a document path.
[[noreturn]] void rethrow_under(const InputError& e, const std::string& base) {
    if (!e.path().empty() && e.path()[0] == '/') throw e;
    std::string msg = e.what();
    if (!e.path().empty() && msg.rfind(e.path() + ": ", 0) == 0) msg = msg.substr(e.path().size() + 2);
    throw InputError(msg, base);
}

const json& require(const json& obj, const std::string& key, const std::string& path) {
    if (!obj.contains(key)) throw InputError("missing required field", path + "/" + key);
    return obj.at(key);
}

double as_double(const json& v, const std::string& path) {
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) {
        const auto s = v.get<std::string>();
        try {
            std::size_t used = 0;
            const double x = std::stod(s, &used);
            if (used == s.size() && std::isfinite(x)) return x;
        } catch (const std::exception&) {
        }
        throw InputError(fmt::format("'{}' is not a decimal number", s), path);
    }
    throw InputError("expected a number", path);
}

int as_int(const json& v, const std::string& path) {
    if (!v.is_number_integer()) throw InputError("expected an integer", path);
    const auto x = v.get<long long>();
    if (x < -1'000'000'000LL || x > 1'000'000'000LL) throw InputError("integer out of range", path);
    return static_cast<int>(x);
}

cplx as_complex(const json& v, const std::string& path) {
    if (v.is_array()) {
        if (v.size() != 2) throw InputError("complex value must be [re, im]", path);
        return {as_double(v[0], path + "/0"), as_double(v[1], path + "/1")};
    }
    if (v.is_object()) {
        return {as_double(require(v, "re", path), path + "/re"), v.contains("im") ? as_double(v["im"], path + "/im") : 0.0};
    }
    return {as_double(v, path), 0.0};
}

std::vector<double> double_list(const json& v, const std::string& path) {
    if (!v.is_array()) throw InputError("expected an array", path);
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) out.push_back(as_double(v[i], fmt::format("{}/{}", path, i)));
    return out;
}

std::vector<int> int_list(const json& v, const std::string& path) {
    if (!v.is_array()) throw InputError("expected an array", path);
    std::vector<int> out;
    for (std::size_t i = 0; i < v.size(); ++i) out.push_back(as_int(v[i], fmt::format("{}/{}", path, i)));
    return out;
}

// Row-major flat list or nested rows.
Eigen::MatrixXd matrix(const json& v, int n, const std::string& path) {
    Eigen::MatrixXd M(n, n);
    if (v.is_number() || v.is_string()) {
        if (n != 1) throw InputError(fmt::format("scalar given but n = {}", n), path);
        M(0, 0) = as_double(v, path);
        return M;
    }
    if (!v.is_array()) throw InputError("expected a matrix", path);
    if (!v.empty() && v[0].is_array()) {
        if (static_cast<int>(v.size()) != n) throw InputError(fmt::format("expected {} rows", n), path);
        for (int i = 0; i < n; ++i) {
            const auto row = double_list(v[i], fmt::format("{}/{}", path, i));
            if (static_cast<int>(row.size()) != n) throw InputError(fmt::format("expected {} entries", n), fmt::format("{}/{}", path, i));
            for (int j = 0; j < n; ++j) M(i, j) = row[j];
        }
        return M;
    }
    const auto flat = double_list(v, path);
    if (static_cast<int>(flat.size()) != n * n) throw InputError(fmt::format("expected {} entries (row-major)", n * n), path);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) M(i, j) = flat[i * n + j];
    return M;
}

multiplier::LinearPart linear_part(const json& doc, int n) {
    const auto A = matrix(require(doc, "A", ""), n, "/A");
    try {
        if (!doc.contains("jordan")) return multiplier::LinearPart(A);
        const auto& jd = doc["jordan"];
        std::vector<multiplier::JordanBlock> blocks;
        const auto& jb = require(jd, "blocks", "/jordan");
        if (!jb.is_array()) throw InputError("expected an array", "/jordan/blocks");
        for (std::size_t i = 0; i < jb.size(); ++i) {
            const auto p = fmt::format("/jordan/blocks/{}", i);
            blocks.push_back({as_double(require(jb[i], "lambda", p), p + "/lambda"),
                              jb[i].contains("size") ? as_int(jb[i]["size"], p + "/size") : 1});
        }
        std::optional<Eigen::MatrixXd> phi;
        if (jd.contains("phi")) phi = matrix(jd["phi"], n, "/jordan/phi");
        return multiplier::LinearPart(A, std::move(blocks), std::move(phi));
    } catch (const InputError& e) {
        rethrow_under(e, doc.contains("jordan") ? "/jordan" : "/A");
    }
}

spectral::NonlinearitySpec nonlinearity(const json& doc, int n) {
    if (!doc.contains("nonlinearity")) return spectral::NonlinearitySpec::zero(n);
    const auto& nl = doc["nonlinearity"];
    const std::string path = "/nonlinearity";
    if (!nl.is_object()) throw InputError("expected an object", path);
    const auto type = require(nl, "type", path).get<std::string>();
    std::optional<double> lip;
    if (nl.contains("lip")) lip = as_double(nl["lip"], path + "/lip");

    auto spec = [&]() -> spectral::NonlinearitySpec {
        if (type == "zero") return spectral::NonlinearitySpec::zero(n);
        if (type == "polynomial") {
            const auto& c = require(nl, "coefficients", path);
            std::vector<std::vector<double>> coeffs;
            if (c.is_array() && !c.empty() && c[0].is_array()) {
                for (std::size_t i = 0; i < c.size(); ++i)
                    coeffs.push_back(double_list(c[i], fmt::format("{}/coefficients/{}", path, i)));
            } else {
                coeffs.assign(n, double_list(c, path + "/coefficients"));
            }
            if (static_cast<int>(coeffs.size()) != n)
                throw InputError(fmt::format("expected {} coefficient lists", n), path + "/coefficients");
            return lip ? spectral::NonlinearitySpec::polynomial(coeffs, *lip) : spectral::NonlinearitySpec::polynomial(coeffs);
        }
        if (type == "piecewise") {
            const auto& ps = require(nl, "pieces", path);
            if (!ps.is_array()) throw InputError("expected an array", path + "/pieces");
            std::vector<spectral::PiecewiseLinear> pieces;
            for (std::size_t i = 0; i < ps.size(); ++i) {
                const auto p = fmt::format("{}/pieces/{}", path, i);
                spectral::PiecewiseLinear pw;
                pw.breakpoints = ps[i].contains("breakpoints") ? double_list(ps[i]["breakpoints"], p + "/breakpoints")
                                                               : std::vector<double>{};
                pw.slopes = double_list(require(ps[i], "slopes", p), p + "/slopes");
                if (ps[i].contains("value_at_zero")) pw.value_at_zero = as_double(ps[i]["value_at_zero"], p + "/value_at_zero");
                try {
                    pw.validate();
                } catch (const InputError& e) {
                    rethrow_under(e, p);
                }
                pieces.push_back(std::move(pw));
            }
            if (pieces.size() == 1 && n > 1) pieces.assign(n, pieces[0]);
            if (static_cast<int>(pieces.size()) != n) throw InputError(fmt::format("expected {} pieces", n), path + "/pieces");
            return lip ? spectral::NonlinearitySpec::piecewise(pieces, *lip) : spectral::NonlinearitySpec::piecewise(pieces);
        }
        throw InputError(fmt::format("unknown type '{}' (zero, polynomial, piecewise)", type), path + "/type");
    }();
    if (nl.contains("oversample")) {
        try {
            spec.set_oversample(as_int(nl["oversample"], path + "/oversample"));
        } catch (const InputError& e) {
            rethrow_under(e, path + "/oversample");
        }
    }
    return spec;
}

spectral::FourierField forcing(const json& doc, const spectral::SpectralLattice& lattice) {
    spectral::FourierField f(lattice);
    if (!doc.contains("forcing")) return f;
    const auto& fs = doc["forcing"];
    if (!fs.is_array()) throw InputError("expected an array of terms", "/forcing");
    for (std::size_t i = 0; i < fs.size(); ++i) {
        const auto p = fmt::format("/forcing/{}", i);
        const auto k = int_list(require(fs[i], "k", p), p + "/k");
        if (static_cast<int>(k.size()) != lattice.d())
            throw InputError(fmt::format("k has {} entries, d = {}", k.size(), lattice.d()), p + "/k");
        const int j = fs[i].contains("j") ? as_int(fs[i]["j"], p + "/j") : 0;
        if (j != 0 && !lattice.has_space()) throw InputError("j given for a problem without space", p + "/j");
        const int c = fs[i].contains("component") ? as_int(fs[i]["component"], p + "/component") : 0;
        if (c < 0 || c >= lattice.n()) throw InputError(fmt::format("component must be in [0, {})", lattice.n()), p + "/component");
        if (!lattice.contains(k, j)) throw InputError(fmt::format("({}; j = {}) is outside the lattice", fmt::join(k, ", "), j), p);
        const double amp = as_double(require(fs[i], "amplitude", p), p + "/amplitude");
        const std::string type = fs[i].value("type", std::string("cos"));
        if (type == "cos") {
            f.add_cos(k, j, c, amp);
        } else if (type == "sin") {
            f.add_sin(k, j, c, amp);
        } else {
            throw InputError(fmt::format("unknown type '{}' (cos, sin)", type), p + "/type");
        }
    }
    return f;
}

multiplier::EpsilonDomain domain(const json& doc, std::optional<cplx>& value) {
    if (!doc.contains("epsilon")) throw InputError("missing required field", "/epsilon");
    const auto& e = doc["epsilon"];
    const std::string path = "/epsilon";
    const std::string kind = e.value("domain", std::string("annulus"));
    const double sigma = as_double(require(e, "sigma", path), path + "/sigma");
    multiplier::EpsilonDomain dom;
    try {
        if (kind == "cone") {
            dom = multiplier::EpsilonDomain::cone(sigma, as_double(require(e, "mu", path), path + "/mu"));
        } else if (kind == "annulus") {
            dom = multiplier::EpsilonDomain::annulus(sigma);
        } else {
            throw InputError(fmt::format("unknown domain '{}' (cone, annulus)", kind), path + "/domain");
        }
    } catch (const InputError& err) {
        rethrow_under(err, path);
    }
    if (e.contains("value")) {
        value = as_complex(e["value"], path + "/value");
        if (!dom.contains(*value, 1e-9)) {
            throw InputError(fmt::format("epsilon {}{:+}i lies outside the declared domain", value->real(), value->imag()),
                             path + "/value");
        }
    }
    return dom;
}

}  // namespace

double parse_frequency(const json& v, const std::string& path) {
    if (v.is_number()) return v.get<double>();
    if (!v.is_string()) throw InputError("expected a number or a string", path);
    static const std::regex sym(R"(^\s*(?:([0-9]+)\s*\*\s*)?(sqrt2|sqrt3|sqrt5|golden)\s*$)");
    const auto s = v.get<std::string>();
    std::smatch m;
    if (std::regex_match(s, m, sym)) {
        const double factor = m[1].matched ? std::stod(m[1].str()) : 1.0;
        const auto name = m[2].str();
        double base = std::numbers::phi;
        if (name == "sqrt2") base = std::numbers::sqrt2;
        if (name == "sqrt3") base = std::numbers::sqrt3;
        if (name == "sqrt5") base = std::sqrt(5.0);
        return factor * base;
    }
    return as_double(v, path);
}

json read_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError(fmt::format("cannot open {}", path.string()), path.string());
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw InputError(fmt::format("not valid JSON: {}", e.what()), path.string());
    }
}

ProblemFile parse_problem(const json& doc) {
    if (!doc.is_object()) throw InputError("problem document must be an object", "/");
    try {
        const auto kind = require(doc, "kind", "").get<std::string>();
        if (kind != "ode" && kind != "pde") throw InputError(fmt::format("unknown kind '{}' (ode, pde)", kind), "/kind");

        const auto& om = require(doc, "omega", "");
        if (!om.is_array() || om.empty()) throw InputError("expected a non-empty array", "/omega");
        std::vector<double> omega;
        for (std::size_t i = 0; i < om.size(); ++i) omega.push_back(parse_frequency(om[i], fmt::format("/omega/{}", i)));
        if (doc.contains("d") && as_int(doc["d"], "/d") != static_cast<int>(omega.size()))
            throw InputError(fmt::format("d = {} but omega has {} entries", doc["d"].dump(), omega.size()), "/d");

        const int K = as_int(require(doc, "K", ""), "/K");
        if (K < 1) throw InputError("K must be ≥ 1", "/K");
        const int n = doc.contains("n") ? as_int(doc["n"], "/n") : 1;
        if (n < 1) throw InputError("n must be ≥ 1", "/n");

        std::vector<std::string> warnings;
        std::optional<cplx> value;
        auto dom = domain(doc, value);

        auto make_lattice = [&](std::optional<int> J) {
            try {
                return spectral::SpectralLattice(omega, K, n, J);
            } catch (const ResonanceError& e) {
                throw InputError(fmt::format("non-resonance fails on the lattice: k = ({}) ({})", fmt::join(e.k(), ", "), e.what()),
                                 "/omega");
            } catch (const InputError& e) {
                rethrow_under(e, "/");
            }
        };

        if (kind == "ode") {
            if (doc.contains("J")) warnings.push_back("J ignored for an ODE problem");
            if (doc.contains("beta")) warnings.push_back("beta ignored for an ODE problem");
            auto lattice = make_lattice(std::nullopt);
            ode::OdeProblem prob{lattice, linear_part(doc, n), nonlinearity(doc, n), forcing(doc, lattice)};
            try {
                prob.validate();
            } catch (const InputError& e) {
                rethrow_under(e, "/forcing");
            }
            return {std::move(prob), dom, value, doc, std::move(warnings)};
        }

        if (n != 1) throw InputError("the PDE is scalar (n = 1)", "/n");
        const int J = as_int(require(doc, "J", ""), "/J");
        if (J < 1) throw InputError("J must be ≥ 1", "/J");
        const double beta = as_double(require(doc, "beta", ""), "/beta");
        const auto bc = pde::check_beta(beta, J);
        if (!bc.accepted) {
            throw InputError(fmt::format("beta = {} is not admissible: 1/sqrt(beta) = {} is an integer, so "
                                         "beta j^4 - j^2 vanishes at j = {}",
                                         beta, bc.offending, bc.offending),
                             "/beta");
        }
        if (!bc.warning.empty()) warnings.push_back(bc.warning);
        if (doc.contains("nonlinearity")) warnings.push_back("nonlinearity ignored: the PDE term is (u^2)_xx");
        if (doc.contains("A")) warnings.push_back("A ignored for a PDE problem");
        auto lattice = make_lattice(J);
        pde::PdeProblem prob{lattice, beta, forcing(doc, lattice)};
        try {
            prob.validate();
        } catch (const InputError& e) {
            rethrow_under(e, "/forcing");
        }
        return {std::move(prob), dom, value, doc, std::move(warnings)};
    } catch (const json::exception& e) {
        throw InputError(fmt::format("schema type error: {}", e.what()), "/");
    }
}

ProblemFile parse_problem(const std::filesystem::path& path) {
    return parse_problem(read_json(path));
}

}  // namespace response::cli
