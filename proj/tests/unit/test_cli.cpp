#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <string>

#include "response/cli/run.hpp"
#include "response/common/error.hpp"

using namespace response;
using namespace response::cli;
namespace fs = std::filesystem;

namespace {

const fs::path source_dir = RESPONSE_SOURCE_DIR;

fs::path scratch(const std::string& name) {
    const auto p = fs::temp_directory_path() / "response_cli_tests" / name;
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    return {std::istreambuf_iterator<char>(in), {}};
}

json base_ode() {
    return {{"kind", "ode"},
            {"K", 4},
            {"omega", {1}},
            {"A", 1},
            {"forcing", {{{"k", {1}}, {"amplitude", 0.5}}}},
            {"epsilon", {{"sigma", 0.05}}}};
}

std::string input_error_path(const json& doc) {
    try {
        parse_problem(doc);
    } catch (const InputError& e) {
        return e.path();
    }
    return "<accepted>";
}

RunConfig config_for(const std::string& command, const fs::path& problem_file, const std::string& out) {
    RunConfig cfg;
    cfg.command = command;
    cfg.problem = read_json(problem_file);
    cfg.output_dir = scratch(out);
    cfg.seed = 7;
    return cfg;
}

}  // namespace

TEST_SUITE("problem files") {
    TEST_CASE("minimal scalar file") {
        const auto pf = parse_problem(source_dir / "tests/data/minimal.json");
        REQUIRE_FALSE(pf.is_pde());
        CHECK(pf.ode().lattice.n() == 1);
        CHECK(pf.ode().lattice.d() == 1);
        CHECK(pf.ode().g_hat.is_zero());
        CHECK(pf.working_eps().real() == doctest::Approx(0.075));
    }

    TEST_CASE("beta = 0.25 is rejected") {
        try {
            parse_problem(source_dir / "tests/data/beta_quarter.json");
            FAIL("accepted");
        } catch (const InputError& e) {
            CHECK(e.path() == "/beta");
            CHECK(std::string(e.what()).find("not admissible") != std::string::npos);
            CHECK(std::string(e.what()).find("j = 2") != std::string::npos);
        }
    }

    TEST_CASE("resonant frequency names the wavevector") {
        try {
            parse_problem(source_dir / "tests/data/resonant.json");
            FAIL("accepted");
        } catch (const InputError& e) {
            CHECK(e.path() == "/omega");
            CHECK(std::string(e.what()).find("k = (1, -2)") != std::string::npos);
        }
    }

    TEST_CASE("symbolic frequencies") {
        CHECK(parse_frequency("sqrt2", "") == doctest::Approx(1.4142135623730951).epsilon(1e-16));
        CHECK(parse_frequency("golden", "") == doctest::Approx(1.618033988749895).epsilon(1e-16));
        CHECK(parse_frequency("2*sqrt3", "") == doctest::Approx(3.4641016151377544).epsilon(1e-16));
        CHECK(parse_frequency("0.75", "") == 0.75);
        CHECK(parse_frequency(2, "") == 2.0);
        CHECK_THROWS_AS(parse_frequency("pi", "/omega/0"), InputError);
    }

    TEST_CASE("schema errors carry paths") {
        auto d = base_ode();
        d.erase("K");
        CHECK(input_error_path(d) == "/K");

        d = base_ode();
        d["forcing"][0]["type"] = "tan";
        CHECK(input_error_path(d) == "/forcing/0/type");

        d = base_ode();
        d["forcing"][0]["k"] = {9};
        CHECK(input_error_path(d) == "/forcing/0");

        d = base_ode();
        d["omega"] = {1, "0.x"};
        CHECK(input_error_path(d) == "/omega/1");

        d = base_ode();
        d["nonlinearity"] = {{"type", "spline"}};
        CHECK(input_error_path(d) == "/nonlinearity/type");

        d = base_ode();
        d["epsilon"]["value"] = 1.0;
        CHECK(input_error_path(d) == "/epsilon/value");

        d = base_ode();
        d["d"] = 2;
        CHECK(input_error_path(d) == "/d");

        d = base_ode();
        d["kind"] = "sde";
        CHECK(input_error_path(d) == "/kind");
    }

    TEST_CASE("invariants checked at load") {
        auto d = base_ode();
        d["forcing"] = {{{"k", {0}}, {"amplitude", 1.0}}};  // nonzero mean
        CHECK(input_error_path(d) != "<accepted>");

        d = base_ode();
        d["A"] = 0;  // zero eigenvalue
        CHECK(input_error_path(d) == "/A");

        d = base_ode();
        d["n"] = 2;
        d["A"] = {{2, 0}, {1, 2}};
        d["jordan"] = {{"blocks", {{{"lambda", 2}, {"size", 2}}}}, {"phi", {1, 0, 0, 3}}};  // wrong Φ
        CHECK(input_error_path(d) == "/jordan");

        d["jordan"]["phi"] = {1, 0, 0, 1};
        CHECK(input_error_path(d) == "<accepted>");

        auto p = read_json(source_dir / "problems/boussinesq.json");
        p["forcing"].push_back({{"k", {1, 0}}, {"j", 0}, {"amplitude", 1e-3}});
        CHECK(input_error_path(p) != "<accepted>");
    }

    TEST_CASE("polynomial coefficients broadcast and piecewise pieces") {
        auto d = base_ode();
        d["n"] = 2;
        d["A"] = {1, 0, 0, 2};
        d["nonlinearity"] = {{"type", "polynomial"}, {"coefficients", {0, 0, 0, 0.1}}};
        const auto pf = parse_problem(d);
        CHECK(pf.ode().g_hat.coefficients().size() == 2u);

        d["nonlinearity"] = {{"type", "piecewise"},
                             {"pieces", {{{"breakpoints", {0}}, {"slopes", {-0.05, 0.05}}}}},
                             {"lip", 0.05}};
        const auto pw = parse_problem(d);
        CHECK(pw.ode().g_hat.pieces().size() == 2u);
        CHECK(pw.ode().g_hat.lip_hat() == 0.05);
    }
}

TEST_SUITE("run") {
    TEST_CASE("solve-ode on the shipped cubic example") {
        auto cfg = config_for("solve-ode", source_dir / "problems/cubic.json", "solve");
        REQUIRE(run(cfg) == exit_ok);
        const auto r = read_json(cfg.output_dir / "result.json");
        CHECK(r["report"]["status"] == "converged");
        CHECK(r["report"]["ratios"].size() >= 2u);
        for (const auto& q : r["report"]["ratios"]) CHECK(q.get<double>() < 1.0);
        CHECK(r["report"]["residual"].get<double>() <= 1e-12);
        CHECK(r["seed"] == 7);
        CHECK(r["lattice"]["K"] == 16);
        CHECK(r["report"]["norm"].contains("rho"));
        CHECK(r["problem_hash"].get<std::string>().size() == 64u);
        CHECK(fs::exists(cfg.output_dir / "spectrum.csv"));
        CHECK(fs::exists(cfg.output_dir / "metadata.json"));
        CHECK_FALSE(fs::exists(cfg.output_dir / "error.json"));
        const auto csv = slurp(cfg.output_dir / "spectrum_by_magnitude.csv");
        CHECK(csv.rfind("k1,re,im,abs,weight_rho_m\n", 0) == 0);
        // Largest coefficients are the forced modes ±1.
        const auto second = csv.substr(csv.find('\n') + 1, 3);
        CHECK((second == "-1," || second == "1,0"));
    }

    TEST_CASE("results are independent of the thread count") {
        auto a = config_for("solve-pde", source_dir / "problems/boussinesq.json", "det_a");
        auto b = config_for("solve-pde", source_dir / "problems/boussinesq.json", "det_b");
        a.jobs = 1;
        b.jobs = 3;
        REQUIRE(run(a) == exit_ok);
        REQUIRE(run(b) == exit_ok);
        CHECK(slurp(a.output_dir / "result.json") == slurp(b.output_dir / "result.json"));
        CHECK(slurp(a.output_dir / "spectrum.csv") == slurp(b.output_dir / "spectrum.csv"));
        CHECK(slurp(a.output_dir / "metadata.json") != slurp(b.output_dir / "metadata.json"));
    }

    TEST_CASE("verify passes, and fails with an injected fault") {
        auto cfg = config_for("verify", source_dir / "problems/cubic.json", "verify");
        CHECK(run(cfg) == exit_ok);
        cfg.inject_fault = "multiplier";
        CHECK(run(cfg) == exit_certification);
        const auto err = read_json(cfg.output_dir / "error.json");
        CHECK(err["type"] == "certification");
        CHECK(err["exit_code"] == 3);
    }

    TEST_CASE("sweep tolerates a non-convergent point") {
        auto cfg = config_for("sweep", source_dir / "problems/cubic_ladder.json", "sweep");
        cfg.problem["epsilon"]["ladder"] = {0.05, 20.0};
        REQUIRE(run(cfg) == exit_ok);
        const auto r = read_json(cfg.output_dir / "result.json");
        CHECK(r["flagged"] == 1);
        int flagged = 0;
        for (const auto& row : r["rows"]) flagged += row["flagged"].get<bool>() ? 1 : 0;
        CHECK(flagged == 1);
        CHECK(fs::exists(cfg.output_dir / "sweep.csv"));
    }

    TEST_CASE("non-convergence exits 2") {
        auto cfg = config_for("solve-ode", source_dir / "problems/cubic.json", "noconv");
        cfg.solver = {{"max_iter", 1}};
        CHECK(run(cfg) == exit_not_converged);
        CHECK(fs::exists(cfg.output_dir / "error.json"));
        CHECK(read_json(cfg.output_dir / "result.json")["report"]["status"] == "max_iter");
    }

    TEST_CASE("input errors exit 4 with an error document") {
        auto cfg = config_for("solve-ode", source_dir / "tests/data/resonant.json", "resonant");
        CHECK(run(cfg) == exit_input);
        const auto err = read_json(cfg.output_dir / "error.json");
        CHECK(err["path"] == "/problem/omega");
        CHECK(err["message"].get<std::string>().find("k = (1, -2)") != std::string::npos);

        cfg.command = "integrate";
        CHECK(run(cfg) == exit_input);

        auto wrong = config_for("solve-pde", source_dir / "problems/cubic.json", "wrong_kind");
        CHECK(run(wrong) == exit_input);

        auto bad_solver = config_for("solve-ode", source_dir / "problems/cubic.json", "bad_solver");
        bad_solver.solver = {{"tolerance", 1e-3}};
        CHECK(run(bad_solver) == exit_input);
        CHECK(read_json(bad_solver.output_dir / "error.json")["path"] == "/solver/tolerance");
    }

    TEST_CASE("config files resolve paths relative to themselves") {
        const auto dir = scratch("config");
        fs::copy_file(source_dir / "problems/cubic.json", dir / "p.json");
        std::ofstream(dir / "run.json") << R"({"command": "solve-ode", "problem": "p.json", "output_dir": "o", "seed": 3})";
        const auto cfg = load_config(dir / "run.json");
        CHECK(cfg.seed == 3u);
        CHECK(cfg.output_dir == dir / "o");
        CHECK(cfg.problem["kind"] == "ode");

        std::ofstream(dir / "missing.json") << R"({"command": "solve-ode", "problem": "nope.json"})";
        CHECK_THROWS_AS(load_config(dir / "missing.json"), InputError);
    }

    TEST_CASE("demo-liouville meets its expectations") {
        RunConfig cfg;
        cfg.command = "demo-liouville";
        cfg.output_dir = scratch("liouville");
        REQUIRE(run(cfg) == exit_ok);
        const auto r = read_json(cfg.output_dir / "result.json");
        CHECK(r["passed"] == true);
        CHECK(r["liouville"]["witnesses"].size() >= 1u);
    }
}
