#include <cstdlib>
#include <iostream>
#include <optional>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "response/cli/run.hpp"
#include "response/common/error.hpp"

namespace {

void setup_logging() {
    auto logger = spdlog::stderr_color_mt("response");
    auto level = spdlog::level::warn;
    if (const char* env = std::getenv("RESPONSE_SOLVER_LOG")) {
        const auto parsed = spdlog::level::from_str(env);
        // from_str maps unknown names to off; only accept a real "off".
        if (parsed != spdlog::level::off || std::string(env) == "off") level = parsed;
    }
    logger->set_level(level);
    spdlog::set_default_logger(logger);
}

}  // namespace

int main(int argc, char** argv) {
    setup_logging();
    using namespace response::cli;

    CLI::App app{"Response solutions of quasi-periodically forced dissipative systems"};
    std::string config_path;
    std::optional<int> jobs;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    std::optional<std::string> fault;
    app.add_option("--config", config_path, "run config (JSON)")->required();
    app.add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);
    app.add_option("--seed", seed, "seed for randomized samples");
    app.add_option("--out", out, "output directory (overrides output_dir)");
#ifdef RESPONSE_FAULT_INJECTION
    app.add_option("--inject-fault", fault, "test hook: multiplier or multiplier:<mode>");
#endif
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_input;
    }

    RunConfig cfg;
    try {
        cfg = load_config(config_path);
    } catch (const response::InputError& e) {
        spdlog::error("{}", e.what());
        std::cerr << "error: " << e.what() << '\n';
        return exit_input;
    }
    if (jobs) cfg.jobs = *jobs;
    if (seed) cfg.seed = *seed;
    if (out) cfg.output_dir = *out;
    cfg.inject_fault = fault;
    return run(cfg);
}
