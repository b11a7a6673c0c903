#include "vortlab/config.hpp"
#include "vortlab/errors.hpp"
#include "vortlab/parallel.hpp"
#include "vortlab/runner.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <thread>

using namespace vortlab;

namespace {

int fail(ExitCode code, const std::string& kind, const std::string& message, int line = 0)
{
    std::cerr << error_record(kind, message, line) << '\n';
    return code;
}

std::optional<int> env_threads()
{
    const char* env = std::getenv("VORTLAB_THREADS");
    if (!env || !*env) {
        return std::nullopt;
    }
    try {
        const int v = std::stoi(env);
        if (v >= 1) {
            return v;
        }
    } catch (const std::exception&) {
    }
    return std::nullopt;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"vortlab - pseudo-spectral vorticity and wave laboratory"};
    app.set_version_flag("--version", std::string(version()));
    bool list = false;
    int threads = 0;
    std::string out_dir;
    app.add_flag("--list", list, "print the experiment kinds and their keys");
    app.add_option("--threads", threads, "worker threads (default: VORTLAB_THREADS or hardware)")
        ->check(CLI::PositiveNumber);
    app.add_option("--out", out_dir, "report directory (overrides out_dir in the config)");

    std::string config_path;
    auto* run = app.add_subcommand("run", "run one experiment and write its reports");
    run->add_option("config", config_path, "configuration file")->required();
    auto* validate = app.add_subcommand("validate", "check a configuration without running it");
    validate->add_option("config", config_path, "configuration file")->required();
    run->fallthrough();
    validate->fallthrough();
    app.require_subcommand(0, 1);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? exit_ok : exit_usage;
    }

    if (list) {
        std::cout << list_experiments();
        if (!run->parsed() && !validate->parsed()) {
            return exit_ok;
        }
    }
    if (!run->parsed() && !validate->parsed()) {
        std::cerr << app.help();
        return exit_usage;
    }

    if (threads > 0) {
        set_thread_count(threads);
    } else if (auto env = env_threads()) {
        set_thread_count(*env);
    } else {
        set_thread_count(static_cast<int>(std::max(1u, std::thread::hardware_concurrency())));
    }

    try {
        ExperimentConfig cfg = load_config(config_path);
        if (!out_dir.empty()) {
            cfg.set_out_dir(out_dir);
        }
        validate_config(cfg);
        if (validate->parsed()) {
            std::cout << "ok\n" << resolved_dump(cfg);
            return exit_ok;
        }
        const RunOutcome outcome = run_experiment(cfg);
        std::cout << outcome.csv.string() << '\n' << outcome.json.string() << '\n' << outcome.manifest.string() << '\n';
        return exit_ok;
    } catch (const ConfigError& e) {
        return fail(exit_precondition, "config", e.what(), e.line());
    } catch (const PreconditionError& e) {
        return fail(exit_precondition, "precondition", e.what());
    } catch (const DivergenceError& e) {
        return fail(exit_divergence, "divergence", e.what());
    } catch (const std::filesystem::filesystem_error& e) {
        return fail(exit_io, "io", e.what());
    } catch (const std::exception& e) {
        return fail(exit_divergence, "runtime", e.what());
    }
}
