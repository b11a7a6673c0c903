#include "vortlab/config.hpp"
#include "vortlab/errors.hpp"
#include "vortlab/parallel.hpp"
#include "vortlab/runner.hpp"

#include <doctest.h>
#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace vortlab;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

fs::path scratch(const std::string& name)
{
    const fs::path dir = fs::temp_directory_path() / ("vortlab-test-" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

int error_line(const std::string& text)
{
    try {
        parse_config(text);
    } catch (const ConfigError& e) {
        return e.line();
    }
    return -1;
}

std::string error_text(const std::string& text)
{
    try {
        parse_config(text);
    } catch (const ConfigError& e) {
        return e.what();
    }
    return {};
}

} // namespace

TEST_SUITE("cli_runner")
{
    TEST_CASE("parse defaults")
    {
        const auto cfg = parse_config("experiment = oseen-scaling\nseed = 3\nn = 64  # grid\n");
        CHECK(cfg.kind == ExperimentKind::oseen_scaling);
        CHECK(cfg.seed == 3u);
        CHECK(cfg.n == 64);
        CHECK(cfg.box_length == doctest::Approx(6.283185307179586));
        CHECK(cfg.out_dir == "results");
        CHECK(cfg.real("alpha") == 1.0);
        CHECK(cfg.is_auto("t_max"));
        CHECK(cfg.integer("t_count") == 9);

        const auto p = parse_config("experiment = continuous-dependence\nseed = 1\nn = 32\n"
                                    "[continuous-dependence]\neps_list = 0.1, 0.01\ninitial = two-mode\n");
        CHECK(p.real_list("eps_list") == std::vector<double>{0.1, 0.01});
        CHECK(p.text("initial") == "two-mode");
        CHECK(p.is_auto("bump_width"));
        CHECK(parse_config("experiment = picard\nseed = 1\nn = 32\n").boolean("compare_reference"));
    }

    TEST_CASE("parse errors carry the line")
    {
        CHECK(error_line("experiment = oseen-scaling\nseed = 1\nn = 64\nbogus = 2\n") == 4);
        CHECK(error_line("experiment = oseen-scaling\nseed = 1\nseed = 2\nn = 64\n") == 3);
        CHECK(error_line("experiment = oseen-scaling\nseed = 1\nn = 64\nthis line has no equals\n") == 4);
        CHECK(error_line("experiment = oseen-scaling\nseed = 1\nn = 64\n[picard]\n") == 4);
        CHECK(error_line("experiment = oseen-scaling\nseed = 1\nn = 64\n[oseen-scaling]\nalpha = x\n") == 5);
        CHECK(error_line("experiment = oseen-scaling\nseed = 1\nn = 64\n[oseen-scaling]\nbeta = 2\n") == 5);
        CHECK(error_line("experiment = warp-drive\nseed = 1\nn = 64\n") == 1);
        CHECK(error_text("experiment = oseen-scaling\nn = 64\n").find("missing required key 'seed'") !=
              std::string::npos);
        CHECK(error_text("experiment = oseen-scaling\nseed = 1\nn = 7\n").find("n must be even") != std::string::npos);
        CHECK(error_line("experiment = oseen-scaling\nseed = 1\nn = 7\n") == 3);
        CHECK_THROWS_AS(load_config("/nonexistent/file.cfg"), std::exception);
    }

    TEST_CASE("validation reaches the operation preconditions")
    {
        CHECK_THROWS_WITH_AS(validate_config(parse_config("experiment = maxwell-strichartz\nseed = 1\nn = 16\n"
                                                          "[maxwell-strichartz]\nqt = 2\nk = 0.5\n")),
                             doctest::Contains("range 2 < qt <= inf violated"), PreconditionError);
        CHECK_THROWS_AS(validate_config(parse_config("experiment = oseen-scaling\nseed = 1\nn = 64\nbox_length = 1\n"
                                                     "[oseen-scaling]\nt_max = 1\n")),
                        PreconditionError);
        CHECK_THROWS_AS(validate_config(parse_config("experiment = bb-ratio-2d\nseed = 1\nn = 32\n"
                                                     "[bb-ratio-2d]\nband = 16\n")),
                        PreconditionError);
        CHECK_NOTHROW(validate_config(parse_config("experiment = gn-ratio\nseed = 1\nn = 64\n")));
        CHECK_NOTHROW(validate_config(parse_config("experiment = wave-fixture\nseed = 1\nn = 16\n")));
    }

    TEST_CASE("listing and resolved dump")
    {
        const std::string list = list_experiments();
        for (const auto& k : experiment_kinds()) {
            CHECK(list.find(k.name) != std::string::npos);
        }
        CHECK(experiment_kinds().size() == 8u);
        const auto cfg = parse_config("experiment = gn-ratio\nseed = 5\nn = 64\n");
        const std::string dump = resolved_dump(cfg);
        CHECK(dump.find("seed = 5") != std::string::npos);
        CHECK(dump.find("[gn-ratio]") != std::string::npos);
        CHECK(dump.find("beta = 2") != std::string::npos);
        // A dump parses back to the same configuration.
        CHECK(resolved_dump(parse_config(dump)) == dump);
    }

    TEST_CASE("runs are reproducible")
    {
        const fs::path a = scratch("a");
        const fs::path b = scratch("b");
        const std::string text = "experiment = gn-ratio\nseed = 7\nn = 32\n[gn-ratio]\ncount = 4\nband = 8\n";
        auto cfg = parse_config(text);
        cfg.set_out_dir(a.string());
        const int before = thread_count();
        set_thread_count(1);
        const RunOutcome ra = run_experiment(cfg);
        cfg.set_out_dir(b.string());
        set_thread_count(3);
        const RunOutcome rb = run_experiment(cfg);
        set_thread_count(before);

        CHECK(ra.csv.filename() == "gn-ratio-7.csv");
        CHECK(ra.json.filename() == "gn-ratio-7.json");
        CHECK(slurp(ra.csv) == slurp(rb.csv));
        CHECK(slurp(ra.json) == slurp(rb.json));
        CHECK(slurp(ra.csv).rfind("seed,n,beta,numerator,denominator,ratio\n", 0) == 0);

        const auto manifest = nlohmann::json::parse(slurp(ra.manifest));
        CHECK(manifest.at("version") == version());
        CHECK(manifest.at("threads") == 1);
        CHECK(manifest.at("config").at("seed") == "7");
        CHECK(manifest.at("outputs").size() == 2u);
        CHECK(manifest.contains("wall_clock_seconds"));
        CHECK(manifest.contains("started_at"));
        fs::remove_all(a);
        fs::remove_all(b);
    }

    TEST_CASE("error records")
    {
        const auto rec = nlohmann::json::parse(error_record("precondition", "n must be even", 3));
        CHECK(rec.at("error") == "precondition");
        CHECK(rec.at("line") == 3);
        CHECK(rec.at("message") == "n must be even");
    }
}
