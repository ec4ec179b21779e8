#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "gel/config.hpp"
#include "gel/run.hpp"

namespace fs = std::filesystem;

namespace {

// GEL_THREADS is accepted for compatibility with batch scripts. Every kernel is
// single threaded, so the value is checked and reported but changes nothing.
int thread_request() {
    const char* env = std::getenv("GEL_THREADS");
    if (!env || !*env) return 1;
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (*end != '\0' || n < 1) throw gel::InputError(std::string("GEL_THREADS must be a positive integer, got '") + env + "'");
    return static_cast<int>(n);
}

int config_failure(const fs::path& dir, const gel::ConfigError& e) {
    std::cerr << "config error:\n";
    for (const auto& m : e.errors()) std::cerr << "  " << m << '\n';
    try {
        fs::create_directories(dir);
        std::ofstream(dir / "failure.json") << nlohmann::json{{"kind", "config"}, {"message", e.what()}, {"errors", e.errors()}}.dump(2)
                                            << '\n';
    } catch (const std::exception&) {
    }
    return gel::kConfigError;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"gel: elastodynamics with pre-stress couplings, gauge checks and laminate homogenization"};
    app.require_subcommand(1);
    std::string config, out;
    std::vector<std::string> suites;
    bool quiet = false;
    auto add_common = [&](CLI::App* sub, bool config_required) {
        auto* opt = sub->add_option("--config,-c", config, "JSON config file");
        if (config_required) opt->required()->check(CLI::ExistingFile);
        else opt->check(CLI::ExistingFile);
        sub->add_option("--out,-o", out, "output directory (overrides output.dir)");
        sub->add_flag("--quiet,-q", quiet, "no progress output");
    };
    auto* sim = app.add_subcommand("simulate", "time-domain run of one model variant");
    add_common(sim, true);
    auto* hom = app.add_subcommand("homogenize", "effective operators of a periodic laminate");
    add_common(hom, true);
    auto* ver = app.add_subcommand("verify", "run the invariant suites");
    add_common(ver, false);
    ver->add_option("--suite,-s", suites, "suite to run (repeatable)")
        ->check(CLI::IsMember(gel::kVerifySuites));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : gel::kConfigError;
    }

    const std::string mode = app.get_subcommands().front()->get_name();
    const fs::path fail_dir = out.empty() ? fs::path("out") : fs::path(out);
    gel::RunConfig cfg;
    try {
        const int threads = thread_request();
        if (config.empty()) cfg = gel::parse_config_text("{\"verify\": {}}");
        else cfg = gel::parse_config(config);
        if (std::string(gel::to_string(cfg.mode)) != mode)
            throw gel::ConfigError({"config has a '" + std::string(gel::to_string(cfg.mode)) + "' block but the command is '" +
                                    mode + "'"});
        if (!quiet && threads > 1) std::cerr << "GEL_THREADS=" << threads << " noted; kernels run single threaded\n";
    } catch (const gel::ConfigError& e) {
        return config_failure(fail_dir, e);
    } catch (const std::exception& e) {
        return config_failure(fail_dir, gel::ConfigError({e.what()}));
    }

    gel::RunOptions opts;
    opts.out_dir = out;
    opts.suites = suites;
    opts.log = quiet ? nullptr : &std::cout;
    return gel::run(cfg, opts);
}
