// Experiment harness: hsob <subcommand> [--config file] [--out dir] [--seed n] [--threads n] [--deterministic]
#include <cstdio>
#include <omp.h>

#include "CLI11.hpp"
#include "hsob/experiment.hpp"

using namespace hsob;

namespace {

int exit_code(ErrorKind k) {
    switch (k) {
        case ErrorKind::config:
        case ErrorKind::parameter:
            return 2;
        case ErrorKind::numerical:
            return 3;
        case ErrorKind::construction:
        case ErrorKind::resolution:
            return 4;
        default:
            return 1;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hajlasz-Sobolev experiment harness"};
    app.require_subcommand(1, 1);
    app.fallthrough();

    std::string config, out = "results";
    std::uint64_t seed = 0;
    int threads = 0;
    bool deterministic = false;
    app.add_option("--config", config, "JSON experiment definition (defaults apply when omitted)");
    app.add_option("--out", out, "output directory")->capture_default_str();
    auto* seed_opt = app.add_option("--seed", seed, "overrides the config seed");
    app.add_option("--threads", threads, "OpenMP threads (0: runtime default)")->check(CLI::NonNegativeNumber);
    app.add_flag("--deterministic", deterministic, "single thread, cases in order");

    const char* names[] = {"equivalence", "extension", "hardy", "capacity", "content", "decompose", "counterexample"};
    for (const char* n : names) app.add_subcommand(n, std::string("run the ") + n + " experiment");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }
    const std::string experiment = app.get_subcommands().front()->get_name();

    try {
        ExperimentConfig cfg = config.empty() ? parse_config("{}", experiment) : load_config(config, experiment);
        if (seed_opt->count() > 0) cfg = with_seed(cfg, seed);
        RunOptions run;
        if (deterministic) threads = 1;
        if (threads > 0) omp_set_num_threads(threads);
        run.threads = deterministic ? 1 : (threads > 0 ? threads : 1);

        const Table t = run_experiment(cfg, run);
        const EmitResult r = emit_plot_data(t, out);
        std::printf("%s: %zu rows -> %s (manifest version %d, config %s)\n", experiment.c_str(), t.rows.size(),
                    r.csv_path.c_str(), r.version, t.config_hash.c_str());
        if (t.construction_failures > 0) {
            std::fprintf(stderr, "%zu construction failures recorded\n", t.construction_failures);
            return 4;
        }
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return exit_code(e.kind());
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
