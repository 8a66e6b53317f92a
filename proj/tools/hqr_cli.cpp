#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <string>

#include "hqr/config.hpp"
#include "hqr/error.hpp"
#include "hqr/run.hpp"
#include "hqr/selfcheck.hpp"

namespace {

int run_mode(const std::string& mode, const std::string& config, const std::string& output, int workers,
             bool workers_set) {
    hqr::RunSpec spec = hqr::load_config_file(config);
    // The subcommand decides the mode; [run] mode only matters without one.
    const hqr::RunMode wanted = hqr::parse_mode(mode);
    if (spec.mode != wanted) {
        spec.mode = wanted;
        spec.validate();
    }
    if (!output.empty()) spec.output_dir = output;
    if (workers_set) spec.workers = workers;
    const hqr::RunOutcome out = hqr::run(spec);
    for (const auto& m : out.messages) std::cerr << m << '\n';
    std::cout << hqr::mode_name(spec.mode) << ": wrote " << out.files.size() << " file(s) to " << spec.output_dir
              << '\n';
    return out.exit_code;
}

int seed_check(int workers) {
    bool ok = true;
    for (const auto& c : hqr::run_self_checks(workers)) {
        std::printf("%-4s %-48s %.3e (bound %.1e)\n", c.passed ? "PASS" : "FAIL", c.name.c_str(), c.value, c.bound);
        ok = ok && c.passed;
    }
    return ok ? hqr::exit_ok : hqr::exit_numerical;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Holstein-quantum-Rabi polariton dynamics"};
    bool check = false;
    int workers = 0;
    app.add_flag("--seed-check", check, "run the built-in invariant suite and exit");
    auto* global_workers = app.add_option("--workers", workers, "parallel workers (0: all cores)");
    app.require_subcommand(0, 1);

    struct Sub {
        std::string config;
        std::string output;
        int workers = 0;
        CLI::Option* workers_opt = nullptr;
    };
    const char* modes[] = {"spectrum", "dynamics", "grid-dynamics", "compare", "sweep"};
    const char* help[] = {"diagonalize and write the eigenvalue table",
                          "spectral propagation from the Franck-Condon state",
                          "coordinate-grid propagation",
                          "spectral and grid propagation with a deviation report",
                          "run a parameter sweep"};
    Sub subs[5];
    CLI::App* apps[5];
    for (int i = 0; i < 5; ++i) {
        apps[i] = app.add_subcommand(modes[i], help[i]);
        apps[i]->add_option("--config", subs[i].config, "config file")->required()->check(CLI::ExistingFile);
        apps[i]->add_option("--output", subs[i].output, "output directory (overrides [output] directory)");
        subs[i].workers_opt = apps[i]->add_option("--workers", subs[i].workers, "parallel workers (0: all cores)");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : hqr::exit_config;
    }

    try {
        if (check) return seed_check(workers);
        for (int i = 0; i < 5; ++i) {
            if (!apps[i]->parsed()) continue;
            const bool wset = subs[i].workers_opt->count() > 0 || global_workers->count() > 0;
            const int w = subs[i].workers_opt->count() > 0 ? subs[i].workers : workers;
            return run_mode(modes[i], subs[i].config, subs[i].output, w, wset);
        }
        std::cout << app.help();
        return hqr::exit_config;
    } catch (const hqr::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return hqr::exit_config;
    } catch (const hqr::NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return hqr::exit_numerical;
    } catch (const hqr::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return hqr::exit_numerical;
    }
}
