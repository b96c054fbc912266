#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "wetsim/runner.hpp"
#include "wetsim/scenario.hpp"

int main(int argc, char** argv) {
    CLI::App app{"wetsim: multi-point wireless energy transmission simulator"};
    app.require_subcommand(1);

    CLI::App* run = app.add_subcommand("run", "sweep a scenario and write field/coverage maps");
    std::string scenario_path;
    wetsim::RunOptions options;
    int max_order = -1;
    unsigned seed = 0;

    run->add_option("scenario", scenario_path, "scenario file")->required();
    run->add_option("--schemes", options.schemes, "schemes to run (default: scenario list)")
        ->delimiter(',');
    run->add_option("--grids", options.grids, "grids to run (default: all)")->delimiter(',');
    CLI::Option* max_order_opt =
        run->add_option("--max-order", max_order, "reflection order override");
    run->add_option("--out", options.out_dir, "output directory (default: scenario setting)");
    run->add_option("--p-req-min", options.p_req_min_dbm, "coverage sweep floor, dBm");
    run->add_option("--p-req-max", options.p_req_max_dbm, "coverage sweep ceiling, dBm");
    run->add_option("--p-req-step", options.p_req_step_db, "coverage sweep step, dB");
    run->add_flag("--oracle-check", options.oracle_check,
                  "re-validate mpcsd points against the time-domain oracle");
    CLI::Option* seed_opt =
        run->add_option("--seed", seed, "seed for randomized modes (echoed in the summary)");
    run->add_option("--threads", options.threads, "worker threads (default: hardware)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& err) {
        const int code = app.exit(err);
        return code == 0 ? 0 : 1;
    }

    if (max_order_opt->count() > 0) options.max_order = max_order;
    if (seed_opt->count() > 0) options.seed = seed;

    try {
        const wetsim::Scenario scenario = wetsim::load_scenario(scenario_path);
        const std::string summary = wetsim::run_scenario(scenario, options);
        std::fputs(summary.c_str(), stdout);
        return 0;
    } catch (const wetsim::ValidationError& err) {
        std::fprintf(stderr, "error: %s\n", err.what());
        return 1;
    } catch (const std::invalid_argument& err) {
        std::fprintf(stderr, "error: %s\n", err.what());
        return 1;
    } catch (const std::exception& err) {
        std::fprintf(stderr, "runtime error: %s\n", err.what());
        return 2;
    }
}
