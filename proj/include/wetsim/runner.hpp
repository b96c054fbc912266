#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wetsim/coverage.hpp"
#include "wetsim/scenario.hpp"

namespace wetsim {

struct RunOptions {
    std::vector<std::string> schemes;  // empty = run the scenario's scheme list
    std::vector<std::string> grids;    // empty = run every grid
    std::optional<int> max_order;      // overrides the scenario when set
    std::string out_dir;               // empty = scenario.output_dir
    double p_req_min_dbm{-60.0};
    double p_req_max_dbm{10.0};
    double p_req_step_db{0.5};
    bool oracle_check{false};          // re-validate mpcsd points against the time oracle
    std::optional<unsigned> seed;      // reserved for randomized modes; echoed in the summary
    unsigned threads{0};               // 0 = hardware concurrency
};

// Sweeps the selected schemes over the selected grids, writes
// field_<grid>_<scheme>.csv, coverage.csv, and summary.txt into the output
// directory, and returns the summary text. Output is byte-stable for
// identical inputs.
std::string run_scenario(const Scenario& scenario, const RunOptions& options);

}  // namespace wetsim
