#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "wetsim/grid.hpp"
#include "wetsim/propagation.hpp"
#include "wetsim/schemes.hpp"
#include "wetsim/spectrum.hpp"

namespace wetsim {

// Input problems (parse failures, schema violations, physically invalid
// configurations). The CLI maps these to exit code 1.
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Scenario {
    std::string name;
    double center_frequency_hz{0.0};

    // carrier assignment: exactly one source in the input file; offsets_hz is
    // always resolved (one entry per transmitter, same order) after loading
    std::optional<FrequencyPlan> plan;
    std::vector<double> offsets_hz;

    Room room;
    std::vector<Transmitter> transmitters;
    Antenna receiver;
    double load_ohms{50.0};
    std::optional<double> power_cap_dbm;  // regulatory limit on each transmitter when set

    std::vector<GridSpec> grids;
    int max_order{2};
    std::vector<SchemeId> schemes;
    std::string output_dir{"out"};

    bool operator==(const Scenario&) const = default;
};

// Parses and fully validates scenario text / file. Unknown keys are rejected
// with the key name and object path in the message.
Scenario parse_scenario(const std::string& text);
Scenario load_scenario(const std::string& path);

// Structural validation only; parse_scenario/load_scenario call this.
void validate_scenario(const Scenario& scenario);

std::string serialize_scenario(const Scenario& scenario);
void save_scenario(const Scenario& scenario, const std::string& path);

// All schemes a scenario supports: one SP per transmitter, then MP and MPCSD.
std::vector<SchemeId> default_schemes(std::size_t transmitter_count);

}  // namespace wetsim
