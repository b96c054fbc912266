#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "wetsim/propagation.hpp"

namespace wetsim {

enum class SchemeKind { SP, MP, MPCSD };

// Identifies a scheme run; tx_index selects the transmitter for SP and is
// ignored otherwise.
struct SchemeId {
    SchemeKind kind{SchemeKind::SP};
    std::size_t tx_index{0};

    bool operator==(const SchemeId&) const = default;
};

std::string scheme_name(const SchemeId& id);          // "sp1", "sp2", "mp", "mpcsd"
SchemeId parse_scheme_id(const std::string& name);    // inverse; throws on unknown names

struct SchemeResult {
    SchemeId scheme;
    double power_w{0.0};
    std::vector<double> per_tx_power_w;  // self power of each participating transmitter

    double power_dbm() const;
};

// Time-averaged received power when one transmitter's multipath components
// arrive as the given phasors: |sum|^2 / load.
double sp_power(std::span<const Phasor> per_path_phasors, double load_ohms);

// Coherent multi-transmitter power on a shared carrier: |sum|^2 / load.
double mp_power(std::span<const Phasor> per_tx_phasors, double load_ohms);

// Carrier-shift power with pairwise-distinct carriers: the beat terms average
// out, leaving sum of per-transmitter powers, independent of phases.
double mpcsd_power(std::span<const Phasor> per_tx_phasors, double load_ohms);

// Carrier-shift power tolerating duplicate offsets: transmitters sharing an
// offset combine coherently, distinct groups add in power.
double mpcsd_power_grouped(std::span<const Phasor> per_tx_phasors,
                           std::span<const double> offsets_hz, double load_ohms);

bool has_duplicate_offsets(std::span<const double> offsets_hz);

// Period of the squared baseband envelope (reciprocal of the common divisor
// of pairwise offset differences); 0 when the envelope is constant.
double envelope_beat_period(std::span<const double> offsets_hz);

// Brute-force oracle: numerically averages the squared baseband envelope over
// an explicit window. Exact closed forms above are validated against this.
double time_domain_power_window(std::span<const Phasor> per_tx_phasors,
                                std::span<const double> offsets_hz, double load_ohms,
                                double window_s, std::size_t samples);

// Oracle averaged over an integer number of beat periods. The carrier factor
// is handled analytically; only offset beats are integrated.
double time_domain_power(std::span<const Phasor> per_tx_phasors,
                         std::span<const double> offsets_hz, double load_ohms,
                         std::size_t samples_per_beat, std::size_t beats,
                         bool require_distinct_offsets = false);

// Applies the scheme formula to aggregate per-transmitter phasors already
// evaluated on the relevant carrier(s).
SchemeResult evaluate_scheme(const SchemeId& id, std::span<const Phasor> per_tx_phasors,
                             std::span<const double> offsets_hz, double load_ohms);

}  // namespace wetsim
