#pragma once

#include <vector>

namespace wetsim {

/// One energy-transmission channel split into uniformly spaced subcarriers,
/// one per transmission point. Subcarrier n (1-based) sits at
/// f_c - B/2 + (2n-1)*B/(2N).
struct FrequencyPlan {
    double center_frequency_hz{0.0};
    double bandwidth_hz{0.0};
    unsigned subcarrier_count{0};

    bool operator==(const FrequencyPlan&) const = default;
};

/// Throws std::invalid_argument unless bandwidth > 0 and subcarrier_count >= 1.
void validate_plan(const FrequencyPlan& plan);

/// Per-transmitter carrier offsets from the channel center, ascending.
/// Offsets rather than absolute frequencies keep full double precision for
/// Hz-scale shifts against a ~1 GHz carrier.
std::vector<double> carrier_offsets(const FrequencyPlan& plan);

/// Absolute per-transmitter carrier frequencies, ascending.
std::vector<double> carrier_frequencies(const FrequencyPlan& plan);

/// Largest period of the artificial fading created by the subcarrier spacing:
/// N/B seconds. Averaging received power over any integer multiple of this
/// window cancels all inter-transmitter cross terms.
double beat_period(const FrequencyPlan& plan);

/// True when a sensor's data period is long enough to average over one full
/// fading period, i.e. data_period_s >= N/B.
bool duty_cycle_feasible(const FrequencyPlan& plan, double data_period_s);

}  // namespace wetsim
