#include "wetsim/spectrum.hpp"

#include <stdexcept>

namespace wetsim {

void validate_plan(const FrequencyPlan& plan) {
    if (plan.subcarrier_count < 1)
        throw std::invalid_argument("frequency plan: subcarrier_count must be >= 1");
    if (!(plan.bandwidth_hz > 0.0))
        throw std::invalid_argument("frequency plan: bandwidth must be > 0");
}

std::vector<double> carrier_offsets(const FrequencyPlan& plan) {
    validate_plan(plan);
    const double b = plan.bandwidth_hz;
    const double n_total = static_cast<double>(plan.subcarrier_count);
    std::vector<double> offsets;
    offsets.reserve(plan.subcarrier_count);
    for (unsigned n = 1; n <= plan.subcarrier_count; ++n)
        offsets.push_back(-b / 2.0 + (2.0 * n - 1.0) * b / (2.0 * n_total));
    return offsets;
}

std::vector<double> carrier_frequencies(const FrequencyPlan& plan) {
    std::vector<double> freqs = carrier_offsets(plan);
    for (double& f : freqs) f += plan.center_frequency_hz;
    return freqs;
}

double beat_period(const FrequencyPlan& plan) {
    validate_plan(plan);
    return static_cast<double>(plan.subcarrier_count) / plan.bandwidth_hz;
}

bool duty_cycle_feasible(const FrequencyPlan& plan, double data_period_s) {
    if (!(data_period_s > 0.0))
        throw std::invalid_argument("duty_cycle_feasible: data period must be > 0");
    return data_period_s >= beat_period(plan);
}

}  // namespace wetsim
