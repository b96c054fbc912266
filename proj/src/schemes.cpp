#include "wetsim/schemes.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>

#include "wetsim/units.hpp"

namespace wetsim {

namespace {

std::complex<double> coherent_sum(std::span<const Phasor> phasors) {
    std::complex<double> sum{0.0, 0.0};
    for (const Phasor& p : phasors) sum += phasor_to_complex(p);
    return sum;
}

void require_phasors(std::span<const Phasor> phasors, double load_ohms, const char* who) {
    if (phasors.empty()) throw std::invalid_argument(std::string(who) + ": empty phasor list");
    if (!(load_ohms > 0.0)) throw std::invalid_argument(std::string(who) + ": load must be > 0");
}

}  // namespace

std::string scheme_name(const SchemeId& id) {
    switch (id.kind) {
        case SchemeKind::SP: return "sp" + std::to_string(id.tx_index + 1);
        case SchemeKind::MP: return "mp";
        case SchemeKind::MPCSD: return "mpcsd";
    }
    throw std::logic_error("scheme_name: unhandled scheme kind");
}

SchemeId parse_scheme_id(const std::string& name) {
    if (name == "mp") return {SchemeKind::MP, 0};
    if (name == "mpcsd") return {SchemeKind::MPCSD, 0};
    if (name.size() > 2 && name.rfind("sp", 0) == 0 &&
        name.find_first_not_of("0123456789", 2) == std::string::npos) {
        const unsigned long index = std::stoul(name.substr(2));
        if (index >= 1) return {SchemeKind::SP, static_cast<std::size_t>(index - 1)};
    }
    throw std::invalid_argument("unknown scheme name: " + name);
}

double SchemeResult::power_dbm() const { return watts_to_dbm(power_w); }

double sp_power(std::span<const Phasor> per_path_phasors, double load_ohms) {
    require_phasors(per_path_phasors, load_ohms, "sp_power");
    const double v = std::abs(coherent_sum(per_path_phasors));
    return v * v / load_ohms;
}

double mp_power(std::span<const Phasor> per_tx_phasors, double load_ohms) {
    require_phasors(per_tx_phasors, load_ohms, "mp_power");
    const double v = std::abs(coherent_sum(per_tx_phasors));
    return v * v / load_ohms;
}

double mpcsd_power(std::span<const Phasor> per_tx_phasors, double load_ohms) {
    require_phasors(per_tx_phasors, load_ohms, "mpcsd_power");
    double total = 0.0;
    for (const Phasor& p : per_tx_phasors) total += p.amplitude * p.amplitude / load_ohms;
    return total;
}

double mpcsd_power_grouped(std::span<const Phasor> per_tx_phasors,
                           std::span<const double> offsets_hz, double load_ohms) {
    require_phasors(per_tx_phasors, load_ohms, "mpcsd_power_grouped");
    if (offsets_hz.size() != per_tx_phasors.size())
        throw std::invalid_argument("mpcsd_power_grouped: offsets/phasors size mismatch");
    std::vector<bool> used(per_tx_phasors.size(), false);
    double total = 0.0;
    for (std::size_t i = 0; i < per_tx_phasors.size(); ++i) {
        if (used[i]) continue;
        std::complex<double> group = phasor_to_complex(per_tx_phasors[i]);
        bool grouped = false;
        for (std::size_t j = i + 1; j < per_tx_phasors.size(); ++j) {
            if (offsets_hz[j] == offsets_hz[i]) {
                group += phasor_to_complex(per_tx_phasors[j]);
                used[j] = true;
                grouped = true;
            }
        }
        if (grouped) {
            const double v = std::abs(group);
            total += v * v / load_ohms;
        } else {
            // singleton groups follow the exact same arithmetic as mpcsd_power
            total += per_tx_phasors[i].amplitude * per_tx_phasors[i].amplitude / load_ohms;
        }
    }
    return total;
}

bool has_duplicate_offsets(std::span<const double> offsets_hz) {
    std::vector<double> sorted(offsets_hz.begin(), offsets_hz.end());
    std::sort(sorted.begin(), sorted.end());
    return std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end();
}

double envelope_beat_period(std::span<const double> offsets_hz) {
    std::vector<double> diffs;
    for (std::size_t i = 0; i < offsets_hz.size(); ++i)
        for (std::size_t j = i + 1; j < offsets_hz.size(); ++j) {
            const double d = std::abs(offsets_hz[i] - offsets_hz[j]);
            if (d > 0.0) diffs.push_back(d);
        }
    if (diffs.empty()) return 0.0;
    const double tol = 1e-9 * *std::max_element(diffs.begin(), diffs.end());
    double g = diffs.front();
    for (double d : diffs) {
        double a = std::max(g, d);
        double b = std::min(g, d);
        while (b > tol) {
            const double r = std::fmod(a, b);
            a = b;
            b = r;
        }
        g = a;
    }
    return 1.0 / g;
}

double time_domain_power_window(std::span<const Phasor> per_tx_phasors,
                                std::span<const double> offsets_hz, double load_ohms,
                                double window_s, std::size_t samples) {
    require_phasors(per_tx_phasors, load_ohms, "time_domain_power");
    if (offsets_hz.size() != per_tx_phasors.size())
        throw std::invalid_argument("time_domain_power: offsets/phasors size mismatch");
    if (!(window_s > 0.0)) throw std::invalid_argument("time_domain_power: window must be > 0");
    if (samples == 0) throw std::invalid_argument("time_domain_power: samples must be >= 1");

    const std::size_t n = per_tx_phasors.size();
    std::vector<std::complex<double>> base(n);
    std::vector<double> omega(n);
    for (std::size_t i = 0; i < n; ++i) {
        base[i] = phasor_to_complex(per_tx_phasors[i]);
        omega[i] = constants::two_pi * offsets_hz[i];
    }
    // midpoint rule: exact for the trig-polynomial envelope once the sample
    // rate clears its highest beat harmonic
    double accum = 0.0;
    for (std::size_t s = 0; s < samples; ++s) {
        const double t = (static_cast<double>(s) + 0.5) * window_s / static_cast<double>(samples);
        std::complex<double> envelope{0.0, 0.0};
        for (std::size_t i = 0; i < n; ++i)
            envelope += base[i] * std::polar(1.0, omega[i] * t);
        accum += std::norm(envelope);
    }
    return accum / static_cast<double>(samples) / load_ohms;
}

double time_domain_power(std::span<const Phasor> per_tx_phasors,
                         std::span<const double> offsets_hz, double load_ohms,
                         std::size_t samples_per_beat, std::size_t beats,
                         bool require_distinct_offsets) {
    if (samples_per_beat < 100)
        throw std::invalid_argument("time_domain_power: samples_per_beat must be >= 100");
    if (beats < 1) throw std::invalid_argument("time_domain_power: beats must be >= 1");
    if (require_distinct_offsets && has_duplicate_offsets(offsets_hz))
        throw std::invalid_argument(
            "time_domain_power: duplicate carrier offsets in carrier-shift mode");
    const double beat = envelope_beat_period(offsets_hz);
    const double window = beat > 0.0 ? beat * static_cast<double>(beats) : 1.0;
    return time_domain_power_window(per_tx_phasors, offsets_hz, load_ohms, window,
                                    samples_per_beat * beats);
}

SchemeResult evaluate_scheme(const SchemeId& id, std::span<const Phasor> per_tx_phasors,
                             std::span<const double> offsets_hz, double load_ohms) {
    require_phasors(per_tx_phasors, load_ohms, "evaluate_scheme");
    if (offsets_hz.size() != per_tx_phasors.size())
        throw std::invalid_argument("evaluate_scheme: offsets/phasors size mismatch");

    SchemeResult result;
    result.scheme = id;
    result.per_tx_power_w.assign(per_tx_phasors.size(), 0.0);

    switch (id.kind) {
        case SchemeKind::SP: {
            if (id.tx_index >= per_tx_phasors.size())
                throw std::invalid_argument("evaluate_scheme: sp transmitter index out of range");
            const Phasor& p = per_tx_phasors[id.tx_index];
            result.per_tx_power_w[id.tx_index] = p.amplitude * p.amplitude / load_ohms;
            result.power_w = result.per_tx_power_w[id.tx_index];
            break;
        }
        case SchemeKind::MP: {
            for (std::size_t i = 0; i < per_tx_phasors.size(); ++i)
                result.per_tx_power_w[i] =
                    per_tx_phasors[i].amplitude * per_tx_phasors[i].amplitude / load_ohms;
            result.power_w = mp_power(per_tx_phasors, load_ohms);
            break;
        }
        case SchemeKind::MPCSD: {
            for (std::size_t i = 0; i < per_tx_phasors.size(); ++i)
                result.per_tx_power_w[i] =
                    per_tx_phasors[i].amplitude * per_tx_phasors[i].amplitude / load_ohms;
            if (has_duplicate_offsets(offsets_hz)) {
                result.power_w = mpcsd_power_grouped(per_tx_phasors, offsets_hz, load_ohms);
            } else {
                double total = 0.0;
                for (double p : result.per_tx_power_w) total += p;
                result.power_w = total;
            }
            break;
        }
    }
    return result;
}

}  // namespace wetsim
