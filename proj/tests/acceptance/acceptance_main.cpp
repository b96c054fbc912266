// End-to-end acceptance checks for the bundled wetsim scenarios: the
// free-space and box-room comparisons of the three transmission schemes,
// the time-domain oracle equivalences, the coverage metric, and output
// determinism. Each criterion prints one PASS/FAIL line with its measured
// values; the exit code is the number of failed criteria.
//
// Usage: acceptance_tests [scenario_dir]   (default "scenarios")

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "wetsim/coverage.hpp"
#include "wetsim/runner.hpp"
#include "wetsim/scenario.hpp"
#include "wetsim/schemes.hpp"
#include "wetsim/units.hpp"

using namespace wetsim;
using namespace wetsim::constants;

namespace {

struct CheckFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void require(bool ok, const std::string& what) {
    if (!ok) throw CheckFailure(what);
}

std::string format(const char* fmt, ...) {
    va_list args;
    va_start(args, fmt);
    char buffer[512];
    std::vsnprintf(buffer, sizeof buffer, fmt, args);
    va_end(args);
    return buffer;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

const GridSpec& grid_named(const Scenario& sc, const std::string& name) {
    for (const GridSpec& grid : sc.grids)
        if (grid.name == name) return grid;
    throw CheckFailure("scenario has no grid named '" + name + "'");
}

FieldGrid sweep_named(const Scenario& sc, const std::string& scheme, const std::string& grid) {
    return sweep(sc, parse_scheme_id(scheme), grid_named(sc, grid));
}

double peak_dbm(const FieldGrid& field) {
    return watts_to_dbm(*std::max_element(field.power_w.begin(), field.power_w.end()));
}

// ---------------------------------------------------------------------------
// 1. Free-space threshold gap: full-coverage threshold of the carrier-shift
//    scheme sits 8.4 +/- 0.2 dB above the single-transmitter threshold on
//    the bundled line, and agrees with the closed-form link-budget gap.
// ---------------------------------------------------------------------------
std::string criterion_free_space_gap(const std::string& dir) {
    const auto start = std::chrono::steady_clock::now();
    const Scenario sc = load_scenario(dir + "/paper_freespace.scenario");

    const FieldGrid sp1 = sweep_named(sc, "sp1", "line");
    const FieldGrid csd = sweep_named(sc, "mpcsd", "line");
    const double sp1_threshold = max_required_power_full_coverage(sp1);
    const double csd_threshold = max_required_power_full_coverage(csd);
    const double gap = csd_threshold - sp1_threshold;

    // Independent oracle: the single-transmitter threshold is the far end of
    // the line (6.2 m) while both transmitters reach the midpoint (3.35 m)
    // with equal strength, so the gap is a pure link-budget expression.
    const double closed_form = 20.0 * std::log10(6.2 / 3.35) + 10.0 * std::log10(2.0);

    const double elapsed = seconds_since(start);
    require(std::abs(gap - 8.4) <= 0.2,
            format("threshold gap %.3f dB outside 8.4 +/- 0.2 dB", gap));
    require(std::abs(gap - closed_form) <= 0.05,
            format("threshold gap %.3f dB disagrees with closed form %.3f dB", gap,
                   closed_form));
    require(elapsed < 1.0, format("took %.2f s, budget 1 s", elapsed));
    return format("gap=%.3f dB (closed form %.3f dB), %.2f s", gap, closed_form, elapsed);
}

// ---------------------------------------------------------------------------
// 2. Threshold ordering: the coherent multi-point scheme digs a deep
//    deadspot, so its threshold sits far below single-point, which in turn
//    sits below carrier-shift.
// ---------------------------------------------------------------------------
std::string criterion_threshold_ordering(const std::string& dir) {
    const Scenario sc = load_scenario(dir + "/paper_freespace.scenario");

    const double sp1 = max_required_power_full_coverage(sweep_named(sc, "sp1", "line"));
    const double mp = max_required_power_full_coverage(sweep_named(sc, "mp", "line"));
    const double csd = max_required_power_full_coverage(sweep_named(sc, "mpcsd", "line"));

    require(mp < sp1, format("mp threshold %.3f dBm not below sp1 %.3f dBm", mp, sp1));
    require(sp1 < csd, format("sp1 threshold %.3f dBm not below mpcsd %.3f dBm", sp1, csd));
    require(sp1 - mp >= 10.0,
            format("mp threshold only %.3f dB below sp1, need >= 10 dB", sp1 - mp));
    return format("mp=%.3f < sp1=%.3f < mpcsd=%.3f dBm (margin %.1f dB)", mp, sp1, csd,
                  sp1 - mp);
}

// ---------------------------------------------------------------------------
// 3. Zero-coverage convergence: coverage of every scheme first hits zero at
//    the same required power within 1 dB (the grid peak power).
// ---------------------------------------------------------------------------
std::string criterion_zero_coverage(const std::string& dir) {
    const Scenario sc = load_scenario(dir + "/paper_freespace.scenario");

    const double peaks[3] = {peak_dbm(sweep_named(sc, "sp1", "line")),
                             peak_dbm(sweep_named(sc, "mp", "line")),
                             peak_dbm(sweep_named(sc, "mpcsd", "line"))};
    const double lo = *std::min_element(peaks, peaks + 3);
    const double hi = *std::max_element(peaks, peaks + 3);
    require(hi - lo <= 1.0, format("zero-coverage powers spread %.3f dB > 1 dB", hi - lo));
    return format("sp1=%.3f mp=%.3f mpcsd=%.3f dBm (spread %.3f dB)", peaks[0], peaks[1],
                  peaks[2], hi - lo);
}

// ---------------------------------------------------------------------------
// 4. Carrier-shift closed form vs. the time-domain oracle over one beat:
//    1000 randomized multi-transmitter cases with distinct offsets.
// ---------------------------------------------------------------------------
std::string criterion_csd_oracle(const std::string&) {
    const auto start = std::chrono::steady_clock::now();
    std::mt19937 rng(20260814u);
    std::uniform_int_distribution<int> count(1, 8);
    std::uniform_real_distribution<double> amp(0.01, 2.0);
    std::uniform_real_distribution<double> phase(0.0, two_pi);
    const double load = 50.0;

    // Offsets are distinct multiples of 25 Hz so every beat divides an
    // exactly representable period.
    std::vector<int> ticks(81);
    for (int i = 0; i < 81; ++i) ticks[i] = i - 40;

    double worst = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        const int n = count(rng);
        std::shuffle(ticks.begin(), ticks.end(), rng);
        std::vector<Phasor> phasors;
        std::vector<double> offsets;
        for (int i = 0; i < n; ++i) {
            phasors.push_back({amp(rng), phase(rng)});
            offsets.push_back(25.0 * ticks[static_cast<std::size_t>(i)]);
        }
        const double closed = mpcsd_power(phasors, load);
        const double oracle = time_domain_power(phasors, offsets, load, 256, 1, true);
        worst = std::max(worst, std::abs(oracle - closed) / closed);
    }

    const double elapsed = seconds_since(start);
    require(worst < 1e-6, format("worst relative error %.3e >= 1e-6", worst));
    require(elapsed < 10.0, format("took %.2f s, budget 10 s", elapsed));
    return format("1000 cases, worst rel err %.3e, %.2f s", worst, elapsed);
}

// ---------------------------------------------------------------------------
// 5. Shared-carrier closed form vs. the same oracle: with all offsets zero
//    the time average must reproduce the coherent sum.
// ---------------------------------------------------------------------------
std::string criterion_mp_oracle(const std::string&) {
    std::mt19937 rng(52u);
    std::uniform_int_distribution<int> count(1, 8);
    std::uniform_real_distribution<double> amp(0.01, 2.0);
    std::uniform_real_distribution<double> phase(0.0, two_pi);
    const double load = 50.0;

    double worst = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        const int n = count(rng);
        std::vector<Phasor> phasors;
        double amp_sum = 0.0;
        for (int i = 0; i < n; ++i) {
            phasors.push_back({amp(rng), phase(rng)});
            amp_sum += phasors.back().amplitude;
        }
        const std::vector<double> offsets(static_cast<std::size_t>(n), 0.0);
        const double closed = mp_power(phasors, load);
        const double oracle = time_domain_power(phasors, offsets, load, 256, 1);
        const double scale = closed > 0.0 ? closed : amp_sum * amp_sum / load;
        worst = std::max(worst, std::abs(oracle - closed) / scale);
    }

    require(worst < 1e-9, format("worst relative error %.3e >= 1e-9", worst));
    return format("1000 cases, worst rel err %.3e", worst);
}

// ---------------------------------------------------------------------------
// 6. Phase-average identity: the mean of the coherent two-transmitter power
//    over the relative phase equals the carrier-shift power.
// ---------------------------------------------------------------------------
std::string criterion_phase_average(const std::string&) {
    std::mt19937 rng(6u);
    std::uniform_real_distribution<double> amp(0.05, 2.0);
    std::uniform_real_distribution<double> phase(0.0, two_pi);
    const double load = 50.0;
    const std::size_t quadrature = 4096;

    double worst = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        const double v1 = amp(rng);
        const double v2 = amp(rng);
        const double theta0 = phase(rng);
        double mean = 0.0;
        for (std::size_t k = 0; k < quadrature; ++k) {
            const double dtheta = two_pi * (static_cast<double>(k) + 0.5) /
                                  static_cast<double>(quadrature);
            const std::vector<Phasor> pair{{v1, theta0}, {v2, theta0 + dtheta}};
            mean += mp_power(pair, load);
        }
        mean /= static_cast<double>(quadrature);
        const std::vector<Phasor> pair{{v1, theta0}, {v2, theta0}};
        const double closed = mpcsd_power(pair, load);
        worst = std::max(worst, std::abs(mean - closed) / closed);
    }

    require(worst < 1e-6, format("worst relative error %.3e >= 1e-6", worst));
    return format("50 cases x %zu-point quadrature, worst rel err %.3e", quadrature, worst);
}

// ---------------------------------------------------------------------------
// 7. Coverage metric on a hand-built grid: exact fractions, tie handling,
//    and the full-coverage threshold.
// ---------------------------------------------------------------------------
std::string criterion_coverage_exact(const std::string&) {
    FieldGrid grid;
    grid.spec = GridSpec{"hand", AxisSpan{0.0, 0.0, 0.0}, AxisSpan{0.0, 3.0, 1.0},
                         AxisSpan{0.0, 0.0, 0.0}};
    grid.power_w = {1e-3, 2e-3, 3e-3, 4e-3};

    require(coverage(grid, watts_to_dbm(2.5e-3)) == 0.5, "coverage at 2.5 mW is not 1/2");
    require(coverage(grid, watts_to_dbm(2e-3)) == 0.75, "tie at 2 mW not covered");
    require(coverage(grid, -10.0) == 1.0, "coverage below the minimum is not 1");
    require(coverage(grid, 10.0) == 0.0, "coverage above the maximum is not 0");
    require(deadspot_count(grid, watts_to_dbm(2.5e-3)) == 2, "deadspot count at 2.5 mW");
    require(max_required_power_full_coverage(grid) == watts_to_dbm(1e-3),
            "full-coverage threshold is not the grid minimum");
    return "fractions 1/2, 3/4, 1, 0 and threshold all exact";
}

// ---------------------------------------------------------------------------
// 8. Box-room behavior at reflection order 2: standing-wave ripple on the
//    single-transmitter profile, elementwise deadspot dominance of the
//    carrier-shift scheme, and a room threshold gap at least as large as
//    the free-space gap.
// ---------------------------------------------------------------------------
std::string criterion_room_multipath(const std::string& dir) {
    const auto start = std::chrono::steady_clock::now();
    const Scenario room = load_scenario(dir + "/paper_room.scenario");
    require(room.max_order == 2, "bundled room scenario is not at reflection order 2");

    const FieldGrid sp1 = sweep_named(room, "sp1", "line");
    const FieldGrid sp2 = sweep_named(room, "sp2", "line");
    const FieldGrid csd = sweep_named(room, "mpcsd", "line");

    // (a) standing-wave ripple: an interior local minimum at least 3 dB
    // below the profile's peak within +/- 0.5 m.
    const std::vector<Vec3> points = grid_points(sp1.spec);
    std::vector<double> profile(sp1.power_w.size());
    for (std::size_t i = 0; i < profile.size(); ++i) profile[i] = watts_to_dbm(sp1.power_w[i]);

    int dips = 0;
    double deepest = 0.0;
    for (std::size_t i = 1; i + 1 < profile.size(); ++i) {
        if (!(profile[i] < profile[i - 1] && profile[i] < profile[i + 1])) continue;
        double neighborhood_peak = profile[i];
        for (std::size_t j = 0; j < profile.size(); ++j) {
            if (std::abs(points[j].y - points[i].y) <= 0.5)
                neighborhood_peak = std::max(neighborhood_peak, profile[j]);
        }
        const double depth = neighborhood_peak - profile[i];
        if (depth >= 3.0) {
            ++dips;
            deepest = std::max(deepest, depth);
        }
    }
    require(dips >= 1, "no interior dip >= 3 dB below its 0.5 m neighborhood");

    // (b) deadspot dominance for every threshold: evaluate on a dense ladder
    // plus every breakpoint of the three fields.
    std::set<double> levels;
    for (double p = -60.0; p <= 15.0; p += 0.25) levels.insert(p);
    for (const FieldGrid* field : {&sp1, &sp2, &csd})
        for (double w : field->power_w) levels.insert(watts_to_dbm(w));
    for (double p_req : levels) {
        const std::size_t d_csd = deadspot_count(csd, p_req);
        const std::size_t d_sp1 = deadspot_count(sp1, p_req);
        const std::size_t d_sp2 = deadspot_count(sp2, p_req);
        require(d_csd <= std::min(d_sp1, d_sp2),
                format("deadspots at %.3f dBm: mpcsd=%zu sp1=%zu sp2=%zu", p_req, d_csd,
                       d_sp1, d_sp2));
    }

    // (c) the reflective room widens the threshold gap.
    const Scenario open = load_scenario(dir + "/paper_freespace.scenario");
    const double open_gap =
        max_required_power_full_coverage(sweep_named(open, "mpcsd", "line")) -
        max_required_power_full_coverage(sweep_named(open, "sp1", "line"));
    const double room_gap = max_required_power_full_coverage(csd) -
                            max_required_power_full_coverage(sp1);
    require(room_gap >= open_gap,
            format("room gap %.3f dB below free-space gap %.3f dB", room_gap, open_gap));

    const double elapsed = seconds_since(start);
    require(elapsed < 30.0, format("took %.2f s, budget 30 s", elapsed));
    return format("%d dips (deepest %.1f dB), room gap %.3f >= %.3f dB, %.2f s", dips,
                  deepest, room_gap, open_gap, elapsed);
}

// ---------------------------------------------------------------------------
// 9. Determinism: running each bundled scenario twice produces byte-identical
//    files.
// ---------------------------------------------------------------------------
std::string read_bytes(const std::filesystem::path& path) {
    std::ifstream file(path, std::ios::binary);
    require(bool(file), "cannot reopen output " + path.string());
    std::ostringstream buffer;
    buffer << file.rdbuf();
    return buffer.str();
}

std::string criterion_determinism(const std::string& dir) {
    namespace fs = std::filesystem;
    const fs::path work = fs::temp_directory_path() / "wetsim_acceptance_determinism";
    fs::remove_all(work);

    std::size_t files_compared = 0;
    for (const char* name : {"paper_freespace.scenario", "paper_room.scenario"}) {
        const Scenario sc = load_scenario(dir + "/" + name);
        RunOptions options;
        options.out_dir = (work / (std::string(name) + ".a")).string();
        run_scenario(sc, options);
        options.out_dir = (work / (std::string(name) + ".b")).string();
        run_scenario(sc, options);

        const fs::path a = work / (std::string(name) + ".a");
        const fs::path b = work / (std::string(name) + ".b");
        std::vector<fs::path> names_a, names_b;
        for (const auto& entry : fs::directory_iterator(a))
            names_a.push_back(entry.path().filename());
        for (const auto& entry : fs::directory_iterator(b))
            names_b.push_back(entry.path().filename());
        std::sort(names_a.begin(), names_a.end());
        std::sort(names_b.begin(), names_b.end());
        require(names_a == names_b, std::string(name) + ": runs emitted different file sets");
        require(!names_a.empty(), std::string(name) + ": no output files produced");
        for (const fs::path& file : names_a) {
            require(read_bytes(a / file) == read_bytes(b / file),
                    std::string(name) + ": " + file.string() + " differs between runs");
            ++files_compared;
        }
    }
    fs::remove_all(work);
    return format("%zu files byte-identical across repeated runs", files_compared);
}

}  // namespace

int main(int argc, char** argv) {
    const std::string dir = argc > 1 ? argv[1] : "scenarios";

    struct Entry {
        int id;
        const char* title;
        std::string (*body)(const std::string&);
    };
    const Entry entries[] = {
        {1, "free-space threshold gap", criterion_free_space_gap},
        {2, "threshold ordering with deep coherent null", criterion_threshold_ordering},
        {3, "zero-coverage convergence", criterion_zero_coverage},
        {4, "carrier-shift time-domain oracle", criterion_csd_oracle},
        {5, "shared-carrier time-domain oracle", criterion_mp_oracle},
        {6, "phase-average identity", criterion_phase_average},
        {7, "coverage metric exactness", criterion_coverage_exact},
        {8, "box-room multipath behavior", criterion_room_multipath},
        {9, "byte-identical repeated runs", criterion_determinism},
    };

    int failures = 0;
    for (const Entry& entry : entries) {
        std::string verdict = "PASS";
        std::string detail;
        try {
            detail = entry.body(dir);
        } catch (const std::exception& err) {
            verdict = "FAIL";
            detail = err.what();
            ++failures;
        }
        std::printf("%s  %d. %-42s %s\n", verdict.c_str(), entry.id, entry.title,
                    detail.c_str());
        std::fflush(stdout);
    }

    if (failures == 0) {
        std::printf("all %zu acceptance criteria passed\n", std::size(entries));
    } else {
        std::printf("%d of %zu acceptance criteria FAILED\n", failures, std::size(entries));
    }
    return failures;
}
