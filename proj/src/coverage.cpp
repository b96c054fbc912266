#include "wetsim/coverage.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <thread>

#include "wetsim/units.hpp"

namespace wetsim {

std::vector<Phasor> point_aggregates(const Scenario& scenario, const Vec3& point,
                                     bool shared_center_carrier) {
    const double fc = scenario.center_frequency_hz;
    const std::size_t n_tx = scenario.transmitters.size();

    std::vector<Phasor> aggregates(n_tx);
    std::vector<Phasor> arrivals;
    for (std::size_t n = 0; n < n_tx; ++n) {
        const Transmitter& tx = scenario.transmitters[n];
        const std::vector<PathComponent> paths = enumerate_paths(
            scenario.room, tx, scenario.receiver, point, scenario.max_order, fc);
        const double carrier = shared_center_carrier ? fc : fc + tx.carrier_offset_hz;
        arrivals.clear();
        arrivals.reserve(paths.size());
        for (const PathComponent& path : paths)
            arrivals.push_back(
                path_phasor(path, tx, scenario.receiver, carrier, scenario.load_ohms));
        aggregates[n] = aggregate_phasor(arrivals);
    }
    return aggregates;
}

namespace {

double evaluate_point(const Scenario& scenario, const SchemeId& scheme, const Vec3& point) {
    // MP drives every transmitter on the shared center carrier; SP and MPCSD
    // evaluate each transmitter on its own shifted carrier
    const std::vector<Phasor> aggregates =
        point_aggregates(scenario, point, scheme.kind == SchemeKind::MP);
    return evaluate_scheme(scheme, aggregates, scenario.offsets_hz, scenario.load_ohms).power_w;
}

double sample_dbm(double power_w) { return watts_to_dbm(power_w); }

// Linear interpolation on a descending-power curve; x must lie inside the
// sampled range.
double curve_value(const CoverageCurve& curve, double x) {
    const auto& s = curve.samples;
    // samples descend in power: find the bracketing pair around x
    auto it = std::lower_bound(s.begin(), s.end(), x,
                               [](const std::pair<double, double>& sample, double value) {
                                   return sample.first > value;
                               });
    if (it == s.begin()) return it->second;
    if (it == s.end()) return (it - 1)->second;
    const auto& hi = *(it - 1);  // higher power
    const auto& lo = *it;        // lower power
    if (hi.first == lo.first) return lo.second;
    const double t = (x - lo.first) / (hi.first - lo.first);
    return lo.second + t * (hi.second - lo.second);
}

}  // namespace

FieldGrid sweep(const Scenario& scenario, const SchemeId& scheme, const GridSpec& grid,
                unsigned thread_count) {
    if (scheme.kind == SchemeKind::SP && scheme.tx_index >= scenario.transmitters.size())
        throw std::invalid_argument("sweep: sp transmitter index out of range");
    for (double x : {grid.x.start, grid.x.stop})
        for (double y : {grid.y.start, grid.y.stop})
            for (double z : {grid.z.start, grid.z.stop})
                if (!scenario.room.contains({x, y, z}))
                    throw std::invalid_argument("sweep: grid '" + grid.name +
                                                "' extends outside the room");

    const std::vector<Vec3> points = grid_points(grid);
    FieldGrid field;
    field.spec = grid;
    field.power_w.assign(points.size(), 0.0);

    unsigned workers = thread_count != 0 ? thread_count : std::thread::hardware_concurrency();
    if (workers == 0) workers = 1;
    workers = static_cast<unsigned>(
        std::min<std::size_t>(workers, points.size()));

    std::mutex error_mutex;
    std::optional<std::pair<std::size_t, std::string>> first_error;

    auto run_block = [&](std::size_t begin, std::size_t end) {
        for (std::size_t k = begin; k < end; ++k) {
            try {
                field.power_w[k] = evaluate_point(scenario, scheme, points[k]);
            } catch (const std::exception& err) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error || k < first_error->first)
                    first_error = {k, std::string(err.what()) + " (grid point " +
                                          std::to_string(k) + ")"};
                return;
            }
        }
    };

    if (workers <= 1) {
        run_block(0, points.size());
    } else {
        std::vector<std::thread> pool;
        const std::size_t chunk = (points.size() + workers - 1) / workers;
        for (unsigned w = 0; w < workers; ++w) {
            const std::size_t begin = static_cast<std::size_t>(w) * chunk;
            const std::size_t end = std::min(points.size(), begin + chunk);
            if (begin >= end) break;
            pool.emplace_back(run_block, begin, end);
        }
        for (std::thread& t : pool) t.join();
    }

    if (first_error) throw std::invalid_argument("sweep: " + first_error->second);
    return field;
}

double coverage(const FieldGrid& grid, double p_req_dbm) {
    if (grid.power_w.empty()) throw std::invalid_argument("coverage: empty grid");
    std::size_t covered = 0;
    for (double p : grid.power_w)
        if (sample_dbm(p) >= p_req_dbm) ++covered;
    return static_cast<double>(covered) / static_cast<double>(grid.power_w.size());
}

double max_required_power_full_coverage(const FieldGrid& grid) {
    if (grid.power_w.empty())
        throw std::invalid_argument("max_required_power_full_coverage: empty grid");
    return sample_dbm(*std::min_element(grid.power_w.begin(), grid.power_w.end()));
}

CoverageCurve coverage_curve(const FieldGrid& grid, double p_req_min_dbm, double p_req_max_dbm,
                             double step_db) {
    if (grid.power_w.empty()) throw std::invalid_argument("coverage_curve: empty grid");
    if (!(step_db > 0.0)) throw std::invalid_argument("coverage_curve: step must be > 0");
    if (p_req_max_dbm < p_req_min_dbm)
        throw std::invalid_argument("coverage_curve: max must be >= min");

    std::set<double> levels;
    const auto steps =
        static_cast<std::size_t>((p_req_max_dbm - p_req_min_dbm) / step_db + 1e-9);
    for (std::size_t i = 0; i <= steps; ++i)
        levels.insert(p_req_min_dbm + static_cast<double>(i) * step_db);
    levels.insert(p_req_max_dbm);
    // exact breakpoints: the curve is a step function of the sampled powers
    for (double p : grid.power_w) {
        const double dbm = sample_dbm(p);
        if (dbm >= p_req_min_dbm && dbm <= p_req_max_dbm) levels.insert(dbm);
    }

    CoverageCurve curve;
    curve.samples.reserve(levels.size());
    for (auto it = levels.rbegin(); it != levels.rend(); ++it)
        curve.samples.emplace_back(*it, coverage(grid, *it));
    return curve;
}

std::vector<std::pair<double, double>> crossing_points(const CoverageCurve& a,
                                                       const CoverageCurve& b) {
    if (a.samples.empty() || b.samples.empty())
        throw std::invalid_argument("crossing_points: empty curve");
    const double lo = std::max(a.samples.back().first, b.samples.back().first);
    const double hi = std::min(a.samples.front().first, b.samples.front().first);
    if (hi < lo)
        throw std::invalid_argument("crossing_points: curves do not overlap in power");

    std::set<double> merged;
    for (const auto& s : a.samples)
        if (s.first >= lo && s.first <= hi) merged.insert(s.first);
    for (const auto& s : b.samples)
        if (s.first >= lo && s.first <= hi) merged.insert(s.first);

    std::vector<std::pair<double, double>> crossings;
    double prev_x = 0.0, prev_d = 0.0;
    int last_sign = 0;
    bool have_prev = false;
    for (double x : merged) {
        const double d = curve_value(a, x) - curve_value(b, x);
        const int sign = d > 0.0 ? 1 : (d < 0.0 ? -1 : 0);
        if (sign != 0 && last_sign != 0 && sign != last_sign && have_prev) {
            const double t = prev_d == d ? 0.0 : prev_d / (prev_d - d);
            const double cross_x = prev_x + t * (x - prev_x);
            crossings.emplace_back(cross_x, curve_value(a, cross_x));
        }
        if (sign != 0) last_sign = sign;
        prev_x = x;
        prev_d = d;
        have_prev = true;
    }
    return crossings;
}

std::size_t deadspot_count(const FieldGrid& grid, double p_req_dbm) {
    if (grid.power_w.empty()) throw std::invalid_argument("deadspot_count: empty grid");
    std::size_t dead = 0;
    for (double p : grid.power_w)
        if (!(sample_dbm(p) >= p_req_dbm)) ++dead;
    return dead;
}

}  // namespace wetsim
