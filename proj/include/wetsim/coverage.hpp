#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "wetsim/grid.hpp"
#include "wetsim/scenario.hpp"
#include "wetsim/schemes.hpp"

namespace wetsim {

// Received power of one scheme sampled over one grid, in grid-point order.
struct FieldGrid {
    GridSpec spec;
    std::vector<double> power_w;
};

// (required power dBm, covered fraction) samples in descending-power order.
struct CoverageCurve {
    std::vector<std::pair<double, double>> samples;
};

// Aggregate arrival phasor per transmitter at one receive point. Each
// transmitter is evaluated on its own shifted carrier unless
// shared_center_carrier is set (the MP case, every transmitter on f_c).
std::vector<Phasor> point_aggregates(const Scenario& scenario, const Vec3& point,
                                     bool shared_center_carrier);

// Evaluates a scheme at every point of the grid: per transmitter, enumerate
// reflection paths up to scenario.max_order, form the aggregate arrival
// phasor, then apply the scheme power formula. Work is split across threads;
// point ordering and values do not depend on the thread count.
FieldGrid sweep(const Scenario& scenario, const SchemeId& scheme, const GridSpec& grid,
                unsigned thread_count = 0);

// Fraction of grid points whose power meets or exceeds p_req (ties covered).
double coverage(const FieldGrid& grid, double p_req_dbm);

// Largest required power that still gives full coverage: the grid minimum.
double max_required_power_full_coverage(const FieldGrid& grid);

// Samples coverage over [p_req_min, p_req_max] at the given step, plus an
// exact breakpoint at each distinct grid power inside the range.
CoverageCurve coverage_curve(const FieldGrid& grid, double p_req_min_dbm, double p_req_max_dbm,
                             double step_db);

// Required-power levels where the two curves trade places, located by linear
// interpolation on the merged sample grid. Degenerate overlap yields nothing.
std::vector<std::pair<double, double>> crossing_points(const CoverageCurve& a,
                                                       const CoverageCurve& b);

// Number of grid points strictly below the activation threshold.
std::size_t deadspot_count(const FieldGrid& grid, double p_req_dbm);

}  // namespace wetsim
