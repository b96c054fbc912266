#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "wetsim/geometry.hpp"

namespace wetsim {

// Inclusive sampled interval along one axis. A degenerate span (start ==
// stop) yields a single sample regardless of step.
struct AxisSpan {
    double start{0.0};
    double stop{0.0};
    double step{0.0};

    bool operator==(const AxisSpan&) const = default;
};

// Rectilinear evaluation grid. Points are ordered x-major, z-minor:
// index = (ix * ny + iy) * nz + iz.
struct GridSpec {
    std::string name;
    AxisSpan x;
    AxisSpan y;
    AxisSpan z;

    bool operator==(const GridSpec&) const = default;
};

inline std::size_t axis_count(const AxisSpan& span) {
    if (span.stop == span.start) return 1;
    if (span.stop < span.start) throw std::invalid_argument("grid: axis stop must be >= start");
    if (!(span.step > 0.0))
        throw std::invalid_argument("grid: non-degenerate axis requires step > 0");
    // small forgiveness so spans meant to land on the endpoint include it
    return static_cast<std::size_t>((span.stop - span.start) / span.step + 1e-9) + 1;
}

inline std::size_t grid_point_count(const GridSpec& grid) {
    return axis_count(grid.x) * axis_count(grid.y) * axis_count(grid.z);
}

inline std::vector<Vec3> grid_points(const GridSpec& grid) {
    const std::size_t nx = axis_count(grid.x);
    const std::size_t ny = axis_count(grid.y);
    const std::size_t nz = axis_count(grid.z);
    std::vector<Vec3> points;
    points.reserve(nx * ny * nz);
    for (std::size_t ix = 0; ix < nx; ++ix)
        for (std::size_t iy = 0; iy < ny; ++iy)
            for (std::size_t iz = 0; iz < nz; ++iz)
                points.push_back(Vec3{grid.x.start + static_cast<double>(ix) * grid.x.step,
                                      grid.y.start + static_cast<double>(iy) * grid.y.step,
                                      grid.z.start + static_cast<double>(iz) * grid.z.step});
    return points;
}

}  // namespace wetsim
