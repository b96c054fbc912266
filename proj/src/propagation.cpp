#include "wetsim/propagation.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <stdexcept>

#include "wetsim/units.hpp"

namespace wetsim {

namespace {

// Complex-valued field vector used while tracking polarization through bounces.
struct FieldVec {
    std::complex<double> x{}, y{}, z{};
};

FieldVec to_field(const Vec3& v) { return {{v.x, 0.0}, {v.y, 0.0}, {v.z, 0.0}}; }

std::complex<double> field_dot(const FieldVec& e, const Vec3& v) {
    return e.x * v.x + e.y * v.y + e.z * v.z;
}

FieldVec field_axpy(std::complex<double> a, const Vec3& v, std::complex<double> b, const Vec3& w) {
    return {a * v.x + b * w.x, a * v.y + b * w.y, a * v.z + b * w.z};
}

double field_norm(const FieldVec& e) {
    return std::sqrt(std::norm(e.x) + std::norm(e.y) + std::norm(e.z));
}

}  // namespace

Phasor phasor_from_complex(std::complex<double> value) {
    return {std::abs(value), wrap_phase(std::arg(value))};
}

std::complex<double> phasor_to_complex(const Phasor& p) {
    return std::polar(p.amplitude, p.phase);
}

bool Room::contains(const Vec3& p) const {
    if (!box) return true;
    return p.x > box->min.x && p.x < box->max.x && p.y > box->min.y && p.y < box->max.y &&
           p.z > box->min.z && p.z < box->max.z;
}

Room Room::free_space() { return Room{}; }

Room Room::shoebox(const Vec3& min, const Vec3& max, const SurfaceMaterial& all_surfaces) {
    if (!(max.x > min.x && max.y > min.y && max.z > min.z))
        throw std::invalid_argument("room: box extents must be positive in each axis");
    Room room;
    room.box = Box{min, max};
    room.materials.fill(all_surfaces);
    return room;
}

double wavelength(double frequency_hz) {
    if (!(frequency_hz > 0.0)) throw std::invalid_argument("wavelength: frequency must be > 0");
    return constants::speed_of_light / frequency_hz;
}

double friis_power_dbm(double tx_power_dbm, double tx_gain_dbi, double rx_gain_dbi,
                       double distance_m, double frequency_hz) {
    if (!(distance_m > 0.0)) throw std::invalid_argument("friis: distance must be > 0");
    const double lambda = wavelength(frequency_hz);
    const double path_loss_db = 20.0 * std::log10(4.0 * constants::pi * distance_m / lambda);
    return tx_power_dbm + tx_gain_dbi + rx_gain_dbi - path_loss_db;
}

double friis_power(const Transmitter& tx, const Antenna& rx, double distance_m,
                   double frequency_hz) {
    return friis_power_dbm(tx.power_dbm, tx.antenna.gain_dbi, rx.gain_dbi, distance_m,
                           frequency_hz);
}

std::complex<double> fresnel_coefficient(FresnelPolarization pol, double incidence_rad,
                                         const SurfaceMaterial& material, double frequency_hz) {
    if (!(incidence_rad >= 0.0) || incidence_rad > constants::pi / 2.0)
        throw std::invalid_argument("fresnel: incidence angle must lie in [0, pi/2]");
    if (material.relative_permittivity < 1.0)
        throw std::invalid_argument("fresnel: relative permittivity must be >= 1");
    if (material.conductivity_s_per_m < 0.0)
        throw std::invalid_argument("fresnel: conductivity must be >= 0");
    const double omega = constants::two_pi * frequency_hz;
    const std::complex<double> eps{material.relative_permittivity,
                                   -material.conductivity_s_per_m /
                                       (omega * constants::vacuum_permittivity)};
    const double cos_i = std::cos(incidence_rad);
    const double sin2_i = 1.0 - cos_i * cos_i;
    // principal sqrt keeps Re >= 0, the decaying transmitted wave
    const std::complex<double> root = std::sqrt(eps - sin2_i);
    if (pol == FresnelPolarization::TE) return (cos_i - root) / (cos_i + root);
    return (eps * cos_i - root) / (eps * cos_i + root);
}

double pattern_amplitude(const Antenna& antenna, const Vec3& direction) {
    if (antenna.pattern == PatternKind::IsotropicWithGain) return 1.0;
    const double cos_off = std::clamp(dot(antenna.boresight, direction), -1.0, 1.0);
    if (cos_off <= 0.0) return 0.0;  // zero backlobe
    return std::pow(cos_off, antenna.pattern_exponent / 2.0);
}

Vec3 polarization_vector(Polarization pol, const Vec3& direction) {
    Vec3 horizontal = cross(direction, Vec3{0.0, 0.0, 1.0});
    if (norm(horizontal) < 1e-12) horizontal = Vec3{1.0, 0.0, 0.0};  // propagation along z
    else horizontal = normalized(horizontal);
    if (pol == Polarization::Horizontal) return horizontal;
    return normalized(cross(horizontal, direction));
}

Vec3 polarization_axis(const Antenna& antenna) {
    return polarization_vector(antenna.polarization, antenna.boresight);
}

Vec3 transverse_axis(const Vec3& axis, const Vec3& direction) {
    const Vec3 transverse = axis - direction * dot(axis, direction);
    const double length = norm(transverse);
    if (length < 1e-12) return Vec3{0.0, 0.0, 0.0};  // ray along the element axis
    return transverse * (1.0 / length);
}

namespace {

// One mirror image of the source along a single axis, in room-local
// coordinates where the walls sit at 0 and `length`.
struct AxisImage {
    double coord{0.0};
    int bounces{0};
    int min_wall_hits{0};
    int max_wall_hits{0};
    int copy_index{0};  // floor(coord / length); parity gives the unfold orientation
};

std::vector<AxisImage> axis_images(double source, double length, int max_order) {
    std::vector<AxisImage> images;
    for (int parity = 0; parity < 2; ++parity) {
        for (int q = -(max_order / 2 + 1); q <= max_order / 2 + 1; ++q) {
            const int bounces = parity == 0 ? 2 * std::abs(q) : std::abs(2 * q - 1);
            if (bounces > max_order) continue;
            AxisImage img;
            img.coord = (parity == 0 ? source : -source) + 2.0 * q * length;
            img.bounces = bounces;
            img.copy_index = static_cast<int>(std::floor(img.coord / length));
            const int m = img.copy_index;
            const int lo = m >= 1 ? 1 : m + 1;
            const int hi = m >= 1 ? m : 0;
            for (int k = lo; k <= hi; ++k) (k % 2 == 0 ? img.min_wall_hits : img.max_wall_hits)++;
            assert(img.min_wall_hits + img.max_wall_hits == bounces);
            images.push_back(img);
        }
    }
    std::sort(images.begin(), images.end(), [](const AxisImage& a, const AxisImage& b) {
        if (a.bounces != b.bounces) return a.bounces < b.bounces;
        return a.coord < b.coord;
    });
    return images;
}

// A wall crossing of the unfolded ray, ordered along the ray.
struct Crossing {
    double t{0.0};
    int axis{0};
    bool max_wall{false};
};

PathComponent direct_path(const Transmitter& tx, const Antenna& rx, const Vec3& rx_point) {
    const Vec3 delta = rx_point - tx.antenna.position;
    const double length = norm(delta);
    if (length == 0.0)
        throw std::invalid_argument("enumerate_paths: transmitter coincides with receive point");
    const Vec3 dir = delta * (1.0 / length);
    const Vec3 e_tx = transverse_axis(polarization_axis(tx.antenna), dir);
    const Vec3 e_rx = transverse_axis(polarization_axis(rx), dir);
    const double coupling = dot(e_tx, e_rx);
    PathComponent path;
    path.total_length = length;
    path.reflection_product = coupling * pattern_amplitude(tx.antenna, dir) *
                              pattern_amplitude(rx, dir * -1.0);
    path.surface_magnitude = 1.0;
    path.order = 0;
    return path;
}

}  // namespace

std::vector<PathComponent> enumerate_paths(const Room& room, const Transmitter& tx,
                                           const Antenna& rx, const Vec3& rx_point,
                                           int max_order, double material_frequency_hz) {
    if (max_order < 0) throw std::invalid_argument("enumerate_paths: max_order must be >= 0");
    if (!room.contains(tx.antenna.position))
        throw std::invalid_argument("enumerate_paths: transmitter outside room");
    if (!room.contains(rx_point))
        throw std::invalid_argument("enumerate_paths: receive point outside room");

    std::vector<PathComponent> paths;
    paths.push_back(direct_path(tx, rx, rx_point));
    if (room.is_free_space() || max_order == 0) return paths;

    const Vec3 room_min = room.box->min;
    const Vec3 size = room.box->max - room_min;
    const Vec3 src = tx.antenna.position - room_min;
    const Vec3 dst = rx_point - room_min;

    const std::array<std::vector<AxisImage>, 3> per_axis = {
        axis_images(src.x, size.x, max_order),
        axis_images(src.y, size.y, max_order),
        axis_images(src.z, size.z, max_order),
    };

    const Vec3 axis_unit[3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    std::vector<Crossing> crossings;

    for (const AxisImage& ix : per_axis[0]) {
        for (const AxisImage& iy : per_axis[1]) {
            const int partial = ix.bounces + iy.bounces;
            if (partial > max_order) break;  // sorted by bounce count
            for (const AxisImage& iz : per_axis[2]) {
                const int order = partial + iz.bounces;
                if (order > max_order) break;
                if (order == 0) continue;  // direct path already emitted

                const std::array<const AxisImage*, 3> img = {&ix, &iy, &iz};
                const Vec3 image_point{ix.coord, iy.coord, iz.coord};
                const Vec3 delta = dst - image_point;
                const double length = norm(delta);
                const Vec3 unfolded = delta * (1.0 / length);

                // Unfold orientation at the source end; flips per axis at
                // each crossing so the folded (physical) direction is
                // unfolded * sign componentwise.
                Vec3 sign{1.0, 1.0, 1.0};
                crossings.clear();
                for (int a = 0; a < 3; ++a) {
                    const int m = img[a]->copy_index;
                    sign[a] = (m % 2 == 0) ? 1.0 : -1.0;
                    const int lo = m >= 1 ? 1 : m + 1;
                    const int hi = m >= 1 ? m : 0;
                    for (int k = lo; k <= hi; ++k) {
                        const double plane = static_cast<double>(k) * size[a];
                        crossings.push_back({(plane - image_point[a]) / (dst[a] - image_point[a]),
                                             a, (k % 2) != 0});
                    }
                }
                assert(static_cast<int>(crossings.size()) == order);
                std::sort(crossings.begin(), crossings.end(),
                          [](const Crossing& a, const Crossing& b) {
                              if (a.t != b.t) return a.t < b.t;
                              return a.axis < b.axis;
                          });

                const Vec3 depart{unfolded.x * sign.x, unfolded.y * sign.y, unfolded.z * sign.z};
                FieldVec field = to_field(transverse_axis(polarization_axis(tx.antenna), depart));

                for (const Crossing& hit : crossings) {
                    const Vec3 dir{unfolded.x * sign.x, unfolded.y * sign.y,
                                   unfolded.z * sign.z};
                    const Vec3 normal = axis_unit[hit.axis] * (hit.max_wall ? -1.0 : 1.0);
                    const double cos_i = std::clamp(-dot(dir, normal), 0.0, 1.0);
                    const double angle = std::acos(cos_i);
                    const SurfaceMaterial& mat =
                        room.materials[static_cast<std::size_t>(2 * hit.axis +
                                                                (hit.max_wall ? 1 : 0))];
                    const auto gamma_te =
                        fresnel_coefficient(FresnelPolarization::TE, angle, mat,
                                            material_frequency_hz);
                    sign[hit.axis] = -sign[hit.axis];
                    const Vec3 dir_out{unfolded.x * sign.x, unfolded.y * sign.y,
                                       unfolded.z * sign.z};

                    const Vec3 s_raw = cross(dir, normal);
                    const double s_len = norm(s_raw);
                    if (s_len < 1e-12) {
                        // normal incidence: any tangential basis works and both
                        // coefficients act identically
                        field.x *= gamma_te;
                        field.y *= gamma_te;
                        field.z *= gamma_te;
                        continue;
                    }
                    const auto gamma_tm =
                        fresnel_coefficient(FresnelPolarization::TM, angle, mat,
                                            material_frequency_hz);
                    const Vec3 e_s = s_raw * (1.0 / s_len);
                    const Vec3 e_p_in = cross(e_s, dir);
                    const Vec3 e_p_out = cross(e_s, dir_out);
                    const std::complex<double> amp_s = field_dot(field, e_s);
                    const std::complex<double> amp_p = field_dot(field, e_p_in);
                    field = field_axpy(gamma_te * amp_s, e_s, gamma_tm * amp_p, e_p_out);
                }

                const Vec3 arrive{unfolded.x * sign.x, unfolded.y * sign.y, unfolded.z * sign.z};
                const Vec3 e_rx = transverse_axis(polarization_axis(rx), arrive);

                PathComponent path;
                path.total_length = length;
                path.surface_magnitude = field_norm(field);
                path.reflection_product = field_dot(field, e_rx) *
                                          pattern_amplitude(tx.antenna, depart) *
                                          pattern_amplitude(rx, arrive * -1.0);
                path.order = order;
                paths.push_back(path);
            }
        }
    }
    return paths;
}

Phasor path_phasor(const PathComponent& path, const Transmitter& tx, const Antenna& rx,
                   double frequency_hz, double load_ohms) {
    if (!(load_ohms > 0.0)) throw std::invalid_argument("path_phasor: load must be > 0");
    const double power_w = dbm_to_watts(
        friis_power(tx, rx, path.total_length, frequency_hz));
    const double amplitude = std::sqrt(power_w * load_ohms) * std::abs(path.reflection_product);
    const double phase = -constants::two_pi * path.total_length / wavelength(frequency_hz) +
                         std::arg(path.reflection_product);
    return {amplitude, wrap_phase(phase)};
}

Phasor aggregate_phasor(std::span<const Phasor> phasors) {
    if (phasors.empty()) throw std::invalid_argument("aggregate_phasor: empty phasor list");
    std::complex<double> sum{0.0, 0.0};
    for (const Phasor& p : phasors) sum += phasor_to_complex(p);
    return phasor_from_complex(sum);
}

}  // namespace wetsim
