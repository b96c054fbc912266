#pragma once

#include <array>
#include <complex>
#include <optional>
#include <span>
#include <vector>

#include "wetsim/geometry.hpp"

namespace wetsim {

enum class Polarization { Horizontal, Vertical };

enum class PatternKind { IsotropicWithGain, PatchCosinePower };

struct Antenna {
    Vec3 position{};
    Vec3 boresight{0.0, 1.0, 0.0};  // unit vector
    double gain_dbi{0.0};           // peak gain
    Polarization polarization{Polarization::Horizontal};
    PatternKind pattern{PatternKind::IsotropicWithGain};
    double pattern_exponent{2.0};   // cos^n rolloff, patch pattern only

    bool operator==(const Antenna&) const = default;
};

struct Transmitter {
    Antenna antenna{};
    double power_dbm{0.0};
    double carrier_offset_hz{0.0};  // relative to the channel center

    bool operator==(const Transmitter&) const = default;
};

struct SurfaceMaterial {
    double relative_permittivity{1.0};
    double conductivity_s_per_m{0.0};

    bool operator==(const SurfaceMaterial&) const = default;
};

/// Box surfaces indexed min/max per axis.
enum class Surface { XMin = 0, XMax, YMin, YMax, ZMin, ZMax };

/// Propagation environment: either unbounded free space or an axis-aligned
/// rectangular room whose six surfaces reflect with per-surface materials.
struct Room {
    struct Box {
        Vec3 min{};
        Vec3 max{};

        bool operator==(const Box&) const = default;
    };
    std::optional<Box> box;               // nullopt = free space
    std::array<SurfaceMaterial, 6> materials{};

    bool operator==(const Room&) const = default;

    bool is_free_space() const { return !box.has_value(); }
    bool contains(const Vec3& p) const;   // strict interior (always true in free space)

    static Room free_space();
    static Room shoebox(const Vec3& min, const Vec3& max, const SurfaceMaterial& all_surfaces);
};

/// One propagation path from a transmitter to a receive point.
/// reflection_product is the complex voltage factor relative to an ideal
/// boresight free-space path of the same length: the product of the
/// per-bounce reflection response (TE/TM decomposed, projected onto the
/// receive polarization) and the departure/arrival pattern amplitudes.
/// surface_magnitude isolates the field attenuation from bounces alone;
/// it is <= 1 for passive surfaces.
struct PathComponent {
    double total_length{0.0};
    std::complex<double> reflection_product{1.0, 0.0};
    double surface_magnitude{1.0};
    int order{0};
    int source_tx{0};
};

/// Arrival voltage phasor at the rectenna output: RMS amplitude in volts and
/// carrier phase wrapped to [0, 2*pi).
struct Phasor {
    double amplitude{0.0};
    double phase{0.0};
};

Phasor phasor_from_complex(std::complex<double> value);
std::complex<double> phasor_to_complex(const Phasor& p);

double wavelength(double frequency_hz);

/// Friis received power with fixed gains, all in dB units.
double friis_power_dbm(double tx_power_dbm, double tx_gain_dbi, double rx_gain_dbi,
                       double distance_m, double frequency_hz);

/// Friis received power between two antennas using their peak gains.
double friis_power(const Transmitter& tx, const Antenna& rx, double distance_m,
                   double frequency_hz);

enum class FresnelPolarization { TE, TM };

/// Plane-wave reflection coefficient of an air/material interface for a wave
/// arriving at the given angle from the surface normal. Loss enters through
/// the complex relative permittivity eps_r - j*sigma/(omega*eps0).
std::complex<double> fresnel_coefficient(FresnelPolarization pol, double incidence_rad,
                                         const SurfaceMaterial& material, double frequency_hz);

/// Pattern amplitude (relative to peak, in [0, 1]) toward a unit direction.
double pattern_amplitude(const Antenna& antenna, const Vec3& direction);

/// Field polarization unit vector radiated toward a unit propagation
/// direction. Horizontal lies in the ground plane, vertical completes the
/// right-handed spherical basis.
Vec3 polarization_vector(Polarization pol, const Vec3& direction);

/// The antenna's fixed polarization axis: the polarization vector evaluated
/// at its boresight. The element keeps this orientation for every ray, so
/// off-boresight rays couple through the axis component transverse to the
/// ray (zero when the ray runs along the axis).
Vec3 polarization_axis(const Antenna& antenna);

/// Unit transverse projection of the polarization axis onto the plane
/// orthogonal to a unit ray direction; the zero vector on the blind axis.
/// Identical for +/-direction, so one expression serves departure and
/// arrival.
Vec3 transverse_axis(const Vec3& axis, const Vec3& direction);

/// Enumerates the direct path plus every image-method reflection path with at
/// most max_order bounces. Per-bounce Fresnel coefficients are evaluated at
/// material_frequency_hz (materials are treated as flat across the channel);
/// the carrier-dependent phase is applied later by path_phasor.
std::vector<PathComponent> enumerate_paths(const Room& room, const Transmitter& tx,
                                           const Antenna& rx, const Vec3& rx_point,
                                           int max_order, double material_frequency_hz);

/// Converts a path into an arrival phasor at the given carrier:
/// amplitude^2/load equals the Friis path power scaled by
/// |reflection_product|^2, phase is -2*pi*length/lambda + arg(reflection).
Phasor path_phasor(const PathComponent& path, const Transmitter& tx, const Antenna& rx,
                   double frequency_hz, double load_ohms);

/// Coherent sum of same-carrier phasors.
Phasor aggregate_phasor(std::span<const Phasor> phasors);

}  // namespace wetsim
