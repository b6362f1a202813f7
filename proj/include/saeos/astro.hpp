#pragma once

// Two-body orbit propagation and spherical-Earth geometry.
//
// Frames: inertial (ECI) with the x axis fixed at the Greenwich meridian at the
// scheduling epoch, and Earth-fixed (ECEF) rotating about z at a constant rate.
// Times are real seconds since the scheduling epoch.

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "saeos/errors.hpp"

namespace saeos::astro {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr double kDeg = std::numbers::pi / 180.0;

inline constexpr double kMu = 398600.4418;                   // km^3/s^2
inline constexpr double kEarthRadius = 6378.137;             // km
inline constexpr double kEarthRotationRate = 7.2921159e-5;  // rad/s

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    friend constexpr Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
    friend constexpr Vec3 operator-(Vec3 a, Vec3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
    friend constexpr Vec3 operator-(Vec3 a) { return {-a.x, -a.y, -a.z}; }
    friend constexpr Vec3 operator*(double s, Vec3 a) { return {s * a.x, s * a.y, s * a.z}; }
    friend constexpr Vec3 operator*(Vec3 a, double s) { return s * a; }
    friend constexpr Vec3 operator/(Vec3 a, double s) { return {a.x / s, a.y / s, a.z / s}; }
    friend constexpr bool operator==(const Vec3&, const Vec3&) = default;
};

constexpr double dot(Vec3 a, Vec3 b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

constexpr Vec3 cross(Vec3 a, Vec3 b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

inline double norm(Vec3 a) { return std::sqrt(dot(a, a)); }

inline Vec3 normalized(Vec3 a) { return a / norm(a); }

/// Angle between two nonzero vectors, radians in [0, pi].
inline double angle_between(Vec3 a, Vec3 b) {
    // atan2 form stays accurate near 0 and pi where acos loses digits.
    return std::atan2(norm(cross(a, b)), dot(a, b));
}

/// Classical Keplerian elements. Angles in degrees, distances in km.
struct OrbitalElements {
    double semi_major_axis = 0.0;
    double eccentricity = 0.0;
    double inclination = 0.0;
    double raan = 0.0;
    double arg_perigee = 0.0;
    double mean_anomaly_epoch = 0.0;
    std::string epoch = "2025-09-01T00:00:00Z";

    bool operator==(const OrbitalElements&) const = default;
};

/// Throws DomainError unless the element set describes a bound orbit above the surface.
inline void validate(const OrbitalElements& el) {
    if (!(el.semi_major_axis > kEarthRadius))
        throw DomainError("semi-major axis must exceed the Earth radius");
    if (!(el.eccentricity >= 0.0 && el.eccentricity < 1.0))
        throw DomainError("eccentricity must lie in [0, 1)");
    if (!(el.inclination >= 0.0 && el.inclination <= 180.0))
        throw DomainError("inclination must lie in [0, 180] degrees");
}

struct StateVector {
    Vec3 position;  // km, inertial
    Vec3 velocity;  // km/s, inertial
    double time = 0.0;
};

struct GeoPoint {
    double latitude = 0.0;   // degrees
    double longitude = 0.0;  // degrees

    bool operator==(const GeoPoint&) const = default;
};

/// Solves Kepler's equation E - e sin E = M by Newton iteration.
inline double solve_kepler(double mean_anomaly, double eccentricity) {
    if (!(eccentricity >= 0.0 && eccentricity < 1.0))
        throw DomainError("solve_kepler: eccentricity must lie in [0, 1)");
    const double reduced = std::remainder(mean_anomaly, kTwoPi);
    const double offset = mean_anomaly - reduced;
    double ecc_anomaly = eccentricity < 0.8 ? reduced : std::copysign(kPi, reduced);
    for (int iter = 0; iter < 50; ++iter) {
        const double residual = ecc_anomaly - eccentricity * std::sin(ecc_anomaly) - reduced;
        if (std::abs(residual) <= 1e-14) return ecc_anomaly + offset;
        const double step = residual / (1.0 - eccentricity * std::cos(ecc_anomaly));
        ecc_anomaly -= step;
        if (std::abs(step) <= 1e-16) return ecc_anomaly + offset;
    }
    const double residual = ecc_anomaly - eccentricity * std::sin(ecc_anomaly) - reduced;
    if (std::abs(residual) <= 1e-12) return ecc_anomaly + offset;
    throw NumericalError("solve_kepler: no convergence after 50 iterations");
}

inline double orbital_period(double semi_major_axis) {
    if (!(semi_major_axis > 0.0)) throw DomainError("orbital_period: semi-major axis must be positive");
    return kTwoPi * std::sqrt(semi_major_axis * semi_major_axis * semi_major_axis / kMu);
}

inline StateVector propagate(const OrbitalElements& el, double t) {
    if (!(t >= 0.0)) throw DomainError("propagate: time must be non-negative");
    const double a = el.semi_major_axis;
    const double e = el.eccentricity;
    const double mean_motion = std::sqrt(kMu / (a * a * a));
    const double mean_anomaly = std::remainder(el.mean_anomaly_epoch * kDeg + mean_motion * t, kTwoPi);
    const double ecc_anomaly = solve_kepler(mean_anomaly, e);

    const double cos_e = std::cos(ecc_anomaly);
    const double sin_e = std::sin(ecc_anomaly);
    const double root = std::sqrt(1.0 - e * e);
    const double radius = a * (1.0 - e * cos_e);

    // Perifocal coordinates.
    const double px = a * (cos_e - e);
    const double py = a * root * sin_e;
    const double vscale = std::sqrt(kMu * a) / radius;
    const double vx = -vscale * sin_e;
    const double vy = vscale * root * cos_e;

    const double co = std::cos(el.raan * kDeg), so = std::sin(el.raan * kDeg);
    const double cw = std::cos(el.arg_perigee * kDeg), sw = std::sin(el.arg_perigee * kDeg);
    const double ci = std::cos(el.inclination * kDeg), si = std::sin(el.inclination * kDeg);

    const Vec3 p_axis{co * cw - so * sw * ci, so * cw + co * sw * ci, sw * si};
    const Vec3 q_axis{-co * sw - so * cw * ci, -so * sw + co * cw * ci, cw * si};

    return {px * p_axis + py * q_axis, vx * p_axis + vy * q_axis, t};
}

inline double earth_rotation_angle(double t) { return kEarthRotationRate * t; }

/// Rotates an inertial vector into the Earth-fixed frame at time t.
inline Vec3 rotate_to_ecef(Vec3 v, double t) {
    const double theta = earth_rotation_angle(t);
    const double c = std::cos(theta), s = std::sin(theta);
    return {c * v.x + s * v.y, -s * v.x + c * v.y, v.z};
}

inline Vec3 rotate_to_eci(Vec3 v, double t) {
    const double theta = earth_rotation_angle(t);
    const double c = std::cos(theta), s = std::sin(theta);
    return {c * v.x - s * v.y, s * v.x + c * v.y, v.z};
}

inline Vec3 eci_to_ecef(const StateVector& state) { return rotate_to_ecef(state.position, state.time); }

/// Velocity relative to the rotating Earth, expressed in the Earth-fixed frame.
inline Vec3 ecef_velocity(const StateVector& state) {
    const Vec3 spin{0.0, 0.0, kEarthRotationRate};
    return rotate_to_ecef(state.velocity - cross(spin, state.position), state.time);
}

inline Vec3 geo_to_ecef(GeoPoint p) {
    const double lat = p.latitude * kDeg;
    const double lon = p.longitude * kDeg;
    return {kEarthRadius * std::cos(lat) * std::cos(lon), kEarthRadius * std::cos(lat) * std::sin(lon),
            kEarthRadius * std::sin(lat)};
}

/// Geocentric latitude/longitude of the direction of v.
inline GeoPoint ecef_to_geo(Vec3 v) {
    return {std::atan2(v.z, std::hypot(v.x, v.y)) / kDeg, std::atan2(v.y, v.x) / kDeg};
}

/// Great-circle midpoint.
inline GeoPoint geo_midpoint(GeoPoint a, GeoPoint b) {
    return ecef_to_geo(geo_to_ecef(a) + geo_to_ecef(b));
}

/// Local east and north unit vectors at a surface point.
inline std::array<Vec3, 2> east_north(GeoPoint p) {
    const double lat = p.latitude * kDeg;
    const double lon = p.longitude * kDeg;
    return {Vec3{-std::sin(lon), std::cos(lon), 0.0},
            Vec3{-std::sin(lat) * std::cos(lon), -std::sin(lat) * std::sin(lon), std::cos(lat)}};
}

/// Azimuth (degrees clockwise from north, in [0, 360)) of the great circle from `from` towards `to`.
inline double initial_bearing(GeoPoint from, GeoPoint to) {
    const auto [east, north] = east_north(from);
    const Vec3 d = geo_to_ecef(to) - geo_to_ecef(from);
    double az = std::atan2(dot(d, east), dot(d, north)) / kDeg;
    if (az < 0.0) az += 360.0;
    return az;
}

inline int orbit_index(double t, double period) {
    if (!(t >= 0.0) || !(period > 0.0)) throw DomainError("orbit_index: need t >= 0 and period > 0");
    return static_cast<int>(std::floor(t / period)) + 1;
}

}  // namespace saeos::astro
