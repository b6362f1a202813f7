#pragma once

// Visible time windows, endpoint attitudes, imaging-time bounds and
// sequence-dependent transition times.

#include <algorithm>
#include <cmath>
#include <limits>
#include <tuple>
#include <vector>

#include "saeos/astro.hpp"
#include "saeos/errors.hpp"
#include "saeos/targets.hpp"

namespace saeos::visibility {

using astro::StateVector;
using astro::Vec3;
using targets::Strip;

struct SatelliteSpec {
    int id = 0;
    astro::OrbitalElements elements;
    double max_maneuver_angle = 60.0;  // degrees, every axis
    double roll_rate = 6.0;            // degrees/s
    double pitch_rate = 6.0;
    double yaw_rate = 6.0;
    double fov = 1.3;            // degrees
    double settling_time = 4.0;  // seconds

    double altitude() const { return elements.semi_major_axis - astro::kEarthRadius; }

    bool operator==(const SatelliteSpec&) const = default;
};

/// The reference constellation member: a = 6998 km, e = 0.001, i = 97.9 deg,
/// RAAN = 0, argument of perigee = 0, with the given mean anomaly.
inline SatelliteSpec reference_satellite(int id, double mean_anomaly_deg) {
    SatelliteSpec sat;
    sat.id = id;
    sat.elements.semi_major_axis = 6998.0;
    sat.elements.eccentricity = 0.001;
    sat.elements.inclination = 97.9;
    sat.elements.raan = 0.0;
    sat.elements.arg_perigee = 0.0;
    sat.elements.mean_anomaly_epoch = mean_anomaly_deg;
    return sat;
}

/// Four satellites sharing every element except the mean anomaly (90, 95, 100, 105 deg).
inline std::vector<SatelliteSpec> reference_constellation() {
    return {reference_satellite(0, 90.0), reference_satellite(1, 95.0), reference_satellite(2, 100.0),
            reference_satellite(3, 105.0)};
}

struct AttitudeAngles {
    double roll = 0.0;
    double pitch = 0.0;
    double yaw = 0.0;

    bool operator==(const AttitudeAngles&) const = default;
};

struct VisibleTimeWindow {
    int satellite = 0;
    int strip = 0;
    int orbit = 1;
    int sense = 0;  // 0: endpoint a first, 1: endpoint b first
    double vws = 0.0;
    double vwe = 0.0;
    double p_lower = 0.0;
    double p_upper = 0.0;
    AttitudeAngles attitude_sp1;
    AttitudeAngles attitude_sp2;
    double ref_time_sp1 = 0.0;
    double ref_time_sp2 = 0.0;

    auto key() const { return std::tuple{satellite, strip, orbit, sense}; }

    bool operator==(const VisibleTimeWindow&) const = default;
};

/// Angle at the satellite between nadir and the line of sight to a ground point, degrees.
inline double off_nadir_angle(const StateVector& state, Vec3 ground_point_ecef) {
    const Vec3 sat = astro::eci_to_ecef(state);
    const Vec3 los = ground_point_ecef - sat;
    if (astro::norm(los) < 1e-9) throw DomainError("off_nadir_angle: ground point coincides with the satellite");
    return astro::angle_between(-sat, los) / astro::kDeg;
}

/// True when the ground point sees the satellite above its local horizon.
inline bool above_horizon(Vec3 sat_ecef, Vec3 ground_point_ecef) {
    return astro::dot(ground_point_ecef, sat_ecef - ground_point_ecef) > 0.0;
}

/// Orbital frame: x along the Earth-relative velocity, z to nadir, y = z cross x.
struct OrbitalFrame {
    Vec3 x, y, z;
};

inline OrbitalFrame orbital_frame(const StateVector& state) {
    const Vec3 sat = astro::eci_to_ecef(state);
    const Vec3 vel = astro::ecef_velocity(state);
    const Vec3 z = astro::normalized(-sat);
    const Vec3 y = astro::normalized(astro::cross(z, vel));
    return {astro::cross(y, z), y, z};
}

/// Maps a signed angle difference of two line orientations into (-90, 90].
inline double wrap_line_angle(double degrees) {
    double d = std::remainder(degrees, 180.0);
    if (d <= -90.0) d += 180.0;
    return d;
}

/// Roll/pitch pointing the sensor at the target, plus yaw aligning the
/// imaging line with the strip azimuth at the target.
inline AttitudeAngles attitude_to_point(const StateVector& state, Vec3 target_ecef, double strip_azimuth) {
    const Vec3 sat = astro::eci_to_ecef(state);
    const OrbitalFrame frame = orbital_frame(state);
    const Vec3 los = target_ecef - sat;
    if (astro::norm(los) < 1e-9) throw PointingError("attitude_to_point: target coincides with the satellite");
    const Vec3 u = astro::normalized(los);
    const double ux = astro::dot(u, frame.x);
    const double uy = astro::dot(u, frame.y);
    const double uz = astro::dot(u, frame.z);
    if (!(uz > 0.0)) throw PointingError("attitude_to_point: off-nadir angle must be below 90 degrees");
    if (!above_horizon(sat, target_ecef)) throw PointingError("attitude_to_point: target is below the horizon");

    const auto [east, north] = astro::east_north(astro::ecef_to_geo(target_ecef));
    const double track_azimuth = std::atan2(astro::dot(frame.x, east), astro::dot(frame.x, north)) / astro::kDeg;

    AttitudeAngles att;
    att.roll = std::atan2(uy, uz) / astro::kDeg;
    att.pitch = std::atan2(ux, uz) / astro::kDeg;
    att.yaw = wrap_line_angle(strip_azimuth - track_azimuth);
    return att;
}

inline double max_axis_time(const SatelliteSpec& sat, const AttitudeAngles& from, const AttitudeAngles& to) {
    return std::max({std::abs(to.roll - from.roll) / sat.roll_rate, std::abs(to.pitch - from.pitch) / sat.pitch_rate,
                     std::abs(to.yaw - from.yaw) / sat.yaw_rate});
}

/// Minimum imaging time: settling plus the slowest axis sweeping from sp1 to sp2.
inline double processing_lower_bound(const SatelliteSpec& sat, const AttitudeAngles& sp1, const AttitudeAngles& sp2) {
    return sat.settling_time + max_axis_time(sat, sp1, sp2);
}

/// Minimum time from the end of `from` to the start of `to` on the same satellite.
inline double transition_time(const SatelliteSpec& sat, const VisibleTimeWindow& from, const VisibleTimeWindow& to) {
    if (from.satellite != sat.id || to.satellite != sat.id)
        throw DomainError("transition_time: both windows must belong to the satellite");
    return sat.settling_time + max_axis_time(sat, from.attitude_sp2, to.attitude_sp1);
}

/// Largest Earth-central angle between the sub-satellite point and a ground
/// point the satellite can see within `max_off_nadir`, radians.
inline double max_central_angle(double radius, double max_off_nadir_deg) {
    const double s = radius / astro::kEarthRadius * std::sin(max_off_nadir_deg * astro::kDeg);
    if (s >= 1.0) return std::acos(astro::kEarthRadius / radius);
    return std::asin(s) - max_off_nadir_deg * astro::kDeg;
}

/// Earth-fixed positions of one satellite sampled on a regular grid.
class SatelliteTrack {
public:
    SatelliteTrack(SatelliteSpec sat, double horizon, double step)
        : sat_(std::move(sat)), horizon_(horizon), step_(step) {
        if (!(step > 0.0)) throw DomainError("SatelliteTrack: step must be positive");
        if (!(horizon > 0.0)) throw DomainError("SatelliteTrack: horizon must be positive");
        astro::validate(sat_.elements);
        period_ = astro::orbital_period(sat_.elements.semi_major_axis);
        const auto samples = static_cast<std::size_t>(std::floor(horizon / step + 1e-9)) + 1;
        times_.reserve(samples + 1);
        for (std::size_t n = 0; n < samples; ++n) times_.push_back(static_cast<double>(n) * step);
        if (times_.back() < horizon - 1e-9) times_.push_back(horizon);
        directions_.reserve(times_.size());
        for (double t : times_) directions_.push_back(astro::normalized(position(t)));
        const double r_max = sat_.elements.semi_major_axis * (1.0 + sat_.elements.eccentricity);
        // Half a degree of slack keeps the prefilter conservative.
        cos_prefilter_ = std::cos(max_central_angle(r_max, sat_.max_maneuver_angle) + 0.5 * astro::kDeg);
    }

    const SatelliteSpec& satellite() const { return sat_; }
    double horizon() const { return horizon_; }
    double step() const { return step_; }
    double period() const { return period_; }
    const std::vector<double>& times() const { return times_; }

    StateVector state(double t) const { return astro::propagate(sat_.elements, t); }
    Vec3 position(double t) const { return astro::eci_to_ecef(state(t)); }

    bool visible(double t, Vec3 a, Vec3 b) const {
        const StateVector s = state(t);
        const Vec3 sat = astro::eci_to_ecef(s);
        if (!above_horizon(sat, a) || !above_horizon(sat, b)) return false;
        return off_nadir_angle(s, a) <= sat_.max_maneuver_angle && off_nadir_angle(s, b) <= sat_.max_maneuver_angle;
    }

    /// Visibility at grid sample n; `ua`, `ub` are the unit directions of `a`, `b`.
    bool sample_visible(std::size_t n, Vec3 a, Vec3 b, Vec3 ua, Vec3 ub) const {
        if (astro::dot(directions_[n], ua) < cos_prefilter_ || astro::dot(directions_[n], ub) < cos_prefilter_)
            return false;
        return visible(times_[n], a, b);
    }

private:
    SatelliteSpec sat_;
    double horizon_;
    double step_;
    double period_ = 0.0;
    double cos_prefilter_ = 0.0;
    std::vector<double> times_;
    std::vector<Vec3> directions_;
};

namespace detail {

inline constexpr double kBisectionTolerance = 0.01;

// Time in [lo, hi] minimising the off-nadir angle to `point`.
inline double closest_approach(const SatelliteTrack& track, Vec3 point, double lo, double hi) {
    auto angle = [&](double t) { return off_nadir_angle(track.state(t), point); };
    double best_t = lo;
    double best = angle(lo);
    for (double t = std::ceil(lo); t <= hi; t += 1.0) {
        const double a = angle(t);
        if (a < best) best = a, best_t = t;
    }
    if (const double a = angle(hi); a < best) best = a, best_t = hi;

    // Golden-section refinement around the sampled minimum.
    double left = std::max(lo, best_t - 1.0);
    double right = std::min(hi, best_t + 1.0);
    constexpr double kInvPhi = 0.6180339887498949;
    double c = right - kInvPhi * (right - left);
    double d = left + kInvPhi * (right - left);
    double fc = angle(c), fd = angle(d);
    for (int iter = 0; iter < 60 && right - left > 1e-6; ++iter) {
        if (fc < fd) {
            right = d, d = c, fd = fc;
            c = right - kInvPhi * (right - left);
            fc = angle(c);
        } else {
            left = c, c = d, fc = fd;
            d = left + kInvPhi * (right - left);
            fd = angle(d);
        }
    }
    const double mid = 0.5 * (left + right);
    return angle(mid) < best ? mid : best_t;
}

}  // namespace detail

/// Visible time windows of one strip for one satellite track, sorted by (orbit, vws, sense).
inline std::vector<VisibleTimeWindow> compute_vtws(const SatelliteTrack& track, const Strip& strip) {
    const SatelliteSpec& sat = track.satellite();
    const Vec3 a = astro::geo_to_ecef(strip.endpoint_a);
    const Vec3 b = astro::geo_to_ecef(strip.endpoint_b);
    const double azimuth_a = astro::initial_bearing(strip.endpoint_a, strip.endpoint_b);
    const double azimuth_b = astro::initial_bearing(strip.endpoint_b, strip.endpoint_a);
    const Vec3 ua = astro::normalized(a);
    const Vec3 ub = astro::normalized(b);
    const auto& times = track.times();

    // Maximal visible intervals, boundaries refined by bisection then rounded inward.
    std::vector<std::pair<double, double>> intervals;
    std::size_t n = 0;
    while (n < times.size()) {
        if (!track.sample_visible(n, a, b, ua, ub)) {
            ++n;
            continue;
        }
        const std::size_t first = n;
        while (n + 1 < times.size() && track.sample_visible(n + 1, a, b, ua, ub)) ++n;
        const std::size_t last = n;
        ++n;

        double start = times[first];
        if (first > 0) {
            double lo = times[first - 1], hi = times[first];
            while (hi - lo > detail::kBisectionTolerance) {
                const double mid = 0.5 * (lo + hi);
                (track.visible(mid, a, b) ? hi : lo) = mid;
            }
            start = std::ceil(hi);
        }
        double end = times[last];
        if (last + 1 < times.size()) {
            double lo = times[last], hi = times[last + 1];
            while (hi - lo > detail::kBisectionTolerance) {
                const double mid = 0.5 * (lo + hi);
                (track.visible(mid, a, b) ? lo : hi) = mid;
            }
            end = std::floor(lo);
        } else {
            end = std::floor(end);
        }
        if (end > start) intervals.emplace_back(start, end);
    }

    std::vector<VisibleTimeWindow> out;
    const double period = track.period();
    for (auto [start, end] : intervals) {
        double piece_start = start;
        while (piece_start < end) {
            const int orbit = astro::orbit_index(piece_start, period);
            const double next_orbit_start = std::ceil(orbit * period);
            const double piece_end = std::min(end, next_orbit_start - 1.0);
            if (piece_end > piece_start) {
                const double ref_a = detail::closest_approach(track, a, piece_start, piece_end);
                const double ref_b = detail::closest_approach(track, b, piece_start, piece_end);
                const AttitudeAngles att_a = attitude_to_point(track.state(ref_a), a, azimuth_a);
                const AttitudeAngles att_b = attitude_to_point(track.state(ref_b), b, azimuth_b);

                VisibleTimeWindow w;
                w.satellite = sat.id;
                w.strip = strip.id;
                w.orbit = orbit;
                w.vws = piece_start;
                w.vwe = piece_end;
                w.p_upper = piece_end - piece_start;
                w.p_lower = processing_lower_bound(sat, att_a, att_b);
                if (w.p_lower <= w.p_upper) {
                    w.sense = 0;
                    w.attitude_sp1 = att_a, w.attitude_sp2 = att_b;
                    w.ref_time_sp1 = ref_a, w.ref_time_sp2 = ref_b;
                    out.push_back(w);
                    w.sense = 1;
                    std::swap(w.attitude_sp1, w.attitude_sp2);
                    std::swap(w.ref_time_sp1, w.ref_time_sp2);
                    out.push_back(w);
                }
            }
            piece_start = next_orbit_start;
        }
    }
    std::stable_sort(out.begin(), out.end(), [](const auto& x, const auto& y) {
        return std::tuple{x.orbit, x.vws, x.sense} < std::tuple{y.orbit, y.vws, y.sense};
    });
    return out;
}

inline std::vector<VisibleTimeWindow> compute_vtws(const SatelliteSpec& sat, const Strip& strip, double horizon = 86400.0,
                                                   double step = 1.0) {
    return compute_vtws(SatelliteTrack(sat, horizon, step), strip);
}

/// All windows for every (satellite, strip) pair, sorted by (satellite, strip, orbit, vws, sense).
inline std::vector<VisibleTimeWindow> compute_all_vtws(const std::vector<SatelliteSpec>& satellites,
                                                       const std::vector<Strip>& strips, double horizon = 86400.0,
                                                       double step = 1.0) {
    std::vector<VisibleTimeWindow> out;
    for (const auto& sat : satellites) {
        const SatelliteTrack track(sat, horizon, step);
        for (const auto& strip : strips) {
            auto windows = compute_vtws(track, strip);
            out.insert(out.end(), windows.begin(), windows.end());
        }
    }
    return out;
}

}  // namespace saeos::visibility
