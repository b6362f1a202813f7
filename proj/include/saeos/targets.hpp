#pragma once

// Target generation and strip decomposition.
//
// All planar work happens on the orthographic tangent plane at a reference
// point (the polygon's vertex centroid, or the spot itself). Plane axes are
// local east (x) and north (y) in km.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <utility>
#include <vector>

#include "saeos/astro.hpp"
#include "saeos/errors.hpp"
#include "saeos/random.hpp"

namespace saeos::targets {

using astro::GeoPoint;
using astro::Vec3;

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    friend constexpr Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
    friend constexpr Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
    friend constexpr Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
    friend constexpr bool operator==(const Vec2&, const Vec2&) = default;
};

constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }

/// Orthographic projection onto the plane tangent to the sphere at `origin`.
class TangentPlane {
public:
    explicit TangentPlane(GeoPoint origin) : origin_(origin) {
        const auto en = astro::east_north(origin);
        east_ = en[0];
        north_ = en[1];
        up_ = astro::normalized(astro::geo_to_ecef(origin));
    }

    GeoPoint origin() const { return origin_; }

    Vec2 project(GeoPoint p) const {
        const Vec3 v = astro::geo_to_ecef(p);
        return {astro::dot(v, east_), astro::dot(v, north_)};
    }

    GeoPoint unproject(Vec2 q) const {
        const double h2 = astro::kEarthRadius * astro::kEarthRadius - q.x * q.x - q.y * q.y;
        if (h2 < 0.0) throw DomainError("tangent-plane point lies beyond the sphere horizon");
        return astro::ecef_to_geo(q.x * east_ + q.y * north_ + std::sqrt(h2) * up_);
    }

private:
    GeoPoint origin_;
    Vec3 east_;
    Vec3 north_;
    Vec3 up_;
};

struct SpotTarget {
    int id = 0;
    GeoPoint location;
    int weight = 1;

    bool operator==(const SpotTarget&) const = default;
};

struct PolygonTarget {
    int id = 0;
    std::vector<GeoPoint> vertices;
    double weight = 0.0;
    double area = 0.0;          // km^2
    int weight_multiplier = 1;  // weight = area / 25 * weight_multiplier

    bool operator==(const PolygonTarget&) const = default;
};

enum class StripKind { Spot, Polygon };

struct Strip {
    int id = 0;
    int target_id = 0;
    StripKind kind = StripKind::Spot;
    GeoPoint endpoint_a;
    GeoPoint endpoint_b;
    double weight = 0.0;        // spot-derived strips
    double covered_area = 0.0;  // polygon-derived strips, km^2
    double orientation = 0.0;   // degrees clockwise from north at the reference point

    bool operator==(const Strip&) const = default;
};

/// Generation region: latitudes 75S-65S, longitudes 75W-65W.
struct Region {
    double lat_min = -75.0;
    double lat_max = -65.0;
    double lon_min = -75.0;
    double lon_max = -65.0;
};

/// Radial extent of generated polygon vertices around their center, km.
inline constexpr double kPolygonRadiusMin = 120.0;
inline constexpr double kPolygonRadiusMax = 280.0;
/// Largest angular gap between consecutive vertex bearings, degrees.
inline constexpr double kMaxBearingGap = 120.0;

/// Normalised mean of the vertex directions.
inline GeoPoint vertex_centroid(const std::vector<GeoPoint>& vertices) {
    Vec3 sum;
    for (const auto& v : vertices) sum = sum + astro::geo_to_ecef(v);
    return astro::ecef_to_geo(sum);
}

inline double signed_area(const std::vector<Vec2>& ring) {
    double twice = 0.0;
    for (std::size_t i = 0; i < ring.size(); ++i) twice += cross(ring[i], ring[(i + 1) % ring.size()]);
    return 0.5 * twice;
}

inline std::vector<Vec2> project_ring(const TangentPlane& plane, const std::vector<GeoPoint>& vertices) {
    std::vector<Vec2> ring;
    ring.reserve(vertices.size());
    for (const auto& v : vertices) ring.push_back(plane.project(v));
    return ring;
}

inline std::size_t count_distinct(const std::vector<GeoPoint>& vertices) {
    std::vector<std::pair<double, double>> keys;
    for (const auto& v : vertices) keys.emplace_back(v.latitude, v.longitude);
    std::sort(keys.begin(), keys.end());
    return static_cast<std::size_t>(std::unique(keys.begin(), keys.end()) - keys.begin());
}

/// Shoelace area on the tangent plane at the vertex centroid, km^2.
inline double polygon_area(const std::vector<GeoPoint>& vertices) {
    if (count_distinct(vertices) < 3) throw InvalidPolygonError("polygon needs at least 3 distinct vertices");
    const TangentPlane plane(vertex_centroid(vertices));
    return std::abs(signed_area(project_ring(plane, vertices)));
}

inline double swath_width(double altitude, double fov_deg) {
    if (!(altitude > 0.0)) throw DomainError("swath_width: altitude must be positive");
    return 2.0 * altitude * std::tan(0.5 * fov_deg * astro::kDeg);
}

struct GeneratedTargets {
    std::vector<SpotTarget> spots;
    std::vector<PolygonTarget> polygons;
};

inline PolygonTarget random_polygon(int id, Rng& rng, const Region& region = {}) {
    const GeoPoint center{rng.uniform(region.lat_min, region.lat_max), rng.uniform(region.lon_min, region.lon_max)};
    const int vertex_count = static_cast<int>(rng.integer(5, 6));
    std::vector<double> bearings(vertex_count);
    // Redraw bearing sets leaving a gap wider than kMaxBearingGap; those give slivers.
    for (;;) {
        for (auto& b : bearings) b = rng.uniform(0.0, 360.0);
        std::sort(bearings.begin(), bearings.end());
        double widest = 360.0 - bearings.back() + bearings.front();
        for (std::size_t k = 1; k < bearings.size(); ++k) widest = std::max(widest, bearings[k] - bearings[k - 1]);
        if (widest <= kMaxBearingGap) break;
    }

    const TangentPlane plane(center);
    PolygonTarget poly;
    poly.id = id;
    for (double bearing : bearings) {
        const double radius = rng.uniform(kPolygonRadiusMin, kPolygonRadiusMax);
        const double az = bearing * astro::kDeg;
        poly.vertices.push_back(plane.unproject({radius * std::sin(az), radius * std::cos(az)}));
    }
    poly.area = polygon_area(poly.vertices);
    poly.weight_multiplier = static_cast<int>(rng.integer(1, 10));
    poly.weight = poly.area / 25.0 * poly.weight_multiplier;
    return poly;
}

/// Spots first, then polygons, all drawn from one stream.
inline GeneratedTargets generate_targets(int n_spots, int n_polys, Rng& rng, const Region& region = {}) {
    if (n_spots < 0 || n_polys < 0) throw DomainError("generate_targets: counts must be non-negative");
    GeneratedTargets out;
    for (int s = 0; s < n_spots; ++s) {
        SpotTarget spot;
        spot.id = s;
        spot.location = {rng.uniform(region.lat_min, region.lat_max), rng.uniform(region.lon_min, region.lon_max)};
        spot.weight = static_cast<int>(rng.integer(1, 10));
        out.spots.push_back(spot);
    }
    for (int p = 0; p < n_polys; ++p) out.polygons.push_back(random_polygon(p, rng, region));
    return out;
}

inline GeneratedTargets generate_targets(int n_spots, int n_polys, std::uint64_t seed) {
    Rng rng(seed);
    return generate_targets(n_spots, n_polys, rng);
}

namespace detail {

// Keeps the part of `ring` where dot(p, normal) >= offset (Sutherland-Hodgman).
inline std::vector<Vec2> clip_half_plane(const std::vector<Vec2>& ring, Vec2 normal, double offset) {
    std::vector<Vec2> out;
    if (ring.empty()) return out;
    out.reserve(ring.size() + 2);
    for (std::size_t i = 0; i < ring.size(); ++i) {
        const Vec2 cur = ring[i];
        const Vec2 nxt = ring[(i + 1) % ring.size()];
        const double dc = dot(cur, normal) - offset;
        const double dn = dot(nxt, normal) - offset;
        if (dc >= 0.0) out.push_back(cur);
        if ((dc >= 0.0) != (dn >= 0.0)) {
            const double t = dc / (dc - dn);
            out.push_back(cur + t * (nxt - cur));
        }
    }
    return out;
}

struct Band {
    double offset = 0.0;  // centerline position along the sweep normal
    double t_min = 0.0;   // extent along the strip direction
    double t_max = 0.0;
    double area = 0.0;
};

struct Sweep {
    double orientation = 0.0;
    double total_length = 0.0;
    std::vector<Band> bands;
};

inline Sweep sweep(const std::vector<Vec2>& ring, double orientation_deg, double width) {
    const double az = orientation_deg * astro::kDeg;
    const Vec2 dir{std::sin(az), std::cos(az)};
    const Vec2 normal{std::cos(az), -std::sin(az)};

    double s_min = std::numeric_limits<double>::infinity();
    double s_max = -s_min;
    for (const auto& p : ring) {
        s_min = std::min(s_min, dot(p, normal));
        s_max = std::max(s_max, dot(p, normal));
    }
    const double extent = s_max - s_min;
    const auto count = std::max<long>(1, static_cast<long>(std::ceil(extent / width - 1e-9)));

    Sweep out;
    out.orientation = orientation_deg;
    for (long b = 0; b < count; ++b) {
        const double lo = s_min + static_cast<double>(b) * width;
        const double hi = lo + width;
        auto piece = clip_half_plane(ring, normal, lo);
        piece = clip_half_plane(piece, -1.0 * normal, -hi);
        const double area = std::abs(signed_area(piece));
        if (piece.size() < 3 || area <= 1e-9) continue;
        Band band;
        band.offset = 0.5 * (lo + hi);
        band.t_min = std::numeric_limits<double>::infinity();
        band.t_max = -band.t_min;
        for (const auto& p : piece) {
            band.t_min = std::min(band.t_min, dot(p, dir));
            band.t_max = std::max(band.t_max, dot(p, dir));
        }
        band.area = area;
        if (band.t_max - band.t_min <= 1e-9) continue;
        out.total_length += band.t_max - band.t_min;
        out.bands.push_back(band);
    }
    return out;
}

}  // namespace detail

/// Covers a polygon with parallel bands of the given width, choosing the
/// orientation (1 degree sweep over [0, 180)) of minimum total centerline length.
/// Strip ids are numbered from zero; callers renumber.
inline std::vector<Strip> decompose_polygon(const PolygonTarget& poly, double width) {
    if (!(width > 0.0)) throw DomainError("decompose_polygon: width must be positive");
    if (count_distinct(poly.vertices) < 3) throw InvalidPolygonError("polygon needs at least 3 distinct vertices");
    const TangentPlane plane(vertex_centroid(poly.vertices));
    const auto ring = project_ring(plane, poly.vertices);

    detail::Sweep best;
    best.total_length = std::numeric_limits<double>::infinity();
    for (int deg = 0; deg < 180; ++deg) {
        auto candidate = detail::sweep(ring, static_cast<double>(deg), width);
        if (candidate.total_length < best.total_length - 1e-9) best = std::move(candidate);
    }

    const double az = best.orientation * astro::kDeg;
    const Vec2 dir{std::sin(az), std::cos(az)};
    const Vec2 normal{std::cos(az), -std::sin(az)};
    std::vector<Strip> strips;
    for (const auto& band : best.bands) {
        Strip s;
        s.id = static_cast<int>(strips.size());
        s.target_id = poly.id;
        s.kind = StripKind::Polygon;
        s.endpoint_a = plane.unproject(band.offset * normal + band.t_min * dir);
        s.endpoint_b = plane.unproject(band.offset * normal + band.t_max * dir);
        s.covered_area = band.area;
        s.orientation = best.orientation;
        strips.push_back(s);
    }
    return strips;
}

/// One strip centred on the spot, as long as the swath is wide, randomly oriented.
inline Strip decompose_spot(const SpotTarget& spot, double width, Rng& rng) {
    if (!(width > 0.0)) throw DomainError("decompose_spot: width must be positive");
    const double orientation = rng.uniform(0.0, 180.0);
    const double az = orientation * astro::kDeg;
    const Vec2 half{0.5 * width * std::sin(az), 0.5 * width * std::cos(az)};
    const TangentPlane plane(spot.location);
    Strip s;
    s.target_id = spot.id;
    s.kind = StripKind::Spot;
    s.endpoint_a = plane.unproject(Vec2{} - half);
    s.endpoint_b = plane.unproject(half);
    s.weight = spot.weight;
    s.orientation = orientation;
    return s;
}

}  // namespace saeos::targets
