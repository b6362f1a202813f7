#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "saeos/targets.hpp"
#include "saeos/visibility.hpp"

using namespace saeos;
using namespace saeos::targets;

namespace {

// A rectangle of the given size (km) centred at `center`, long side along `azimuth`.
std::vector<GeoPoint> rectangle(GeoPoint center, double length, double width, double azimuth = 0.0) {
    const TangentPlane plane(center);
    const double az = azimuth * astro::kDeg;
    const Vec2 dir{std::sin(az), std::cos(az)}, normal{std::cos(az), -std::sin(az)};
    std::vector<GeoPoint> out;
    for (auto [s, t] : {std::pair{-1, -1}, {1, -1}, {1, 1}, {-1, 1}})
        out.push_back(plane.unproject(0.5 * t * length * dir + 0.5 * s * width * normal));
    return out;
}

PolygonTarget polygon_of(std::vector<GeoPoint> vertices) {
    PolygonTarget p;
    p.vertices = std::move(vertices);
    p.area = polygon_area(p.vertices);
    return p;
}

// Point-in-polygon on the plane (even-odd rule).
bool inside(const std::vector<Vec2>& ring, Vec2 p) {
    bool in = false;
    for (std::size_t i = 0, j = ring.size() - 1; i < ring.size(); j = i++) {
        const Vec2 a = ring[i], b = ring[j];
        if ((a.y > p.y) != (b.y > p.y) && p.x < (b.x - a.x) * (p.y - a.y) / (b.y - a.y) + a.x) in = !in;
    }
    return in;
}

}  // namespace

TEST(Generation, SpotsStayInRegionWithIntegerWeights) {
    const auto tg = generate_targets(50, 0, 7);
    ASSERT_EQ(tg.spots.size(), 50u);
    EXPECT_TRUE(tg.polygons.empty());
    for (const auto& s : tg.spots) {
        EXPECT_GE(s.location.latitude, -75.0);
        EXPECT_LE(s.location.latitude, -65.0);
        EXPECT_GE(s.location.longitude, -75.0);
        EXPECT_LE(s.location.longitude, -65.0);
        EXPECT_GE(s.weight, 1);
        EXPECT_LE(s.weight, 10);
    }
}

TEST(Generation, PolygonsFollowWeightRuleAndAreaEnvelope) {
    Rng rng(3);
    for (int i = 0; i < 200; ++i) {
        const auto p = random_polygon(i, rng);
        EXPECT_TRUE(p.vertices.size() == 5 || p.vertices.size() == 6);
        EXPECT_GE(p.weight_multiplier, 1);
        EXPECT_LE(p.weight_multiplier, 10);
        EXPECT_DOUBLE_EQ(p.weight, p.area / 25.0 * p.weight_multiplier);
        EXPECT_DOUBLE_EQ(p.area, polygon_area(p.vertices));
        EXPECT_GT(p.area, 3.0e4);
        EXPECT_LT(p.area, 3.3e5);
    }
}

TEST(Generation, PolygonsAreSimple) {
    Rng rng(4);
    auto segments_cross = [](Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
        const double d1 = cross(b - a, c - a), d2 = cross(b - a, d - a);
        const double d3 = cross(d - c, a - c), d4 = cross(d - c, b - c);
        return d1 * d2 < 0 && d3 * d4 < 0;
    };
    for (int i = 0; i < 200; ++i) {
        const auto p = random_polygon(i, rng);
        const auto ring = project_ring(TangentPlane(vertex_centroid(p.vertices)), p.vertices);
        const std::size_t n = ring.size();
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t c = a + 2; c < n; ++c) {
                if (a == 0 && c == n - 1) continue;
                EXPECT_FALSE(segments_cross(ring[a], ring[(a + 1) % n], ring[c], ring[(c + 1) % n]));
            }
    }
}

TEST(Generation, EmptyAndDeterministic) {
    const auto none = generate_targets(0, 0, 1);
    EXPECT_TRUE(none.spots.empty() && none.polygons.empty());
    const auto a = generate_targets(10, 2, 99), b = generate_targets(10, 2, 99);
    EXPECT_EQ(a.spots, b.spots);
    EXPECT_EQ(a.polygons, b.polygons);
    EXPECT_NE(generate_targets(10, 2, 100).spots, a.spots);
    EXPECT_THROW(generate_targets(-1, 0, 1), DomainError);
}

TEST(Area, EquatorialDegreeSquare) {
    const double side = astro::kEarthRadius * astro::kDeg;  // 111.3195 km
    const double area = polygon_area({{-0.5, -0.5}, {-0.5, 0.5}, {0.5, 0.5}, {0.5, -0.5}});
    EXPECT_NEAR(area / (side * side), 1.0, 0.01);
    EXPECT_NEAR(area, 12392.0, 0.01 * 12392.0);
}

TEST(Area, WindingAndTranslation) {
    std::vector<GeoPoint> poly{{-70.0, -70.0}, {-70.2, -68.0}, {-69.0, -67.5}, {-68.6, -69.3}, {-69.2, -70.4}};
    const double area = polygon_area(poly);
    std::vector<GeoPoint> reversed(poly.rbegin(), poly.rend());
    EXPECT_DOUBLE_EQ(polygon_area(reversed), area);
    auto shifted = poly;
    for (auto& v : shifted) v.longitude += 0.1, v.latitude += 0.1;
    EXPECT_LT(std::abs(polygon_area(shifted) - area) / area, 0.005);
}

TEST(Area, DegenerateRejected) {
    EXPECT_THROW(polygon_area({{0, 0}, {0, 1}, {0, 0}}), InvalidPolygonError);
    EXPECT_THROW(polygon_area({{0, 0}, {0, 1}}), InvalidPolygonError);
}

TEST(Swath, ReferenceWidthAndLinearity) {
    EXPECT_NEAR(swath_width(619.863, 1.3), 14.06, 0.005);
    EXPECT_DOUBLE_EQ(swath_width(619.863, 1.3), 2.0 * 619.863 * std::tan(0.65 * astro::kDeg));
    EXPECT_EQ(swath_width(500.0, 0.0), 0.0);
    EXPECT_NEAR(swath_width(1000.0, 1.3), 2.0 * swath_width(500.0, 1.3), 1e-12);
}

TEST(Decompose, ThinRectangleIsOneStripAlongItsLength) {
    const double w = 14.06;
    const auto poly = polygon_of(rectangle({-70.0, -70.0}, 100.0, w - 0.01, 30.0));
    const auto strips = decompose_polygon(poly, w);
    ASSERT_EQ(strips.size(), 1u);
    EXPECT_NEAR(strips[0].orientation, 30.0, 1.0);
    const TangentPlane plane(vertex_centroid(poly.vertices));
    const Vec2 a = plane.project(strips[0].endpoint_a), b = plane.project(strips[0].endpoint_b);
    EXPECT_NEAR(std::hypot(a.x - b.x, a.y - b.y), 100.0, 0.5);
    EXPECT_NEAR(strips[0].covered_area / poly.area, 1.0, 1e-6);
}

TEST(Decompose, SquareNeedsCeilOfSideOverWidth) {
    const double w = 14.06;
    const auto poly = polygon_of(rectangle({-70.0, -70.0}, 50.0, 50.0));
    const auto strips = decompose_polygon(poly, w);
    EXPECT_EQ(strips.size(), static_cast<std::size_t>(std::ceil(50.0 / w)));
    double covered = 0.0;
    for (const auto& s : strips) covered += s.covered_area;
    EXPECT_NEAR(covered / poly.area, 1.0, 0.01);
}

TEST(Decompose, RectangleOrientationFollowsLongEdge) {
    for (double az : {0.0, 17.0, 45.0, 90.0, 133.0}) {
        // Two bands across the short side beat nine across the long side.
        const auto poly = polygon_of(rectangle({-70.0, -70.0}, 120.0, 28.0, az));
        const auto strips = decompose_polygon(poly, 14.06);
        ASSERT_FALSE(strips.empty());
        const double diff = std::remainder(strips[0].orientation - az, 180.0);
        EXPECT_LE(std::abs(diff), 1.0) << az;
    }
}

TEST(Decompose, GeneratedPolygonsArePartitionedAndCovered) {
    Rng rng(12);
    const double w = swath_width(6998.0 - astro::kEarthRadius, 1.3);
    for (int i = 0; i < 20; ++i) {
        const auto poly = random_polygon(i, rng);
        const auto strips = decompose_polygon(poly, w);
        EXPECT_GE(strips.size(), 10u);
        EXPECT_LE(strips.size(), 60u);
        double covered = 0.0;
        for (const auto& s : strips) {
            EXPECT_NE(s.endpoint_a, s.endpoint_b);
            EXPECT_LE(s.covered_area, poly.area);
            EXPECT_EQ(s.target_id, poly.id);
            covered += s.covered_area;
        }
        EXPECT_NEAR(covered / poly.area, 1.0, 0.01);

        // Monte-Carlo: interior points fall in some strip band.
        const TangentPlane plane(vertex_centroid(poly.vertices));
        const auto ring = project_ring(plane, poly.vertices);
        const double az = strips[0].orientation * astro::kDeg;
        const Vec2 normal{std::cos(az), -std::sin(az)};
        std::vector<double> offsets;
        for (const auto& s : strips) offsets.push_back(dot(plane.project(s.endpoint_a), normal));
        double xmin = 1e9, xmax = -1e9, ymin = 1e9, ymax = -1e9;
        for (auto p : ring) xmin = std::min(xmin, p.x), xmax = std::max(xmax, p.x), ymin = std::min(ymin, p.y),
                            ymax = std::max(ymax, p.y);
        Rng mc(static_cast<std::uint64_t>(i));
        int tried = 0, hit = 0;
        while (tried < 10000) {
            const Vec2 p{mc.uniform(xmin, xmax), mc.uniform(ymin, ymax)};
            if (!inside(ring, p)) continue;
            ++tried;
            const double s = dot(p, normal);
            for (double o : offsets)
                if (std::abs(s - o) <= 0.5 * w + 1e-6) {
                    ++hit;
                    break;
                }
        }
        EXPECT_GE(hit, 9990) << "polygon " << i;
    }
}

TEST(Decompose, SpotStripIsCentredWithSwathLength) {
    Rng rng(8);
    const double w = 14.06;
    std::set<double> orientations;
    for (int i = 0; i < 50; ++i) {
        SpotTarget spot{i, {rng.uniform(-75.0, -65.0), rng.uniform(-75.0, -65.0)}, static_cast<int>(rng.integer(1, 10))};
        const auto strip = decompose_spot(spot, w, rng);
        EXPECT_EQ(strip.weight, spot.weight);
        EXPECT_EQ(strip.kind, StripKind::Spot);
        EXPECT_GE(strip.orientation, 0.0);
        EXPECT_LT(strip.orientation, 180.0);
        orientations.insert(strip.orientation);
        const GeoPoint mid = astro::geo_midpoint(strip.endpoint_a, strip.endpoint_b);
        EXPECT_NEAR(mid.latitude, spot.location.latitude, 1e-9);
        EXPECT_NEAR(mid.longitude, spot.location.longitude, 1e-9);
        const double chord = astro::norm(astro::geo_to_ecef(strip.endpoint_a) - astro::geo_to_ecef(strip.endpoint_b));
        EXPECT_NEAR(chord, w, 1e-3);
    }
    EXPECT_EQ(orientations.size(), 50u);

    SpotTarget spot{0, {-70.0, -70.0}, 4};
    Rng r1(5), r2(5);
    EXPECT_EQ(decompose_spot(spot, w, r1), decompose_spot(spot, w, r2));
}
