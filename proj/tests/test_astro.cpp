#include <gtest/gtest.h>

#include <cmath>

#include "saeos/astro.hpp"
#include "saeos/random.hpp"

using namespace saeos;
using namespace saeos::astro;

namespace {

OrbitalElements reference(double mean_anomaly = 90.0) {
    OrbitalElements el;
    el.semi_major_axis = 6998.0;
    el.eccentricity = 0.001;
    el.inclination = 97.9;
    el.mean_anomaly_epoch = mean_anomaly;
    return el;
}

// Fixed-point iteration E <- M + e sin E; converges for e < 1.
double kepler_fixed_point(double m, double e) {
    double ecc = m;
    for (int i = 0; i < 10000; ++i) {
        const double next = m + e * std::sin(ecc);
        if (std::abs(next - ecc) < 1e-15) return next;
        ecc = next;
    }
    return ecc;
}

}  // namespace

TEST(Kepler, ExactSymmetricCases) {
    EXPECT_EQ(solve_kepler(0.0, 0.5), 0.0);
    EXPECT_NEAR(solve_kepler(kPi, 0.3), kPi, 1e-15);
}

TEST(Kepler, MatchesFixedPointOracle) {
    const double frozen = 1.00084193;  // fixed-point iteration, rounded
    EXPECT_NEAR(solve_kepler(1.0, 0.001), kepler_fixed_point(1.0, 0.001), 1e-13);
    EXPECT_NEAR(solve_kepler(1.0, 0.001), frozen, 1e-7);
}

TEST(Kepler, ResidualOnRandomPairs) {
    Rng rng(1);
    for (int i = 0; i < 10000; ++i) {
        const double m = rng.uniform(-10.0, 10.0);
        const double e = rng.uniform(0.0, 0.9);
        const double ecc = solve_kepler(m, e);
        EXPECT_LE(std::abs(ecc - e * std::sin(ecc) - m), 1e-12) << m << " " << e;
    }
}

TEST(Kepler, RejectsUnboundEccentricity) {
    EXPECT_THROW(solve_kepler(1.0, 1.0), DomainError);
    EXPECT_THROW(solve_kepler(1.0, -0.1), DomainError);
}

TEST(Period, ReferenceAndGeostationary) {
    const double t = 2.0 * kPi * std::sqrt(std::pow(6998.0, 3) / 398600.4418);
    EXPECT_DOUBLE_EQ(orbital_period(6998.0), t);
    EXPECT_NEAR(orbital_period(6998.0), 5826.0, 1.0);
    EXPECT_NEAR(orbital_period(42164.0), 86164.0, 5.0);
    EXPECT_NEAR(orbital_period(2 * 7000.0) / orbital_period(7000.0), std::pow(2.0, 1.5), 1e-12);
}

TEST(Propagate, RadiusStaysWithinConicBounds) {
    Rng rng(2);
    for (int i = 0; i < 200; ++i) {
        OrbitalElements el;
        el.semi_major_axis = rng.uniform(6600.0, 45000.0);
        el.eccentricity = rng.uniform(0.0, 0.7);
        el.inclination = rng.uniform(0.0, 180.0);
        el.raan = rng.uniform(0.0, 360.0);
        el.arg_perigee = rng.uniform(0.0, 360.0);
        el.mean_anomaly_epoch = rng.uniform(0.0, 360.0);
        const double r = norm(propagate(el, rng.uniform(0.0, 86400.0)).position);
        EXPECT_GE(r, el.semi_major_axis * (1 - el.eccentricity) - 1e-6);
        EXPECT_LE(r, el.semi_major_axis * (1 + el.eccentricity) + 1e-6);
    }
    const double r0 = norm(propagate(reference(), 0.0).position);
    EXPECT_GE(r0, 6991.0);
    EXPECT_LE(r0, 7005.0);
}

TEST(Propagate, CircularOrbitKeepsRadius) {
    auto el = reference();
    el.eccentricity = 0.0;
    for (double t = 0; t < 20000; t += 777) EXPECT_NEAR(norm(propagate(el, t).position), 6998.0, 1e-6);
}

TEST(Propagate, PeriodicOverOneRevolution) {
    const auto el = reference();
    const double period = orbital_period(el.semi_major_axis);
    for (double t = 0; t < 86400.0; t += 3601.0)
        EXPECT_LE(norm(propagate(el, t + period).position - propagate(el, t).position), 1e-3);
}

TEST(Propagate, SpecificEnergyIsConserved) {
    const auto el = reference();
    auto energy = [](const StateVector& s) { return 0.5 * dot(s.velocity, s.velocity) - kMu / norm(s.position); };
    const double expected = -kMu / (2.0 * el.semi_major_axis);
    for (double t = 0; t < 6000; t += 500) EXPECT_NEAR(energy(propagate(el, t)), expected, 1e-9);
}

TEST(Propagate, NegativeTimeRejected) { EXPECT_THROW(propagate(reference(), -1.0), DomainError); }

TEST(Elements, Validation) {
    auto el = reference();
    EXPECT_NO_THROW(validate(el));
    el.semi_major_axis = 6000.0;
    EXPECT_THROW(validate(el), DomainError);
    el = reference();
    el.inclination = 181.0;
    EXPECT_THROW(validate(el), DomainError);
}

TEST(EarthFixed, RotationAtEpochAndAfterOneTurn) {
    StateVector s{{7000.0, 100.0, -30.0}, {}, 0.0};
    EXPECT_EQ(eci_to_ecef(s), s.position);
    s.time = kTwoPi / kEarthRotationRate;
    const Vec3 back = eci_to_ecef(s);
    EXPECT_NEAR(back.x, 7000.0, 1e-8);
    EXPECT_NEAR(back.y, 100.0, 1e-8);
    EXPECT_EQ(back.z, -30.0);
}

TEST(EarthFixed, PreservesNorm) {
    Rng rng(5);
    for (int i = 0; i < 1000; ++i) {
        StateVector s{{rng.uniform(-8e3, 8e3), rng.uniform(-8e3, 8e3), rng.uniform(-8e3, 8e3)}, {}, rng.uniform(0, 1e5)};
        EXPECT_NEAR(norm(eci_to_ecef(s)) / norm(s.position), 1.0, 1e-9);
        EXPECT_NEAR(norm(rotate_to_eci(eci_to_ecef(s), s.time) - s.position), 0.0, 1e-8);
    }
}

TEST(Geo, AxisPointsAndNorm) {
    const Vec3 origin = geo_to_ecef({0.0, 0.0});
    EXPECT_DOUBLE_EQ(origin.x, 6378.137);
    EXPECT_NEAR(origin.y, 0.0, 1e-12);
    const Vec3 pole = geo_to_ecef({90.0, 37.0});
    EXPECT_NEAR(pole.x, 0.0, 1e-9);
    EXPECT_NEAR(pole.y, 0.0, 1e-9);
    EXPECT_DOUBLE_EQ(pole.z, 6378.137);
    EXPECT_NEAR(norm(geo_to_ecef({-70.0, -70.0})), 6378.137, 1e-9);
}

TEST(Geo, RoundTripAndBearing) {
    const GeoPoint p{-68.25, -71.5};
    const GeoPoint q = ecef_to_geo(geo_to_ecef(p));
    EXPECT_NEAR(q.latitude, p.latitude, 1e-12);
    EXPECT_NEAR(q.longitude, p.longitude, 1e-12);
    EXPECT_NEAR(initial_bearing({0, 0}, {1, 0}), 0.0, 1e-9);
    EXPECT_NEAR(initial_bearing({0, 0}, {0, 1}), 90.0, 1e-9);
    EXPECT_NEAR(initial_bearing({0, 0}, {-1, 0}), 180.0, 1e-9);
    const GeoPoint m = geo_midpoint({0, 10}, {0, 20});
    EXPECT_NEAR(m.longitude, 15.0, 1e-12);
}

TEST(OrbitIndex, Boundaries) {
    EXPECT_EQ(orbit_index(0.0, 5826.0), 1);
    EXPECT_EQ(orbit_index(5825.999, 5826.0), 1);
    EXPECT_EQ(orbit_index(5826.0, 5826.0), 2);
    EXPECT_EQ(orbit_index(86400.0, 5826.0), 15);
    EXPECT_THROW(orbit_index(-1.0, 5826.0), DomainError);
}
