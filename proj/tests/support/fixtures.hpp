#pragma once

// Hand-built and randomly generated instances for tests. Windows are placed
// directly instead of being derived from orbits, so conflicts can be dialled in.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "saeos/saeos.hpp"

namespace saeos::fixtures {

class InstanceBuilder {
public:
    explicit InstanceBuilder(int satellites = 1, std::string id = "fixture") {
        inst_.id = std::move(id);
        for (int i = 0; i < satellites; ++i) inst_.satellites.push_back(visibility::reference_satellite(i, 90.0 + 5 * i));
    }

    /// Adds a spot target and its strip; returns the strip index.
    int spot(int weight) {
        SpotTarget t;
        t.id = static_cast<int>(inst_.spots.size());
        t.location = {-70.0, -70.0 + 0.1 * t.id};
        t.weight = weight;
        inst_.spots.push_back(t);
        Strip s;
        s.id = static_cast<int>(inst_.strips.size());
        s.target_id = t.id;
        s.kind = StripKind::Spot;
        s.endpoint_a = {t.location.latitude - 0.05, t.location.longitude};
        s.endpoint_b = {t.location.latitude + 0.05, t.location.longitude};
        s.weight = weight;
        inst_.strips.push_back(s);
        return s.id;
    }

    /// Adds a polygon whose strips cover the given fractions; returns the strip indices.
    std::vector<int> polygon(double weight, const std::vector<double>& fractions, double area = 1000.0) {
        PolygonTarget p;
        p.id = static_cast<int>(inst_.polygons.size());
        p.vertices = {{-70.0, -70.0}, {-70.0, -69.5}, {-69.7, -69.7}};
        p.area = area;
        p.weight = weight;
        inst_.polygons.push_back(p);
        std::vector<int> ids;
        for (double f : fractions) {
            Strip s;
            s.id = static_cast<int>(inst_.strips.size());
            s.target_id = p.id;
            s.kind = StripKind::Polygon;
            s.endpoint_a = {-70.0, -70.0};
            s.endpoint_b = {-69.8, -70.0};
            s.covered_area = f * area;
            inst_.strips.push_back(s);
            ids.push_back(s.id);
        }
        return ids;
    }

    /// Adds a window; p_lower is the attitude minimum plus `slack`. Returns its index.
    std::size_t window(int satellite, int strip, double vws, double vwe, AttitudeAngles sp1 = {},
                       AttitudeAngles sp2 = {}, double slack = 0.0, int sense = 0, int orbit = 1) {
        VisibleTimeWindow w;
        w.satellite = satellite;
        w.strip = strip;
        w.orbit = orbit;
        w.sense = sense;
        w.vws = vws;
        w.vwe = vwe;
        w.p_upper = vwe - vws;
        w.attitude_sp1 = sp1;
        w.attitude_sp2 = sp2;
        w.ref_time_sp1 = vws;
        w.ref_time_sp2 = vwe;
        w.p_lower = visibility::processing_lower_bound(inst_.satellites.at(static_cast<std::size_t>(satellite)), sp1,
                                                       sp2) +
                    slack;
        inst_.vtws.push_back(w);
        return inst_.vtws.size() - 1;
    }

    Instance& get() { return inst_; }

    Instance build() const {
        validate_instance(inst_);
        return inst_;
    }

private:
    Instance inst_;
};

struct MicroLimits {
    int max_strips = 5;
    int max_windows = 10;
    int max_satellites = 2;
    double span = 150.0;  // windows open within [0, span]
};

/// Random tiny instance: 1..max_strips strips (spots and polygon strips),
/// 0..max_windows windows on 1..max_satellites satellites, crowded in time.
inline Instance micro_instance(Rng& rng, MicroLimits lim = {}) {
    const int sats = static_cast<int>(rng.integer(1, lim.max_satellites));
    InstanceBuilder b(sats, "micro");
    const int n_strips = static_cast<int>(rng.integer(1, lim.max_strips));
    int placed = 0;
    while (placed < n_strips) {
        if (n_strips - placed >= 2 && rng.uniform() < 0.3) {
            const int parts = static_cast<int>(rng.integer(2, std::min(3, n_strips - placed)));
            std::vector<double> fr(static_cast<std::size_t>(parts));
            double total = 0.0;
            for (auto& f : fr) total += (f = rng.uniform(0.2, 1.0));
            for (auto& f : fr) f /= total;
            b.polygon(rng.uniform(5.0, 40.0), fr, rng.uniform(500.0, 5000.0));
            placed += parts;
        } else {
            b.spot(static_cast<int>(rng.integer(1, 10)));
            ++placed;
        }
    }
    const int n_windows = static_cast<int>(rng.integer(0, lim.max_windows));
    for (int v = 0; v < n_windows; ++v) {
        const int sat = static_cast<int>(rng.integer(0, sats - 1));
        const int strip = static_cast<int>(rng.integer(0, n_strips - 1));
        AttitudeAngles a{rng.uniform(-45.0, 45.0), rng.uniform(-20.0, 20.0), rng.uniform(-80.0, 80.0)};
        AttitudeAngles c{a.roll + rng.uniform(-8.0, 8.0), a.pitch + rng.uniform(-8.0, 8.0),
                         std::clamp(a.yaw + rng.uniform(-8.0, 8.0), -89.0, 90.0)};
        const double slack = rng.uniform() < 0.5 ? 0.0 : rng.uniform(0.0, 3.0);
        const auto& spec = b.get().satellites[static_cast<std::size_t>(sat)];
        const double pl = visibility::processing_lower_bound(spec, a, c) + slack;
        const double vws = std::floor(rng.uniform(0.0, lim.span));
        const double vwe = vws + std::ceil(pl + rng.uniform(0.0, 40.0));
        b.window(sat, strip, vws, vwe, a, c, slack, static_cast<int>(rng.integer(0, 1)));
    }
    return b.build();
}

}  // namespace saeos::fixtures
