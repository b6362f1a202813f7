#pragma once

// Canonical JSON for instances and solutions.
//
// Canonical form: object keys sorted, no insignificant whitespace except one
// newline at the end, integers written as integers and every other number
// with 17 significant digits, so a document round-trips bit-exactly.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>

#include <json.hpp>

#include "saeos/errors.hpp"
#include "saeos/model.hpp"

namespace saeos::io {

using json = nlohmann::json;

inline constexpr const char* kInstanceSchema = "saeos-instance/1";
inline constexpr const char* kSolutionSchema = "saeos-solution/1";

namespace detail {

inline void write_canonical(const json& j, std::string& out) {
    switch (j.type()) {
        case json::value_t::object: {
            out += '{';
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) out += ',';
                first = false;
                out += json(it.key()).dump();
                out += ':';
                write_canonical(it.value(), out);
            }
            out += '}';
            break;
        }
        case json::value_t::array: {
            out += '[';
            for (std::size_t i = 0; i < j.size(); ++i) {
                if (i) out += ',';
                write_canonical(j[i], out);
            }
            out += ']';
            break;
        }
        case json::value_t::number_float: {
            const double v = j.get<double>();
            if (!std::isfinite(v)) throw Error("canonical JSON cannot represent non-finite numbers");
            char buf[40];
            std::snprintf(buf, sizeof buf, "%.17g", v);
            out += buf;
            break;
        }
        default: out += j.dump(); break;
    }
}

}  // namespace detail

inline std::string to_canonical(const json& j) {
    std::string out;
    detail::write_canonical(j, out);
    out += '\n';
    return out;
}

/// Cursor into a parsed document that remembers its JSON path for error messages.
class Reader {
public:
    Reader(const json& node, std::string path) : node_(&node), path_(std::move(path)) {}

    const std::string& path() const { return path_; }
    const json& raw() const { return *node_; }

    [[noreturn]] void fail(const std::string& what) const {
        throw ParseError("at " + (path_.empty() ? std::string("/") : path_) + ": " + what);
    }

    bool has(const std::string& key) const { return node_->is_object() && node_->contains(key); }

    Reader at(const std::string& key) const {
        if (!node_->is_object()) fail("expected an object");
        auto it = node_->find(key);
        if (it == node_->end()) Reader(*node_, path_ + "/" + key).fail("missing field");
        return Reader(*it, path_ + "/" + key);
    }

    Reader at(std::size_t index) const {
        if (!node_->is_array()) fail("expected an array");
        if (index >= node_->size()) fail("index " + std::to_string(index) + " out of range");
        return Reader((*node_)[index], path_ + "/" + std::to_string(index));
    }

    std::size_t size() const {
        if (!node_->is_array()) fail("expected an array");
        return node_->size();
    }

    double number() const {
        if (!node_->is_number()) fail("expected a number");
        return node_->get<double>();
    }

    long long integer() const {
        if (!node_->is_number_integer()) fail("expected an integer");
        return node_->get<long long>();
    }

    int int32() const { return static_cast<int>(integer()); }

    std::size_t index() const {
        const auto v = integer();
        if (v < 0) fail("expected a non-negative integer");
        return static_cast<std::size_t>(v);
    }

    bool boolean() const {
        if (!node_->is_boolean()) fail("expected a boolean");
        return node_->get<bool>();
    }

    std::string string() const {
        if (!node_->is_string()) fail("expected a string");
        return node_->get<std::string>();
    }

    bool is_null() const { return node_->is_null(); }

private:
    const json* node_;
    std::string path_;
};

inline json geo_json(astro::GeoPoint p) { return json::array({p.latitude, p.longitude}); }

inline astro::GeoPoint read_geo(const Reader& r) {
    if (r.size() != 2) r.fail("expected [latitude, longitude]");
    astro::GeoPoint p{r.at(0).number(), r.at(1).number()};
    if (p.latitude < -90.0 || p.latitude > 90.0 || p.longitude < -180.0 || p.longitude > 180.0)
        r.fail("coordinates out of range");
    return p;
}

inline json attitude_json(const AttitudeAngles& a) { return json::array({a.roll, a.pitch, a.yaw}); }

inline AttitudeAngles read_attitude(const Reader& r) {
    if (r.size() != 3) r.fail("expected [roll, pitch, yaw]");
    return {r.at(0).number(), r.at(1).number(), r.at(2).number()};
}

/// Ordered same-satellite window pairs whose transition can bind.
inline std::vector<std::pair<std::size_t, std::size_t>> binding_transitions(const Instance& inst) {
    std::vector<std::vector<std::size_t>> by_sat(inst.satellites.size());
    for (std::size_t v = 0; v < inst.vtws.size(); ++v)
        by_sat[static_cast<std::size_t>(inst.vtws[v].satellite)].push_back(v);
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (const auto& ids : by_sat)
        for (std::size_t a : ids)
            for (std::size_t b : ids)
                if (transition_may_bind(inst, a, b)) out.emplace_back(a, b);
    std::sort(out.begin(), out.end());
    return out;
}

/// Transition table keys in range form: window a has entries for every
/// same-satellite window whose vws lies in spans[a]. Spans are the tightest
/// ranges covering all binding pairs; values follow from the attitudes.
using TransitionSpan = std::optional<std::pair<double, double>>;

inline std::vector<TransitionSpan> transition_spans(const Instance& inst) {
    std::vector<TransitionSpan> spans(inst.vtws.size());
    for (auto [a, b] : binding_transitions(inst)) {
        const double t = inst.vtws[b].vws;
        auto& s = spans[a];
        if (!s) s = std::pair{t, t};
        else s = std::pair{std::min(s->first, t), std::max(s->second, t)};
    }
    return spans;
}

inline json instance_to_json(const Instance& inst) {
    json doc;
    doc["schema"] = kInstanceSchema;
    doc["id"] = inst.id;
    doc["epoch"] = inst.epoch;
    doc["horizon"] = inst.horizon;

    json sats = json::array();
    for (const auto& s : inst.satellites) {
        sats.push_back({{"id", s.id},
                        {"semi_major_axis", s.elements.semi_major_axis},
                        {"eccentricity", s.elements.eccentricity},
                        {"inclination", s.elements.inclination},
                        {"raan", s.elements.raan},
                        {"arg_perigee", s.elements.arg_perigee},
                        {"mean_anomaly", s.elements.mean_anomaly_epoch},
                        {"epoch", s.elements.epoch},
                        {"max_maneuver_angle", s.max_maneuver_angle},
                        {"roll_rate", s.roll_rate},
                        {"pitch_rate", s.pitch_rate},
                        {"yaw_rate", s.yaw_rate},
                        {"fov", s.fov},
                        {"settling_time", s.settling_time}});
    }
    doc["satellites"] = std::move(sats);

    json spots = json::array();
    for (const auto& s : inst.spots)
        spots.push_back({{"id", s.id}, {"location", geo_json(s.location)}, {"weight", s.weight}});
    doc["spots"] = std::move(spots);

    json polys = json::array();
    for (const auto& p : inst.polygons) {
        json verts = json::array();
        for (const auto& v : p.vertices) verts.push_back(geo_json(v));
        polys.push_back({{"id", p.id},
                         {"vertices", std::move(verts)},
                         {"weight", p.weight},
                         {"area", p.area},
                         {"weight_multiplier", p.weight_multiplier}});
    }
    doc["polygons"] = std::move(polys);

    json strips = json::array();
    for (const auto& s : inst.strips) {
        strips.push_back({{"id", s.id},
                          {"target_id", s.target_id},
                          {"kind", s.kind == StripKind::Spot ? "spot" : "polygon"},
                          {"endpoint_a", geo_json(s.endpoint_a)},
                          {"endpoint_b", geo_json(s.endpoint_b)},
                          {"weight", s.weight},
                          {"covered_area", s.covered_area},
                          {"orientation", s.orientation}});
    }
    doc["strips"] = std::move(strips);

    json vtws = json::array();
    for (const auto& w : inst.vtws) {
        vtws.push_back({{"satellite", w.satellite},
                        {"strip", w.strip},
                        {"orbit", w.orbit},
                        {"sense", w.sense},
                        {"vws", w.vws},
                        {"vwe", w.vwe},
                        {"p_lower", w.p_lower},
                        {"p_upper", w.p_upper},
                        {"attitude_sp1", attitude_json(w.attitude_sp1)},
                        {"attitude_sp2", attitude_json(w.attitude_sp2)},
                        {"ref_time_sp1", w.ref_time_sp1},
                        {"ref_time_sp2", w.ref_time_sp2}});
    }
    doc["vtws"] = std::move(vtws);

    json trans = json::array();
    for (const auto& span : transition_spans(inst))
        trans.push_back(span ? json::array({span->first, span->second}) : json(nullptr));
    doc["transitions"] = std::move(trans);
    return doc;
}

inline std::string serialize_instance(const Instance& inst) { return to_canonical(instance_to_json(inst)); }

inline Instance instance_from_json(const json& doc) {
    const Reader root(doc, "");
    if (const auto schema = root.at("schema").string(); schema != kInstanceSchema)
        root.at("schema").fail("unsupported schema version '" + schema + "'");

    Instance inst;
    inst.id = root.at("id").string();
    inst.epoch = root.at("epoch").string();
    inst.horizon = root.at("horizon").number();

    const Reader sats = root.at("satellites");
    for (std::size_t i = 0; i < sats.size(); ++i) {
        const Reader r = sats.at(i);
        SatelliteSpec s;
        s.id = r.at("id").int32();
        s.elements.semi_major_axis = r.at("semi_major_axis").number();
        s.elements.eccentricity = r.at("eccentricity").number();
        s.elements.inclination = r.at("inclination").number();
        s.elements.raan = r.at("raan").number();
        s.elements.arg_perigee = r.at("arg_perigee").number();
        s.elements.mean_anomaly_epoch = r.at("mean_anomaly").number();
        s.elements.epoch = r.at("epoch").string();
        s.max_maneuver_angle = r.at("max_maneuver_angle").number();
        s.roll_rate = r.at("roll_rate").number();
        s.pitch_rate = r.at("pitch_rate").number();
        s.yaw_rate = r.at("yaw_rate").number();
        s.fov = r.at("fov").number();
        s.settling_time = r.at("settling_time").number();
        try {
            astro::validate(s.elements);
        } catch (const DomainError& e) {
            r.fail(e.what());
        }
        inst.satellites.push_back(s);
    }

    const Reader spots = root.at("spots");
    for (std::size_t i = 0; i < spots.size(); ++i) {
        const Reader r = spots.at(i);
        inst.spots.push_back({r.at("id").int32(), read_geo(r.at("location")), r.at("weight").int32()});
    }

    const Reader polys = root.at("polygons");
    for (std::size_t i = 0; i < polys.size(); ++i) {
        const Reader r = polys.at(i);
        PolygonTarget p;
        p.id = r.at("id").int32();
        const Reader verts = r.at("vertices");
        for (std::size_t k = 0; k < verts.size(); ++k) p.vertices.push_back(read_geo(verts.at(k)));
        p.weight = r.at("weight").number();
        p.area = r.at("area").number();
        p.weight_multiplier = r.at("weight_multiplier").int32();
        inst.polygons.push_back(std::move(p));
    }

    const Reader strips = root.at("strips");
    for (std::size_t i = 0; i < strips.size(); ++i) {
        const Reader r = strips.at(i);
        Strip s;
        s.id = r.at("id").int32();
        s.target_id = r.at("target_id").int32();
        const auto kind = r.at("kind").string();
        if (kind == "spot") s.kind = StripKind::Spot;
        else if (kind == "polygon") s.kind = StripKind::Polygon;
        else r.at("kind").fail("expected \"spot\" or \"polygon\"");
        s.endpoint_a = read_geo(r.at("endpoint_a"));
        s.endpoint_b = read_geo(r.at("endpoint_b"));
        s.weight = r.at("weight").number();
        s.covered_area = r.at("covered_area").number();
        s.orientation = r.at("orientation").number();
        inst.strips.push_back(s);
    }

    const Reader vtws = root.at("vtws");
    for (std::size_t i = 0; i < vtws.size(); ++i) {
        const Reader r = vtws.at(i);
        VisibleTimeWindow w;
        w.satellite = r.at("satellite").int32();
        w.strip = r.at("strip").int32();
        w.orbit = r.at("orbit").int32();
        w.sense = r.at("sense").int32();
        w.vws = r.at("vws").number();
        w.vwe = r.at("vwe").number();
        w.p_lower = r.at("p_lower").number();
        w.p_upper = r.at("p_upper").number();
        w.attitude_sp1 = read_attitude(r.at("attitude_sp1"));
        w.attitude_sp2 = read_attitude(r.at("attitude_sp2"));
        w.ref_time_sp1 = r.at("ref_time_sp1").number();
        w.ref_time_sp2 = r.at("ref_time_sp2").number();
        inst.vtws.push_back(w);
    }

    validate_instance(inst);

    // One [first_vws, last_vws] key range (or null) per window; every pair
    // that can bind must fall inside its range.
    const Reader trans = root.at("transitions");
    if (trans.size() != inst.vtws.size()) trans.fail("expected one entry per window");
    std::vector<TransitionSpan> spans(inst.vtws.size());
    for (std::size_t i = 0; i < trans.size(); ++i) {
        const Reader r = trans.at(i);
        if (r.is_null()) continue;
        if (r.size() != 2) r.fail("expected [first_vws, last_vws] or null");
        spans[i] = std::pair{r.at(0).number(), r.at(1).number()};
        if (spans[i]->first > spans[i]->second) r.fail("empty transition range");
    }
    for (auto [a, b] : binding_transitions(inst)) {
        const double t = inst.vtws[b].vws;
        if (!spans[a] || t < spans[a]->first || t > spans[a]->second)
            throw InputError("invalid instance: missing transition entry for windows " + std::to_string(a) + " -> " +
                             std::to_string(b));
    }
    return inst;
}

inline json parse_json(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("at /: malformed JSON: ") + e.what());
    }
}

inline Instance deserialize_instance(const std::string& text) { return instance_from_json(parse_json(text)); }

inline json solution_to_json(const Instance& inst, const Solution& sol) {
    json doc;
    doc["schema"] = kSolutionSchema;
    doc["instance"] = inst.id;
    doc["status"] = to_string(sol.status);
    doc["objective"] = sol.objective;
    doc["profit_percent"] = sol.profit_percent;
    doc["makespan"] = sol.makespan ? json(*sol.makespan) : json(nullptr);
    doc["makespan_hms"] = makespan_hms(sol);
    doc["upper_bound"] = sol.upper_bound;
    doc["gap_percent"] = sol.gap_percent;
    doc["lexicographic"] = sol.lexicographic;
    if (sol.lexicographic) {
        doc["makespan_lower_bound"] = sol.makespan_lower_bound;
        doc["makespan_gap_percent"] = sol.makespan_gap_percent;
    }
    json seqs = json::array();
    for (const auto& seq : sol.sequences) {
        json list = json::array();
        for (const auto& obs : seq) {
            const auto& w = inst.vtws.at(obs.vtw);
            list.push_back({{"vtw", obs.vtw},
                            {"satellite", w.satellite},
                            {"strip", w.strip},
                            {"orbit", w.orbit},
                            {"sense", w.sense},
                            {"start", obs.start},
                            {"duration", obs.duration},
                            {"end", obs.end}});
        }
        seqs.push_back(std::move(list));
    }
    doc["sequences"] = std::move(seqs);
    return doc;
}

/// Solve time is left out so repeated runs produce identical files.
inline std::string serialize_solution(const Instance& inst, const Solution& sol) {
    return to_canonical(solution_to_json(inst, sol));
}

inline SolveStatus parse_status(const Reader& r) {
    const auto s = r.string();
    if (s == "optimal") return SolveStatus::Optimal;
    if (s == "feasible") return SolveStatus::Feasible;
    if (s == "infeasible-empty") return SolveStatus::InfeasibleEmpty;
    r.fail("unknown status '" + s + "'");
}

/// Reads a solution for `inst`; window keys must agree with the instance.
inline Solution solution_from_json(const Instance& inst, const json& doc) {
    const Reader root(doc, "");
    if (const auto schema = root.at("schema").string(); schema != kSolutionSchema)
        root.at("schema").fail("unsupported schema version '" + schema + "'");
    Solution sol;
    sol.status = parse_status(root.at("status"));
    sol.objective = root.at("objective").number();
    sol.profit_percent = root.at("profit_percent").number();
    if (!root.at("makespan").is_null()) sol.makespan = root.at("makespan").number();
    sol.upper_bound = root.at("upper_bound").number();
    sol.gap_percent = root.at("gap_percent").number();
    sol.lexicographic = root.at("lexicographic").boolean();
    if (sol.lexicographic) {
        sol.makespan_lower_bound = root.at("makespan_lower_bound").number();
        sol.makespan_gap_percent = root.at("makespan_gap_percent").number();
    }
    const Reader seqs = root.at("sequences");
    for (std::size_t i = 0; i < seqs.size(); ++i) {
        const Reader list = seqs.at(i);
        std::vector<ScheduledObservation> seq;
        for (std::size_t n = 0; n < list.size(); ++n) {
            const Reader r = list.at(n);
            ScheduledObservation obs;
            obs.vtw = r.at("vtw").index();
            if (obs.vtw >= inst.vtws.size()) r.at("vtw").fail("window index out of range");
            const auto& w = inst.vtws[obs.vtw];
            if (r.at("satellite").int32() != w.satellite || r.at("strip").int32() != w.strip ||
                r.at("orbit").int32() != w.orbit || r.at("sense").int32() != w.sense)
                r.fail("window key disagrees with the instance");
            obs.start = r.at("start").number();
            obs.duration = r.at("duration").number();
            obs.end = r.at("end").number();
            seq.push_back(obs);
        }
        sol.sequences.push_back(std::move(seq));
    }
    return sol;
}

inline Solution deserialize_solution(const Instance& inst, const std::string& text) {
    return solution_from_json(inst, parse_json(text));
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open '" + path + "' for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open '" + path + "' for writing");
    out << text;
    if (!out) throw Error("failed writing '" + path + "'");
}

inline Instance load_instance(const std::string& path) { return deserialize_instance(read_file(path)); }

}  // namespace saeos::io
