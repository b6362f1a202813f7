#pragma once

// Scheduling instance and solution data model, objective evaluation and
// schedule validation.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "saeos/errors.hpp"
#include "saeos/targets.hpp"
#include "saeos/visibility.hpp"

namespace saeos {

using targets::PolygonTarget;
using targets::SpotTarget;
using targets::Strip;
using targets::StripKind;
using visibility::AttitudeAngles;
using visibility::SatelliteSpec;
using visibility::VisibleTimeWindow;

/// Absolute tolerance (seconds) for timing comparisons.
inline constexpr double kTimeTolerance = 1e-6;
/// Tolerance for objective comparisons.
inline constexpr double kObjectiveTolerance = 1e-9;

inline constexpr double kDefaultHorizon = 86400.0;
inline constexpr const char* kDefaultEpoch = "2025-09-01T00:00:00Z";

struct Instance {
    std::string id;
    std::string epoch = kDefaultEpoch;
    double horizon = kDefaultHorizon;
    std::vector<SatelliteSpec> satellites;
    std::vector<SpotTarget> spots;
    std::vector<PolygonTarget> polygons;
    std::vector<Strip> strips;
    std::vector<VisibleTimeWindow> vtws;

    /// Transition time between two windows of the same satellite (indices into `vtws`).
    double transition(std::size_t from, std::size_t to) const {
        const auto& a = vtws.at(from);
        return visibility::transition_time(satellites.at(static_cast<std::size_t>(a.satellite)), a, vtws.at(to));
    }

    bool operator==(const Instance&) const = default;
};

/// True when `to` can follow `from` on one satellite and the transition can
/// delay `to` beyond its window start. Only these pairs constrain schedules.
inline bool transition_may_bind(const Instance& inst, std::size_t from, std::size_t to) {
    const auto& a = inst.vtws[from];
    const auto& b = inst.vtws[to];
    if (from == to || a.satellite != b.satellite || a.strip == b.strip) return false;
    const double delta = inst.transition(from, to);
    const bool can_follow = a.vws + a.p_lower + delta + b.p_lower <= b.vwe + kTimeTolerance;
    return can_follow && b.vws < a.vwe + delta;
}

/// Throws InputError describing the first structural defect found.
inline void validate_instance(const Instance& inst) {
    auto fail = [](const std::string& what) { throw InputError("invalid instance: " + what); };
    if (!(inst.horizon > 0.0)) fail("horizon must be positive");
    for (std::size_t i = 0; i < inst.satellites.size(); ++i) {
        const auto& s = inst.satellites[i];
        if (s.id != static_cast<int>(i)) fail("satellite ids must equal their positions");
        if (!(s.roll_rate > 0.0 && s.pitch_rate > 0.0 && s.yaw_rate > 0.0 && s.settling_time > 0.0 &&
              s.max_maneuver_angle > 0.0 && s.fov > 0.0))
            fail("satellite " + std::to_string(i) + " has non-positive parameters");
    }
    for (std::size_t i = 0; i < inst.spots.size(); ++i) {
        if (inst.spots[i].id != static_cast<int>(i)) fail("spot ids must equal their positions");
        if (inst.spots[i].weight < 1 || inst.spots[i].weight > 10) fail("spot weight outside [1, 10]");
    }
    for (std::size_t i = 0; i < inst.polygons.size(); ++i) {
        if (inst.polygons[i].id != static_cast<int>(i)) fail("polygon ids must equal their positions");
        if (!(inst.polygons[i].area > 0.0)) fail("polygon area must be positive");
    }
    for (std::size_t j = 0; j < inst.strips.size(); ++j) {
        const auto& s = inst.strips[j];
        if (s.id != static_cast<int>(j)) fail("strip ids must equal their positions");
        const auto targets = s.kind == StripKind::Spot ? inst.spots.size() : inst.polygons.size();
        if (s.target_id < 0 || static_cast<std::size_t>(s.target_id) >= targets)
            fail("strip " + std::to_string(j) + " references a missing target");
    }
    for (std::size_t v = 0; v < inst.vtws.size(); ++v) {
        const auto& w = inst.vtws[v];
        const std::string where = "vtw " + std::to_string(v);
        if (w.satellite < 0 || static_cast<std::size_t>(w.satellite) >= inst.satellites.size())
            fail(where + " references a missing satellite");
        if (w.strip < 0 || static_cast<std::size_t>(w.strip) >= inst.strips.size())
            fail(where + " references a missing strip");
        if (w.sense != 0 && w.sense != 1) fail(where + " has a sense other than 0 or 1");
        if (w.orbit < 1) fail(where + " has an orbit index below 1");
        if (!(w.vws < w.vwe)) fail(where + " has vws >= vwe");
        if (w.p_upper != w.vwe - w.vws) fail(where + " has p_upper != vwe - vws");
        if (!(w.p_lower > 0.0 && w.p_lower <= w.p_upper)) fail(where + " violates 0 < p_lower <= p_upper");
        const auto& sat = inst.satellites[static_cast<std::size_t>(w.satellite)];
        if (w.p_lower < visibility::processing_lower_bound(sat, w.attitude_sp1, w.attitude_sp2) - 1e-9)
            fail(where + " has p_lower below the attitude-manoeuvre minimum");
    }
}

struct ScheduledObservation {
    std::size_t vtw = 0;
    double start = 0.0;
    double duration = 0.0;
    double end = 0.0;

    bool operator==(const ScheduledObservation&) const = default;
};

enum class SolveStatus { Optimal, Feasible, InfeasibleEmpty };

inline const char* to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::Optimal: return "optimal";
        case SolveStatus::Feasible: return "feasible";
        case SolveStatus::InfeasibleEmpty: return "infeasible-empty";
    }
    return "?";
}

struct Solution {
    /// One ordered list per satellite, indexed like Instance::satellites.
    std::vector<std::vector<ScheduledObservation>> sequences;
    double objective = 0.0;
    double profit_percent = 0.0;
    std::optional<double> makespan;
    double upper_bound = 0.0;
    double gap_percent = 0.0;
    SolveStatus status = SolveStatus::Feasible;
    double solve_time = 0.0;

    // Second phase of a lexicographic solve.
    bool lexicographic = false;
    double makespan_lower_bound = 0.0;
    double makespan_gap_percent = 0.0;

    std::size_t observation_count() const {
        std::size_t n = 0;
        for (const auto& seq : sequences) n += seq.size();
        return n;
    }

    bool operator==(const Solution&) const = default;
};

/// Piecewise-linear polygon profit: slopes 0.25, 1 and 2 with breakpoints at 0.4 and 0.7.
inline double piecewise_f(double x) {
    if (x < -1e-9 || x > 1.0 + 1e-9) throw DomainError("piecewise_f: argument outside [0, 1]");
    x = std::clamp(x, 0.0, 1.0);
    if (x < 0.4) return 0.25 * x;
    if (x < 0.7) return 1.0 * x - 0.3;
    return 2.0 * x - 1.0;
}

/// Strip ids observed anywhere in the solution (duplicates collapse).
inline std::vector<bool> observed_strips(const Instance& inst, const Solution& sol) {
    std::vector<bool> seen(inst.strips.size(), false);
    for (const auto& seq : sol.sequences)
        for (const auto& obs : seq) seen.at(static_cast<std::size_t>(inst.vtws.at(obs.vtw).strip)) = true;
    return seen;
}

/// Covered fraction of every polygon, clamped to [0, 1].
inline std::vector<double> polygon_coverage(const Instance& inst, const std::vector<bool>& observed) {
    std::vector<double> cov(inst.polygons.size(), 0.0);
    for (std::size_t j = 0; j < inst.strips.size(); ++j) {
        const auto& s = inst.strips[j];
        if (observed[j] && s.kind == StripKind::Polygon) {
            const auto r = static_cast<std::size_t>(s.target_id);
            cov[r] += s.covered_area / inst.polygons[r].area;
        }
    }
    for (auto& c : cov) c = std::min(c, 1.0);
    return cov;
}

inline double objective_of_strips(const Instance& inst, const std::vector<bool>& observed) {
    double value = 0.0;
    for (std::size_t j = 0; j < inst.strips.size(); ++j)
        if (observed[j] && inst.strips[j].kind == StripKind::Spot) value += inst.strips[j].weight;
    const auto cov = polygon_coverage(inst, observed);
    for (std::size_t r = 0; r < inst.polygons.size(); ++r) value += inst.polygons[r].weight * piecewise_f(cov[r]);
    return value;
}

inline double objective_value(const Instance& inst, const Solution& sol) {
    return objective_of_strips(inst, observed_strips(inst, sol));
}

/// Profit as a percentage of the total attainable, with polygon coverage counted linearly.
inline double profit_percent(const Instance& inst, const Solution& sol) {
    const auto observed = observed_strips(inst, sol);
    double total = 0.0, got = 0.0;
    for (std::size_t j = 0; j < inst.strips.size(); ++j) {
        if (inst.strips[j].kind != StripKind::Spot) continue;
        total += inst.strips[j].weight;
        if (observed[j]) got += inst.strips[j].weight;
    }
    const auto cov = polygon_coverage(inst, observed);
    for (std::size_t r = 0; r < inst.polygons.size(); ++r) {
        total += inst.polygons[r].weight;
        got += inst.polygons[r].weight * cov[r];
    }
    if (total <= 0.0) return 100.0;
    return 100.0 * got / total;
}

inline std::optional<double> makespan(const Solution& sol) {
    std::optional<double> latest;
    for (const auto& seq : sol.sequences)
        for (const auto& obs : seq) latest = latest ? std::max(*latest, obs.end) : obs.end;
    return latest;
}

/// 100 (ub - value) / ub, zero when both are zero.
inline double gap_percent(double upper_bound, double value) {
    if (std::abs(upper_bound) <= kObjectiveTolerance) return 0.0;
    return std::max(0.0, 100.0 * (upper_bound - value) / std::abs(upper_bound));
}

enum class ViolationKind {
    UnknownWindow,      // observation references a missing VTW
    WrongSatellite,     // VTW belongs to another satellite than the sequence
    IntervalMismatch,   // end != start + duration
    OutsideWindow,      // start < vws or end > vwe
    DurationOutOfBounds,
    DuplicateStrip,
    TransitionSpacing,  // start(next) < end(prev) + transition
    OrderInconsistent,  // stated order disagrees with start times
};

inline const char* to_string(ViolationKind k) {
    switch (k) {
        case ViolationKind::UnknownWindow: return "unknown-window";
        case ViolationKind::WrongSatellite: return "wrong-satellite";
        case ViolationKind::IntervalMismatch: return "interval-mismatch";
        case ViolationKind::OutsideWindow: return "outside-window";
        case ViolationKind::DurationOutOfBounds: return "duration-out-of-bounds";
        case ViolationKind::DuplicateStrip: return "duplicate-strip";
        case ViolationKind::TransitionSpacing: return "transition-spacing";
        case ViolationKind::OrderInconsistent: return "order-inconsistent";
    }
    return "?";
}

struct Violation {
    ViolationKind kind;
    std::size_t satellite = 0;
    std::size_t position = 0;
    std::string message;
};

struct ValidationReport {
    std::vector<Violation> violations;

    bool ok() const { return violations.empty(); }

    bool has(ViolationKind kind) const {
        return std::any_of(violations.begin(), violations.end(), [&](const auto& v) { return v.kind == kind; });
    }
};

inline ValidationReport validate_schedule(const Instance& inst, const Solution& sol) {
    ValidationReport report;
    auto add = [&](ViolationKind kind, std::size_t sat, std::size_t pos, std::string msg) {
        report.violations.push_back({kind, sat, pos, std::move(msg)});
    };
    auto where = [](std::size_t sat, std::size_t pos) {
        return "satellite " + std::to_string(sat) + " position " + std::to_string(pos) + ": ";
    };

    if (sol.sequences.size() > inst.satellites.size())
        add(ViolationKind::WrongSatellite, sol.sequences.size() - 1, 0, "more sequences than satellites");

    std::set<int> strips_seen;
    for (std::size_t i = 0; i < sol.sequences.size(); ++i) {
        const auto& seq = sol.sequences[i];
        for (std::size_t n = 0; n < seq.size(); ++n) {
            const auto& obs = seq[n];
            if (obs.vtw >= inst.vtws.size()) {
                add(ViolationKind::UnknownWindow, i, n, where(i, n) + "window index out of range");
                continue;
            }
            const auto& w = inst.vtws[obs.vtw];
            if (static_cast<std::size_t>(w.satellite) != i)
                add(ViolationKind::WrongSatellite, i, n, where(i, n) + "window belongs to another satellite");
            if (std::abs(obs.end - (obs.start + obs.duration)) > kTimeTolerance)
                add(ViolationKind::IntervalMismatch, i, n, where(i, n) + "end != start + duration");
            if (obs.start < w.vws - kTimeTolerance || obs.end > w.vwe + kTimeTolerance)
                add(ViolationKind::OutsideWindow, i, n, where(i, n) + "interval leaves its visible window");
            if (obs.duration < w.p_lower - kTimeTolerance || obs.duration > w.p_upper + kTimeTolerance)
                add(ViolationKind::DurationOutOfBounds, i, n, where(i, n) + "duration outside [p_lower, p_upper]");
            if (!strips_seen.insert(w.strip).second)
                add(ViolationKind::DuplicateStrip, i, n, where(i, n) + "strip " + std::to_string(w.strip) +
                                                             " observed more than once");
            if (n == 0) continue;
            const auto& prev = seq[n - 1];
            if (prev.vtw >= inst.vtws.size()) continue;
            if (obs.start < prev.start)
                add(ViolationKind::OrderInconsistent, i, n, where(i, n) + "starts before its predecessor");
            if (inst.vtws[prev.vtw].satellite == w.satellite) {
                const double delta = inst.transition(prev.vtw, obs.vtw);
                if (obs.start < prev.end + delta - kTimeTolerance)
                    add(ViolationKind::TransitionSpacing, i, n, where(i, n) + "transition time not respected");
            }
        }
    }
    return report;
}

/// Recomputes objective, profit percentage and makespan from the sequences.
inline void refresh_metrics(const Instance& inst, Solution& sol) {
    sol.objective = objective_value(inst, sol);
    sol.profit_percent = profit_percent(inst, sol);
    sol.makespan = makespan(sol);
}

/// Formats whole seconds as zero-padded HH:MM:SS (hours may exceed 24).
inline std::string format_hms(long long seconds) {
    if (seconds < 0) throw DomainError("format_hms: negative duration");
    char buf[32];
    std::snprintf(buf, sizeof buf, "%02lld:%02lld:%02lld", seconds / 3600, (seconds / 60) % 60, seconds % 60);
    return buf;
}

inline long long parse_hms(const std::string& text) {
    long long h = 0, m = 0, s = 0;
    char c1 = 0, c2 = 0;
    if (std::sscanf(text.c_str(), "%lld%c%lld%c%lld", &h, &c1, &m, &c2, &s) != 5 || c1 != ':' || c2 != ':' || m < 0 ||
        m > 59 || s < 0 || s > 59 || h < 0)
        throw ParseError("malformed HH:MM:SS value '" + text + "'");
    return h * 3600 + m * 60 + s;
}

/// Makespan rounded up to the whole second at which every observation has completed.
inline std::string makespan_hms(const Solution& sol) {
    if (!sol.makespan) return "-";
    return format_hms(static_cast<long long>(std::ceil(*sol.makespan - 1e-9)));
}

}  // namespace saeos
