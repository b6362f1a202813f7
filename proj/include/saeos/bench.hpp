#pragma once

// Instance generation for configurations A..G, report rows and the batch
// benchmark runner behind the command-line tool.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "saeos/errors.hpp"
#include "saeos/model.hpp"
#include "saeos/random.hpp"
#include "saeos/serialization.hpp"
#include "saeos/solver.hpp"
#include "saeos/targets.hpp"
#include "saeos/visibility.hpp"

namespace saeos::bench {

struct TargetCounts {
    int spots = 0;
    int polygons = 0;
};

inline TargetCounts target_counts(char letter) {
    switch (letter) {
        case 'A': return {0, 1};
        case 'B': return {50, 0};
        case 'C': return {50, 1};
        case 'D': return {0, 3};
        case 'E': return {50, 3};
        case 'F': return {0, 5};
        case 'G': return {50, 5};
        default: break;
    }
    throw ConfigError(std::string("unknown configuration letter '") + letter + "' (expected A..G)");
}

inline char parse_letter(const std::string& text) {
    if (text.size() != 1) throw ConfigError("configuration must be a single letter A..G, got '" + text + "'");
    const char c = text[0];
    target_counts(c);
    return c;
}

struct GenerationConfig {
    char letter = 'A';
    std::uint64_t seed = 0;
    std::string output;
};

inline std::string instance_id(char letter, int index) { return std::string(1, letter) + "-" + std::to_string(index); }

/// Seed of instance `index` (1-based) of a configuration; independent of how many are generated.
inline std::uint64_t instance_seed(std::uint64_t master, char letter, int index) {
    return derive_seed(master, std::string(1, letter), static_cast<std::uint64_t>(index));
}

/// Targets, strips and windows for an explicit target layout.
inline Instance assemble_instance(std::string id, std::vector<SatelliteSpec> satellites, targets::GeneratedTargets tg,
                                  Rng& rng, double horizon = kDefaultHorizon) {
    Instance inst;
    inst.id = std::move(id);
    inst.horizon = horizon;
    inst.satellites = std::move(satellites);
    inst.spots = std::move(tg.spots);
    inst.polygons = std::move(tg.polygons);
    if (inst.satellites.empty()) throw ConfigError("instance needs at least one satellite");
    const auto& ref = inst.satellites.front();
    const double width = targets::swath_width(ref.altitude(), ref.fov);
    for (const auto& spot : inst.spots) {
        auto strip = targets::decompose_spot(spot, width, rng);
        strip.id = static_cast<int>(inst.strips.size());
        inst.strips.push_back(strip);
    }
    for (const auto& poly : inst.polygons)
        for (auto strip : targets::decompose_polygon(poly, width)) {
            strip.id = static_cast<int>(inst.strips.size());
            inst.strips.push_back(strip);
        }
    inst.vtws = visibility::compute_all_vtws(inst.satellites, inst.strips, horizon);
    validate_instance(inst);
    return inst;
}

/// Instance `index` of configuration `letter` on the reference constellation.
inline Instance build_instance(char letter, int index, std::uint64_t master_seed, double horizon = kDefaultHorizon) {
    const auto counts = target_counts(letter);
    Rng rng(instance_seed(master_seed, letter, index));
    auto tg = targets::generate_targets(counts.spots, counts.polygons, rng);
    return assemble_instance(instance_id(letter, index), visibility::reference_constellation(), std::move(tg), rng,
                             horizon);
}

/// Writes <out>/<letter>-<i>.json for i = 1..count and returns the paths.
inline std::vector<std::string> generate(char letter, int count, std::uint64_t seed, const std::string& out_dir) {
    target_counts(letter);
    if (count < 0) throw ConfigError("count must be non-negative");
    std::filesystem::create_directories(out_dir);
    std::vector<std::string> paths;
    for (int i = 1; i <= count; ++i) {
        const auto inst = build_instance(letter, i, seed);
        const auto path = (std::filesystem::path(out_dir) / (inst.id + ".json")).string();
        io::write_file(path, io::serialize_instance(inst));
        paths.push_back(path);
    }
    return paths;
}

inline const std::vector<std::string>& csv_header() {
    static const std::vector<std::string> h = {"Ins",      "CtSpot",   "CtPoly",   "CtStr",    "CtVtw",
                                               "CtStrVtw", "CtAcSat",  "CtAcOrb",  "CtObSpot", "CtObPoly",
                                               "CtObStr",  "TotProf",  "Makespan", "Gap",      "Time"};
    return h;
}

// Counted columns print as "observed/available", like CtAcSat "3/4".
struct ReportRow {
    std::string instance;
    int ct_spot = 0;
    int ct_poly = 0;
    int ct_str = 0;
    int ct_vtw = 0;
    int ct_str_vtw = 0;
    int ct_ac_sat = 0;
    int ct_sat = 0;
    int ct_ac_orb = 0;     // orbit numbers holding scheduled observations
    int ct_orb_total = 0;  // orbit numbers holding any window
    int ct_ob_spot = 0;
    int ct_ob_poly = 0;    // polygons with at least one observed strip
    int ct_ob_str = 0;
    double tot_prof = 0.0;
    std::string makespan = "-";
    double gap = 0.0;
    std::optional<double> makespan_gap;  // set for lexicographic rows
    double time = 0.0;
    std::string error;  // non-empty for rows of files that failed

    bool ok() const { return error.empty(); }
};

/// Size telemetry: windows (interval variables) and ordered same-satellite
/// pairs whose transition can bind (sequencing relations).
struct SizeTelemetry {
    std::string instance;
    std::size_t windows = 0;
    std::size_t sequencing_pairs = 0;
};

inline SizeTelemetry size_telemetry(const Instance& inst) {
    return {inst.id, inst.vtws.size(), io::binding_transitions(inst).size()};
}

inline ReportRow make_row(const Instance& inst, const Solution& sol) {
    ReportRow row;
    row.instance = inst.id;
    row.ct_spot = static_cast<int>(inst.spots.size());
    row.ct_poly = static_cast<int>(inst.polygons.size());
    row.ct_str = static_cast<int>(inst.strips.size());
    row.ct_vtw = static_cast<int>(inst.vtws.size());
    row.ct_sat = static_cast<int>(inst.satellites.size());

    std::set<int> strips_with_window, orbits_with_window;
    for (const auto& w : inst.vtws) {
        strips_with_window.insert(w.strip);
        orbits_with_window.insert(w.orbit);
    }
    row.ct_str_vtw = static_cast<int>(strips_with_window.size());
    row.ct_orb_total = static_cast<int>(orbits_with_window.size());

    std::set<int> active_orbits, observed_polygons;
    for (const auto& seq : sol.sequences) {
        if (!seq.empty()) ++row.ct_ac_sat;
        for (const auto& obs : seq) {
            const auto& w = inst.vtws.at(obs.vtw);
            active_orbits.insert(w.orbit);
            const auto& strip = inst.strips.at(static_cast<std::size_t>(w.strip));
            ++row.ct_ob_str;
            if (strip.kind == StripKind::Spot) ++row.ct_ob_spot;
            else observed_polygons.insert(strip.target_id);
        }
    }
    row.ct_ac_orb = static_cast<int>(active_orbits.size());
    row.ct_ob_poly = static_cast<int>(observed_polygons.size());
    row.tot_prof = sol.profit_percent;
    row.makespan = makespan_hms(sol);
    row.gap = sol.gap_percent;
    if (sol.lexicographic) row.makespan_gap = sol.makespan_gap_percent;
    row.time = sol.solve_time;
    return row;
}

inline ReportRow error_row(const std::string& instance, const std::string& message) {
    ReportRow row;
    row.instance = instance;
    row.error = message.empty() ? "error" : message;
    return row;
}

namespace detail {

inline std::string fixed(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

inline std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

inline std::string join(const std::vector<std::string>& cells) {
    std::string out;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out += ',';
        out += csv_escape(cells[i]);
    }
    return out;
}

inline std::string gap_cell(double gap, std::optional<double> makespan_gap) {
    if (!makespan_gap) return fixed(gap, 1);
    return "(" + fixed(gap, 1) + ", " + fixed(*makespan_gap, 1) + ")";
}

}  // namespace detail

inline std::string header_line() { return detail::join(csv_header()); }

/// One CSV line; failed files keep their name and mark every other cell ERROR.
inline std::string format_row(const ReportRow& r) {
    if (!r.ok()) {
        std::vector<std::string> cells(csv_header().size(), "ERROR");
        cells[0] = r.instance;
        return detail::join(cells);
    }
    auto frac = [](int part, int whole) { return std::to_string(part) + "/" + std::to_string(whole); };
    auto count = [](int n) { return n ? std::to_string(n) : std::string("-"); };
    return detail::join({r.instance, count(r.ct_spot), count(r.ct_poly), std::to_string(r.ct_str),
                         std::to_string(r.ct_vtw), std::to_string(r.ct_str_vtw), frac(r.ct_ac_sat, r.ct_sat),
                         frac(r.ct_ac_orb, r.ct_orb_total), r.ct_spot ? frac(r.ct_ob_spot, r.ct_spot) : "-",
                         r.ct_poly ? frac(r.ct_ob_poly, r.ct_poly) : "-", frac(r.ct_ob_str, r.ct_str),
                         detail::fixed(r.tot_prof, 1), r.makespan, detail::gap_cell(r.gap, r.makespan_gap),
                         detail::fixed(r.time, 2)});
}

/// Instance group: the part of the id before the first '-'.
inline std::string group_of(const std::string& instance) { return instance.substr(0, instance.find('-')); }

/// Mean row per group over the successful rows, in group order.
inline std::vector<std::string> group_means(const std::vector<ReportRow>& rows) {
    std::map<std::string, std::vector<const ReportRow*>> groups;
    for (const auto& r : rows)
        if (r.ok()) groups[group_of(r.instance)].push_back(&r);
    std::vector<std::string> out;
    for (const auto& [name, members] : groups) {
        const double n = static_cast<double>(members.size());
        auto mean = [&](auto field) {
            double s = 0.0;
            for (const auto* r : members) s += static_cast<double>(field(*r));
            return s / n;
        };
        double span_sum = 0.0;
        int span_count = 0;
        for (const auto* r : members)
            if (r->makespan != "-") span_sum += static_cast<double>(parse_hms(r->makespan)), ++span_count;
        const bool lex = std::all_of(members.begin(), members.end(), [](const ReportRow* r) { return r->makespan_gap; });
        std::optional<double> mgap;
        if (lex) mgap = mean([](const ReportRow& r) { return *r.makespan_gap; });
#define SAEOS_MEAN(field) mean([](const ReportRow& r) { return r.field; })
        auto avg = [](double v) { return detail::fixed(v, 1); };
        auto frac = [&](double part, double whole) { return avg(part) + "/" + avg(whole); };
        out.push_back(detail::join(
            {"mean(" + name + ")", avg(SAEOS_MEAN(ct_spot)), avg(SAEOS_MEAN(ct_poly)), avg(SAEOS_MEAN(ct_str)),
             avg(SAEOS_MEAN(ct_vtw)), avg(SAEOS_MEAN(ct_str_vtw)), frac(SAEOS_MEAN(ct_ac_sat), SAEOS_MEAN(ct_sat)),
             frac(SAEOS_MEAN(ct_ac_orb), SAEOS_MEAN(ct_orb_total)), frac(SAEOS_MEAN(ct_ob_spot), SAEOS_MEAN(ct_spot)),
             frac(SAEOS_MEAN(ct_ob_poly), SAEOS_MEAN(ct_poly)), frac(SAEOS_MEAN(ct_ob_str), SAEOS_MEAN(ct_str)),
             avg(SAEOS_MEAN(tot_prof)),
             span_count ? format_hms(static_cast<long long>(std::llround(span_sum / span_count))) : "-",
             detail::gap_cell(SAEOS_MEAN(gap), mgap), detail::fixed(SAEOS_MEAN(time), 2)}));
#undef SAEOS_MEAN
    }
    return out;
}

/// Solves one instance and checks the result before it is reported.
/// Throws InternalError when the schedule fails validation.
inline Solution solve_checked(const Instance& inst, const solver::SolverConfig& config) {
    Solution sol = solver::solve_with_mode(inst, config);
    const auto report = validate_schedule(inst, sol);
    if (!report.ok()) {
        std::string msg = "solver produced an invalid schedule for " + inst.id;
        for (const auto& v : report.violations) msg += "\n  " + v.message;
        throw InternalError(msg);
    }
    return sol;
}

struct BenchmarkResult {
    std::vector<ReportRow> rows;
    std::vector<SizeTelemetry> telemetry;
};

/// Instance files of a directory in name order.
inline std::vector<std::filesystem::path> instance_files(const std::string& dir) {
    if (!std::filesystem::is_directory(dir)) throw InputError("not a directory: " + dir);
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    return files;
}

/// Solves every instance file; a failing file yields a flagged row.
inline BenchmarkResult run_benchmark(const std::string& dir, const solver::SolverConfig& config) {
    BenchmarkResult out;
    for (const auto& path : instance_files(dir)) {
        try {
            const auto inst = io::load_instance(path.string());
            const auto sol = solve_checked(inst, config);
            out.rows.push_back(make_row(inst, sol));
            out.telemetry.push_back(size_telemetry(inst));
        } catch (const std::exception& e) {
            out.rows.push_back(error_row(path.stem().string(), e.what()));
        }
    }
    return out;
}

inline std::string format_benchmark(const BenchmarkResult& result) {
    std::ostringstream os;
    os << header_line() << '\n';
    for (const auto& r : result.rows) os << format_row(r) << '\n';
    for (const auto& line : group_means(result.rows)) os << line << '\n';
    if (!result.telemetry.empty()) {
        os << '\n' << "Ins,Windows,SequencingPairs\n";
        for (const auto& t : result.telemetry)
            os << t.instance << ',' << t.windows << ',' << t.sequencing_pairs << '\n';
    }
    return os.str();
}

}  // namespace saeos::bench
