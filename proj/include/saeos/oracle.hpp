#pragma once

// Exhaustive reference solver for tiny instances. Enumerates every
// assignment of strips to windows (or rejection) and every per-satellite
// order of the chosen windows; each order is timed by the forward pass.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "saeos/errors.hpp"
#include "saeos/model.hpp"
#include "saeos/solver.hpp"

namespace saeos::oracle {

inline constexpr std::size_t kMaxStrips = 6;
inline constexpr std::size_t kMaxWindows = 12;

struct OracleStats {
    std::uint64_t assignments = 0;   // strip -> window-or-reject tuples visited
    std::uint64_t candidates = 0;    // complete (assignment, per-satellite orders) schedules
    std::uint64_t feasible_schedules = 0;
};

struct OracleOptions {
    // Among profit-optimal schedules keep the one with the smallest makespan.
    bool lexicographic = false;
};

inline void check_guard(const Instance& inst) {
    if (inst.strips.size() > kMaxStrips || inst.vtws.size() > kMaxWindows)
        throw GuardError("instance exceeds oracle limits (" + std::to_string(inst.strips.size()) + " strips, " +
                         std::to_string(inst.vtws.size()) + " windows; limits " + std::to_string(kMaxStrips) +
                         " and " + std::to_string(kMaxWindows) + ")");
}

namespace detail {

class Enumerator {
public:
    Enumerator(const Instance& inst, OracleOptions opts, OracleStats& stats)
        : inst_(inst), opts_(opts), stats_(stats), options_(inst.strips.size()), choice_(inst.strips.size()) {
        for (std::size_t v = 0; v < inst.vtws.size(); ++v)
            options_[static_cast<std::size_t>(inst.vtws[v].strip)].push_back(v);
    }

    Solution run() {
        assign(0);
        Solution sol;
        sol.sequences = best_.value_or(std::vector<std::vector<ScheduledObservation>>(inst_.satellites.size()));
        refresh_metrics(inst_, sol);
        sol.status = SolveStatus::Optimal;
        sol.upper_bound = sol.objective;
        sol.gap_percent = 0.0;
        sol.lexicographic = opts_.lexicographic;
        if (opts_.lexicographic) {
            sol.makespan_lower_bound = sol.makespan.value_or(0.0);
            sol.makespan_gap_percent = 0.0;
        }
        return sol;
    }

private:
    // choice_[j] == options_[j].size() means strip j is rejected.
    void assign(std::size_t j) {
        if (j == options_.size()) {
            evaluate();
            return;
        }
        for (std::size_t c = 0; c <= options_[j].size(); ++c) {
            choice_[j] = c;
            assign(j + 1);
        }
    }

    void evaluate() {
        ++stats_.assignments;
        std::vector<std::vector<std::size_t>> per_sat(inst_.satellites.size());
        std::vector<bool> observed(inst_.strips.size(), false);
        for (std::size_t j = 0; j < options_.size(); ++j) {
            if (choice_[j] == options_[j].size()) continue;
            const std::size_t v = options_[j][choice_[j]];
            per_sat[static_cast<std::size_t>(inst_.vtws[v].satellite)].push_back(v);
            observed[j] = true;
        }
        const double value = objective_of_strips(inst_, observed);

        // Every order of every satellite's windows; a candidate picks one order per satellite.
        std::vector<std::vector<std::optional<std::vector<ScheduledObservation>>>> orders(per_sat.size());
        for (std::size_t i = 0; i < per_sat.size(); ++i) {
            auto order = per_sat[i];
            std::sort(order.begin(), order.end());
            do {
                auto timing = solver::sequence_feasible(inst_, i, order);
                orders[i].push_back(timing.feasible ? std::optional(std::move(timing.schedule)) : std::nullopt);
            } while (std::next_permutation(order.begin(), order.end()));
        }
        std::vector<std::size_t> pick(per_sat.size(), 0);
        for (;;) {
            ++stats_.candidates;
            consider(value, orders, pick);
            std::size_t i = 0;
            while (i < pick.size() && ++pick[i] == orders[i].size()) pick[i++] = 0;
            if (i == pick.size()) break;
        }
    }

    void consider(double value,
                  const std::vector<std::vector<std::optional<std::vector<ScheduledObservation>>>>& orders,
                  const std::vector<std::size_t>& pick) {
        std::optional<double> span;
        for (std::size_t i = 0; i < pick.size(); ++i) {
            const auto& seq = orders[i][pick[i]];
            if (!seq) return;
            if (!seq->empty()) span = span ? std::max(*span, seq->back().end) : seq->back().end;
        }
        ++stats_.feasible_schedules;
        // First schedule in enumeration order wins ties.
        bool better = !best_ || value > best_value_ + kObjectiveTolerance;
        if (!better && opts_.lexicographic && value >= best_value_ - kObjectiveTolerance)
            better = span.value_or(0.0) < best_span_ - kTimeTolerance;
        if (better) {
            std::vector<std::vector<ScheduledObservation>> sequences;
            for (std::size_t i = 0; i < pick.size(); ++i) sequences.push_back(*orders[i][pick[i]]);
            best_ = std::move(sequences);
            best_value_ = value;
            best_span_ = span.value_or(0.0);
        }
    }

    const Instance& inst_;
    OracleOptions opts_;
    OracleStats& stats_;
    std::vector<std::vector<std::size_t>> options_;
    std::vector<std::size_t> choice_;
    std::optional<std::vector<std::vector<ScheduledObservation>>> best_;
    double best_value_ = 0.0;
    double best_span_ = 0.0;
};

}  // namespace detail

/// Exhaustive optimum. Throws GuardError above the size limits.
inline Solution brute_force_solve(const Instance& inst, OracleStats& stats, OracleOptions opts = {}) {
    check_guard(inst);
    validate_instance(inst);
    stats = {};
    return detail::Enumerator(inst, opts, stats).run();
}

inline Solution brute_force_solve(const Instance& inst, OracleOptions opts = {}) {
    OracleStats stats;
    return brute_force_solve(inst, stats, opts);
}

/// Number of candidate schedules the enumeration must visit:
/// sum over assignments of prod_i n_i!.
inline std::uint64_t expected_candidates(const Instance& inst) {
    std::vector<std::vector<std::size_t>> options(inst.strips.size());
    for (std::size_t v = 0; v < inst.vtws.size(); ++v)
        options[static_cast<std::size_t>(inst.vtws[v].strip)].push_back(v);
    std::uint64_t total = 0;
    std::vector<std::size_t> counts(inst.satellites.size(), 0);
    auto rec = [&](auto&& self, std::size_t j) -> void {
        if (j == options.size()) {
            std::uint64_t prod = 1;
            for (std::size_t n : counts)
                for (std::size_t k = 2; k <= n; ++k) prod *= k;
            total += prod;
            return;
        }
        self(self, j + 1);
        for (std::size_t v : options[j]) {
            auto& c = counts[static_cast<std::size_t>(inst.vtws[v].satellite)];
            ++c;
            self(self, j + 1);
            --c;
        }
    };
    rec(rec, 0);
    return total;
}

}  // namespace saeos::oracle
