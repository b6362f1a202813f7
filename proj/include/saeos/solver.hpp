#pragma once

// Exact branch-and-bound for the observation scheduling problem.
//
// A search node holds one feasible sequence per satellite plus a decision per
// strip. Children insert the branching strip through one of its windows at
// one position of that satellite's sequence, or reject it. Durations are fixed
// at p_lower and every sequence is timed by the earliest-start forward pass.
//
// Exactness rests on two facts. Transition times obey the triangle
// inequality through any intermediate observation (p_lower covers the
// attitude sweep across the strip), so deleting an observation never breaks
// a sequence; hence every feasible schedule is reached by inserting its strips
// one at a time. And a strip that cannot be inserted now cannot be inserted
// after further insertions, which makes the insertability bound admissible.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <vector>

#include "saeos/errors.hpp"
#include "saeos/model.hpp"
#include "saeos/random.hpp"

namespace saeos::solver {

enum class ObjectiveMode { Single, Lexicographic };

/// Emitted once per expanded search node when SolverConfig::on_node is set.
struct NodeEvent {
    int phase = 1;
    std::size_t depth = 0;
    double bound = 0.0;         // profit bound of this node
    double parent_bound = 0.0;  // profit bound of its parent (equal at the root)
    double incumbent = 0.0;     // best profit found so far
    double global_bound = 0.0;  // admissible bound on the optimum
};

struct SolverConfig {
    double time_limit = 3600.0;  // seconds
    ObjectiveMode objective_mode = ObjectiveMode::Single;
    std::uint64_t rng_seed = 0;
    int worker_count = 1;  // advisory; the search is sequential
    int log_level = 0;
    std::function<void(const NodeEvent&)> on_node;
};

/// Earliest-start timing of a fixed order of windows on one satellite.
struct SequenceTiming {
    bool feasible = false;
    std::vector<ScheduledObservation> schedule;
};

inline SequenceTiming sequence_feasible(const Instance& inst, std::size_t satellite,
                                        const std::vector<std::size_t>& order) {
    SequenceTiming out;
    out.feasible = true;
    double prev_end = 0.0;
    for (std::size_t n = 0; n < order.size(); ++n) {
        const auto& w = inst.vtws.at(order[n]);
        if (static_cast<std::size_t>(w.satellite) != satellite)
            throw DomainError("sequence_feasible: window belongs to another satellite");
        double start = w.vws;
        if (n > 0) start = std::max(w.vws, prev_end + inst.transition(order[n - 1], order[n]));
        const double end = start + w.p_lower;
        if (end > w.vwe + kTimeTolerance) out.feasible = false;
        out.schedule.push_back({order[n], start, w.p_lower, end});
        prev_end = end;
    }
    if (!out.feasible) out.schedule.clear();
    return out;
}

/// Window attributes in flat arrays for the inner loops.
class SearchModel {
public:
    explicit SearchModel(const Instance& inst) : inst_(&inst) {
        const auto nv = inst.vtws.size();
        strip_options_.resize(inst.strips.size());
        for (std::size_t v = 0; v < nv; ++v) strip_options_[static_cast<std::size_t>(inst.vtws[v].strip)].push_back(v);
        polygon_strips_.resize(inst.polygons.size());
        share_.assign(inst.strips.size(), 0.0);
        for (std::size_t j = 0; j < inst.strips.size(); ++j) {
            const auto& s = inst.strips[j];
            if (s.kind == StripKind::Polygon) {
                const auto r = static_cast<std::size_t>(s.target_id);
                polygon_strips_[r].push_back(j);
                share_[j] = s.covered_area / inst.polygons[r].area;
            }
        }
    }

    const Instance& instance() const { return *inst_; }
    const std::vector<std::size_t>& options(std::size_t strip) const { return strip_options_[strip]; }
    double share(std::size_t strip) const { return share_[strip]; }
    const std::vector<std::vector<std::size_t>>& polygon_strips() const { return polygon_strips_; }

    double transition(std::size_t from, std::size_t to) const {
        const auto& a = inst_->vtws[from];
        const auto& sat = inst_->satellites[static_cast<std::size_t>(a.satellite)];
        return sat.settling_time + visibility::max_axis_time(sat, a.attitude_sp2, inst_->vtws[to].attitude_sp1);
    }

    /// Smallest possible transition out of / into any window of this satellite.
    double settling(std::size_t vtw) const {
        return inst_->satellites[static_cast<std::size_t>(inst_->vtws[vtw].satellite)].settling_time;
    }

private:
    const Instance* inst_;
    std::vector<std::vector<std::size_t>> strip_options_;
    std::vector<std::vector<std::size_t>> polygon_strips_;
    std::vector<double> share_;
};

struct TimedEntry {
    std::size_t vtw = 0;
    double start = 0.0;
    double end = 0.0;
    double latest_start = 0.0;  // latest start keeping the rest of the sequence feasible
};

struct Insertion {
    std::size_t vtw = 0;
    std::size_t satellite = 0;
    std::size_t position = 0;
    double start = 0.0;
    double end = 0.0;
    double delay = 0.0;         // shift imposed on the successor's start
    double new_makespan = 0.0;  // satellite's last end after insertion
};

/// Per-satellite sequences kept feasible and timed by the forward pass.
class PartialSchedule {
public:
    explicit PartialSchedule(const SearchModel& model)
        : model_(&model), seqs_(model.instance().satellites.size()) {}

    const SearchModel& model() const { return *model_; }
    const std::vector<TimedEntry>& sequence(std::size_t sat) const { return seqs_[sat]; }
    std::size_t satellite_count() const { return seqs_.size(); }

    std::optional<Insertion> try_insert(std::size_t vtw, std::size_t pos) const {
        const auto& inst = model_->instance();
        const auto& w = inst.vtws[vtw];
        const auto sat = static_cast<std::size_t>(w.satellite);
        const auto& seq = seqs_[sat];
        double start = w.vws;
        if (pos > 0) start = std::max(w.vws, seq[pos - 1].end + model_->transition(seq[pos - 1].vtw, vtw));
        const double end = start + w.p_lower;
        if (end > w.vwe + kTimeTolerance) return std::nullopt;
        Insertion ins{vtw, sat, pos, start, end, 0.0, end};
        if (pos < seq.size()) {
            const auto& next = seq[pos];
            const auto& nw = inst.vtws[next.vtw];
            const double next_start = std::max(nw.vws, end + model_->transition(vtw, next.vtw));
            if (next_start > next.latest_start + kTimeTolerance) return std::nullopt;
            ins.delay = next_start - next.start;
            ins.new_makespan = seq.back().end + ins.delay;  // upper estimate; exact when the shift propagates
        } else if (!seq.empty()) {
            ins.new_makespan = std::max(seq.back().end, end);
        }
        return ins;
    }

    /// Calls f(const Insertion&) for every feasible position of `vtw`.
    template <class F>
    void for_each_insertion(std::size_t vtw, F&& f) const {
        const auto& inst = model_->instance();
        const auto& w = inst.vtws[vtw];
        const auto& seq = seqs_[static_cast<std::size_t>(w.satellite)];
        const double settle = model_->settling(vtw);
        // latest_start and end both increase along a sequence, bounding the positions.
        const double earliest_end = w.vws + w.p_lower;
        auto lo = std::partition_point(seq.begin(), seq.end(), [&](const TimedEntry& e) {
            return e.latest_start < earliest_end + settle - kTimeTolerance;
        });
        for (auto pos = static_cast<std::size_t>(lo - seq.begin()); pos <= seq.size(); ++pos) {
            if (pos > 0 && seq[pos - 1].end + settle + w.p_lower > w.vwe + kTimeTolerance) break;
            if (auto ins = try_insert(vtw, pos)) f(*ins);
        }
    }

    bool insertable(std::size_t vtw) const {
        bool found = false;
        const auto& inst = model_->instance();
        const auto& w = inst.vtws[vtw];
        const auto& seq = seqs_[static_cast<std::size_t>(w.satellite)];
        const double settle = model_->settling(vtw);
        const double earliest_end = w.vws + w.p_lower;
        auto lo = std::partition_point(seq.begin(), seq.end(), [&](const TimedEntry& e) {
            return e.latest_start < earliest_end + settle - kTimeTolerance;
        });
        for (auto pos = static_cast<std::size_t>(lo - seq.begin()); pos <= seq.size() && !found; ++pos) {
            if (pos > 0 && seq[pos - 1].end + settle + w.p_lower > w.vwe + kTimeTolerance) break;
            found = try_insert(vtw, pos).has_value();
        }
        return found;
    }

    void insert(const Insertion& ins) {
        auto& seq = seqs_[ins.satellite];
        seq.insert(seq.begin() + static_cast<std::ptrdiff_t>(ins.position), TimedEntry{ins.vtw});
        retime(ins.satellite);
    }

    void erase(std::size_t sat, std::size_t pos) {
        auto& seq = seqs_[sat];
        seq.erase(seq.begin() + static_cast<std::ptrdiff_t>(pos));
        retime(sat);
    }

    std::optional<double> makespan() const {
        std::optional<double> m;
        for (const auto& seq : seqs_)
            if (!seq.empty()) m = m ? std::max(*m, seq.back().end) : seq.back().end;
        return m;
    }

    std::vector<std::vector<ScheduledObservation>> observations() const {
        std::vector<std::vector<ScheduledObservation>> out(seqs_.size());
        const auto& inst = model_->instance();
        for (std::size_t i = 0; i < seqs_.size(); ++i)
            for (const auto& e : seqs_[i]) out[i].push_back({e.vtw, e.start, inst.vtws[e.vtw].p_lower, e.end});
        return out;
    }

private:
    void retime(std::size_t sat) {
        const auto& inst = model_->instance();
        auto& seq = seqs_[sat];
        for (std::size_t n = 0; n < seq.size(); ++n) {
            const auto& w = inst.vtws[seq[n].vtw];
            double start = w.vws;
            if (n > 0) start = std::max(w.vws, seq[n - 1].end + model_->transition(seq[n - 1].vtw, seq[n].vtw));
            seq[n].start = start;
            seq[n].end = start + w.p_lower;
        }
        for (std::size_t n = seq.size(); n-- > 0;) {
            const auto& w = inst.vtws[seq[n].vtw];
            double latest = w.vwe - w.p_lower;
            if (n + 1 < seq.size())
                latest = std::min(latest,
                                  seq[n + 1].latest_start - model_->transition(seq[n].vtw, seq[n + 1].vtw) - w.p_lower);
            seq[n].latest_start = latest;
        }
    }

    const SearchModel* model_;
    std::vector<std::vector<TimedEntry>> seqs_;
};

enum class Decision : std::uint8_t { Undecided, Accepted, Rejected };

/// Search state: feasible partial sequences plus a decision per strip.
struct SearchNode {
    PartialSchedule schedule;
    std::vector<Decision> decisions;

    explicit SearchNode(const SearchModel& model)
        : schedule(model), decisions(model.instance().strips.size(), Decision::Undecided) {}

    /// Inserts a strip through `ins` and marks it accepted.
    void accept(const Insertion& ins) {
        schedule.insert(ins);
        decisions[static_cast<std::size_t>(schedule.model().instance().vtws[ins.vtw].strip)] = Decision::Accepted;
    }
};

inline bool strip_insertable(const SearchNode& node, std::size_t strip) {
    for (std::size_t v : node.schedule.model().options(strip))
        if (node.schedule.insertable(v)) return true;
    return false;
}

/// Objective of the accepted strips alone.
inline double node_value(const SearchNode& node) {
    std::vector<bool> observed(node.decisions.size());
    for (std::size_t j = 0; j < observed.size(); ++j) observed[j] = node.decisions[j] == Decision::Accepted;
    return objective_of_strips(node.schedule.model().instance(), observed);
}

struct BoundBreakdown {
    double value = 0.0;                    // accepted strips
    double bound = 0.0;                    // admissible bound on any completion
    std::vector<bool> open;                // undecided strips that still fit somewhere
    std::vector<double> polygon_reach;     // accepted + open coverage per polygon, unclamped
    std::vector<double> polygon_accepted;  // accepted coverage per polygon
};

inline BoundBreakdown bound_breakdown(const SearchNode& node) {
    const auto& model = node.schedule.model();
    const auto& inst = model.instance();
    BoundBreakdown b;
    b.open.assign(inst.strips.size(), false);
    b.polygon_reach.assign(inst.polygons.size(), 0.0);
    b.polygon_accepted.assign(inst.polygons.size(), 0.0);
    double spots_value = 0.0, spots_open = 0.0;
    for (std::size_t j = 0; j < inst.strips.size(); ++j) {
        const auto& s = inst.strips[j];
        const bool accepted = node.decisions[j] == Decision::Accepted;
        const bool open = node.decisions[j] == Decision::Undecided && strip_insertable(node, j);
        b.open[j] = open;
        if (s.kind == StripKind::Spot) {
            if (accepted) spots_value += s.weight;
            if (open) spots_open += s.weight;
        } else {
            const auto r = static_cast<std::size_t>(s.target_id);
            if (accepted) b.polygon_accepted[r] += model.share(j);
            if (accepted || open) b.polygon_reach[r] += model.share(j);
        }
    }
    b.value = spots_value;
    b.bound = spots_value + spots_open;
    for (std::size_t r = 0; r < inst.polygons.size(); ++r) {
        const double w = inst.polygons[r].weight;
        b.value += w * piecewise_f(std::min(1.0, b.polygon_accepted[r]));
        b.bound += w * piecewise_f(std::min(1.0, b.polygon_reach[r]));
    }
    return b;
}

/// Admissible bound: accepted value plus every undecided strip that still fits.
inline double upper_bound(const Instance& inst, const SearchNode& node) {
    if (&node.schedule.model().instance() != &inst) throw DomainError("upper_bound: node built for another instance");
    return bound_breakdown(node).bound;
}

inline Solution make_solution(const Instance& inst, const PartialSchedule& schedule) {
    Solution sol;
    sol.sequences = schedule.observations();
    refresh_metrics(inst, sol);
    return sol;
}

namespace detail {

// Profit bound lost if `strip` were left out.
inline double exclusion_loss(const SearchModel& model, const BoundBreakdown& b, std::size_t strip) {
    const auto& s = model.instance().strips[strip];
    if (s.kind == StripKind::Spot) return s.weight;
    const auto r = static_cast<std::size_t>(s.target_id);
    const double w = model.instance().polygons[r].weight;
    const double reach = b.polygon_reach[r];
    return w * (piecewise_f(std::min(1.0, reach)) - piecewise_f(std::clamp(reach - model.share(strip), 0.0, 1.0)));
}

// Marginal objective gain of adding `strip` to the accepted set.
inline double marginal_gain(const SearchModel& model, const std::vector<double>& coverage, std::size_t strip) {
    const auto& s = model.instance().strips[strip];
    if (s.kind == StripKind::Spot) return s.weight;
    const auto r = static_cast<std::size_t>(s.target_id);
    const double w = model.instance().polygons[r].weight;
    return w * (piecewise_f(std::min(1.0, coverage[r] + model.share(strip))) - piecewise_f(std::min(1.0, coverage[r])));
}

inline auto window_key(const Instance& inst, std::size_t v) {
    const auto& w = inst.vtws[v];
    return std::tuple{w.satellite, w.strip, w.orbit, w.sense, w.vws};
}

}  // namespace detail

enum class GreedyCost { Delay, Makespan };

/// Inserts strips by decreasing marginal profit, each into its cheapest
/// feasible (satellite, window, position) slot. Equal-gain strips are visited
/// in an order shuffled by `rng`.
inline Solution greedy_construct(const Instance& inst, Rng& rng, GreedyCost cost = GreedyCost::Delay) {
    const SearchModel model(inst);
    SearchNode node(model);
    const auto n = inst.strips.size();
    std::vector<std::uint64_t> tiebreak(n);
    for (auto& t : tiebreak) t = rng.next();
    std::vector<double> coverage(inst.polygons.size(), 0.0);
    std::vector<bool> tried(n, false);

    auto better = [&](const Insertion& a, const Insertion& b) {
        const auto ka = cost == GreedyCost::Delay ? std::tuple{a.delay, a.end} : std::tuple{a.new_makespan, a.end};
        const auto kb = cost == GreedyCost::Delay ? std::tuple{b.delay, b.end} : std::tuple{b.new_makespan, b.end};
        if (ka != kb) return ka < kb;
        return std::tuple{detail::window_key(inst, a.vtw), a.position} <
               std::tuple{detail::window_key(inst, b.vtw), b.position};
    };

    for (;;) {
        std::optional<std::size_t> pick;
        double pick_gain = -1.0;
        for (std::size_t j = 0; j < n; ++j) {
            if (tried[j] || model.options(j).empty()) continue;
            const double gain = detail::marginal_gain(model, coverage, j);
            if (!pick || gain > pick_gain + kObjectiveTolerance ||
                (std::abs(gain - pick_gain) <= kObjectiveTolerance && tiebreak[j] < tiebreak[*pick])) {
                pick = j;
                pick_gain = gain;
            }
        }
        if (!pick) break;
        tried[*pick] = true;
        std::optional<Insertion> best;
        for (std::size_t v : model.options(*pick))
            node.schedule.for_each_insertion(v, [&](const Insertion& ins) {
                if (!best || better(ins, *best)) best = ins;
            });
        if (best) {
            node.accept(*best);
            if (inst.strips[*pick].kind == StripKind::Polygon)
                coverage[static_cast<std::size_t>(inst.strips[*pick].target_id)] += model.share(*pick);
        }
    }
    Solution sol = make_solution(inst, node.schedule);
    sol.status = SolveStatus::Feasible;
    return sol;
}

inline Solution greedy_construct(const Instance& inst, std::uint64_t seed = 0) {
    Rng rng(seed);
    return greedy_construct(inst, rng);
}

namespace detail {

using Clock = std::chrono::steady_clock;

/// Depth-first branch and bound shared by both objective phases.
class BranchAndBound {
public:
    BranchAndBound(const SearchModel& model, const SolverConfig& config, Clock::time_point deadline)
        : model_(model), inst_(model.instance()), config_(config), deadline_(deadline), node_(model) {}

    /// Phase 1: maximise profit starting from `warm` (a feasible schedule).
    void maximize_profit(const Solution& warm) {
        phase_ = 1;
        load_incumbent(warm);
        best_profit_ = objective_value(inst_, warm);
        const auto root = bound_breakdown(node_);
        root_bound_ = root.bound;
        if (best_profit_ >= root_bound_ - kObjectiveTolerance) {
            complete_ = true;
            return;
        }
        complete_ = dfs_profit(0, root_bound_);
    }

    /// Phase 2: minimise makespan among schedules with profit >= target.
    void minimize_makespan(const Solution& warm, double target) {
        phase_ = 2;
        target_ = target;
        load_incumbent(warm);
        best_profit_ = objective_value(inst_, warm);
        best_makespan_ = makespan(warm).value_or(0.0);
        root_makespan_bound_ = makespan_lower_bound(bound_breakdown(node_));
        if (!makespan(warm) || best_makespan_ <= root_makespan_bound_ + kTimeTolerance) {
            complete_ = true;
            return;
        }
        complete_ = dfs_makespan(0);
    }

    bool complete() const { return complete_; }
    double root_bound() const { return root_bound_; }
    double root_makespan_bound() const { return root_makespan_bound_; }
    double best_profit() const { return best_profit_; }
    double best_makespan() const { return best_makespan_; }
    const std::vector<std::vector<ScheduledObservation>>& best_sequences() const { return best_sequences_; }
    std::uint64_t nodes() const { return nodes_; }

private:
    void load_incumbent(const Solution& warm) {
        best_sequences_ = warm.sequences;
        best_sequences_.resize(inst_.satellites.size());
    }

    bool timed_out() {
        if (stopped_) return true;
        if ((++clock_checks_ & 63) == 0 && Clock::now() >= deadline_) stopped_ = true;
        return stopped_;
    }

    // Next strip to branch on: largest bound contribution, then fewest options, then id.
    std::optional<std::size_t> branching_strip(const BoundBreakdown& b) const {
        std::optional<std::size_t> pick;
        double pick_loss = 0.0;
        for (std::size_t j = 0; j < b.open.size(); ++j) {
            if (!b.open[j]) continue;
            const double loss = exclusion_loss(model_, b, j);
            if (!pick || loss > pick_loss + kObjectiveTolerance) {
                pick = j;
                pick_loss = loss;
            } else if (std::abs(loss - pick_loss) <= kObjectiveTolerance &&
                       model_.options(j).size() < model_.options(*pick).size()) {
                pick = j;
                pick_loss = loss;
            }
        }
        return pick;
    }

    std::vector<Insertion> insertions_of(std::size_t strip) const {
        std::vector<Insertion> out;
        for (std::size_t v : model_.options(strip))
            node_.schedule.for_each_insertion(v, [&](const Insertion& ins) { out.push_back(ins); });
        return out;
    }

    void emit(std::size_t depth, double bound, double parent_bound) {
        if (!config_.on_node) return;
        NodeEvent ev;
        ev.phase = phase_;
        ev.depth = depth;
        ev.bound = bound;
        ev.parent_bound = parent_bound;
        ev.incumbent = best_profit_;
        ev.global_bound = phase_ == 1 ? root_bound_ : target_;
        config_.on_node(ev);
    }

    // Returns false when interrupted by the deadline.
    bool dfs_profit(std::size_t depth, double parent_bound) {
        if (timed_out()) return false;
        ++nodes_;
        const auto b = bound_breakdown(node_);
        emit(depth, b.bound, parent_bound);
        if (b.value > best_profit_ + kObjectiveTolerance) {
            best_profit_ = b.value;
            best_sequences_ = node_.schedule.observations();
        }
        if (b.bound <= best_profit_ + kObjectiveTolerance) return true;
        const auto strip = branching_strip(b);
        if (!strip) return true;

        auto children = insertions_of(*strip);
        std::sort(children.begin(), children.end(), [&](const Insertion& x, const Insertion& y) {
            if (std::tuple{x.delay, x.end} != std::tuple{y.delay, y.end})
                return std::tuple{x.delay, x.end} < std::tuple{y.delay, y.end};
            return std::tuple{window_key(inst_, x.vtw), x.position} < std::tuple{window_key(inst_, y.vtw), y.position};
        });
        for (const auto& ins : children) {
            node_.accept(ins);
            const bool finished = dfs_profit(depth + 1, b.bound);
            node_.schedule.erase(ins.satellite, ins.position);
            node_.decisions[*strip] = Decision::Undecided;
            if (!finished) return false;
            if (b.bound <= best_profit_ + kObjectiveTolerance) return true;
        }
        node_.decisions[*strip] = Decision::Rejected;
        const bool finished = dfs_profit(depth + 1, b.bound);
        node_.decisions[*strip] = Decision::Undecided;
        return finished;
    }

    // Makespan no completion of the node can beat: the current one, and the
    // earliest end of every strip the profit target forces in.
    double makespan_lower_bound(const BoundBreakdown& b) const {
        double lb = node_.schedule.makespan().value_or(0.0);
        for (std::size_t j = 0; j < b.open.size(); ++j) {
            if (!b.open[j] || b.bound - exclusion_loss(model_, b, j) >= target_ - kObjectiveTolerance) continue;
            double earliest = std::numeric_limits<double>::infinity();
            for (std::size_t v : model_.options(j))
                node_.schedule.for_each_insertion(v, [&](const Insertion& ins) { earliest = std::min(earliest, ins.end); });
            lb = std::max(lb, earliest);
        }
        return lb;
    }

    bool dfs_makespan(std::size_t depth) {
        if (timed_out()) return false;
        ++nodes_;
        const auto b = bound_breakdown(node_);
        emit(depth, b.bound, b.bound);
        if (b.bound < target_ - kObjectiveTolerance) return true;
        const double current = node_.schedule.makespan().value_or(0.0);
        if (b.value >= target_ - kObjectiveTolerance) {
            // Further insertions cannot shorten the schedule.
            if (current < best_makespan_ - kTimeTolerance) {
                best_makespan_ = current;
                best_profit_ = b.value;
                best_sequences_ = node_.schedule.observations();
            }
            return true;
        }
        if (makespan_lower_bound(b) >= best_makespan_ - kTimeTolerance) return true;
        const auto strip = branching_strip(b);
        if (!strip) return true;

        auto children = insertions_of(*strip);
        std::sort(children.begin(), children.end(), [&](const Insertion& x, const Insertion& y) {
            const double mx = std::max(current, x.new_makespan), my = std::max(current, y.new_makespan);
            if (std::tuple{mx, x.end} != std::tuple{my, y.end}) return std::tuple{mx, x.end} < std::tuple{my, y.end};
            return std::tuple{window_key(inst_, x.vtw), x.position} < std::tuple{window_key(inst_, y.vtw), y.position};
        });
        for (const auto& ins : children) {
            node_.accept(ins);
            const bool finished = dfs_makespan(depth + 1);
            node_.schedule.erase(ins.satellite, ins.position);
            node_.decisions[*strip] = Decision::Undecided;
            if (!finished) return false;
        }
        node_.decisions[*strip] = Decision::Rejected;
        const bool finished = dfs_makespan(depth + 1);
        node_.decisions[*strip] = Decision::Undecided;
        return finished;
    }

    const SearchModel& model_;
    const Instance& inst_;
    const SolverConfig& config_;
    Clock::time_point deadline_;
    SearchNode node_;
    int phase_ = 1;
    double target_ = 0.0;
    bool complete_ = false;
    bool stopped_ = false;
    std::uint64_t clock_checks_ = 0;
    std::uint64_t nodes_ = 0;
    double root_bound_ = 0.0;
    double root_makespan_bound_ = 0.0;
    double best_profit_ = 0.0;
    double best_makespan_ = 0.0;
    std::vector<std::vector<ScheduledObservation>> best_sequences_;
};

inline void check_inputs(const Instance& inst, const SolverConfig& config) {
    if (!(config.time_limit > 0.0)) throw ConfigError("time_limit must be positive");
    validate_instance(inst);
}

inline double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

}  // namespace detail

/// Maximises total coverage profit. Returns the incumbent and an admissible
/// bound when the time limit interrupts the search.
inline Solution solve(const Instance& inst, const SolverConfig& config) {
    detail::check_inputs(inst, config);
    const auto t0 = detail::Clock::now();
    const auto deadline = t0 + std::chrono::duration_cast<detail::Clock::duration>(
                                   std::chrono::duration<double>(config.time_limit));
    const SearchModel model(inst);
    Rng rng(config.rng_seed);
    const Solution warm = greedy_construct(inst, rng);

    detail::BranchAndBound bb(model, config, deadline);
    bb.maximize_profit(warm);

    Solution sol;
    sol.sequences = bb.best_sequences();
    refresh_metrics(inst, sol);
    sol.upper_bound = bb.complete() ? sol.objective : std::max(bb.root_bound(), sol.objective);
    sol.gap_percent = bb.complete() ? 0.0 : gap_percent(sol.upper_bound, sol.objective);
    if (bb.complete())
        sol.status = inst.vtws.empty() ? SolveStatus::InfeasibleEmpty : SolveStatus::Optimal;
    else
        sol.status = SolveStatus::Feasible;
    sol.solve_time = detail::seconds_since(t0);
    return sol;
}

/// Maximises profit, then minimises makespan with the profit held at its maximum.
inline Solution solve_lexicographic(const Instance& inst, const SolverConfig& config) {
    detail::check_inputs(inst, config);
    const auto t0 = detail::Clock::now();
    const auto budget = std::chrono::duration_cast<detail::Clock::duration>(
        std::chrono::duration<double>(config.time_limit));
    const SearchModel model(inst);

    SolverConfig phase1 = config;
    phase1.time_limit = 0.5 * config.time_limit;
    Solution first = solve(inst, phase1);

    // Makespan-greedy warm start, kept only when it matches the phase-1 profit.
    Solution warm = first;
    Rng rng(config.rng_seed);
    Solution compact = greedy_construct(inst, rng, GreedyCost::Makespan);
    if (compact.objective >= first.objective - kObjectiveTolerance &&
        compact.makespan.value_or(0.0) < first.makespan.value_or(0.0))
        warm = compact;

    detail::BranchAndBound bb(model, config, t0 + budget);
    bb.minimize_makespan(warm, first.objective);

    Solution sol;
    sol.sequences = bb.best_sequences();
    refresh_metrics(inst, sol);
    sol.lexicographic = true;
    sol.upper_bound = first.upper_bound;
    sol.gap_percent = gap_percent(sol.upper_bound, sol.objective);
    const double span = sol.makespan.value_or(0.0);
    sol.makespan_lower_bound = bb.complete() ? span : std::min(span, bb.root_makespan_bound());
    sol.makespan_gap_percent = span > 0.0 ? 100.0 * (span - sol.makespan_lower_bound) / span : 0.0;
    const bool proven = first.status != SolveStatus::Feasible && bb.complete();
    sol.status = proven ? first.status : SolveStatus::Feasible;
    if (proven) sol.gap_percent = 0.0, sol.makespan_gap_percent = 0.0;
    sol.solve_time = detail::seconds_since(t0);
    return sol;
}

inline Solution solve_with_mode(const Instance& inst, const SolverConfig& config) {
    return config.objective_mode == ObjectiveMode::Lexicographic ? solve_lexicographic(inst, config)
                                                                 : solve(inst, config);
}

}  // namespace saeos::solver
