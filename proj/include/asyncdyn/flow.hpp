#ifndef ASYNCDYN_FLOW_HPP
#define ASYNCDYN_FLOW_HPP

#include "core.hpp"
#include "schedule.hpp"

#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

namespace asyncdyn {

struct Breakpoint {
    Time time;
    StateVector value;

    friend bool operator==(const Breakpoint&, const Breakpoint&) = default;
};

/// A maximal interval of constant value; `end` is empty for +infinity and
/// `start` is empty for -infinity.
struct Segment {
    std::optional<Time> start;
    std::optional<Time> end;
    StateVector value;

    friend bool operator==(const Segment&, const Segment&) = default;
};

/// The piecewise-constant flow of one initial state under one schedule.
///
/// Breakpoint k is the value after firing k. Breakpoints are materialized up
/// to the end of the first repetition of the tail block; beyond that, value k
/// equals value tail_start + (k - tail_start) mod tail_length.
class Trajectory {
public:
    Trajectory(StateVector initial, std::vector<Breakpoint> breakpoints, std::size_t tail_start,
               std::size_t tail_length, TimedSchedule schedule)
        : initial_(initial), breakpoints_(std::move(breakpoints)), tail_start_(tail_start),
          tail_length_(tail_length), schedule_(std::move(schedule))
    {
    }

    [[nodiscard]] const StateVector& initial() const noexcept { return initial_; }
    [[nodiscard]] const std::vector<Breakpoint>& breakpoints() const noexcept { return breakpoints_; }
    [[nodiscard]] std::size_t tail_start() const noexcept { return tail_start_; }
    [[nodiscard]] std::size_t tail_length() const noexcept { return tail_length_; }
    [[nodiscard]] const TimedSchedule& schedule() const noexcept { return schedule_; }

    /// Value after firing k (k >= 0), resolving through the periodic tail.
    [[nodiscard]] const StateVector& value_after(std::int64_t k) const
    {
        const auto ts = static_cast<std::int64_t>(tail_start_);
        const auto tl = static_cast<std::int64_t>(tail_length_);
        if (k >= ts + tl)
            k = ts + (k - ts) % tl;
        return breakpoints_[static_cast<std::size_t>(k)].value;
    }

    [[nodiscard]] StateVector value_at(const Time& t) const
    {
        const auto k = schedule_.last_index_at_or_before(t);
        return k < 0 ? initial_ : value_after(k);
    }

    /// Whether the value stays constant from firing k on.
    [[nodiscard]] bool constant_from(std::int64_t k) const
    {
        const auto& v = value_after(k);
        const auto ts = static_cast<std::int64_t>(tail_start_);
        const auto from = std::max(k, ts);
        for (std::int64_t j = k; j < from + static_cast<std::int64_t>(tail_length_); ++j)
            if (value_after(j) != v)
                return false;
        return true;
    }

    /// Merged constant segments whose start lies before `horizon`.
    [[nodiscard]] std::vector<Segment> segments(const Time& horizon) const
    {
        std::vector<Segment> out;
        out.push_back({std::nullopt, schedule_.time(0), initial_});
        std::int64_t k = 0;
        while (schedule_.time(k) < horizon) {
            const auto& v = value_after(k);
            if (v != out.back().value)
                out.push_back({schedule_.time(k), std::nullopt, v});
            if (constant_from(k)) {
                out.back().end.reset();
                return out;
            }
            out.back().end = schedule_.time(k + 1);
            ++k;
        }
        return out;
    }

    /// Default listing horizon: covers the transient and two tail periods.
    [[nodiscard]] Time default_horizon() const
    {
        return schedule_.time(static_cast<std::int64_t>(tail_start_ + 2 * tail_length_));
    }

private:
    StateVector initial_;
    std::vector<Breakpoint> breakpoints_;
    std::size_t tail_start_;
    std::size_t tail_length_;
    TimedSchedule schedule_;
};

struct OmegaSet {
    StateSet states;
    Time settle_time;
};

/// Simulates mu under rho until a (state, cycle position) pair repeats.
inline Trajectory flow(const GeneratorFunction& phi, const StateVector& mu, const TimedSchedule& rho)
{
    require_same_dimension(phi.dimension(), mu.size(), "flow");
    require_same_dimension(phi.dimension(), rho.dimension(), "flow");
    const auto p = rho.prefix_length();
    const auto l = rho.cycle_length();
    const int n = phi.dimension();

    std::vector<Breakpoint> bps;
    std::uint32_t state = mu.bits();
    std::int64_t k = 0;
    for (; k < p; ++k) {
        state = phi.step(state, rho.lasso().mask(k).bits());
        bps.push_back({rho.time(k), StateVector(n, state)});
    }
    // key = state before firing k, combined with the cycle position of k
    std::unordered_map<std::uint64_t, std::int64_t> seen;
    for (;; ++k) {
        const auto pos = (k - p) % l;
        const std::uint64_t key = (static_cast<std::uint64_t>(pos) << 32) | state;
        if (auto [it, fresh] = seen.try_emplace(key, k); !fresh) {
            const auto start = static_cast<std::size_t>(it->second);
            return Trajectory(mu, std::move(bps), start, static_cast<std::size_t>(k) - start, rho);
        }
        state = phi.step(state, rho.lasso().cycle[static_cast<std::size_t>(pos)].bits());
        bps.push_back({rho.time(k), StateVector(n, state)});
    }
}

inline StateVector value_at(const Trajectory& traj, const Time& t) { return traj.value_at(t); }

/// Every value attained: the initial state and all breakpoint values.
inline StateSet orbit_set(const Trajectory& traj)
{
    StateSet s(traj.initial().size());
    s.insert(traj.initial());
    for (const auto& bp : traj.breakpoints())
        s.insert(bp.value);
    return s;
}

/// The values of the periodic tail; settle_time is the tail's first firing.
inline OmegaSet omega_set(const Trajectory& traj)
{
    StateSet s(traj.initial().size());
    const auto& bps = traj.breakpoints();
    for (std::size_t k = traj.tail_start(); k < traj.tail_start() + traj.tail_length(); ++k)
        s.insert(bps[k].value);
    return {std::move(s), bps[traj.tail_start()].time};
}

/// Values attained at times >= t.
inline StateSet values_from(const Trajectory& traj, const Time& t)
{
    StateSet s(traj.initial().size());
    s.insert(traj.value_at(t));
    const auto first = traj.schedule().first_index_after(t);
    const auto end = std::max<std::int64_t>(first, static_cast<std::int64_t>(traj.tail_start())) +
                     static_cast<std::int64_t>(traj.tail_length());
    for (auto k = first; k < end; ++k)
        s.insert(traj.value_after(k));
    return s;
}

/// The limit, when the omega-limit set is a singleton.
inline std::optional<StateVector> final_value(const Trajectory& traj)
{
    const auto omega = omega_set(traj);
    if (omega.states.size() != 1)
        return std::nullopt;
    return omega.states.states().front();
}

} // namespace asyncdyn

#endif // ASYNCDYN_FLOW_HPP
