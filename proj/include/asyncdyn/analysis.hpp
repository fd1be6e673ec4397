#ifndef ASYNCDYN_ANALYSIS_HPP
#define ASYNCDYN_ANALYSIS_HPP

#include "flow.hpp"
#include "portrait.hpp"
#include "schedule.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace asyncdyn {

//=============================================================================
// Witness schedules

namespace detail {

inline std::vector<UpdateMask> to_masks(int n, const std::vector<std::uint32_t>& raw)
{
    std::vector<UpdateMask> out;
    out.reserve(raw.size());
    for (auto m : raw)
        out.emplace_back(n, m);
    return out;
}

/// A closed walk from `start` inside one component that fires every
/// coordinate, using the coverage witnesses. With `visit_all` it also passes
/// through every member, so the walk's value set is the whole component.
inline std::vector<std::uint32_t> fair_tour(const TransitionGraph& g, std::uint32_t start,
                                            const std::vector<std::uint32_t>& comp,
                                            const std::vector<std::optional<CoverageWitness>>& wit,
                                            bool visit_all)
{
    const int n = g.dimension();
    const StateSet inside = StateSet::from_codes(n, comp);
    std::vector<std::uint32_t> masks;
    std::uint32_t at = start;
    std::uint32_t covered = 0;
    StateSet visited(n);
    visited.insert(start);
    auto walk_to = [&](std::uint32_t goal) {
        StateSet target(n);
        target.insert(goal);
        const auto path = shortest_path(g, at, target, inside);
        for (auto m : *path) { // components are strongly connected
            masks.push_back(m);
            covered |= m;
            at ^= m;
            visited.insert(at);
        }
    };
    for (int i = 1; i <= n; ++i) {
        const std::uint32_t bit = std::uint32_t{1} << (n - i);
        if (covered & bit)
            continue;
        const auto& w = *wit[static_cast<std::size_t>(i - 1)];
        walk_to(w.state);
        if (covered & bit) // the walk itself flipped it
            continue;
        masks.push_back(w.mask);
        covered |= w.mask;
        if (w.kind == CoverageWitness::Kind::Flip) {
            at ^= w.mask;
            visited.insert(at);
        }
    }
    if (visit_all)
        for (auto c : comp)
            if (!visited.contains(c))
                walk_to(c);
    walk_to(start);
    if (masks.empty()) // n >= 1 so this only happens for an empty component
        masks.push_back(g.full_mask());
    return masks;
}

} // namespace detail

/// Builds a unit-time lasso: `path` from mu into component `id`, then a fair
/// tour of that component from the path's endpoint.
inline TimedSchedule witness_schedule(const TransitionGraph& g, const FairRecurrence& fr, std::uint32_t mu,
                                      const std::vector<std::uint32_t>& path, std::size_t id, bool visit_all)
{
    std::uint32_t at = mu;
    for (auto m : path)
        at ^= m;
    const int n = g.dimension();
    auto cycle = detail::fair_tour(g, at, fr.sccs.components[id], fr.witnesses[id], visit_all);
    return TimedSchedule::unit_times(LassoSchedule{detail::to_masks(n, path), detail::to_masks(n, cycle)});
}

//=============================================================================
// Invariance

struct NInvarianceCounterexample {
    StateVector state;
    UpdateMask mask;
    StateVector image;
};

struct InvarianceReport {
    StateSet set;
    bool p_invariant = false;
    bool n_invariant = false;
    /// For each member when p-invariant: a schedule whose orbit stays in A.
    std::map<std::uint32_t, TimedSchedule> witnesses;
    /// Members that cannot stay in A forever, when not p-invariant.
    std::vector<std::uint32_t> p_failures;
    std::optional<NInvarianceCounterexample> counterexample;
};

struct NInvarianceResult {
    bool holds;
    std::optional<NInvarianceCounterexample> counterexample;
};

/// True iff no single masked update leaves A. The counterexample is the first
/// member (by encoding) with an exit, using the largest exiting mask.
inline NInvarianceResult is_n_invariant(const TransitionGraph& g, const StateSet& a)
{
    require_same_dimension(g.dimension(), a.dimension(), "is_n_invariant");
    require_nonempty(a, "is_n_invariant");
    const int n = g.dimension();
    for (auto mu : a.codes()) {
        std::optional<NInvarianceCounterexample> ce;
        g.for_each_successor(mu, [&](std::uint32_t e, std::uint32_t t) {
            if (!ce && !a.contains(t))
                ce = NInvarianceCounterexample{StateVector(n, mu), UpdateMask(n, e), StateVector(n, t)};
        });
        if (ce)
            return {false, ce};
    }
    return {true, std::nullopt};
}

struct PInvarianceResult {
    bool holds;
    std::map<std::uint32_t, TimedSchedule> witnesses;
    std::vector<std::uint32_t> failures;
};

/// True iff every member reaches, inside A, a sustainable component of the
/// graph restricted to A. Witnesses are produced for every member that can.
inline PInvarianceResult is_p_invariant(const TransitionGraph& g, const StateSet& a)
{
    require_same_dimension(g.dimension(), a.dimension(), "is_p_invariant");
    require_nonempty(a, "is_p_invariant");
    const auto fr = fair_recurrent_within(g, a);
    PInvarianceResult out{true, {}, {}};
    for (auto mu : a.codes()) {
        const auto path = fr.recurrent.empty() ? std::nullopt : shortest_path(g, mu, fr.recurrent, a);
        if (!path) {
            out.holds = false;
            out.failures.push_back(mu);
            continue;
        }
        std::uint32_t end = mu;
        for (auto m : *path)
            end ^= m;
        const auto id = static_cast<std::size_t>(fr.sccs.component_of[end]);
        out.witnesses.emplace(mu, witness_schedule(g, fr, mu, *path, id, false));
    }
    return out;
}

inline InvarianceReport invariance_report(const TransitionGraph& g, const StateSet& a)
{
    auto p = is_p_invariant(g, a);
    auto nres = is_n_invariant(g, a);
    return {a, p.holds, nres.holds, std::move(p.witnesses), std::move(p.failures), nres.counterexample};
}

//=============================================================================
// Basins

/// States from which some progressive schedule ends up (omega-set) inside A.
/// Transients may leave A, so the closure runs over the whole graph.
inline StateSet p_basin(const TransitionGraph& g, const StateSet& a)
{
    require_same_dimension(g.dimension(), a.dimension(), "p_basin");
    require_nonempty(a, "p_basin");
    return backward_closure(g, fair_recurrent_within(g, a).recurrent);
}

/// Sustainable components of the full graph that are not inside A.
inline StateSet escaping_recurrence(const FairRecurrence& full, const StateSet& a)
{
    StateSet bad(a.dimension());
    for (std::size_t id = 0; id < full.sccs.components.size(); ++id) {
        if (!full.sustainable[id])
            continue;
        const auto& comp = full.sccs.components[id];
        if (std::any_of(comp.begin(), comp.end(), [&](auto c) { return !a.contains(c); }))
            for (auto c : comp)
                bad.insert(c);
    }
    return bad;
}

/// States from which every progressive schedule ends up inside A.
inline StateSet n_basin(const TransitionGraph& g, const StateSet& a)
{
    require_same_dimension(g.dimension(), a.dimension(), "n_basin");
    require_nonempty(a, "n_basin");
    const auto full = fair_recurrent_within(g, StateSet::full(g.dimension()));
    return backward_closure(g, escaping_recurrence(full, a), full.sccs).complement();
}

enum class Attractiveness { None, Partial, Total };

inline const char* to_string(Attractiveness a)
{
    switch (a) {
    case Attractiveness::None: return "not";
    case Attractiveness::Partial: return "partially";
    case Attractiveness::Total: return "totally";
    }
    return "?";
}

inline Attractiveness attractiveness(const StateSet& basin)
{
    if (basin.empty())
        return Attractiveness::None;
    return basin.is_full() ? Attractiveness::Total : Attractiveness::Partial;
}

struct BasinReport {
    StateSet set;
    StateSet p_basin;
    StateSet n_basin;
    Attractiveness p_class = Attractiveness::None;
    Attractiveness n_class = Attractiveness::None;
    /// For members of the p-basin: a schedule whose omega-set lies in A.
    std::map<std::uint32_t, TimedSchedule> p_witnesses;
    /// For states outside the n-basin: a schedule whose omega-set leaves A.
    std::map<std::uint32_t, TimedSchedule> n_escapes;
    /// Optional query set B and whether it is p-/n-attracted by A.
    std::optional<StateSet> query;
    bool query_p_attracted = false;
    bool query_n_attracted = false;
};

/// Fills the classification from precomputed basins. A query set B is
/// attracted when it is nonempty and contained in the corresponding basin.
inline BasinReport classify(const StateSet& a, const StateSet& pb, const StateSet& nb,
                            const std::optional<StateSet>& query = std::nullopt)
{
    BasinReport r{a, pb, nb, attractiveness(pb), attractiveness(nb), {}, {}, query, false, false};
    if (query) {
        require_same_dimension(a.dimension(), query->dimension(), "classify");
        r.query_p_attracted = !query->empty() && query->is_subset_of(pb);
        r.query_n_attracted = !query->empty() && query->is_subset_of(nb);
    }
    return r;
}

/// Basins, classification and per-state witnesses for both basins.
inline BasinReport basin_report(const TransitionGraph& g, const StateSet& a,
                                const std::optional<StateSet>& query = std::nullopt)
{
    require_same_dimension(g.dimension(), a.dimension(), "basin_report");
    require_nonempty(a, "basin_report");
    const int n = g.dimension();
    const auto all = StateSet::full(n);
    const auto inner = fair_recurrent_within(g, a);
    const auto full = fair_recurrent_within(g, all);
    const auto pb = backward_closure(g, inner.recurrent, full.sccs);
    const auto bad = escaping_recurrence(full, a);
    const auto nb = backward_closure(g, bad, full.sccs).complement();
    auto r = classify(a, pb, nb, query);

    for (auto mu : pb.codes()) {
        const auto path = shortest_path(g, mu, inner.recurrent, all);
        std::uint32_t end = mu;
        for (auto m : *path)
            end ^= m;
        const auto id = static_cast<std::size_t>(inner.sccs.component_of[end]);
        r.p_witnesses.emplace(mu, witness_schedule(g, inner, mu, *path, id, false));
    }
    for (auto mu : nb.complement().codes()) {
        const auto path = shortest_path(g, mu, bad, all);
        std::uint32_t end = mu;
        for (auto m : *path)
            end ^= m;
        const auto id = static_cast<std::size_t>(full.sccs.component_of[end]);
        r.n_escapes.emplace(mu, witness_schedule(g, full, mu, *path, id, true));
    }
    return r;
}

/// A lasso from one member of component `id` whose omega-set is exactly the
/// component (for sustainable components).
inline TimedSchedule recurrence_witness(const TransitionGraph& g, const FairRecurrence& fr, std::size_t id)
{
    const auto start = fr.sccs.components[id].front();
    return witness_schedule(g, fr, start, {}, id, true);
}

//=============================================================================
// Witness checks by simulation

/// The orbit of mu under rho stays inside A.
inline bool orbit_confined(const GeneratorFunction& phi, std::uint32_t mu, const TimedSchedule& rho,
                           const StateSet& a)
{
    return orbit_set(flow(phi, StateVector(phi.dimension(), mu), rho)).is_subset_of(a);
}

/// The omega-set of mu under rho lies inside A.
inline bool omega_inside(const GeneratorFunction& phi, std::uint32_t mu, const TimedSchedule& rho,
                         const StateSet& a)
{
    return omega_set(flow(phi, StateVector(phi.dimension(), mu), rho)).states.is_subset_of(a);
}

} // namespace asyncdyn

#endif // ASYNCDYN_ANALYSIS_HPP
