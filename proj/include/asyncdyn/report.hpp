#ifndef ASYNCDYN_REPORT_HPP
#define ASYNCDYN_REPORT_HPP

// JSON renderings of graphs, trajectories and analysis reports. Needs
// nlohmann/json (vendor/json.hpp).

#include "analysis.hpp"
#include "flow.hpp"
#include "portrait.hpp"

#include <json.hpp>

#include <string>

namespace asyncdyn {

using Json = nlohmann::ordered_json;

/// Schedule literal; the "@times/period" suffix is left out for unit timing.
inline std::string schedule_literal(const TimedSchedule& s)
{
    if (s == TimedSchedule::unit_times(s.lasso()))
        return format_schedule(s).substr(0, format_schedule(s).find('@'));
    return format_schedule(s);
}

inline Json states_json(const StateSet& s)
{
    Json out = Json::array();
    for (const auto& v : s.states())
        out.push_back(v.str());
    return out;
}

inline Json time_json(const std::optional<Time>& t)
{
    return t ? Json(format_time(*t)) : Json(nullptr);
}

inline Json graph_json(const TransitionGraph& g)
{
    const int n = g.dimension();
    const auto fr = fair_recurrent_within(g, StateSet::full(n));
    Json j;
    j["n"] = n;
    j["variables"] = g.phi().names();
    Json states = Json::array();
    Json edges = Json::array();
    for (std::uint32_t c = 0; c < g.state_count(); ++c) {
        const auto id = fr.sccs.component_of[c];
        states.push_back({{"state", StateVector(n, c).str()},
                          {"image", StateVector(n, g.phi().image(c)).str()},
                          {"unstable", CoordinateSet(n, g.unstable(c)).str()},
                          {"scc", id},
                          {"sustainable", static_cast<bool>(fr.sustainable[static_cast<std::size_t>(id)])}});
        for (const auto& e : g.edges(c))
            edges.push_back({{"from", StateVector(n, c).str()},
                             {"to", StateVector(n, e.target).str()},
                             {"mask", UpdateMask(n, e.effective).str()}});
    }
    Json sccs = Json::array();
    for (std::size_t id = 0; id < fr.sccs.components.size(); ++id) {
        Json members = Json::array();
        for (auto c : fr.sccs.components[id])
            members.push_back(StateVector(n, c).str());
        sccs.push_back({{"id", id}, {"states", members}, {"sustainable", static_cast<bool>(fr.sustainable[id])}});
    }
    j["states"] = std::move(states);
    j["edges"] = std::move(edges);
    j["sccs"] = std::move(sccs);
    return j;
}

inline Json trajectory_json(const Trajectory& traj, const Time& horizon, bool with_omega)
{
    Json j;
    j["initial"] = traj.initial().str();
    j["schedule"] = schedule_literal(traj.schedule());
    Json segs = Json::array();
    for (const auto& s : traj.segments(horizon))
        segs.push_back({{"start", time_json(s.start)}, {"end", time_json(s.end)}, {"value", s.value.str()}});
    j["segments"] = std::move(segs);
    j["tail"] = {{"start_index", traj.tail_start()},
                 {"length", traj.tail_length()},
                 {"start_time", format_time(traj.breakpoints()[traj.tail_start()].time)}};
    if (with_omega) {
        const auto om = omega_set(traj);
        j["omega"] = {{"states", states_json(om.states)}, {"settle_time", format_time(om.settle_time)}};
        const auto fv = final_value(traj);
        j["final_value"] = fv ? Json(fv->str()) : Json(nullptr);
    }
    return j;
}

inline Json witnesses_json(int n, const std::map<std::uint32_t, TimedSchedule>& w)
{
    Json out = Json::array();
    for (const auto& [mu, s] : w)
        out.push_back({{"state", StateVector(n, mu).str()}, {"schedule", schedule_literal(s)}});
    return out;
}

inline Json invariance_json(const InvarianceReport& r)
{
    const int n = r.set.dimension();
    Json j;
    j["set"] = states_json(r.set);
    j["p_invariant"] = r.p_invariant;
    j["n_invariant"] = r.n_invariant;
    j["witnesses"] = witnesses_json(n, r.witnesses);
    Json fails = Json::array();
    for (auto c : r.p_failures)
        fails.push_back(StateVector(n, c).str());
    j["p_failures"] = std::move(fails);
    if (r.counterexample)
        j["counterexample"] = {{"state", r.counterexample->state.str()},
                               {"mask", r.counterexample->mask.str()},
                               {"image", r.counterexample->image.str()}};
    else
        j["counterexample"] = nullptr;
    return j;
}

inline Json basin_json(const BasinReport& r, bool with_witnesses = true)
{
    const int n = r.set.dimension();
    Json j;
    j["set"] = states_json(r.set);
    j["p_basin"] = states_json(r.p_basin);
    j["n_basin"] = states_json(r.n_basin);
    j["p_attractive"] = to_string(r.p_class);
    j["n_attractive"] = to_string(r.n_class);
    if (r.query)
        j["query"] = {{"set", states_json(*r.query)},
                      {"p_attracted", r.query_p_attracted},
                      {"n_attracted", r.query_n_attracted}};
    if (with_witnesses) {
        j["p_witnesses"] = witnesses_json(n, r.p_witnesses);
        j["n_escapes"] = witnesses_json(n, r.n_escapes);
    }
    return j;
}

} // namespace asyncdyn

#endif // ASYNCDYN_REPORT_HPP
