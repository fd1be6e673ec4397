#pragma once

// Fixtures, random generators and the theorem property checks shared by the
// unit tests and the acceptance runner.

#include "asyncdyn.hpp"

#include <algorithm>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace testkit {

using namespace asyncdyn;
using Rng = std::mt19937_64;

inline GeneratorFunction table2(std::initializer_list<std::uint32_t> images)
{
    return GeneratorFunction(2, std::vector<std::uint32_t>(images));
}

// (!x1 | x1 & !x2, !x1 | x1 & x2): 00->11, 01->11, 10->10, 11->01
inline GeneratorFunction phi_fig1() { return table2({0b11, 0b11, 0b10, 0b01}); }
inline GeneratorFunction phi_not() { return table2({0b11, 0b10, 0b01, 0b00}); }
inline GeneratorFunction phi_half() { return table2({0b01, 0b00, 0b11, 0b10}); }
// 00->11, 01->00, 10->00, 11->11
inline GeneratorFunction phi_omega() { return table2({0b11, 0b00, 0b00, 0b11}); }

inline const char* kFig1Source = "vars: x1 x2\nnext x1 = !x1 | x1 & !x2\nnext x2 = !x1 | x1 & x2\n";

inline StateVector sv(const char* bits) { return StateVector::parse(bits); }
inline UpdateMask um(const char* bits) { return UpdateMask::parse(bits); }
inline StateSet set_of(const char* literal, int n) { return parse_state_set(literal, n); }

inline TimedSchedule unit(std::vector<const char*> prefix, std::vector<const char*> cycle)
{
    LassoSchedule l;
    for (auto p : prefix)
        l.prefix.push_back(um(p));
    for (auto c : cycle)
        l.cycle.push_back(um(c));
    return TimedSchedule::unit_times(std::move(l));
}

inline GeneratorFunction random_phi(int n, Rng& rng)
{
    std::uniform_int_distribution<std::uint32_t> d(0, StateVector::full_mask(n));
    return GeneratorFunction::from_fn(n, [&](std::uint32_t) { return d(rng); });
}

/// Random progressive lasso with random rational timing (about half the
/// schedules use the default unit timing).
inline TimedSchedule random_schedule(int n, Rng& rng)
{
    const std::uint32_t full = StateVector::full_mask(n);
    std::uniform_int_distribution<std::uint32_t> mask(0, full);
    std::uniform_int_distribution<int> plen(0, 3), clen(1, 4);
    LassoSchedule l;
    const int p = plen(rng), c = clen(rng);
    for (int i = 0; i < p; ++i)
        l.prefix.emplace_back(n, mask(rng));
    std::vector<std::uint32_t> cyc(static_cast<std::size_t>(c));
    std::uint32_t used = 0;
    for (auto& m : cyc) {
        m = mask(rng);
        used |= m;
    }
    std::uniform_int_distribution<std::size_t> where(0, cyc.size() - 1);
    cyc[where(rng)] |= full & ~used;
    for (auto m : cyc)
        l.cycle.emplace_back(n, m);
    if (rng() % 2)
        return TimedSchedule::unit_times(std::move(l));

    std::uniform_int_distribution<std::int64_t> num(1, 7), den(1, 4), start(-5, 5);
    std::vector<Time> times;
    Time t(start(rng), den(rng));
    for (int k = 0; k < p + c; ++k) {
        times.push_back(t);
        t += Time(num(rng), den(rng));
    }
    const Time period = t - times[static_cast<std::size_t>(p)];
    return TimedSchedule(std::move(l), std::move(times), period);
}

inline StateSet random_set(int n, Rng& rng)
{
    StateSet s(n);
    const std::uint64_t states = std::uint64_t{1} << n;
    while (s.empty())
        for (std::uint32_t c = 0; c < states; ++c)
            if (rng() % 2)
                s.insert(c);
    return s;
}

/// Collects failures instead of aborting, so a whole suite can be summarized.
struct Checker {
    std::size_t checks = 0;
    std::vector<std::string> failures;

    void expect(bool ok, const std::function<std::string()>& what)
    {
        ++checks;
        if (!ok && failures.size() < 50)
            failures.push_back(what());
    }
    [[nodiscard]] bool ok() const { return failures.empty(); }
};

struct WitnessTally {
    std::size_t emitted = 0;
    std::size_t confirmed = 0;
};

inline std::string describe(const GeneratorFunction& phi)
{
    std::ostringstream os;
    os << "phi[";
    for (std::uint32_t c = 0; c < phi.state_count(); ++c)
        os << (c ? " " : "") << StateVector(phi.dimension(), c).str() << ">"
           << StateVector(phi.dimension(), phi.image(c)).str();
    os << "]";
    return os.str();
}

/// Sample times around the interesting part of a trajectory: every listed
/// breakpoint up to two tail periods, midpoints, and points before t_0.
inline std::vector<Time> sample_times(const Trajectory& traj)
{
    const auto& rho = traj.schedule();
    std::vector<Time> ts{rho.time(0) - 1};
    const auto last = static_cast<std::int64_t>(traj.tail_start() + 2 * traj.tail_length() + 2);
    for (std::int64_t k = 0; k <= last; ++k) {
        ts.push_back(rho.time(k));
        ts.push_back((rho.time(k) + rho.time(k + 1)) / 2);
    }
    return ts;
}

/// Flow and omega-set identities for one (phi, mu, rho).
inline void check_flow(const GeneratorFunction& phi, const StateVector& mu, const TimedSchedule& rho, Checker& ck)
{
    const auto tag = [&] { return describe(phi) + " mu=" + mu.str() + " rho=" + format_schedule(rho); };
    const auto traj = flow(phi, mu, rho);
    const auto om = omega_set(traj);
    const auto orbit = orbit_set(traj);
    const auto fixed = fixed_points(phi);
    const auto times = sample_times(traj);

    // breakpoint k is the fold of the first k+1 masks
    for (std::int64_t k = 0; k < static_cast<std::int64_t>(traj.breakpoints().size()); ++k) {
        std::vector<UpdateMask> ms;
        for (std::int64_t j = 0; j <= k; ++j)
            ms.push_back(rho.lasso().mask(j));
        ck.expect(traj.value_after(k) == iterate(phi, mu, ms), [&] { return "fold mismatch " + tag(); });
    }

    // restriction identity and omega restart (any cut time)
    for (std::size_t i = 0; i < times.size(); i += 3) {
        const Time cut = times[i];
        const auto mid = traj.value_at(cut);
        const auto rest = restrict_after(rho, cut);
        const auto traj2 = flow(phi, mid, rest);
        for (const auto& t : times)
            if (t >= cut)
                ck.expect(traj2.value_at(t) == traj.value_at(t),
                          [&] { return "restriction identity at cut " + format_time(cut) + " " + tag(); });
        ck.expect(omega_set(traj2).states == om.states,
                  [&] { return "omega not preserved by restart at " + format_time(cut) + " " + tag(); });
    }

    // time shift: values and omega-set
    for (const Time tau : {Time(0), Time(5), Time(-1), Time(7, 3)}) {
        const auto shifted = flow(phi, mu, shift(rho, tau));
        for (const auto& t : times)
            ck.expect(shifted.value_at(t + tau) == traj.value_at(t),
                      [&] { return "shift identity tau=" + format_time(tau) + " " + tag(); });
        ck.expect(omega_set(shifted).states == om.states, [&] { return "omega changed by shift " + tag(); });
    }

    // omega-set: nonempty, sandwiched, equal to every late suffix
    ck.expect(!om.states.empty(), [&] { return "empty omega " + tag(); });
    for (const auto& t : times) {
        const auto suffix = values_from(traj, t);
        ck.expect(om.states.is_subset_of(suffix) && suffix.is_subset_of(orbit),
                  [&] { return "omega/suffix/orbit inclusion at " + format_time(t) + " " + tag(); });
        if (t >= om.settle_time) {
            ck.expect(suffix == om.states, [&] { return "late suffix differs from omega " + tag(); });
            // restarting from any value inside omega after settling
            const auto mu2 = traj.value_at(t);
            const auto rest = flow(phi, mu2, restrict_after(rho, t));
            ck.expect(orbit_set(rest) == om.states && omega_set(rest).states == om.states,
                      [&] { return "restart from omega member " + tag(); });
        }
        // a suffix that no later suffix shrinks is the omega-set
        const bool stable = std::all_of(times.begin(), times.end(),
                                        [&](const Time& u) { return u < t || values_from(traj, u) == suffix; });
        if (stable)
            ck.expect(suffix == om.states, [&] { return "stable suffix is not omega " + tag(); });
    }
    ck.expect(values_from(traj, om.settle_time + rho.period()) == om.states,
              [&] { return "suffix after settle+period " + tag(); });

    // eventual confinement is the same as omega containment, for A = omega
    ck.expect(values_from(traj, om.settle_time).is_subset_of(om.states), [&] { return "confinement " + tag(); });

    // limits and fixed points
    const auto fv = final_value(traj);
    ck.expect(fv.has_value() == (om.states.size() == 1), [&] { return "limit iff singleton " + tag(); });
    if (fv) {
        ck.expect(evaluate(phi, *fv) == *fv, [&] { return "limit is not a fixed point " + tag(); });
        ck.expect(traj.value_at(om.settle_time + 100 * rho.period()) == *fv, [&] { return "limit not kept " + tag(); });
    }
    if (orbit.intersects(fixed)) {
        const auto hit = (orbit & fixed).codes();
        ck.expect(hit.size() == 1 && om.states == StateSet::from_codes(phi.dimension(), hit),
                  [&] { return "accessible fixed point does not absorb " + tag(); });
        // after first reaching it the trajectory stays there
        std::int64_t k = -1;
        if (!fixed.contains(mu))
            for (std::int64_t j = 0;; ++j)
                if (fixed.contains(traj.value_after(j))) {
                    k = j;
                    break;
                }
        const auto fp = k < 0 ? mu : traj.value_after(k);
        for (std::int64_t j = k + 1; j < k + 1 + static_cast<std::int64_t>(2 * traj.tail_length() + 4); ++j)
            ck.expect(traj.value_after(j) == fp, [&] { return "left a fixed point " + tag(); });
    }
    if (fixed.contains(mu))
        ck.expect(orbit.size() == 1, [&] { return "fixed point moved " + tag(); });
}

/// n-invariance straight from the definition: every mask, every member.
inline bool definitional_n_invariant(const GeneratorFunction& phi, const StateSet& a)
{
    for (auto mu : a.codes())
        for (std::uint32_t m = 0; m < phi.state_count(); ++m)
            if (!a.contains(phi.step(mu, m)))
                return false;
    return true;
}

/// Checks that a witness schedule does what its report says.
inline void confirm(const GeneratorFunction& phi, std::uint32_t mu, const TimedSchedule& rho, const StateSet& a,
                    bool orbit_inside, bool omega_in, Checker& ck, WitnessTally& tally)
{
    ++tally.emitted;
    const auto traj = flow(phi, StateVector(phi.dimension(), mu), rho);
    bool ok = validate_progressive(rho.lasso()).cycle.size() > 0;
    if (orbit_inside)
        ok = ok && orbit_set(traj).is_subset_of(a);
    ok = ok && (omega_set(traj).states.is_subset_of(a) == omega_in);
    if (ok)
        ++tally.confirmed;
    ck.expect(ok, [&] {
        return "witness fails: " + describe(phi) + " mu=" + StateVector(phi.dimension(), mu).str() + " A=" + a.str() +
               " rho=" + format_schedule(rho);
    });
}

/// Invariance/basin identities for one phi, sets A within A2, and a few flows.
inline void check_analysis(const GeneratorFunction& phi, const StateSet& a, const StateSet& a2,
                           const std::vector<TimedSchedule>& schedules, Checker& ck, WitnessTally& tally)
{
    const int n = phi.dimension();
    const auto g = build_graph(phi);
    const auto all = StateSet::full(n);
    const auto tag = [&] { return describe(phi) + " A=" + a.str(); };

    const auto inv = invariance_report(g, a);
    const auto br = basin_report(g, a);
    ck.expect(!inv.n_invariant || inv.p_invariant, [&] { return "n-invariant but not p-invariant " + tag(); });
    ck.expect(br.n_basin.is_subset_of(br.p_basin), [&] { return "n-basin not inside p-basin " + tag(); });
    ck.expect(inv.n_invariant == definitional_n_invariant(phi, a), [&] { return "n-invariance by masks " + tag(); });

    // witnesses
    for (const auto& [mu, rho] : inv.witnesses)
        confirm(phi, mu, rho, a, true, true, ck, tally);
    if (inv.counterexample) {
        ++tally.emitted;
        const bool exits = !a.contains(apply_mask(phi, inv.counterexample->state, inv.counterexample->mask)) &&
                           a.contains(inv.counterexample->state);
        tally.confirmed += exits;
        ck.expect(exits, [&] { return "counterexample stays in A " + tag(); });
    }
    for (const auto& [mu, rho] : br.p_witnesses)
        confirm(phi, mu, rho, a, false, true, ck, tally);
    for (const auto& [mu, rho] : br.n_escapes)
        confirm(phi, mu, rho, a, false, false, ck, tally);
    ck.expect(br.p_witnesses.size() == br.p_basin.size() && br.n_escapes.size() + br.n_basin.size() == all.size(),
              [&] { return "missing basin witnesses " + tag(); });

    // whole space and monotonicity
    ck.expect(p_basin(g, all) == all && n_basin(g, all) == all, [&] { return "basins of the whole space"; });
    ck.expect(p_basin(g, a).is_subset_of(p_basin(g, a2)) && n_basin(g, a).is_subset_of(n_basin(g, a2)),
              [&] { return "basin monotonicity " + tag() + " A2=" + a2.str(); });
    ck.expect(fair_recurrent_within(g, a).recurrent.is_subset_of(fair_recurrent_within(g, a2).recurrent),
              [&] { return "recurrence monotonicity " + tag(); });
    ck.expect(fair_recurrent_within(g, a).recurrent.is_subset_of(a), [&] { return "recurrence escapes B " + tag(); });

    // invariant sets lie in their own basins; nonempty basins are invariant
    if (inv.p_invariant)
        ck.expect(a.is_subset_of(br.p_basin), [&] { return "p-invariant set outside its p-basin " + tag(); });
    if (inv.n_invariant)
        ck.expect(a.is_subset_of(br.n_basin), [&] { return "n-invariant set outside its n-basin " + tag(); });
    if (!br.p_basin.empty())
        ck.expect(is_p_invariant(g, br.p_basin).holds, [&] { return "p-basin not p-invariant " + tag(); });
    if (!br.n_basin.empty())
        ck.expect(is_n_invariant(g, br.n_basin).holds, [&] { return "n-basin not n-invariant " + tag(); });

    // fixed points
    const auto fixed = fixed_points(phi);
    if (!fixed.empty())
        ck.expect(is_n_invariant(g, fixed).holds, [&] { return "fixed points not n-invariant " + describe(phi); });
    for (auto c : fixed.codes()) {
        StateSet one(n);
        one.insert(c);
        ck.expect(is_n_invariant(g, one).holds, [&] { return "fixed singleton not n-invariant " + describe(phi); });
    }

    // per simulated run: orbit and omega are p-invariant, reachable set is
    // n-invariant, and omega containment decides basin membership
    for (const auto& rho : schedules) {
        for (std::uint32_t start = 0; start < phi.state_count(); ++start) {
            const auto m0 = StateVector(n, start);
            const auto traj = flow(phi, m0, rho);
            const auto om = omega_set(traj).states;
            ck.expect(is_p_invariant(g, orbit_set(traj)).holds, [&] { return "orbit not p-invariant " + tag(); });
            ck.expect(is_p_invariant(g, om).holds, [&] { return "omega not p-invariant " + tag(); });
            ck.expect(is_n_invariant(g, reachable_from(g, m0)).holds,
                      [&] { return "reachable set not n-invariant " + tag(); });
            const bool inside = om.is_subset_of(a);
            ck.expect(inside == values_from(traj, omega_set(traj).settle_time).is_subset_of(a),
                      [&] { return "omega containment vs eventual confinement " + tag(); });
            if (inside)
                ck.expect(br.p_basin.contains(m0), [&] { return "run settles in A but state not in p-basin " + tag(); });
            else
                ck.expect(!br.n_basin.contains(m0), [&] { return "run escapes A but state in n-basin " + tag(); });
            // a lasso's omega-set is a sustainable set
            ck.expect(is_sustainable_set(g, om), [&] { return "simulated omega not sustainable " + tag(); });
        }
    }
}

} // namespace testkit
