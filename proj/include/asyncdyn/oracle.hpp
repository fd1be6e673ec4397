#ifndef ASYNCDYN_ORACLE_HPP
#define ASYNCDYN_ORACLE_HPP

// Brute-force reference semantics for small n. Works from the definitions
// only (masked updates, lasso schedules, simulated omega-sets) and must not
// use anything from portrait.hpp or analysis.hpp.

#include "core.hpp"
#include "flow.hpp"
#include "schedule.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>
#include <utility>
#include <vector>

namespace asyncdyn {

struct OracleBudget {
    int max_prefix = 2;
    /// Longest cycle considered; 0 means n * 2^n.
    int max_cycle = 0;
    int max_n = 3;
    /// Cycles up to this length are enumerated exhaustively over all masks
    /// (quotiented by their effect, which is exact). 0 picks a default that
    /// stays tractable: the full max_cycle for n <= 2, 4 for n = 3, 2 for n = 4.
    int exhaustive_cycle = 0;

    [[nodiscard]] int cycle_limit(int n) const { return max_cycle > 0 ? max_cycle : n * (1 << n); }
    [[nodiscard]] int exhaustive_limit(int n) const
    {
        if (exhaustive_cycle > 0)
            return std::min(exhaustive_cycle, cycle_limit(n));
        return n <= 2 ? cycle_limit(n) : n == 3 ? 4 : 2;
    }
};

namespace oracle_detail {

// Sets of states are bit words over the 2^n encodings (n <= 4, so <= 16 bits).
using Bits = std::uint32_t;

inline void check_budget(const GeneratorFunction& phi, const OracleBudget& b)
{
    if (b.max_n > 4)
        throw CapacityError("oracle budget: max n is at most 4");
    if (b.max_prefix < 0 || b.cycle_limit(phi.dimension()) < 1)
        throw CapacityError("oracle budget: prefix must be >= 0 and cycle length >= 1");
    if (phi.dimension() > b.max_n)
        throw CapacityError("oracle budget exceeded: n=" + std::to_string(phi.dimension()) + " > " +
                            std::to_string(b.max_n));
}

inline StateSet to_set(int n, Bits bits)
{
    StateSet s(n);
    for (std::uint32_t c = 0; bits; ++c, bits >>= 1)
        if (bits & 1u)
            s.insert(c);
    return s;
}

inline Bits to_bits(const StateSet& s)
{
    Bits b = 0;
    for (auto c : s.codes())
        b |= Bits{1} << c;
    return b;
}

inline std::vector<UpdateMask> masks_of(int n, const std::vector<std::uint32_t>& raw)
{
    std::vector<UpdateMask> out;
    for (auto m : raw)
        out.emplace_back(n, m);
    return out;
}

/// Prefix-reachable states: for each state, whether some mask word of length
/// <= k leads there from mu. With `inside`, every visited state must lie in it.
inline Bits prefix_reach(const GeneratorFunction& phi, std::uint32_t mu, int k, Bits inside)
{
    const std::uint32_t masks = std::uint32_t{1} << phi.dimension();
    if (!((inside >> mu) & 1u))
        return 0;
    Bits seen = Bits{1} << mu, layer = seen;
    for (int step = 0; step < k && layer; ++step) {
        Bits next = 0;
        for (std::uint32_t s = 0; s < phi.state_count(); ++s)
            if ((layer >> s) & 1u)
                for (std::uint32_t m = 0; m < masks; ++m) {
                    const auto t = phi.step(s, m);
                    if ((inside >> t) & 1u)
                        next |= Bits{1} << t;
                }
        layer = next & ~seen;
        seen |= next;
    }
    return seen;
}

/// What one pass of a cycle does: per start state the end state and the set
/// of values taken after each firing, plus the union of the cycle's masks.
/// Two cycles with equal effect give equal flows from every state, and the
/// effect of c + [m] depends only on the effect of c and on m.
struct Effect {
    std::uint32_t used = 0;
    std::vector<std::uint32_t> end;
    std::vector<Bits> visited;

    friend bool operator==(const Effect&, const Effect&) = default;
};

struct EffectHash {
    std::size_t operator()(const Effect& e) const noexcept
    {
        std::size_t h = e.used;
        for (std::size_t i = 0; i < e.end.size(); ++i)
            h = h * 1000003u ^ (e.end[i] | (static_cast<std::size_t>(e.visited[i]) << 8));
        return h;
    }
};

struct Run {
    Bits omega;
    Bits orbit; // every value from the start state on, start included
};

/// omega and orbit of repeated passes from s.
inline Run run_passes(const Effect& e, std::uint32_t s)
{
    std::vector<int> seen_at(e.end.size(), -1);
    std::vector<std::uint32_t> starts;
    Bits orbit = Bits{1} << s;
    std::uint32_t x = s;
    while (seen_at[x] < 0) {
        seen_at[x] = static_cast<int>(starts.size());
        starts.push_back(x);
        orbit |= e.visited[x];
        x = e.end[x];
    }
    Bits omega = 0;
    for (std::size_t i = static_cast<std::size_t>(seen_at[x]); i < starts.size(); ++i)
        omega |= e.visited[starts[i]];
    return {omega, orbit};
}

/// All progressive cycle effects up to length `limit`, each with one
/// representative cycle.
inline std::vector<std::pair<Effect, std::vector<std::uint32_t>>> progressive_effects(const GeneratorFunction& phi,
                                                                                      int limit)
{
    const auto states = phi.state_count();
    const std::uint32_t masks = std::uint32_t{1} << phi.dimension();
    const std::uint32_t full = masks - 1;
    Effect id;
    id.end.resize(states);
    id.visited.assign(states, 0);
    for (std::uint32_t s = 0; s < states; ++s)
        id.end[s] = s;

    std::unordered_map<Effect, std::size_t, EffectHash> index;
    std::vector<std::pair<Effect, std::vector<std::uint32_t>>> all;
    std::vector<std::size_t> frontier;
    all.push_back({id, {}});
    frontier.push_back(0);
    for (int len = 1; len <= limit && !frontier.empty(); ++len) {
        std::vector<std::size_t> next;
        for (auto fi : frontier)
            for (std::uint32_t m = 0; m < masks; ++m) {
                Effect e;
                e.used = all[fi].first.used | m;
                e.end.resize(states);
                e.visited.resize(states);
                for (std::uint32_t s = 0; s < states; ++s) {
                    const auto t = phi.step(all[fi].first.end[s], m);
                    e.end[s] = t;
                    e.visited[s] = all[fi].first.visited[s] | (Bits{1} << t);
                }
                if (index.count(e))
                    continue;
                auto cyc = all[fi].second;
                cyc.push_back(m);
                index.emplace(e, all.size());
                next.push_back(all.size());
                all.push_back({std::move(e), std::move(cyc)});
            }
        frontier = std::move(next);
    }
    std::vector<std::pair<Effect, std::vector<std::uint32_t>>> out;
    for (auto& p : all)
        if (p.first.used == full)
            out.push_back(std::move(p));
    return out;
}

/// Shortest closed walk from min(S) that stays in S, takes every value of S
/// and sets every coordinate in some mask; empty if none within `limit`.
inline std::vector<std::uint32_t> covering_walk(const GeneratorFunction& phi, Bits s, int limit)
{
    const int n = phi.dimension();
    const std::uint32_t masks = std::uint32_t{1} << n;
    std::vector<std::uint32_t> members;
    std::vector<int> pos(phi.state_count(), -1);
    for (std::uint32_t c = 0; c < phi.state_count(); ++c)
        if ((s >> c) & 1u) {
            pos[c] = static_cast<int>(members.size());
            members.push_back(c);
        }
    const std::size_t k = members.size();
    // every member must reach every other without leaving S
    for (auto from : members) {
        Bits seen = Bits{1} << from;
        std::vector<std::uint32_t> work{from};
        while (!work.empty()) {
            const auto x = work.back();
            work.pop_back();
            for (std::uint32_t m = 1; m < masks; ++m) {
                const auto t = phi.step(x, m);
                if (pos[t] >= 0 && !((seen >> t) & 1u)) {
                    seen |= Bits{1} << t;
                    work.push_back(t);
                }
            }
        }
        if (seen != s)
            return {};
    }
    // node = (position, visited-subset of S, covered coordinates)
    const std::size_t vis_count = std::size_t{1} << k;
    auto node = [&](std::size_t p, std::size_t vis, std::uint32_t cov) {
        return (p * vis_count + vis) * masks + cov;
    };
    const std::size_t total = k * vis_count * masks;
    std::vector<std::int32_t> parent(total, -1);
    std::vector<std::uint32_t> via(total, 0);
    const std::size_t start = node(0, 1, 0);
    const std::size_t goal = node(0, vis_count - 1, masks - 1);
    parent[start] = static_cast<std::int32_t>(start);
    std::vector<std::size_t> layer{start};
    for (int len = 1; len <= limit && !layer.empty(); ++len) {
        std::vector<std::size_t> next;
        for (auto v : layer) {
            const std::size_t cov = v % masks;
            const std::size_t vis = (v / masks) % vis_count;
            const std::size_t p = v / masks / vis_count;
            for (std::uint32_t m = 0; m < masks; ++m) {
                const auto t = phi.step(members[p], m);
                if (pos[t] < 0)
                    continue;
                const auto tp = static_cast<std::size_t>(pos[t]);
                const auto w = node(tp, vis | (std::size_t{1} << tp), static_cast<std::uint32_t>(cov) | m);
                if (w == start || parent[w] >= 0)
                    continue;
                parent[w] = static_cast<std::int32_t>(v);
                via[w] = m;
                if (w == goal) {
                    std::vector<std::uint32_t> walk;
                    for (auto x = w; x != start; x = static_cast<std::size_t>(parent[x]))
                        walk.push_back(via[x]);
                    std::reverse(walk.begin(), walk.end());
                    return walk;
                }
                next.push_back(w);
            }
        }
        layer = std::move(next);
    }
    return {};
}

/// Value reached by each prefix of a walk from `from`.
inline std::vector<std::uint32_t> walk_values(const GeneratorFunction& phi, std::uint32_t from,
                                              const std::vector<std::uint32_t>& walk)
{
    std::vector<std::uint32_t> v{from};
    for (auto m : walk)
        v.push_back(phi.step(v.back(), m));
    return v;
}


/// Every state reachable from `from` by any number of masked updates
/// without leaving `inside`.
inline Bits reach_any(const GeneratorFunction& phi, Bits from, Bits inside)
{
    const std::uint32_t masks = std::uint32_t{1} << phi.dimension();
    Bits seen = from & inside, layer = seen;
    while (layer) {
        Bits next = 0;
        for (std::uint32_t s = 0; s < phi.state_count(); ++s)
            if ((layer >> s) & 1u)
                for (std::uint32_t m = 0; m < masks; ++m)
                    next |= Bits{1} << phi.step(s, m);
        layer = next & inside & ~seen;
        seen |= layer;
    }
    return seen;
}

enum class Goal { OmegaInside, OmegaOutside, Confined };

struct Search {
    bool found = false;
    /// The search ran dry before the length limit: the answer holds for
    /// every cycle length.
    bool saturated = false;
    int length = 0;
    std::size_t effects = 0;
};

/// Is there a progressive cycle of length <= max_cycle which, repeated from
/// some state in `starts`, meets the goal for A?
///
/// BFS over reduced effects: per tracked state the end state of one pass and
/// whether every value of the pass was in A, plus the union of masks used.
/// The reduced effect of c + [m] depends only on that of c and on m, so each
/// distinct one is expanded once. (Dropping dominated effects was tried and
/// removed almost nothing at n = 3.)
inline Search search_cycles(const GeneratorFunction& phi, Bits a, Bits starts, int max_cycle, Goal goal)
{
    const std::uint32_t full = StateVector::full_mask(phi.dimension());
    // only states reachable from the starts can ever be visited
    const Bits relevant = reach_any(phi, starts, ~Bits{0});
    std::vector<std::uint32_t> tracked;
    std::vector<int> slot(phi.state_count(), -1);
    for (std::uint32_t s = 0; s < phi.state_count(); ++s)
        if ((relevant >> s) & 1u) {
            slot[s] = static_cast<int>(tracked.size());
            tracked.push_back(s);
        }
    const std::size_t k = tracked.size();
    const std::size_t bytes = (k + 1) / 2;
    const std::uint64_t ends_mask = k == 16 ? ~std::uint64_t{0} : (std::uint64_t{1} << (4 * k)) - 1;

    // per mask, two packed states at a time: their successors and whether
    // those are in A
    std::vector<std::uint8_t> next_byte((full + 1) * 256), in_a((full + 1) * 256);
    for (std::uint32_t m = 1; m <= full; ++m)
        for (std::uint32_t b = 0; b < 256; ++b) {
            const std::uint32_t lo = (b & 15u) < phi.state_count() ? phi.step(b & 15u, m) : 0;
            const std::uint32_t hi = (b >> 4) < phi.state_count() ? phi.step(b >> 4, m) : 0;
            next_byte[m * 256 + b] = static_cast<std::uint8_t>(lo | hi << 4);
            in_a[m * 256 + b] = static_cast<std::uint8_t>(((a >> lo) & 1u) | ((a >> hi) & 1u) << 1);
        }

    struct Effect {
        std::uint64_t ends; // 4 bits per tracked state
        std::uint32_t flags; // used << 16 | inside; inside bit i: pass from tracked[i] stayed in A
        [[nodiscard]] std::uint32_t used() const { return flags >> 16; }
        [[nodiscard]] std::uint32_t inside() const { return flags & 0xffffu; }
    };
    auto end_of = [](const Effect& e, std::size_t i) { return static_cast<std::uint32_t>(e.ends >> (4 * i)) & 15u; };

    // open addressing; flags == ~0 marks an empty slot
    std::vector<Effect> table(1u << 12, Effect{0, ~std::uint32_t{0}});
    std::size_t stored = 0;
    auto slot_of = [](const std::vector<Effect>& t, const Effect& e) {
        std::uint64_t h = e.ends ^ (std::uint64_t{e.flags} * 0x9e3779b97f4a7c15ull);
        h ^= h >> 31;
        h *= 0xbf58476d1ce4e5b9ull;
        h ^= h >> 29;
        std::size_t i = h & (t.size() - 1);
        while (t[i].flags != ~std::uint32_t{0} && (t[i].ends != e.ends || t[i].flags != e.flags))
            i = (i + 1) & (t.size() - 1);
        return i;
    };
    auto insert = [&](const Effect& e) {
        auto i = slot_of(table, e);
        if (table[i].flags != ~std::uint32_t{0})
            return false;
        table[i] = e;
        if (++stored * 2 > table.size()) {
            std::vector<Effect> bigger(table.size() * 2, Effect{0, ~std::uint32_t{0}});
            for (const auto& x : table)
                if (x.flags != ~std::uint32_t{0})
                    bigger[slot_of(bigger, x)] = x;
            table.swap(bigger);
        }
        return true;
    };

    Effect id{0, static_cast<std::uint32_t>((std::uint64_t{1} << k) - 1)};
    for (std::size_t i = 0; i < k; ++i)
        id.ends |= static_cast<std::uint64_t>(tracked[i]) << (4 * i);
    insert(id);
    std::vector<Effect> frontier{id};
    std::vector<int> at(k);
    std::vector<std::size_t> seq;
    Search out;
    out.effects = 1;

    auto meets = [&](const Effect& e) {
        for (std::size_t i0 = 0; i0 < k; ++i0) {
            if (!((starts >> tracked[i0]) & 1u))
                continue;
            std::fill(at.begin(), at.end(), -1);
            seq.clear();
            std::size_t x = i0;
            while (at[x] < 0) {
                at[x] = static_cast<int>(seq.size());
                seq.push_back(x);
                x = static_cast<std::size_t>(slot[end_of(e, x)]);
            }
            bool periodic = true, transient = true;
            for (std::size_t j = 0; j < seq.size(); ++j) {
                const bool ok = (e.inside() >> seq[j]) & 1u;
                (j < static_cast<std::size_t>(at[x]) ? transient : periodic) &= ok;
            }
            const bool hit = goal == Goal::OmegaInside    ? periodic
                             : goal == Goal::OmegaOutside ? !periodic
                                                          : periodic && transient && ((a >> tracked[i0]) & 1u);
            if (hit)
                return true;
        }
        return false;
    };

    for (int len = 1; len <= max_cycle && !frontier.empty(); ++len) {
        std::vector<Effect> next;
        for (const auto& f : frontier)
            for (std::uint32_t m = 1; m <= full; ++m) {
                const std::uint8_t* nb = &next_byte[m * 256];
                const std::uint8_t* ia = &in_a[m * 256];
                std::uint64_t ends = 0;
                std::uint32_t ins = 0;
                for (std::size_t b = 0; b < bytes; ++b) {
                    const auto byte = static_cast<std::uint8_t>(f.ends >> (8 * b));
                    ends |= std::uint64_t{nb[byte]} << (8 * b);
                    ins |= std::uint32_t{ia[byte]} << (2 * b);
                }
                const Effect e{ends & ends_mask, (f.used() | m) << 16 | (f.inside() & ins)};
                if (!insert(e))
                    continue;
                ++out.effects;
                if (e.used() == full && meets(e)) {
                    out.found = true;
                    out.length = len;
                    return out;
                }
                next.push_back(e);
            }
        frontier = std::move(next);
        out.length = len;
    }
    out.saturated = frontier.empty();
    return out;
}

} // namespace oracle_detail

/// A set the oracle realized as an omega-set, with the lasso that shows it:
/// started at `start`, the schedule's omega-set is `states` and its whole
/// orbit stays in `states`.
struct OracleSustainableSet {
    StateSet states;
    std::uint32_t start;
    TimedSchedule schedule;
};

/// Every nonempty S that is the omega-set of a lasso started inside S whose
/// orbit never leaves S, with cycle length within budget. Each result is
/// confirmed by simulating the constructed lasso.
inline std::vector<OracleSustainableSet> oracle_sustainable_sets(const GeneratorFunction& phi,
                                                                 const OracleBudget& budget = {})
{
    using namespace oracle_detail;
    check_budget(phi, budget);
    const int n = phi.dimension();
    const int limit = budget.cycle_limit(n);
    std::vector<OracleSustainableSet> out;
    const Bits universe = static_cast<Bits>((std::uint64_t{1} << phi.state_count()) - 1);
    for (Bits s = 1; s <= universe && s != 0; ++s) {
        const auto walk = covering_walk(phi, s, limit);
        if (walk.empty())
            continue;
        const auto start = static_cast<std::uint32_t>(std::countr_zero(s));
        auto rho = TimedSchedule::unit_times(LassoSchedule{{}, masks_of(n, walk)});
        const auto traj = flow(phi, StateVector(n, start), rho);
        const auto set = to_set(n, s);
        if (!(omega_set(traj).states == set) || !orbit_set(traj).is_subset_of(set))
            throw std::logic_error("oracle: covering walk does not realize " + set.str());
        out.push_back({set, start, std::move(rho)});
        if (s == universe)
            break;
    }
    return out;
}

/// Everything the oracle needs about one Phi: reusable across queries.
///
/// Questions about one start state are answered in three steps. Short
/// cycles (enumerated exhaustively) and budgeted covering walks give quick
/// yes answers. A quick no comes from a necessary condition: an omega-set is
/// always a set with a closed covering walk, of any length, and it must be
/// reachable. Whatever is left goes to the exact search over all budgeted
/// cycles (oracle_detail::search_cycles).
class OracleModel {
public:
    explicit OracleModel(GeneratorFunction phi, OracleBudget budget = {})
        : phi_(std::move(phi)), budget_(budget)
    {
        using namespace oracle_detail;
        check_budget(phi_, budget_);
        const int n = phi_.dimension();
        sustainable_ = oracle_sustainable_sets(phi_, budget_);
        for (const auto& s : sustainable_)
            sustainable_bits_.push_back(to_bits(s.states));
        const Bits universe = all_states();
        // the BFS in covering_walk is finite, so this limit only means "any"
        const int any_length = static_cast<int>(phi_.state_count() << (phi_.state_count() + n));
        for (Bits s = 1; s != 0 && s <= universe; ++s) {
            if (!covering_walk(phi_, s, any_length).empty())
                closed_bits_.push_back(s);
            if (s == universe)
                break;
        }

        // per post-prefix start state: distinct (omega, orbit) over short cycles
        runs_.resize(phi_.state_count());
        const auto effects = progressive_effects(phi_, budget_.exhaustive_limit(n));
        for (std::uint32_t s = 0; s < phi_.state_count(); ++s) {
            std::map<std::pair<Bits, Bits>, const std::vector<std::uint32_t>*> distinct;
            for (const auto& [e, cyc] : effects) {
                const auto r = run_passes(e, s);
                distinct.try_emplace({r.omega, r.orbit}, &cyc);
            }
            for (const auto& [key, cyc] : distinct) {
                // confirm against the flow simulator
                const auto traj = flow(phi_, StateVector(n, s),
                                       TimedSchedule::unit_times(LassoSchedule{{}, masks_of(n, *cyc)}));
                if (to_bits(omega_set(traj).states) != key.first || to_bits(orbit_set(traj)) != key.second)
                    throw std::logic_error("oracle: cycle effect disagrees with simulation");
                runs_[s].push_back({key.first, key.second});
            }
        }
    }

    [[nodiscard]] const GeneratorFunction& phi() const noexcept { return phi_; }
    [[nodiscard]] const OracleBudget& budget() const noexcept { return budget_; }
    [[nodiscard]] const std::vector<OracleSustainableSet>& sustainable_sets() const noexcept { return sustainable_; }

    /// Omega-sets of the short-cycle lassos and of the budgeted covering
    /// walks that start within the prefix reach of mu. Complete for n <= 2,
    /// where every cycle in the budget is enumerated; a lower bound beyond.
    [[nodiscard]] std::vector<oracle_detail::Bits> omega_bits(std::uint32_t mu) const
    {
        using namespace oracle_detail;
        const Bits reach = prefix_reach(phi_, mu, budget_.max_prefix, all_states());
        std::vector<Bits> out;
        for (std::uint32_t s = 0; s < phi_.state_count(); ++s)
            if ((reach >> s) & 1u)
                for (const auto& r : runs_[s])
                    out.push_back(r.omega);
        // a covering walk rotated to any of its values is again a covering walk
        for (auto sb : sustainable_bits_)
            if (sb & reach)
                out.push_back(sb);
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    }

    /// Whether some budgeted lasso from mu meets the goal for A: omega-set
    /// inside A, omega-set not inside A, or whole orbit inside A.
    [[nodiscard]] bool admits(std::uint32_t mu, oracle_detail::Bits a, oracle_detail::Goal goal) const
    {
        using namespace oracle_detail;
        const bool confined = goal == Goal::Confined;
        const Bits inside = confined ? a : all_states();
        const Bits reach = prefix_reach(phi_, mu, budget_.max_prefix, inside);
        if (!reach)
            return false;
        auto fits = [&](Bits omega) { return goal == Goal::OmegaOutside ? (omega & ~a) != 0 : (omega & ~a) == 0; };

        for (std::uint32_t s = 0; s < phi_.state_count(); ++s)
            if ((reach >> s) & 1u)
                for (const auto& r : runs_[s])
                    if (confined ? (r.orbit & ~a) == 0 : fits(r.omega))
                        return true;
        for (auto sb : sustainable_bits_)
            if ((sb & reach) && fits(sb))
                return true;

        const Bits later = reach_any(phi_, reach, inside);
        if (std::none_of(closed_bits_.begin(), closed_bits_.end(),
                         [&](Bits sb) { return (sb & later) && fits(sb); }))
            return false;
        const auto r = search_cycles(phi_, a, reach, budget_.cycle_limit(phi_.dimension()), goal);
        ++stats_.exact_searches;
        if (!r.found)
            stats_.saturated_no += r.saturated;
        return r.found;
    }

    struct Stats {
        std::size_t exact_searches = 0;
        /// Exact "no" answers whose search ran dry, so they hold for every
        /// cycle length and not just the budget.
        std::size_t saturated_no = 0;
    };
    [[nodiscard]] const Stats& stats() const noexcept { return stats_; }

private:
    struct ShortRun {
        oracle_detail::Bits omega;
        oracle_detail::Bits orbit;
    };

    [[nodiscard]] oracle_detail::Bits all_states() const
    {
        return static_cast<oracle_detail::Bits>((std::uint64_t{1} << phi_.state_count()) - 1);
    }

    GeneratorFunction phi_;
    OracleBudget budget_;
    std::vector<OracleSustainableSet> sustainable_;
    std::vector<oracle_detail::Bits> sustainable_bits_;
    std::vector<oracle_detail::Bits> closed_bits_;
    std::vector<std::vector<ShortRun>> runs_;
    mutable Stats stats_;
};

inline std::vector<StateSet> oracle_omega_sets(const OracleModel& model, const StateVector& mu)
{
    require_same_dimension(model.phi().dimension(), mu.size(), "oracle_omega_sets");
    std::vector<StateSet> out;
    for (auto b : model.omega_bits(mu.bits()))
        out.push_back(oracle_detail::to_set(mu.size(), b));
    return out;
}

inline std::vector<StateSet> oracle_omega_sets(const GeneratorFunction& phi, const StateVector& mu,
                                               const OracleBudget& budget = {})
{
    return oracle_omega_sets(OracleModel(phi, budget), mu);
}

struct OracleBasins {
    StateSet p_basin;
    StateSet n_basin;
};

/// Per state: some / every budgeted lasso has its omega-set in A.
inline OracleBasins oracle_basins(const OracleModel& model, const StateSet& a)
{
    using oracle_detail::Goal;
    const int n = model.phi().dimension();
    require_same_dimension(n, a.dimension(), "oracle_basins");
    const auto ab = oracle_detail::to_bits(a);
    OracleBasins out{StateSet(n), StateSet(n)};
    for (std::uint32_t mu = 0; mu < model.phi().state_count(); ++mu) {
        if (model.admits(mu, ab, Goal::OmegaInside))
            out.p_basin.insert(mu);
        if (!model.admits(mu, ab, Goal::OmegaOutside))
            out.n_basin.insert(mu);
    }
    return out;
}

inline OracleBasins oracle_basins(const GeneratorFunction& phi, const StateSet& a, const OracleBudget& budget = {})
{
    return oracle_basins(OracleModel(phi, budget), a);
}

/// Every member of A has a budgeted lasso whose orbit stays in A.
inline bool oracle_p_invariant(const OracleModel& model, const StateSet& a)
{
    require_same_dimension(model.phi().dimension(), a.dimension(), "oracle_p_invariant");
    if (a.empty())
        throw SetError("oracle_p_invariant: the state set must be nonempty");
    const auto ab = oracle_detail::to_bits(a);
    const auto codes = a.codes();
    return std::all_of(codes.begin(), codes.end(),
                       [&](auto mu) { return model.admits(mu, ab, oracle_detail::Goal::Confined); });
}

/// Every single masked update from A stays in A, tried over all 2^n masks.
inline bool oracle_n_invariant(const GeneratorFunction& phi, const StateSet& a)
{
    for (auto mu : a.codes())
        for (std::uint32_t m = 0; m < phi.state_count(); ++m)
            if (!a.contains(phi.step(mu, m)))
                return false;
    return true;
}

/// Union of the oracle's realizable omega-sets that fit inside B.
inline StateSet oracle_recurrent_within(const OracleModel& model, const StateSet& b)
{
    StateSet out(model.phi().dimension());
    for (const auto& s : model.sustainable_sets())
        if (s.states.is_subset_of(b))
            out |= s.states;
    return out;
}

} // namespace asyncdyn

#endif // ASYNCDYN_ORACLE_HPP
