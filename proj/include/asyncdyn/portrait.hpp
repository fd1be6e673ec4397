#ifndef ASYNCDYN_PORTRAIT_HPP
#define ASYNCDYN_PORTRAIT_HPP

#include "core.hpp"

#include <algorithm>
#include <deque>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace asyncdyn {

/// One move of the state portrait: `effective` is the nonempty set of
/// unstable coordinates that switch, so target = source ^ effective.
struct Edge {
    std::uint32_t source;
    std::uint32_t target;
    std::uint32_t effective;

    friend bool operator==(const Edge&, const Edge&) = default;
};

/// The asynchronous transition multigraph of Phi.
///
/// Successors are not materialized: from mu, every nonempty e subset of U(mu)
/// is an edge to mu ^ e. Only the unstable words are tabulated.
class TransitionGraph {
public:
    TransitionGraph() = default;

    explicit TransitionGraph(GeneratorFunction phi, bool parallel = false) : phi_(std::move(phi))
    {
        const std::size_t states = phi_.state_count();
        unstable_.resize(states);
        auto fill = [this](std::size_t lo, std::size_t hi) {
            for (std::size_t c = lo; c < hi; ++c)
                unstable_[c] = phi_.unstable_bits(static_cast<std::uint32_t>(c));
        };
        const unsigned workers = parallel ? std::max(1u, std::thread::hardware_concurrency()) : 1u;
        if (workers == 1 || states < 4096) {
            fill(0, states);
            return;
        }
        std::vector<std::jthread> pool;
        const std::size_t chunk = (states + workers - 1) / workers;
        for (std::size_t lo = 0; lo < states; lo += chunk)
            pool.emplace_back(fill, lo, std::min(states, lo + chunk));
    }

    [[nodiscard]] int dimension() const noexcept { return phi_.dimension(); }
    [[nodiscard]] std::size_t state_count() const noexcept { return phi_.state_count(); }
    [[nodiscard]] const GeneratorFunction& phi() const noexcept { return phi_; }
    [[nodiscard]] std::uint32_t unstable(std::uint32_t code) const noexcept { return unstable_[code]; }
    [[nodiscard]] std::uint32_t full_mask() const noexcept { return StateVector::full_mask(dimension()); }

    /// Calls f(effective, target) for every nonempty effective mask, in
    /// decreasing order of the mask.
    template <class F>
    void for_each_successor(std::uint32_t code, F&& f) const
    {
        const std::uint32_t u = unstable_[code];
        for (std::uint32_t e = u; e != 0; e = (e - 1) & u)
            f(e, code ^ e);
    }

    [[nodiscard]] std::size_t out_degree(std::uint32_t code) const noexcept
    {
        return (std::size_t{1} << std::popcount(unstable_[code])) - 1;
    }

    /// Outgoing edges of one state, by increasing target encoding.
    [[nodiscard]] std::vector<Edge> edges(std::uint32_t code) const
    {
        std::vector<Edge> out;
        for_each_successor(code, [&](std::uint32_t e, std::uint32_t t) { out.push_back({code, t, e}); });
        std::sort(out.begin(), out.end(), [](const Edge& a, const Edge& b) { return a.target < b.target; });
        return out;
    }
    [[nodiscard]] std::vector<Edge> edges(const StateVector& mu) const
    {
        require_same_dimension(dimension(), mu.size(), "edges");
        return edges(mu.bits());
    }

    [[nodiscard]] std::size_t edge_count() const noexcept
    {
        std::size_t total = 0;
        for (std::size_t c = 0; c < unstable_.size(); ++c)
            total += out_degree(static_cast<std::uint32_t>(c));
        return total;
    }

private:
    GeneratorFunction phi_;
    std::vector<std::uint32_t> unstable_;
};

inline TransitionGraph build_graph(const GeneratorFunction& phi, bool parallel = false)
{
    return TransitionGraph(phi, parallel);
}

//=============================================================================
// Strongly connected components of the graph restricted to a state set B.

struct SccDecomposition {
    /// Members of each component in increasing order; components ordered by
    /// their smallest member.
    std::vector<std::vector<std::uint32_t>> components;
    /// component_of[code], or -1 for states outside B.
    std::vector<std::int32_t> component_of;
    /// Component ids, successors before predecessors (sinks first).
    std::vector<std::int32_t> reverse_topological;
};

inline void require_nonempty(const StateSet& s, const char* what)
{
    if (s.empty())
        throw SetError(std::string(what) + ": the state set must be nonempty");
}

inline SccDecomposition sccs_within(const TransitionGraph& g, const StateSet& within)
{
    require_same_dimension(g.dimension(), within.dimension(), "sccs_within");
    require_nonempty(within, "sccs_within");

    const std::size_t states = g.state_count();
    constexpr std::int32_t unvisited = -1;
    std::vector<std::int32_t> index(states, unvisited);
    std::vector<std::int32_t> low(states, 0);
    std::vector<bool> on_stack(states, false);
    std::vector<std::uint32_t> stack;
    std::vector<std::vector<std::uint32_t>> emitted;
    std::int32_t counter = 0;

    struct Frame {
        std::uint32_t v;
        std::uint32_t next; // next subset of U(v) to try; 0 when done
    };
    std::vector<Frame> call;

    for (auto root : within.codes()) {
        if (index[root] != unvisited)
            continue;
        auto open = [&](std::uint32_t v) {
            index[v] = low[v] = counter++;
            stack.push_back(v);
            on_stack[v] = true;
            call.push_back({v, g.unstable(v)});
        };
        open(root);
        while (!call.empty()) {
            auto& fr = call.back();
            const std::uint32_t v = fr.v;
            const std::uint32_t u = g.unstable(v);
            bool descended = false;
            while (fr.next != 0) {
                const std::uint32_t w = v ^ fr.next;
                fr.next = (fr.next - 1) & u;
                if (!within.contains(w))
                    continue;
                if (index[w] == unvisited) {
                    open(w); // invalidates fr
                    descended = true;
                    break;
                }
                if (on_stack[w])
                    low[v] = std::min(low[v], index[w]);
            }
            if (descended)
                continue;
            if (low[v] == index[v]) {
                std::vector<std::uint32_t> comp;
                std::uint32_t w;
                do {
                    w = stack.back();
                    stack.pop_back();
                    on_stack[w] = false;
                    comp.push_back(w);
                } while (w != v);
                std::sort(comp.begin(), comp.end());
                emitted.push_back(std::move(comp));
            }
            call.pop_back();
            if (!call.empty())
                low[call.back().v] = std::min(low[call.back().v], low[v]);
        }
    }

    // renumber by smallest member
    std::vector<std::size_t> order(emitted.size());
    for (std::size_t i = 0; i < order.size(); ++i)
        order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return emitted[a].front() < emitted[b].front(); });
    std::vector<std::int32_t> rank(emitted.size());
    for (std::size_t r = 0; r < order.size(); ++r)
        rank[order[r]] = static_cast<std::int32_t>(r);

    SccDecomposition out;
    out.component_of.assign(states, -1);
    out.components.resize(emitted.size());
    out.reverse_topological.reserve(emitted.size());
    for (std::size_t i = 0; i < emitted.size(); ++i) {
        const auto id = rank[i];
        for (auto c : emitted[i])
            out.component_of[c] = id;
        out.components[static_cast<std::size_t>(id)] = std::move(emitted[i]);
        out.reverse_topological.push_back(id);
    }
    return out;
}

//=============================================================================
// Fair recurrence: which components can host a progressive run forever.

/// Why a coordinate can be fired infinitely often inside a component.
struct CoverageWitness {
    enum class Kind { Stable, Flip };
    Kind kind;
    std::uint32_t state;
    /// Stable: the stable coordinates of `state` (firing them is a no-op).
    /// Flip: the effective mask of an edge to `state ^ mask` inside the component.
    std::uint32_t mask;

    friend bool operator==(const CoverageWitness&, const CoverageWitness&) = default;
};

struct FairRecurrence {
    SccDecomposition sccs;
    std::vector<bool> sustainable;
    /// Per component and coordinate (index i-1); empty optional when the
    /// coordinate has no witness, which happens only for non-sustainable ones.
    std::vector<std::vector<std::optional<CoverageWitness>>> witnesses;
    StateSet recurrent;
};

namespace detail {

inline std::vector<std::optional<CoverageWitness>>
coverage(const TransitionGraph& g, const std::vector<std::uint32_t>& comp, const std::vector<std::int32_t>& component_of,
         std::int32_t id)
{
    const int n = g.dimension();
    const std::uint32_t full = g.full_mask();
    std::vector<std::optional<CoverageWitness>> wit(static_cast<std::size_t>(n));
    std::uint32_t covered = 0;
    auto note = [&](CoverageWitness w) {
        std::uint32_t fresh = w.mask & ~covered;
        covered |= w.mask;
        while (fresh) {
            const int bit = std::countr_zero(fresh);
            fresh &= fresh - 1;
            wit[static_cast<std::size_t>(n - 1 - bit)] = w;
        }
    };
    for (auto mu : comp) {
        if (const std::uint32_t stable = ~g.unstable(mu) & full; stable & ~covered)
            note({CoverageWitness::Kind::Stable, mu, stable});
        if (covered == full)
            break;
        g.for_each_successor(mu, [&](std::uint32_t e, std::uint32_t t) {
            if ((e & ~covered) && component_of[t] == id)
                note({CoverageWitness::Kind::Flip, mu, e});
        });
        if (covered == full)
            break;
    }
    return wit;
}

} // namespace detail

inline FairRecurrence fair_recurrent_within(const TransitionGraph& g, const StateSet& within)
{
    FairRecurrence out{sccs_within(g, within), {}, {}, StateSet(g.dimension())};
    const auto& comps = out.sccs.components;
    out.sustainable.resize(comps.size());
    out.witnesses.resize(comps.size());
    for (std::size_t id = 0; id < comps.size(); ++id) {
        out.witnesses[id] =
            detail::coverage(g, comps[id], out.sccs.component_of, static_cast<std::int32_t>(id));
        const bool ok = std::all_of(out.witnesses[id].begin(), out.witnesses[id].end(),
                                    [](const auto& w) { return w.has_value(); });
        out.sustainable[id] = ok;
        if (ok)
            for (auto c : comps[id])
                out.recurrent.insert(c);
    }
    return out;
}

/// Whether S is strongly connected under within-S edges and every coordinate
/// is stable somewhere in S or flipped by a within-S edge.
inline bool is_sustainable_set(const TransitionGraph& g, const StateSet& s)
{
    if (s.empty())
        return false;
    const auto fr = fair_recurrent_within(g, s);
    return fr.sccs.components.size() == 1 && fr.sustainable[0];
}

//=============================================================================
// Reachability.

/// Forward closure of `from` under edges whose both ends lie in `within`.
inline StateSet reachable_within(const TransitionGraph& g, const StateSet& from, const StateSet& within)
{
    require_same_dimension(g.dimension(), from.dimension(), "reachable_within");
    require_same_dimension(g.dimension(), within.dimension(), "reachable_within");
    StateSet seen(g.dimension());
    std::vector<std::uint32_t> work;
    for (auto c : from.codes())
        if (within.contains(c)) {
            seen.insert(c);
            work.push_back(c);
        }
    while (!work.empty()) {
        const auto v = work.back();
        work.pop_back();
        g.for_each_successor(v, [&](std::uint32_t, std::uint32_t t) {
            if (within.contains(t) && !seen.contains(t)) {
                seen.insert(t);
                work.push_back(t);
            }
        });
    }
    return seen;
}

inline StateSet reachable_from(const TransitionGraph& g, const StateVector& mu)
{
    require_same_dimension(g.dimension(), mu.size(), "reachable_from");
    StateSet start(g.dimension());
    start.insert(mu);
    return reachable_within(g, start, StateSet::full(g.dimension()));
}

/// States of `within` that reach `target` along within-edges. Uses the
/// component order: a whole component is in iff some member hits the target
/// or has an edge into an already-accepted component.
inline StateSet backward_closure(const TransitionGraph& g, const StateSet& target, const SccDecomposition& sccs)
{
    StateSet in(g.dimension());
    for (auto id : sccs.reverse_topological) {
        const auto& comp = sccs.components[static_cast<std::size_t>(id)];
        bool hit = false;
        for (auto mu : comp) {
            if (target.contains(mu)) {
                hit = true;
                break;
            }
            g.for_each_successor(mu, [&](std::uint32_t, std::uint32_t t) {
                if (!hit && in.contains(t))
                    hit = true;
            });
            if (hit)
                break;
        }
        if (hit)
            for (auto mu : comp)
                in.insert(mu);
    }
    return in;
}

inline StateSet backward_closure(const TransitionGraph& g, const StateSet& target)
{
    return backward_closure(g, target, sccs_within(g, StateSet::full(g.dimension())));
}

/// Shortest within-set path from `from` to any state of `to`, as effective
/// masks; nullopt when unreachable. An empty path means from is in `to`.
inline std::optional<std::vector<std::uint32_t>> shortest_path(const TransitionGraph& g, std::uint32_t from,
                                                               const StateSet& to, const StateSet& within)
{
    if (to.contains(from))
        return std::vector<std::uint32_t>{};
    const std::size_t states = g.state_count();
    std::vector<std::uint32_t> parent_mask(states, 0);
    std::vector<bool> seen(states, false);
    std::deque<std::uint32_t> queue{from};
    seen[from] = true;
    while (!queue.empty()) {
        const auto v = queue.front();
        queue.pop_front();
        std::optional<std::uint32_t> found;
        g.for_each_successor(v, [&](std::uint32_t e, std::uint32_t t) {
            if (found || seen[t] || !within.contains(t))
                return;
            seen[t] = true;
            parent_mask[t] = e;
            if (to.contains(t))
                found = t;
            else
                queue.push_back(t);
        });
        if (found) {
            std::vector<std::uint32_t> path;
            for (auto c = *found; c != from; c ^= parent_mask[c])
                path.push_back(parent_mask[c]);
            std::reverse(path.begin(), path.end());
            return path;
        }
    }
    return std::nullopt;
}

//=============================================================================
// DOT export.

/// Nodes are bitstrings with unstable digits underlined; one arrow per edge,
/// labelled with its effective mask. Node and edge order follow the encoding.
inline std::string to_dot(const TransitionGraph& g)
{
    const int n = g.dimension();
    std::ostringstream os;
    os << "digraph portrait {\n";
    os << "  node [shape=plaintext, fontname=\"monospace\"];\n";
    for (std::uint32_t c = 0; c < g.state_count(); ++c) {
        const auto s = StateVector(n, c);
        const auto u = CoordinateSet(n, g.unstable(c));
        os << "  \"" << s.str() << "\" [label=<";
        for (int i = 1; i <= n; ++i) {
            const char d = s.test(i) ? '1' : '0';
            if (u.test(i))
                os << "<U>" << d << "</U>";
            else
                os << d;
        }
        os << ">];\n";
    }
    for (std::uint32_t c = 0; c < g.state_count(); ++c)
        for (const auto& e : g.edges(c))
            os << "  \"" << StateVector(n, c).str() << "\" -> \"" << StateVector(n, e.target).str()
               << "\" [label=\"" << UpdateMask(n, e.effective).str() << "\"];\n";
    os << "}\n";
    return os.str();
}

} // namespace asyncdyn

#endif // ASYNCDYN_PORTRAIT_HPP
