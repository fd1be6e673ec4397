#ifndef ASYNCDYN_SCHEDULE_HPP
#define ASYNCDYN_SCHEDULE_HPP

#include "state.hpp"

#include <boost/rational.hpp>

#include <algorithm>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace asyncdyn {

/// Firing times are exact rationals.
using Time = boost::rational<std::int64_t>;

//-----------------------------------------------------------------------------
// Time helpers

inline std::int64_t floor_div(std::int64_t a, std::int64_t b)
{
    std::int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0)))
        --q;
    return q;
}

inline std::int64_t floor_of(const Time& t) { return floor_div(t.numerator(), t.denominator()); }

/// Accepts "3", "-2", "7/4", "1.25", "-0.5".
inline Time parse_time(std::string_view text)
{
    auto fail = [&] { return ParseError("malformed time value '" + std::string(text) + "'"); };
    auto parse_int = [&](std::string_view s, bool allow_sign) -> std::int64_t {
        bool neg = false;
        if (allow_sign && !s.empty() && (s[0] == '-' || s[0] == '+')) {
            neg = s[0] == '-';
            s.remove_prefix(1);
        }
        if (s.empty() || s.size() > 17)
            throw fail();
        std::int64_t v = 0;
        for (char c : s) {
            if (c < '0' || c > '9')
                throw fail();
            v = v * 10 + (c - '0');
        }
        return neg ? -v : v;
    };
    if (text.empty())
        throw fail();
    if (auto slash = text.find('/'); slash != std::string_view::npos) {
        const auto num = parse_int(text.substr(0, slash), true);
        const auto den = parse_int(text.substr(slash + 1), false);
        if (den == 0)
            throw fail();
        return Time(num, den);
    }
    if (auto dot = text.find('.'); dot != std::string_view::npos) {
        std::string_view ip = text.substr(0, dot);
        std::string_view fp = text.substr(dot + 1);
        bool neg = !ip.empty() && ip[0] == '-';
        if (!ip.empty() && (ip[0] == '-' || ip[0] == '+'))
            ip.remove_prefix(1);
        if (fp.empty() || fp.size() > 12)
            throw fail();
        const std::int64_t whole = ip.empty() ? 0 : parse_int(ip, false);
        std::int64_t scale = 1;
        for (std::size_t i = 0; i < fp.size(); ++i)
            scale *= 10;
        const Time t = Time(whole) + Time(parse_int(fp, false), scale);
        return neg ? -t : t;
    }
    return Time(parse_int(text, true));
}

inline std::string format_time(const Time& t)
{
    if (t.denominator() == 1)
        return std::to_string(t.numerator());
    return std::to_string(t.numerator()) + "/" + std::to_string(t.denominator());
}

//-----------------------------------------------------------------------------
// LassoSchedule: prefix followed by a cycle repeated forever.

struct LassoSchedule {
    std::vector<UpdateMask> prefix;
    std::vector<UpdateMask> cycle;

    [[nodiscard]] int dimension() const
    {
        if (!cycle.empty())
            return cycle.front().size();
        if (!prefix.empty())
            return prefix.front().size();
        return 0;
    }

    /// Mask number k of the infinite sequence.
    [[nodiscard]] const UpdateMask& mask(std::int64_t k) const
    {
        const auto p = static_cast<std::int64_t>(prefix.size());
        if (k < p)
            return prefix[static_cast<std::size_t>(k)];
        return cycle[static_cast<std::size_t>((k - p) % static_cast<std::int64_t>(cycle.size()))];
    }

    friend bool operator==(const LassoSchedule&, const LassoSchedule&) = default;
};

/// Coordinates never set in the cycle, i.e. computed only finitely often.
inline std::vector<int> starving_coordinates(const LassoSchedule& s)
{
    if (s.cycle.empty())
        return {};
    std::uint32_t seen = 0;
    for (const auto& m : s.cycle)
        seen |= m.bits();
    return UpdateMask(s.dimension(), UpdateMask::full_mask(s.dimension()) & ~seen).members();
}

/// Accepts iff every coordinate is set in some cycle mask; returns s unchanged.
inline const LassoSchedule& validate_progressive(const LassoSchedule& s)
{
    if (s.cycle.empty())
        throw ScheduleError("schedule cycle is empty");
    const int n = s.dimension();
    for (const auto& m : s.prefix)
        require_same_dimension(n, m.size(), "schedule mask");
    for (const auto& m : s.cycle)
        require_same_dimension(n, m.size(), "schedule mask");
    const auto starving = starving_coordinates(s);
    if (!starving.empty()) {
        std::string msg = starving.size() == 1 ? "coordinate " : "coordinates ";
        for (std::size_t i = 0; i < starving.size(); ++i)
            msg += (i ? ", " : "") + std::to_string(starving[i]);
        msg += starving.size() == 1 ? " starves" : " starve";
        throw ScheduleError("schedule is not progressive: " + msg);
    }
    return s;
}

//-----------------------------------------------------------------------------
// TimedSchedule
//
// Firing k happens at t_k with mask alpha^k. The first P + L times are given
// explicitly (P = prefix length, L = cycle length); afterwards
// t_{k+L} = t_k + period.

class TimedSchedule {
public:
    TimedSchedule(LassoSchedule lasso, std::vector<Time> times, Time period)
        : lasso_(std::move(lasso)), times_(std::move(times)), period_(period)
    {
        validate_progressive(lasso_);
        if (times_.size() != lasso_.prefix.size() + lasso_.cycle.size())
            throw ScheduleError("expected " +
                                std::to_string(lasso_.prefix.size() + lasso_.cycle.size()) +
                                " firing times, got " + std::to_string(times_.size()));
        if (period_ <= 0)
            throw ScheduleError("period must be positive");
        for (std::size_t i = 1; i < times_.size(); ++i)
            if (!(times_[i - 1] < times_[i]))
                throw ScheduleError("firing times must be strictly increasing");
        if (!(times_.back() < times_[lasso_.prefix.size()] + period_))
            throw ScheduleError("period too short: the next cycle pass would not start after the "
                                "last listed firing");
    }

    /// t_k = k, period = cycle length.
    static TimedSchedule unit_times(LassoSchedule lasso)
    {
        validate_progressive(lasso);
        const std::size_t count = lasso.prefix.size() + lasso.cycle.size();
        std::vector<Time> times;
        times.reserve(count);
        for (std::size_t k = 0; k < count; ++k)
            times.emplace_back(static_cast<std::int64_t>(k));
        const Time period(static_cast<std::int64_t>(lasso.cycle.size()));
        return TimedSchedule(std::move(lasso), std::move(times), period);
    }

    [[nodiscard]] const LassoSchedule& lasso() const noexcept { return lasso_; }
    [[nodiscard]] const std::vector<Time>& listed_times() const noexcept { return times_; }
    [[nodiscard]] const Time& period() const noexcept { return period_; }
    [[nodiscard]] int dimension() const { return lasso_.dimension(); }
    [[nodiscard]] std::int64_t prefix_length() const
    {
        return static_cast<std::int64_t>(lasso_.prefix.size());
    }
    [[nodiscard]] std::int64_t cycle_length() const
    {
        return static_cast<std::int64_t>(lasso_.cycle.size());
    }

    [[nodiscard]] Time time(std::int64_t k) const
    {
        const auto p = prefix_length();
        const auto l = cycle_length();
        if (k < p + l)
            return times_[static_cast<std::size_t>(k)];
        const auto j = k - p;
        return times_[static_cast<std::size_t>(p + j % l)] + period_ * Time(j / l);
    }

    [[nodiscard]] std::pair<Time, UpdateMask> firing(std::int64_t k) const
    {
        if (k < 0)
            throw ScheduleError("firing index must be non-negative");
        return {time(k), lasso_.mask(k)};
    }

    /// Largest k with t_k <= t, or -1 when t < t_0.
    [[nodiscard]] std::int64_t last_index_at_or_before(const Time& t) const
    {
        const auto p = prefix_length();
        const auto l = cycle_length();
        if (t < times_.front())
            return -1;
        const auto first = times_.begin();
        const Time& cycle_start = times_[static_cast<std::size_t>(p)];
        if (t < cycle_start)
            return std::upper_bound(first, first + p, t) - first - 1;
        const std::int64_t pass = floor_of((t - cycle_start) / period_);
        const Time local = t - period_ * Time(pass);
        const std::int64_t pos = std::upper_bound(first + p, first + p + l, local) - (first + p) - 1;
        return p + pass * l + pos;
    }

    /// Smallest k with t_k > t.
    [[nodiscard]] std::int64_t first_index_after(const Time& t) const
    {
        return last_index_at_or_before(t) + 1;
    }

    friend bool operator==(const TimedSchedule&, const TimedSchedule&) = default;

private:
    LassoSchedule lasso_;
    std::vector<Time> times_;
    Time period_;
};

/// All firing times moved by tau; masks unchanged.
inline TimedSchedule shift(const TimedSchedule& s, const Time& tau)
{
    auto times = s.listed_times();
    for (auto& t : times)
        t += tau;
    return TimedSchedule(s.lasso(), std::move(times), s.period());
}

/// Drops every firing with t_k <= t_cut. Past the prefix the cycle is rotated
/// so that the result starts at the first kept firing.
inline TimedSchedule restrict_after(const TimedSchedule& s, const Time& t_cut)
{
    const auto k1 = s.first_index_after(t_cut);
    if (k1 == 0)
        return s;
    const auto p = s.prefix_length();
    const auto l = s.cycle_length();
    LassoSchedule lasso;
    std::vector<Time> times;
    if (k1 <= p) {
        lasso.prefix.assign(s.lasso().prefix.begin() + k1, s.lasso().prefix.end());
        lasso.cycle = s.lasso().cycle;
        times.assign(s.listed_times().begin() + k1, s.listed_times().end());
    } else {
        const auto r = (k1 - p) % l;
        for (std::int64_t i = 0; i < l; ++i) {
            lasso.cycle.push_back(s.lasso().cycle[static_cast<std::size_t>((r + i) % l)]);
            times.push_back(s.time(k1 + i));
        }
    }
    return TimedSchedule(std::move(lasso), std::move(times), s.period());
}

//-----------------------------------------------------------------------------
// Schedule literal: "p1,p2,...; c1,c2,...[@t0,t1,.../period]".
// The period is whatever follows the last '/', so listed times may be
// fractions but the period itself is an integer or a decimal.

namespace detail {

inline std::string_view trim(std::string_view s)
{
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r' || s.back() == '\n'))
        s.remove_suffix(1);
    return s;
}

inline std::vector<std::string_view> split(std::string_view s, char sep)
{
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    for (;;) {
        const auto pos = s.find(sep, start);
        parts.push_back(trim(s.substr(start, pos == std::string_view::npos ? pos : pos - start)));
        if (pos == std::string_view::npos)
            break;
        start = pos + 1;
    }
    return parts;
}

} // namespace detail

inline TimedSchedule parse_schedule(std::string_view text)
{
    std::string_view masks_part = text;
    std::string_view times_part;
    bool timed = false;
    if (auto at = text.find('@'); at != std::string_view::npos) {
        masks_part = text.substr(0, at);
        times_part = text.substr(at + 1);
        timed = true;
    }
    const auto semi = masks_part.find(';');
    if (semi == std::string_view::npos)
        throw ScheduleError("schedule literal needs 'prefix; cycle', got '" + std::string(text) + "'");
    auto parse_masks = [&](std::string_view part) {
        std::vector<UpdateMask> out;
        part = detail::trim(part);
        if (part.empty())
            return out;
        for (auto tok : detail::split(part, ',')) {
            try {
                out.push_back(UpdateMask::parse(tok));
            } catch (const ParseError& e) {
                throw ScheduleError(std::string("bad mask in schedule: ") + e.what());
            }
        }
        return out;
    };
    LassoSchedule lasso{parse_masks(masks_part.substr(0, semi)),
                        parse_masks(masks_part.substr(semi + 1))};
    if (lasso.cycle.empty())
        throw ScheduleError("schedule cycle is empty");
    const int n = lasso.dimension();
    for (const auto* list : {&lasso.prefix, &lasso.cycle})
        for (const auto& m : *list)
            if (m.size() != n)
                throw ScheduleError("schedule masks have different widths");
    if (!timed)
        return TimedSchedule::unit_times(std::move(lasso));

    const auto slash = times_part.rfind('/');
    if (slash == std::string_view::npos)
        throw ScheduleError("timed schedule needs '@t0,t1,.../period'");
    std::vector<Time> times;
    try {
        for (auto tok : detail::split(times_part.substr(0, slash), ','))
            times.push_back(parse_time(tok));
        const Time period = parse_time(detail::trim(times_part.substr(slash + 1)));
        return TimedSchedule(std::move(lasso), std::move(times), period);
    } catch (const ParseError& e) {
        throw ScheduleError(e.what());
    }
}

inline std::string format_schedule(const TimedSchedule& s)
{
    std::string out;
    auto masks = [&](const std::vector<UpdateMask>& ms) {
        for (std::size_t i = 0; i < ms.size(); ++i)
            out += (i ? "," : "") + ms[i].str();
    };
    masks(s.lasso().prefix);
    out += ";";
    masks(s.lasso().cycle);
    out += "@";
    for (std::size_t i = 0; i < s.listed_times().size(); ++i)
        out += (i ? "," : "") + format_time(s.listed_times()[i]);
    // The period must not contain '/', so write it as a decimal when possible.
    Time period = s.period();
    std::int64_t den = period.denominator();
    int digits = 0;
    while (den % 10 == 0 || den % 2 == 0 || den % 5 == 0) {
        if (den == 1)
            break;
        den = den % 10 == 0 ? den / 10 : den % 2 == 0 ? den / 2 : den / 5;
        ++digits;
    }
    if (den != 1 || period.denominator() == 1)
        return out + "/" + format_time(period);
    std::int64_t scale = 1;
    for (int i = 0; i < digits; ++i)
        scale *= 10;
    const auto scaled = period.numerator() * (scale / period.denominator());
    std::string frac = std::to_string(scaled % scale);
    frac.insert(0, static_cast<std::size_t>(digits) - frac.size(), '0');
    while (frac.size() > 1 && frac.back() == '0')
        frac.pop_back();
    return out + "/" + std::to_string(scaled / scale) + "." + frac;
}

} // namespace asyncdyn

#endif // ASYNCDYN_SCHEDULE_HPP
