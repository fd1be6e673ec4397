#ifndef ASYNCDYN_STATE_HPP
#define ASYNCDYN_STATE_HPP

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace asyncdyn {

//=============================================================================
// Errors. Every failure in the library is reported by one of these; the CLI
// maps the categories onto its exit codes.

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
public:
    using Error::Error;
};

/// Raised when a dimension exceeds the configured cap.
class CapacityError : public Error {
public:
    using Error::Error;
};

/// Malformed text input. Line and column are 1-based; 0 means "not known".
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line = 0, std::size_t column = 0)
        : Error(line ? std::to_string(line) + ":" + std::to_string(column) + ": " + what : what),
          line_(line), column_(column)
    {
    }

    [[nodiscard]] std::size_t line() const noexcept { return line_; }
    [[nodiscard]] std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

class ScheduleError : public Error {
public:
    using Error::Error;
};

/// Problems with a user-supplied state or set argument (empty, wrong width).
class SetError : public Error {
public:
    using Error::Error;
};

//=============================================================================
// Dimension limits.

inline constexpr int kDefaultMaxDimension = 20;
inline constexpr int kHardMaxDimension = 30;

/// Current dimension cap; ASYNCDYN_MAX_N overrides the default (clamped to the
/// hard limit of the 32-bit state encoding).
inline int max_dimension()
{
    if (const char* env = std::getenv("ASYNCDYN_MAX_N")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v >= 1)
            return static_cast<int>(std::min<long>(v, kHardMaxDimension));
    }
    return kDefaultMaxDimension;
}

inline void check_dimension(int n)
{
    if (n < 1)
        throw DimensionError("dimension must be positive, got " + std::to_string(n));
    if (n > max_dimension())
        throw CapacityError("dimension " + std::to_string(n) + " exceeds the cap of " +
                            std::to_string(max_dimension()) + " (set ASYNCDYN_MAX_N to raise it)");
}

//=============================================================================
// Fixed-width bit words over coordinates 1..n.
//
// Coordinate 1 is the most significant bit of the integer encoding, so the
// encoding order equals the lexicographic order of the bitstrings.

template <class Tag>
class BitWord {
public:
    using word_type = std::uint32_t;

    constexpr BitWord() = default;

    constexpr BitWord(int n, word_type bits) : bits_(bits), n_(n)
    {
        if (n < 1 || n > kHardMaxDimension)
            throw DimensionError("dimension out of range: " + std::to_string(n));
        if (n < 32 && (bits >> n) != 0)
            throw DimensionError("encoding " + std::to_string(bits) + " does not fit in " +
                                 std::to_string(n) + " bits");
    }

    static BitWord zeros(int n) { return BitWord(n, 0); }
    static BitWord ones(int n) { return BitWord(n, full_mask(n)); }

    /// Parses a bitstring "b_1 b_2 ... b_n" (no separators).
    static BitWord parse(std::string_view text)
    {
        if (text.empty())
            throw ParseError("empty bitstring");
        if (static_cast<int>(text.size()) > kHardMaxDimension)
            throw ParseError("bitstring too long: '" + std::string(text) + "'");
        word_type bits = 0;
        for (char c : text) {
            if (c != '0' && c != '1')
                throw ParseError("malformed bitstring '" + std::string(text) + "'");
            bits = (bits << 1) | static_cast<word_type>(c - '0');
        }
        return BitWord(static_cast<int>(text.size()), bits);
    }

    static constexpr word_type full_mask(int n) noexcept
    {
        return n >= 32 ? ~word_type{0} : ((word_type{1} << n) - 1);
    }

    [[nodiscard]] constexpr int size() const noexcept { return n_; }
    [[nodiscard]] constexpr word_type bits() const noexcept { return bits_; }

    /// Coordinate i, 1-based.
    [[nodiscard]] constexpr bool test(int i) const noexcept { return (bits_ >> (n_ - i)) & 1u; }

    [[nodiscard]] constexpr BitWord with(int i, bool value) const
    {
        const word_type bit = word_type{1} << (n_ - i);
        return BitWord(n_, value ? (bits_ | bit) : (bits_ & ~bit));
    }

    [[nodiscard]] int count() const noexcept { return std::popcount(bits_); }
    [[nodiscard]] bool none() const noexcept { return bits_ == 0; }
    [[nodiscard]] bool all() const noexcept { return bits_ == full_mask(n_); }

    /// 1-based coordinates whose bit is set, ascending.
    [[nodiscard]] std::vector<int> members() const
    {
        std::vector<int> out;
        for (int i = 1; i <= n_; ++i)
            if (test(i))
                out.push_back(i);
        return out;
    }

    [[nodiscard]] std::string str() const
    {
        std::string s(static_cast<std::size_t>(n_), '0');
        for (int i = 1; i <= n_; ++i)
            if (test(i))
                s[static_cast<std::size_t>(i - 1)] = '1';
        return s;
    }

    friend constexpr bool operator==(const BitWord&, const BitWord&) = default;
    friend constexpr auto operator<=>(const BitWord& a, const BitWord& b)
    {
        if (auto c = a.n_ <=> b.n_; c != 0)
            return c;
        return a.bits_ <=> b.bits_;
    }

private:
    word_type bits_ = 0;
    int n_ = 0;
};

struct StateTag {};
struct MaskTag {};
struct CoordTag {};

/// A point of {0,1}^n.
using StateVector = BitWord<StateTag>;
/// Which coordinates an asynchronous step computes.
using UpdateMask = BitWord<MaskTag>;
/// A subset of {1..n}, e.g. the unstable coordinates of a state.
using CoordinateSet = BitWord<CoordTag>;

template <class To, class From>
constexpr BitWord<To> bit_cast_word(const BitWord<From>& w)
{
    return BitWord<To>(w.size(), w.bits());
}

inline void require_same_dimension(int expected, int actual, const char* what)
{
    if (expected != actual)
        throw DimensionError(std::string(what) + ": dimension mismatch (expected " +
                             std::to_string(expected) + ", got " + std::to_string(actual) + ")");
}

//=============================================================================
// StateSet: a subset of {0,1}^n as a dense bitmap over the 2^n encodings.

class StateSet {
public:
    StateSet() = default;

    explicit StateSet(int n) : n_(n), words_(word_count(n), 0)
    {
        if (n < 1 || n > kHardMaxDimension)
            throw DimensionError("dimension out of range: " + std::to_string(n));
    }

    static StateSet full(int n)
    {
        StateSet s(n);
        for (auto& w : s.words_)
            w = ~std::uint64_t{0};
        s.trim();
        return s;
    }

    static StateSet from_codes(int n, const std::vector<std::uint32_t>& codes)
    {
        StateSet s(n);
        for (auto c : codes)
            s.insert(c);
        return s;
    }

    static StateSet of(std::initializer_list<StateVector> states)
    {
        if (states.size() == 0)
            throw SetError("StateSet::of needs at least one state to know the dimension");
        StateSet s(states.begin()->size());
        for (const auto& st : states)
            s.insert(st);
        return s;
    }

    [[nodiscard]] int dimension() const noexcept { return n_; }
    [[nodiscard]] std::uint64_t universe() const noexcept { return std::uint64_t{1} << n_; }

    [[nodiscard]] bool contains(std::uint32_t code) const noexcept
    {
        return (words_[code >> 6] >> (code & 63)) & 1u;
    }
    [[nodiscard]] bool contains(const StateVector& s) const
    {
        require_same_dimension(n_, s.size(), "StateSet::contains");
        return contains(s.bits());
    }

    void insert(std::uint32_t code) { words_[code >> 6] |= std::uint64_t{1} << (code & 63); }
    void insert(const StateVector& s)
    {
        require_same_dimension(n_, s.size(), "StateSet::insert");
        insert(s.bits());
    }
    void erase(std::uint32_t code) { words_[code >> 6] &= ~(std::uint64_t{1} << (code & 63)); }

    [[nodiscard]] std::size_t size() const noexcept
    {
        std::size_t c = 0;
        for (auto w : words_)
            c += static_cast<std::size_t>(std::popcount(w));
        return c;
    }
    [[nodiscard]] bool empty() const noexcept
    {
        return std::all_of(words_.begin(), words_.end(), [](auto w) { return w == 0; });
    }
    [[nodiscard]] bool is_full() const noexcept { return size() == universe(); }

    /// Member encodings in increasing order.
    [[nodiscard]] std::vector<std::uint32_t> codes() const
    {
        std::vector<std::uint32_t> out;
        out.reserve(size());
        for (std::size_t wi = 0; wi < words_.size(); ++wi) {
            std::uint64_t w = words_[wi];
            while (w) {
                const int b = std::countr_zero(w);
                out.push_back(static_cast<std::uint32_t>(wi * 64 + static_cast<std::size_t>(b)));
                w &= w - 1;
            }
        }
        return out;
    }

    [[nodiscard]] std::vector<StateVector> states() const
    {
        std::vector<StateVector> out;
        for (auto c : codes())
            out.emplace_back(n_, c);
        return out;
    }

    [[nodiscard]] bool is_subset_of(const StateSet& other) const
    {
        require_same_dimension(n_, other.n_, "StateSet::is_subset_of");
        for (std::size_t i = 0; i < words_.size(); ++i)
            if (words_[i] & ~other.words_[i])
                return false;
        return true;
    }

    [[nodiscard]] bool intersects(const StateSet& other) const
    {
        require_same_dimension(n_, other.n_, "StateSet::intersects");
        for (std::size_t i = 0; i < words_.size(); ++i)
            if (words_[i] & other.words_[i])
                return true;
        return false;
    }

    StateSet& operator|=(const StateSet& o)
    {
        require_same_dimension(n_, o.n_, "StateSet union");
        for (std::size_t i = 0; i < words_.size(); ++i)
            words_[i] |= o.words_[i];
        return *this;
    }
    StateSet& operator&=(const StateSet& o)
    {
        require_same_dimension(n_, o.n_, "StateSet intersection");
        for (std::size_t i = 0; i < words_.size(); ++i)
            words_[i] &= o.words_[i];
        return *this;
    }
    friend StateSet operator|(StateSet a, const StateSet& b) { return a |= b; }
    friend StateSet operator&(StateSet a, const StateSet& b) { return a &= b; }

    [[nodiscard]] StateSet complement() const
    {
        StateSet c(*this);
        for (auto& w : c.words_)
            w = ~w;
        c.trim();
        return c;
    }

    /// Canonical literal, e.g. "{00, 01}".
    [[nodiscard]] std::string str() const
    {
        std::string out = "{";
        bool first = true;
        for (auto c : codes()) {
            if (!first)
                out += ", ";
            out += StateVector(n_, c).str();
            first = false;
        }
        return out + "}";
    }

    friend bool operator==(const StateSet&, const StateSet&) = default;

private:
    static std::size_t word_count(int n) { return n >= 6 ? (std::size_t{1} << (n - 6)) : 1; }

    void trim()
    {
        if (n_ < 6)
            words_[0] &= (std::uint64_t{1} << (std::uint64_t{1} << n_)) - 1;
    }

    int n_ = 0;
    std::vector<std::uint64_t> words_;
};

} // namespace asyncdyn

#endif // ASYNCDYN_STATE_HPP
