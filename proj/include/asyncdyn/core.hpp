#ifndef ASYNCDYN_CORE_HPP
#define ASYNCDYN_CORE_HPP

#include "state.hpp"

#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace asyncdyn {

/// The generator function Phi : {0,1}^n -> {0,1}^n as an explicit table of
/// 2^n images, indexed by the encoding of the argument. Immutable; copies
/// share the table.
class GeneratorFunction {
public:
    GeneratorFunction() = default;

    GeneratorFunction(int n, std::vector<std::uint32_t> table, std::vector<std::string> names = {},
                      std::string source = {})
        : n_(n)
    {
        check_dimension(n);
        if (table.size() != (std::size_t{1} << n))
            throw DimensionError("table for n=" + std::to_string(n) + " needs " +
                                 std::to_string(std::size_t{1} << n) + " entries, got " +
                                 std::to_string(table.size()));
        const auto limit = StateVector::full_mask(n);
        for (auto v : table)
            if ((v & ~limit) != 0)
                throw DimensionError("table entry " + std::to_string(v) + " does not fit in " +
                                     std::to_string(n) + " bits");
        if (!names.empty() && names.size() != static_cast<std::size_t>(n))
            throw DimensionError("expected " + std::to_string(n) + " variable names");
        table_ = std::make_shared<const std::vector<std::uint32_t>>(std::move(table));
        names_ = std::move(names);
        source_ = std::move(source);
    }

    template <class F>
    static GeneratorFunction from_fn(int n, F&& f)
    {
        check_dimension(n);
        std::vector<std::uint32_t> t(std::size_t{1} << n);
        for (std::uint32_t c = 0; c < t.size(); ++c)
            t[c] = f(c);
        return GeneratorFunction(n, std::move(t));
    }

    static GeneratorFunction identity(int n)
    {
        return from_fn(n, [](std::uint32_t c) { return c; });
    }

    [[nodiscard]] int dimension() const noexcept { return n_; }
    [[nodiscard]] std::size_t state_count() const noexcept { return std::size_t{1} << n_; }
    [[nodiscard]] std::span<const std::uint32_t> table() const noexcept { return *table_; }
    [[nodiscard]] const std::vector<std::string>& names() const noexcept { return names_; }
    [[nodiscard]] const std::string& source() const noexcept { return source_; }

    /// Raw lookup by encoding; no checks.
    [[nodiscard]] std::uint32_t image(std::uint32_t code) const noexcept { return (*table_)[code]; }

    /// Coordinates where Phi(mu) differs from mu, as a raw bit word.
    [[nodiscard]] std::uint32_t unstable_bits(std::uint32_t code) const noexcept
    {
        return (*table_)[code] ^ code;
    }

    /// Phi^nu on raw encodings: computed coordinates take Phi's value.
    [[nodiscard]] std::uint32_t step(std::uint32_t code, std::uint32_t mask) const noexcept
    {
        return (code & ~mask) | ((*table_)[code] & mask);
    }

    friend bool operator==(const GeneratorFunction& a, const GeneratorFunction& b)
    {
        return a.n_ == b.n_ && *a.table_ == *b.table_;
    }

private:
    int n_ = 0;
    std::shared_ptr<const std::vector<std::uint32_t>> table_ =
        std::make_shared<const std::vector<std::uint32_t>>();
    std::vector<std::string> names_;
    std::string source_;
};

inline StateVector evaluate(const GeneratorFunction& phi, const StateVector& mu)
{
    require_same_dimension(phi.dimension(), mu.size(), "evaluate");
    return StateVector(mu.size(), phi.image(mu.bits()));
}

/// U(mu) = { i | Phi_i(mu) != mu_i }.
inline CoordinateSet unstable_set(const GeneratorFunction& phi, const StateVector& mu)
{
    require_same_dimension(phi.dimension(), mu.size(), "unstable_set");
    return CoordinateSet(mu.size(), phi.unstable_bits(mu.bits()));
}

/// One asynchronous step: coordinate i becomes Phi_i(mu) where nu_i = 1 and
/// keeps mu_i otherwise.
inline StateVector apply_mask(const GeneratorFunction& phi, const StateVector& mu,
                              const UpdateMask& nu)
{
    require_same_dimension(phi.dimension(), mu.size(), "apply_mask");
    require_same_dimension(phi.dimension(), nu.size(), "apply_mask");
    return StateVector(mu.size(), phi.step(mu.bits(), nu.bits()));
}

/// Left fold of apply_mask over the mask sequence.
inline StateVector iterate(const GeneratorFunction& phi, const StateVector& mu,
                           std::span<const UpdateMask> masks)
{
    require_same_dimension(phi.dimension(), mu.size(), "iterate");
    std::uint32_t code = mu.bits();
    for (const auto& m : masks) {
        require_same_dimension(phi.dimension(), m.size(), "iterate");
        code = phi.step(code, m.bits());
    }
    return StateVector(mu.size(), code);
}

inline StateSet fixed_points(const GeneratorFunction& phi)
{
    StateSet out(phi.dimension());
    for (std::uint32_t c = 0; c < phi.state_count(); ++c)
        if (phi.image(c) == c)
            out.insert(c);
    return out;
}

} // namespace asyncdyn

#endif // ASYNCDYN_CORE_HPP
