#pragma once

#include "comdb/error.hpp"

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace comdb {

/// Fixed-point decimal with six fractional digits. Addition, subtraction and
/// integer scaling are exact; multiplication and division round half away
/// from zero at the sixth digit.
class Decimal {
public:
    static constexpr std::int64_t scale = 1'000'000;
    static constexpr int digits = 6;

    constexpr Decimal() = default;

    static constexpr Decimal from_units(std::int64_t units) noexcept
    {
        Decimal d;
        d.units_ = units;
        return d;
    }
    static constexpr Decimal from_int(std::int64_t v) noexcept { return from_units(v * scale); }

    static std::optional<Decimal> parse(std::string_view text)
    {
        if (text.empty())
            return std::nullopt;
        bool negative = false;
        std::size_t pos = 0;
        if (text[0] == '-' || text[0] == '+') {
            negative = text[0] == '-';
            pos = 1;
        }
        std::int64_t whole = 0;
        std::int64_t frac = 0;
        int frac_digits = 0;
        bool any_digit = false;
        bool seen_point = false;
        for (; pos < text.size(); ++pos) {
            char c = text[pos];
            if (c == '.') {
                if (seen_point)
                    return std::nullopt;
                seen_point = true;
                continue;
            }
            if (c < '0' || c > '9')
                return std::nullopt;
            any_digit = true;
            if (!seen_point) {
                if (whole > (INT64_MAX / scale) / 10)
                    return std::nullopt;
                whole = whole * 10 + (c - '0');
            } else {
                if (frac_digits == digits)
                    return std::nullopt; // more precision than we can hold exactly
                frac = frac * 10 + (c - '0');
                ++frac_digits;
            }
        }
        if (!any_digit)
            return std::nullopt;
        for (int i = frac_digits; i < digits; ++i)
            frac *= 10;
        std::int64_t units = whole * scale + frac;
        return from_units(negative ? -units : units);
    }

    constexpr std::int64_t units() const noexcept { return units_; }
    constexpr bool is_integral() const noexcept { return units_ % scale == 0; }

    std::string to_string() const
    {
        std::uint64_t mag = units_ < 0 ? static_cast<std::uint64_t>(-(units_ + 1)) + 1 : static_cast<std::uint64_t>(units_);
        std::string out = units_ < 0 ? "-" : "";
        out += std::to_string(mag / scale);
        std::string frac = std::to_string(mag % scale);
        frac.insert(0, static_cast<std::size_t>(digits) - frac.size(), '0');
        while (frac.size() > 1 && frac.back() == '0')
            frac.pop_back();
        out += '.';
        out += frac;
        return out;
    }

    friend constexpr Decimal operator+(Decimal a, Decimal b) noexcept { return from_units(a.units_ + b.units_); }
    friend constexpr Decimal operator-(Decimal a, Decimal b) noexcept { return from_units(a.units_ - b.units_); }
    friend constexpr Decimal operator-(Decimal a) noexcept { return from_units(-a.units_); }

    friend Decimal operator*(Decimal a, Decimal b) noexcept
    {
        __int128 p = static_cast<__int128>(a.units_) * b.units_;
        return from_units(static_cast<std::int64_t>(round_div(p, scale)));
    }

    friend Decimal operator/(Decimal a, Decimal b)
    {
        if (b.units_ == 0)
            fail(Errc::division_by_zero, "decimal division by zero");
        __int128 n = static_cast<__int128>(a.units_) * scale;
        return from_units(static_cast<std::int64_t>(round_div(n, b.units_)));
    }

    Decimal& operator+=(Decimal o) noexcept
    {
        units_ += o.units_;
        return *this;
    }

    friend constexpr auto operator<=>(const Decimal&, const Decimal&) = default;
    friend constexpr bool operator==(const Decimal&, const Decimal&) = default;

private:
    static __int128 round_div(__int128 n, __int128 d) noexcept
    {
        bool negative = (n < 0) != (d < 0);
        __int128 an = n < 0 ? -n : n;
        __int128 ad = d < 0 ? -d : d;
        __int128 q = an / ad;
        if ((an % ad) * 2 >= ad)
            ++q;
        return negative ? -q : q;
    }

    std::int64_t units_ = 0;
};

} // namespace comdb
