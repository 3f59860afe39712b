#pragma once

#include "comdb/decimal.hpp"
#include "comdb/error.hpp"

#include <charconv>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

namespace comdb {

enum class ValueType { integer, decimal, string, date };

constexpr std::string_view value_type_name(ValueType t) noexcept
{
    switch (t) {
    case ValueType::integer: return "int";
    case ValueType::decimal: return "decimal";
    case ValueType::string: return "string";
    case ValueType::date: return "date";
    }
    return "?";
}

inline std::optional<ValueType> parse_value_type(std::string_view name)
{
    if (name == "int" || name == "integer")
        return ValueType::integer;
    if (name == "decimal")
        return ValueType::decimal;
    if (name == "string")
        return ValueType::string;
    if (name == "date")
        return ValueType::date;
    return std::nullopt;
}

/// Identity of a value-concept item. Dates are year-granularity strings.
using Literal = std::variant<std::int64_t, Decimal, std::string>;

inline std::string literal_text(const Literal& v)
{
    if (auto i = std::get_if<std::int64_t>(&v))
        return std::to_string(*i);
    if (auto d = std::get_if<Decimal>(&v))
        return d->to_string();
    return std::get<std::string>(v);
}

inline std::optional<std::int64_t> parse_int(std::string_view text)
{
    std::int64_t v = 0;
    const char* first = text.data();
    if (!text.empty() && text[0] == '+')
        ++first;
    auto [ptr, ec] = std::from_chars(first, text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size() || first == text.data() + text.size())
        return std::nullopt;
    return v;
}

/// Parses raw text as a literal of the given type.
inline std::optional<Literal> parse_literal(ValueType type, std::string_view text)
{
    switch (type) {
    case ValueType::integer:
        if (auto v = parse_int(text))
            return Literal{*v};
        return std::nullopt;
    case ValueType::decimal:
        if (auto d = Decimal::parse(text))
            return Literal{*d};
        return std::nullopt;
    case ValueType::string:
    case ValueType::date:
        return Literal{std::string(text)};
    }
    return std::nullopt;
}

/// Converts a literal to the representation of `type` (int widens to decimal).
inline std::optional<Literal> coerce_literal(ValueType type, const Literal& v)
{
    switch (type) {
    case ValueType::integer:
        if (std::holds_alternative<std::int64_t>(v))
            return v;
        if (auto d = std::get_if<Decimal>(&v); d && d->is_integral())
            return Literal{d->units() / Decimal::scale};
        return std::nullopt;
    case ValueType::decimal:
        if (auto i = std::get_if<std::int64_t>(&v))
            return Literal{Decimal::from_int(*i)};
        if (std::holds_alternative<Decimal>(v))
            return v;
        return std::nullopt;
    case ValueType::string:
    case ValueType::date:
        if (std::holds_alternative<std::string>(v))
            return v;
        return std::nullopt;
    }
    return std::nullopt;
}

} // namespace comdb
