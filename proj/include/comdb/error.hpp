#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace comdb {

enum class Errc {
    duplicate_id,
    unknown_super,
    cycle_detected,
    duplicate_label,
    unknown_element,
    unknown_label,
    label_mismatch,
    duplicate_concept,
    unknown_domain,
    duplicate_item,
    unknown_dimension,
    domain_violation,
    unknown_referent,
    unknown_concept,
    unknown_item,
    referenced_item,
    no_bottom,
    unreachable_concept,
    domain_mismatch,
    path_mismatch,
    non_local_predicate,
    lex_error,
    parse_error,
    ambiguous_deprojection,
    type_mismatch,
    unbound_variable,
    null_navigation,
    division_by_zero,
    empty_aggregate,
    duplicate_property,
    check_error,
    io_error,
    usage_error,
};

constexpr std::string_view errc_name(Errc c) noexcept
{
    switch (c) {
    case Errc::duplicate_id: return "DuplicateId";
    case Errc::unknown_super: return "UnknownSuper";
    case Errc::cycle_detected: return "CycleDetected";
    case Errc::duplicate_label: return "DuplicateLabel";
    case Errc::unknown_element: return "UnknownElement";
    case Errc::unknown_label: return "UnknownLabel";
    case Errc::label_mismatch: return "LabelMismatch";
    case Errc::duplicate_concept: return "DuplicateConcept";
    case Errc::unknown_domain: return "UnknownDomain";
    case Errc::duplicate_item: return "DuplicateItem";
    case Errc::unknown_dimension: return "UnknownDimension";
    case Errc::domain_violation: return "DomainViolation";
    case Errc::unknown_referent: return "UnknownReferent";
    case Errc::unknown_concept: return "UnknownConcept";
    case Errc::unknown_item: return "UnknownItem";
    case Errc::referenced_item: return "ReferencedItem";
    case Errc::no_bottom: return "NoBottom";
    case Errc::unreachable_concept: return "UnreachableConcept";
    case Errc::domain_mismatch: return "DomainMismatch";
    case Errc::path_mismatch: return "PathMismatch";
    case Errc::non_local_predicate: return "NonLocalPredicate";
    case Errc::lex_error: return "LexError";
    case Errc::parse_error: return "ParseError";
    case Errc::ambiguous_deprojection: return "AmbiguousDeprojection";
    case Errc::type_mismatch: return "TypeMismatch";
    case Errc::unbound_variable: return "UnboundVariable";
    case Errc::null_navigation: return "NullNavigation";
    case Errc::division_by_zero: return "DivisionByZero";
    case Errc::empty_aggregate: return "EmptyAggregate";
    case Errc::duplicate_property: return "DuplicateProperty";
    case Errc::check_error: return "CheckError";
    case Errc::io_error: return "IoError";
    case Errc::usage_error: return "UsageError";
    }
    return "Error";
}

/// Every failure raised by the library. `what()` is "Kind: detail".
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& detail)
        : std::runtime_error(std::string(errc_name(code)) + ": " + detail), code_(code), detail_(detail)
    {
    }

    Errc code() const noexcept { return code_; }
    const std::string& detail() const noexcept { return detail_; }

private:
    Errc code_;
    std::string detail_;
};

[[noreturn]] inline void fail(Errc code, const std::string& detail) { throw Error(code, detail); }

} // namespace comdb
