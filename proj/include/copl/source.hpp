#pragma once

#include <stdexcept>
#include <string>

namespace copl {

// 1-based source position; {0,0} means "no position available".
struct Pos {
    int line = 0;
    int col = 0;

    bool operator==(const Pos&) const = default;
};

enum class ErrorKind {
    // lexing / parsing
    LexError,
    ParseError,
    // resolution
    DuplicateConcept,
    UnknownParent,
    InclusionCycle,
    DualSignatureMismatch,
    DuplicateMember,
    UnknownType,
    BadCharArraySize,
    // runtime
    NotInstantiable,
    ParentMismatch,
    ArityOrTypeError,
    CharArrayOverflow,
    NoIncomingMethod,
    NoChildSegment,
    NoOutgoingMethod,
    DepthExceeded,
    UnknownField,
    MissingAccessor,
    UndefinedVariable,
    DivisionByZero,
    AssignToSegmentField,
    AssertionFailed,
};

enum class ErrorPhase { Lex, Parse, Resolve, Runtime };

constexpr ErrorPhase phase_of(ErrorKind k) {
    switch (k) {
        case ErrorKind::LexError:
            return ErrorPhase::Lex;
        case ErrorKind::ParseError:
            return ErrorPhase::Parse;
        case ErrorKind::DuplicateConcept:
        case ErrorKind::UnknownParent:
        case ErrorKind::InclusionCycle:
        case ErrorKind::DualSignatureMismatch:
        case ErrorKind::DuplicateMember:
        case ErrorKind::UnknownType:
        case ErrorKind::BadCharArraySize:
            return ErrorPhase::Resolve;
        default:
            return ErrorPhase::Runtime;
    }
}

inline const char* error_kind_name(ErrorKind k) {
    switch (k) {
        case ErrorKind::LexError: return "lex-error";
        case ErrorKind::ParseError: return "parse-error";
        case ErrorKind::DuplicateConcept: return "duplicate-concept";
        case ErrorKind::UnknownParent: return "unknown-parent";
        case ErrorKind::InclusionCycle: return "inclusion-cycle";
        case ErrorKind::DualSignatureMismatch: return "dual-signature-mismatch";
        case ErrorKind::DuplicateMember: return "duplicate-member";
        case ErrorKind::UnknownType: return "unknown-type";
        case ErrorKind::BadCharArraySize: return "bad-char-array-size";
        case ErrorKind::NotInstantiable: return "not-instantiable";
        case ErrorKind::ParentMismatch: return "parent-mismatch";
        case ErrorKind::ArityOrTypeError: return "arity-or-type-error";
        case ErrorKind::CharArrayOverflow: return "char-array-overflow";
        case ErrorKind::NoIncomingMethod: return "no-incoming-method";
        case ErrorKind::NoChildSegment: return "no-child-segment";
        case ErrorKind::NoOutgoingMethod: return "no-outgoing-method";
        case ErrorKind::DepthExceeded: return "depth-exceeded";
        case ErrorKind::UnknownField: return "unknown-field";
        case ErrorKind::MissingAccessor: return "missing-accessor";
        case ErrorKind::UndefinedVariable: return "undefined-variable";
        case ErrorKind::DivisionByZero: return "division-by-zero";
        case ErrorKind::AssignToSegmentField: return "assign-to-segment-field";
        case ErrorKind::AssertionFailed: return "assertion-failed";
    }
    return "error";
}

// Single error currency for the whole pipeline. The phase decides the
// CLI exit code; the position points at the first offending token.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, Pos pos, const std::string& message)
        : std::runtime_error(message), kind_(kind), pos_(pos) {}

    ErrorKind kind() const { return kind_; }
    ErrorPhase phase() const { return phase_of(kind_); }
    Pos pos() const { return pos_; }

private:
    ErrorKind kind_;
    Pos pos_;
};

}  // namespace copl
