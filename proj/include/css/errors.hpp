#pragma once

#include <stdexcept>
#include <string>

namespace css {

// Error classes; the CLI maps each to its own exit code.
enum class ErrorKind {
    Dimension,      // shape or length mismatch
    Constraint,     // model parameters violate a structural constraint
    Cap,            // qubit / spin / rank budget exceeded
    Precondition,   // input state or chain fails a documented precondition
    NotCycle,       // chain expected to be a (dual) cycle is not
    UnknownModel,   // unparseable model name
    Parse,          // malformed config or file
    Internal        // an invariant that must hold did not
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

inline const char* kind_name(ErrorKind k) {
    switch (k) {
        case ErrorKind::Dimension: return "dimension";
        case ErrorKind::Constraint: return "constraint";
        case ErrorKind::Cap: return "cap";
        case ErrorKind::Precondition: return "precondition";
        case ErrorKind::NotCycle: return "not-cycle";
        case ErrorKind::UnknownModel: return "unknown-model";
        case ErrorKind::Parse: return "parse";
        case ErrorKind::Internal: return "internal";
    }
    return "unknown";
}

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace css
