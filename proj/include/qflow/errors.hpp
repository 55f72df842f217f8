#pragma once
// Error taxonomy shared by all qflow modules. Every failure surfaces as an
// Error carrying a stable ErrorCode so callers (and tests) can dispatch on
// the category instead of parsing messages.

#include <stdexcept>
#include <string>

namespace qflow {

enum class ErrorCode {
    // core / config
    DuplicateRoleName,
    NoTerminatingRole,
    ReservedRoleName,
    SchemaViolation,
    IoFailure,
    InvalidArgument,
    // qlearn
    NonFiniteReward,
    EmptyActionSet,
    // reward
    UnknownRole,
    // agents
    NoMarkerFound,
    UnknownRoleName,
    MissingPlaceholder,
    Timeout,
    TransportFailure,
    NonRetryableApiError,
    AgentBackendFailure,
    InvalidNextNode,
    // bench
    ScenarioInvalid,
    NonConvergent,
    EmptyInput,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

} // namespace qflow
