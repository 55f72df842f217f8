#include "qflow/types.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace qflow {

const char* to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::DuplicateRoleName: return "DuplicateRoleName";
        case ErrorCode::NoTerminatingRole: return "NoTerminatingRole";
        case ErrorCode::ReservedRoleName: return "ReservedRoleName";
        case ErrorCode::SchemaViolation: return "SchemaViolation";
        case ErrorCode::IoFailure: return "IoFailure";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::NonFiniteReward: return "NonFiniteReward";
        case ErrorCode::EmptyActionSet: return "EmptyActionSet";
        case ErrorCode::UnknownRole: return "UnknownRole";
        case ErrorCode::NoMarkerFound: return "NoMarkerFound";
        case ErrorCode::UnknownRoleName: return "UnknownRoleName";
        case ErrorCode::MissingPlaceholder: return "MissingPlaceholder";
        case ErrorCode::Timeout: return "Timeout";
        case ErrorCode::TransportFailure: return "TransportFailure";
        case ErrorCode::NonRetryableApiError: return "NonRetryableApiError";
        case ErrorCode::AgentBackendFailure: return "AgentBackendFailure";
        case ErrorCode::InvalidNextNode: return "InvalidNextNode";
        case ErrorCode::ScenarioInvalid: return "ScenarioInvalid";
        case ErrorCode::NonConvergent: return "NonConvergent";
        case ErrorCode::EmptyInput: return "EmptyInput";
    }
    return "UnknownError";
}

std::vector<std::string> RoleSet::names() const {
    std::vector<std::string> out;
    out.reserve(roles_.size());
    for (const auto& [name, spec] : roles_) out.push_back(name);
    return out;
}

RoleSet validate_role_set(const std::vector<RoleSpec>& roles) {
    if (roles.empty())
        throw Error(ErrorCode::SchemaViolation, "role set must not be empty");

    RoleSet set;
    bool any_terminating = false;
    for (const auto& role : roles) {
        if (role.name.empty())
            throw Error(ErrorCode::SchemaViolation, "role name must not be empty");
        if (role.name == kStartLabel || role.name == kEndLabel)
            throw Error(ErrorCode::ReservedRoleName, "'" + role.name + "' is reserved");
        if (!(role.cost >= 0.0) || !std::isfinite(role.cost))
            throw Error(ErrorCode::SchemaViolation, "role '" + role.name + "' has negative or non-finite cost");
        if (!set.roles_.emplace(role.name, role).second)
            throw Error(ErrorCode::DuplicateRoleName, "role '" + role.name + "' appears twice");
        any_terminating = any_terminating || role.may_terminate;
    }
    if (!any_terminating)
        throw Error(ErrorCode::NoTerminatingRole, "no role may select END; the workflow could never finish");
    return set;
}

const char* to_string(Outcome outcome) {
    switch (outcome) {
        case Outcome::Success: return "success";
        case Outcome::Pruned: return "pruned";
        case Outcome::StepLimit: return "step_limit";
        case Outcome::AgentError: return "agent_error";
    }
    return "unknown";
}

Outcome outcome_from_string(const std::string& text) {
    if (text == "success") return Outcome::Success;
    if (text == "pruned") return Outcome::Pruned;
    if (text == "step_limit") return Outcome::StepLimit;
    if (text == "agent_error") return Outcome::AgentError;
    throw Error(ErrorCode::SchemaViolation, "unknown outcome '" + text + "'");
}

const char* to_string(Provenance provenance) {
    switch (provenance) {
        case Provenance::TopK: return "top_k";
        case Provenance::Exploration: return "exploration";
        case Provenance::ColdStart: return "cold_start";
    }
    return "unknown";
}

Provenance provenance_from_string(const std::string& text) {
    if (text == "top_k") return Provenance::TopK;
    if (text == "exploration") return Provenance::Exploration;
    if (text == "cold_start") return Provenance::ColdStart;
    throw Error(ErrorCode::SchemaViolation, "unknown provenance '" + text + "'");
}

int EpisodeTrace::executed_count(const std::string& role) const {
    return static_cast<int>(std::count(executed.begin(), executed.end(), role));
}

} // namespace qflow
