#pragma once
// Core domain vocabulary: roles, actions, states, edges, traces.
// These are immutable value types once constructed; they can be copied
// across threads freely.

#include "qflow/errors.hpp"

#include <compare>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace qflow {

// Labels reserved for the synthetic start state and the terminal action.
// Role names may use anything else.
inline constexpr const char* kStartLabel = "START";
inline constexpr const char* kEndLabel = "END";

/// A named agent role: prompt, termination capability, and the cost weight
/// used by the per-step execution penalty.
struct RoleSpec {
    std::string name;
    std::string prompt;
    bool may_terminate = false;
    double cost = 1.0;
    std::string description;

    bool operator==(const RoleSpec&) const = default;
};

/// What an agent chooses after acting: hand off to a named role, or End.
class Action {
public:
    static Action end() { return Action(kEndLabel); }
    static Action goto_role(std::string role_name) { return Action(std::move(role_name)); }

    bool is_end() const { return label_ == kEndLabel; }

    /// Target role name. Only valid for Goto actions.
    const std::string& role() const {
        if (is_end()) throw Error(ErrorCode::InvalidArgument, "End action has no target role");
        return label_;
    }

    /// Role name for Goto actions, "END" for End. Used for files and tie-breaks.
    const std::string& label() const { return label_; }

    auto operator<=>(const Action&) const = default;

private:
    explicit Action(std::string label) : label_(std::move(label)) {}
    std::string label_;
};

/// The identity of the agent that just acted, or the synthetic START state
/// preceding the first agent.
class State {
public:
    static State start() { return State(kStartLabel); }
    static State of_role(std::string role_name) { return State(std::move(role_name)); }
    /// State reached by taking a Goto action.
    static State of_action(const Action& action) { return State(action.role()); }

    bool is_start() const { return label_ == kStartLabel; }

    /// Role name occupying the state. Only valid for non-START states.
    const std::string& current_role() const {
        if (is_start()) throw Error(ErrorCode::InvalidArgument, "START has no current role");
        return label_;
    }

    const std::string& label() const { return label_; }

    auto operator<=>(const State&) const = default;

private:
    explicit State(std::string label) : label_(std::move(label)) {}
    std::string label_;
};

/// Validated set of roles, unique by name, at least one of which may End.
class RoleSet {
public:
    bool contains(const std::string& name) const { return roles_.count(name) != 0; }

    const RoleSpec& at(const std::string& name) const {
        auto it = roles_.find(name);
        if (it == roles_.end()) throw Error(ErrorCode::UnknownRole, "no role named '" + name + "'");
        return it->second;
    }

    std::size_t size() const { return roles_.size(); }

    /// Role names in lexicographic order.
    std::vector<std::string> names() const;

    auto begin() const { return roles_.begin(); }
    auto end() const { return roles_.end(); }

    bool operator==(const RoleSet&) const = default;

private:
    friend RoleSet validate_role_set(const std::vector<RoleSpec>& roles);
    std::map<std::string, RoleSpec> roles_;
};

/// Checks uniqueness, reserved names, cost sign, and that at least one role
/// can terminate a workflow. Throws on violation.
RoleSet validate_role_set(const std::vector<RoleSpec>& roles);

struct TokenUsage {
    std::uint64_t prompt_tokens = 0;
    std::uint64_t completion_tokens = 0;

    TokenUsage& operator+=(const TokenUsage& other) {
        prompt_tokens += other.prompt_tokens;
        completion_tokens += other.completion_tokens;
        return *this;
    }
    bool operator==(const TokenUsage&) const = default;
};

/// One transition of an episode, annotated with the reward it earned.
struct WeightedEdge {
    State from = State::start();
    Action to = Action::end();
    double reward = 0.0;
    int step_index = 0;

    bool operator==(const WeightedEdge&) const = default;
};

enum class Outcome { Success, Pruned, StepLimit, AgentError };

const char* to_string(Outcome outcome);
Outcome outcome_from_string(const std::string& text);

struct TranscriptEntry {
    std::string speaker;
    std::string content;
    TokenUsage usage;

    bool operator==(const TranscriptEntry&) const = default;
};

/// How an action entered a decision space.
enum class Provenance { TopK, Exploration, ColdStart };

const char* to_string(Provenance provenance);
Provenance provenance_from_string(const std::string& text);

/// Decision space offered at one step, as recorded in a trace.
struct OfferRecord {
    std::string state;
    std::vector<std::pair<std::string, Provenance>> offered; // action label, provenance

    bool operator==(const OfferRecord&) const = default;
};

/// Everything one query produced: the weighted edges, the roles that ran
/// (in execution order, repeats included), the per-step decision spaces,
/// and the agent transcript.
struct EpisodeTrace {
    std::vector<WeightedEdge> edges;
    std::vector<std::string> executed;
    double cumulative_reward = 0.0;
    Outcome outcome = Outcome::AgentError;
    std::vector<TranscriptEntry> transcript;
    std::vector<OfferRecord> offers;
    int episode_index = 0;
    std::string task_id;
    std::string difficulty;

    TokenUsage total_usage() const {
        TokenUsage sum;
        for (const auto& entry : transcript) sum += entry.usage;
        return sum;
    }

    /// Number of times `role` appears in the executed list.
    int executed_count(const std::string& role) const;

    bool operator==(const EpisodeTrace&) const = default;
};

} // namespace qflow
