#pragma once
// Agent abstraction: prompt rendering, the next-node wire protocol, token
// cost accounting, and backends. ScriptedBackend replays a fixed list of
// steps for tests; the HTTP chat-completion backend lives in http_backend.hpp.

#include "qflow/qtable.hpp"
#include "qflow/types.hpp"

#include <chrono>
#include <optional>
#include <string>
#include <vector>

namespace qflow {

/// Everything a backend needs for one agent call. The rendered prompts are
/// what an LLM sees; the structured fields let scripted backends decide
/// without re-parsing text.
struct AgentRequest {
    State state = State::start();        // the role acting now (START for the opening routing call)
    std::string system_prompt;           // rendered: placeholders substituted
    std::string role_prompt;
    std::string query;
    std::vector<TranscriptEntry> transcript;
    std::vector<std::string> prev_nodes; // executed roles, in order
    DecisionSpace offered;               // next_avail_nodes must list exactly these
};

struct AgentResponse {
    std::string content;
    std::optional<Action> next_node; // empty when the content failed to parse
    TokenUsage usage;
};

/// Extracts the agent's routing decision from its output. The marker is
///   /* next_node: <name> */
/// whitespace-tolerant; the LAST occurrence wins since models tend to echo
/// the format instructions earlier in the output. "END" maps to End; any
/// other name must match a role exactly after trimming.
Action parse_next_node(const std::string& content, const RoleSet& roles);

/// Substitutes {prev_nodes} and {next_avail_nodes} in the system template
/// (lists rendered comma-separated) and assembles the request. A template
/// missing either placeholder, or leaving any {placeholder} unresolved,
/// is an error.
AgentRequest render_prompt(const std::string& system_template, const std::string& role_prompt,
                           const std::vector<std::string>& prev_nodes, const DecisionSpace& next_avail,
                           const std::string& query, const std::vector<TranscriptEntry>& transcript);

/// price_prompt * prompt_tokens + price_completion * completion_tokens.
double cost(const TokenUsage& usage, double price_prompt, double price_completion);

class AgentBackend {
public:
    virtual ~AgentBackend() = default;

    /// Performs one agent call. `timeout` overrides the backend's configured
    /// per-call timeout when set. Transport-level failures throw; content
    /// that fails to parse comes back with next_node empty.
    virtual AgentResponse invoke(const AgentRequest& request,
                                 std::optional<std::chrono::milliseconds> timeout = {}) = 0;
};

/// Thin wrapper so call sites can pass the timeout positionally.
AgentResponse invoke(AgentBackend& backend, const AgentRequest& request,
                     std::optional<std::chrono::milliseconds> timeout = {});

/// Deterministic backend replaying a fixed script; step i of the script
/// answers the i-th invoke call, independent of the request.
class ScriptedBackend : public AgentBackend {
public:
    struct Step {
        std::string content;
        std::optional<Action> next_node;
        TokenUsage usage;
        bool fail_transport = false; // simulate a backend failure at this step
    };

    explicit ScriptedBackend(std::vector<Step> steps) : steps_(std::move(steps)) {}

    AgentResponse invoke(const AgentRequest& request,
                         std::optional<std::chrono::milliseconds> timeout = {}) override;

    std::size_t calls() const { return next_; }

private:
    std::vector<Step> steps_;
    std::size_t next_ = 0;
};

} // namespace qflow
