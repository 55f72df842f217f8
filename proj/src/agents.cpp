#include "qflow/agents.hpp"

#include <cmath>
#include <regex>
#include <sstream>

namespace qflow {

namespace {

std::string trim(const std::string& text) {
    std::size_t begin = text.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    std::size_t end = text.find_last_not_of(" \t\r\n");
    return text.substr(begin, end - begin + 1);
}

std::string join(const std::vector<std::string>& items) {
    std::ostringstream out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) out << ", ";
        out << items[i];
    }
    return out.str();
}

} // namespace

Action parse_next_node(const std::string& content, const RoleSet& roles) {
    static const std::regex marker(R"(/\*\s*next_node\s*:\s*([^*]*?)\s*\*/)");

    std::string name;
    bool found = false;
    for (auto it = std::sregex_iterator(content.begin(), content.end(), marker);
         it != std::sregex_iterator(); ++it) {
        name = (*it)[1].str(); // last occurrence wins
        found = true;
    }
    if (!found) throw Error(ErrorCode::NoMarkerFound, "no /* next_node: ... */ marker in agent output");

    name = trim(name);
    if (name == kEndLabel) return Action::end();
    if (!roles.contains(name))
        throw Error(ErrorCode::UnknownRoleName, "marker names unknown role '" + name + "'");
    return Action::goto_role(name);
}

namespace {

std::string substitute(std::string text, const std::string& placeholder, const std::string& value,
                       bool& seen) {
    std::string token = "{" + placeholder + "}";
    std::size_t pos = 0;
    while ((pos = text.find(token, pos)) != std::string::npos) {
        text.replace(pos, token.size(), value);
        pos += value.size();
        seen = true;
    }
    return text;
}

} // namespace

AgentRequest render_prompt(const std::string& system_template, const std::string& role_prompt,
                           const std::vector<std::string>& prev_nodes, const DecisionSpace& next_avail,
                           const std::string& query, const std::vector<TranscriptEntry>& transcript) {
    std::vector<std::string> avail_names;
    avail_names.reserve(next_avail.actions.size());
    for (const Action& a : next_avail.actions) avail_names.push_back(a.label());

    bool has_prev = false, has_avail = false;
    std::string rendered = substitute(system_template, "prev_nodes", join(prev_nodes), has_prev);
    rendered = substitute(rendered, "next_avail_nodes", join(avail_names), has_avail);
    if (!has_prev) throw Error(ErrorCode::MissingPlaceholder, "template lacks {prev_nodes}");
    if (!has_avail) throw Error(ErrorCode::MissingPlaceholder, "template lacks {next_avail_nodes}");

    // Anything still shaped like a placeholder went unsubstituted.
    static const std::regex leftover(R"(\{[a-z_]+\})");
    std::smatch match;
    if (std::regex_search(rendered, match, leftover))
        throw Error(ErrorCode::MissingPlaceholder, "unresolved placeholder " + match.str());

    AgentRequest request;
    request.system_prompt = std::move(rendered);
    request.role_prompt = role_prompt;
    request.query = query;
    request.transcript = transcript;
    request.prev_nodes = prev_nodes;
    request.offered = next_avail;
    return request;
}

double cost(const TokenUsage& usage, double price_prompt, double price_completion) {
    if (!(price_prompt >= 0.0) || !(price_completion >= 0.0))
        throw Error(ErrorCode::InvalidArgument, "token prices must be non-negative");
    return price_prompt * static_cast<double>(usage.prompt_tokens) +
           price_completion * static_cast<double>(usage.completion_tokens);
}

AgentResponse invoke(AgentBackend& backend, const AgentRequest& request,
                     std::optional<std::chrono::milliseconds> timeout) {
    return backend.invoke(request, timeout);
}

AgentResponse ScriptedBackend::invoke(const AgentRequest& request,
                                      std::optional<std::chrono::milliseconds> timeout) {
    (void)request;
    (void)timeout;
    if (next_ >= steps_.size())
        throw Error(ErrorCode::AgentBackendFailure,
                    "script exhausted after " + std::to_string(steps_.size()) + " steps");
    const Step& step = steps_[next_++];
    if (step.fail_transport)
        throw Error(ErrorCode::TransportFailure, "scripted transport failure");
    return AgentResponse{step.content, step.next_node, step.usage};
}

} // namespace qflow
