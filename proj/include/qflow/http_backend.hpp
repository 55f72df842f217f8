#pragma once
// OpenAI-style chat-completion client. Speaks the standard JSON protocol
// (messages array in, choices/usage out) against any compatible endpoint.
//
// Endpoint and credential come from the environment (QFLOW_BASE_URL,
// QFLOW_API_KEY); model and sampling parameters from the config file.

#include "qflow/agents.hpp"
#include "qflow/config.hpp"
#include "qflow/types.hpp"

#include <memory>
#include <string>

namespace qflow {

inline constexpr const char* kApiKeyEnv = "QFLOW_API_KEY";
inline constexpr const char* kBaseUrlEnv = "QFLOW_BASE_URL";

class HttpBackend : public AgentBackend {
public:
    /// `base_url` like "http://host:port" or "https://host"; requests go to
    /// <base_url>/v1/chat/completions. Pass an empty api_key to omit the
    /// Authorization header (local servers).
    HttpBackend(BackendSettings settings, std::string base_url, std::string api_key,
                const RoleSet& roles);

    /// Reads base URL and API key from the environment.
    static std::unique_ptr<HttpBackend> from_env(BackendSettings settings, const RoleSet& roles);

    /// One chat-completion round trip with bounded retries on transient
    /// transport failures and 429/5xx responses. 4xx responses other than
    /// 429 throw NonRetryableApiError immediately.
    AgentResponse invoke(const AgentRequest& request,
                         std::optional<std::chrono::milliseconds> timeout = {}) override;

private:
    BackendSettings settings_;
    std::string base_url_;
    std::string api_key_;
    RoleSet roles_;
    struct Inflight;
    std::shared_ptr<Inflight> inflight_; // caps concurrent requests
};

} // namespace qflow
