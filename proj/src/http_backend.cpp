#include "qflow/http_backend.hpp"

#include "json_util.hpp"

#include <httplib.h>

#include <cstdlib>
#include <mutex>
#include <condition_variable>
#include <thread>

namespace qflow {

using detail::json;

struct HttpBackend::Inflight {
    std::mutex mutex;
    std::condition_variable released;
    int active = 0;
    int cap = 4;

    struct Slot {
        explicit Slot(Inflight& owner) : owner_(owner) {
            std::unique_lock lock(owner_.mutex);
            owner_.released.wait(lock, [&] { return owner_.active < owner_.cap; });
            ++owner_.active;
        }
        ~Slot() {
            {
                std::lock_guard lock(owner_.mutex);
                --owner_.active;
            }
            owner_.released.notify_one();
        }
        Inflight& owner_;
    };
};

HttpBackend::HttpBackend(BackendSettings settings, std::string base_url, std::string api_key,
                         const RoleSet& roles)
    : settings_(std::move(settings)),
      base_url_(std::move(base_url)),
      api_key_(std::move(api_key)),
      roles_(roles),
      inflight_(std::make_shared<Inflight>()) {
    if (base_url_.empty())
        throw Error(ErrorCode::InvalidArgument, "backend base URL must not be empty");
    inflight_->cap = settings_.max_inflight > 0 ? settings_.max_inflight : 1;
}

std::unique_ptr<HttpBackend> HttpBackend::from_env(BackendSettings settings, const RoleSet& roles) {
    const char* base_url = std::getenv(kBaseUrlEnv);
    if (!base_url || !*base_url)
        throw Error(ErrorCode::InvalidArgument, std::string(kBaseUrlEnv) + " is not set");
    const char* key = std::getenv(kApiKeyEnv);
    return std::make_unique<HttpBackend>(std::move(settings), base_url, key ? key : "", roles);
}

namespace {

json build_payload(const AgentRequest& request, const BackendSettings& settings) {
    json messages = json::array();
    std::string system = request.system_prompt;
    if (!request.role_prompt.empty()) system += "\n\n" + request.role_prompt;
    messages.push_back({{"role", "system"}, {"content", system}});
    messages.push_back({{"role", "user"}, {"content", request.query}});
    for (const TranscriptEntry& entry : request.transcript)
        messages.push_back({{"role", "assistant"}, {"content", entry.speaker + ": " + entry.content}});

    return json{{"model", settings.model},
                {"messages", messages},
                {"temperature", settings.temperature},
                {"max_tokens", settings.max_tokens}};
}

bool retryable_status(int status) {
    return status == 429 || (status >= 500 && status < 600);
}

} // namespace

AgentResponse HttpBackend::invoke(const AgentRequest& request,
                                  std::optional<std::chrono::milliseconds> timeout) {
    Inflight::Slot slot(*inflight_);

    const std::string body = build_payload(request, settings_).dump();
    const int timeout_ms = timeout ? static_cast<int>(timeout->count()) : settings_.timeout_ms;
    const int attempts = settings_.max_retries + 1;

    httplib::Headers headers{{"Content-Type", "application/json"}};
    if (!api_key_.empty()) headers.emplace("Authorization", "Bearer " + api_key_);

    std::string last_failure = "unknown";
    for (int attempt = 0; attempt < attempts; ++attempt) {
        if (attempt > 0)
            std::this_thread::sleep_for(std::chrono::milliseconds(50 << std::min(attempt - 1, 5)));

        httplib::Client client(base_url_);
        client.set_connection_timeout(std::chrono::milliseconds(timeout_ms));
        client.set_read_timeout(std::chrono::milliseconds(timeout_ms));
        client.set_write_timeout(std::chrono::milliseconds(timeout_ms));

        auto result = client.Post("/v1/chat/completions", headers, body, "application/json");
        if (!result) {
            if (result.error() == httplib::Error::ConnectionTimeout)
                last_failure = "connection timed out";
            else
                last_failure = httplib::to_string(result.error());
            continue; // transport failures are retryable
        }
        if (result->status != 200) {
            if (retryable_status(result->status)) {
                last_failure = "HTTP " + std::to_string(result->status);
                continue;
            }
            throw Error(ErrorCode::NonRetryableApiError,
                        "HTTP " + std::to_string(result->status) + ": " + result->body);
        }

        json reply;
        try {
            reply = json::parse(result->body);
        } catch (const json::parse_error& e) {
            throw Error(ErrorCode::NonRetryableApiError, std::string("malformed response body: ") + e.what());
        }

        AgentResponse response;
        if (!reply.contains("choices") || !reply["choices"].is_array() || reply["choices"].empty() ||
            !reply["choices"][0].contains("message") ||
            !reply["choices"][0]["message"].contains("content"))
            throw Error(ErrorCode::NonRetryableApiError, "response has no choices[0].message.content");
        response.content = reply["choices"][0]["message"]["content"].get<std::string>();
        if (reply.contains("usage") && reply["usage"].is_object()) {
            const json& usage = reply["usage"];
            if (usage.contains("prompt_tokens") && usage["prompt_tokens"].is_number())
                response.usage.prompt_tokens = usage["prompt_tokens"].get<std::uint64_t>();
            if (usage.contains("completion_tokens") && usage["completion_tokens"].is_number())
                response.usage.completion_tokens = usage["completion_tokens"].get<std::uint64_t>();
        }
        try {
            response.next_node = parse_next_node(response.content, roles_);
        } catch (const Error&) {
            response.next_node.reset(); // the orchestrator handles the retry protocol
        }
        return response;
    }

    if (last_failure == "connection timed out")
        throw Error(ErrorCode::Timeout, "request timed out after " + std::to_string(attempts) + " attempts");
    throw Error(ErrorCode::TransportFailure,
                "request failed after " + std::to_string(attempts) + " attempts: " + last_failure);
}

} // namespace qflow
