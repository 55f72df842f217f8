#pragma once
// Engine configuration: learning hyperparameters and the reward table.
// Loads from a JSON file ({"engine": {...}, "roles": [...], "backend": {...}});
// unknown keys anywhere in the tree are an error.

#include "qflow/types.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace qflow {

/// One reward component as a (default value, scaling factor) pair.
/// The effective magnitude is value * scale.
struct RewardComponent {
    double value = 0.0;
    double scale = 1.0;

    double amount() const { return value * scale; }
    bool operator==(const RewardComponent&) const = default;
};

struct RewardConfig {
    RewardComponent exec_penalty{5.0, 2.0};    // per executed node, weighted by role cost
    RewardComponent repeat_penalty{10.0, 1.0}; // extra charge for selecting the same role twice in a row
    RewardComponent edge_penalty{1.0, 10.0};   // folded into exec_penalty; kept configurable (see docs)
    RewardComponent task_success{100.0, 1.0};  // terminal reward when an agent chooses End
    double success_rate_scale = 5.0;           // weight of the per-role success-rate reward
    double lambda_p = 10.0;                    // short-path penalty weight in the End branch
    int min_path_len = 2;                      // paths shorter than this are penalized at End

    bool operator==(const RewardConfig&) const = default;
};

struct EngineConfig {
    double alpha = 0.1;
    double gamma = 0.9;
    double epsilon0 = 0.3;
    double epsilon_decay = 0.95;
    double epsilon_min = 0.01;
    int top_k = 3;
    int cold_start_episodes = 30;
    double prune_threshold = -50.0;
    int max_steps = 12;
    RewardConfig reward;

    bool operator==(const EngineConfig&) const = default;
};

/// Range checks on the hyperparameters and reward table. Throws on violation.
void validate_engine_config(const EngineConfig& config);

/// Additionally verifies, per role, that the execution penalty strictly
/// dominates the maximum success-rate reward, so every per-step reward is
/// strictly negative.
void validate_engine_config(const EngineConfig& config, const RoleSet& roles);

/// HTTP chat-completion backend settings. The endpoint URL and API key come
/// from environment variables, never from this file.
struct BackendSettings {
    std::string model;
    double temperature = 0.1;
    int max_tokens = 2048;
    int max_retries = 3;
    int timeout_ms = 60000;
    int max_inflight = 4;
    double prompt_price = 0.0;     // price per prompt token
    double completion_price = 0.0; // price per completion token
    std::string system_prompt_file; // template with {prev_nodes}/{next_avail_nodes}
    std::string start_prompt_file;  // role prompt for the opening routing call

    bool operator==(const BackendSettings&) const = default;
};

struct AppConfig {
    EngineConfig engine;
    std::vector<RoleSpec> roles;
    BackendSettings backend;
};

/// Parses a config file. Role prompts may be given inline ("prompt") or via
/// "prompt_file" resolved relative to the config file location.
AppConfig load_app_config(const std::filesystem::path& path);

void save_app_config(const AppConfig& config, const std::filesystem::path& path);

} // namespace qflow
