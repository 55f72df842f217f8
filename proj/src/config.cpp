#include "qflow/config.hpp"

#include "json_util.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace qflow {

using detail::json;

void validate_engine_config(const EngineConfig& c) {
    auto fail = [](const std::string& msg) { throw Error(ErrorCode::SchemaViolation, msg); };

    if (!(c.alpha > 0.0 && c.alpha < 1.0)) fail("alpha must be in (0,1)");
    if (!(c.gamma >= 0.0 && c.gamma < 1.0)) fail("gamma must be in [0,1)");
    if (!(c.epsilon0 >= 0.0 && c.epsilon0 <= 1.0)) fail("epsilon0 must be in [0,1]");
    if (!(c.epsilon_decay > 0.0 && c.epsilon_decay <= 1.0)) fail("epsilon_decay must be in (0,1]");
    if (!(c.epsilon_min >= 0.0 && c.epsilon_min <= 1.0)) fail("epsilon_min must be in [0,1]");
    if (c.epsilon_min > c.epsilon0) fail("epsilon_min must not exceed epsilon0");
    if (c.top_k < 1) fail("top_k must be positive");
    if (c.cold_start_episodes < 0) fail("cold_start_episodes must be non-negative");
    if (!(c.prune_threshold < 0.0)) fail("prune_threshold must be negative");
    if (c.max_steps < 1) fail("max_steps must be positive");

    const RewardConfig& r = c.reward;
    for (const auto& [label, component] :
         {std::pair<const char*, const RewardComponent&>{"exec_penalty", r.exec_penalty},
          {"repeat_penalty", r.repeat_penalty},
          {"edge_penalty", r.edge_penalty},
          {"task_success", r.task_success}}) {
        if (!(component.value >= 0.0) || !(component.scale >= 0.0) ||
            !std::isfinite(component.value) || !std::isfinite(component.scale))
            fail(std::string("reward.") + label + " value and scale must be non-negative finite");
    }
    if (!(r.success_rate_scale >= 0.0) || !std::isfinite(r.success_rate_scale))
        fail("reward.success_rate_scale must be non-negative finite");
    if (!(r.lambda_p >= 0.0) || !std::isfinite(r.lambda_p)) fail("reward.lambda_p must be non-negative finite");
    if (r.min_path_len < 0) fail("reward.min_path_len must be non-negative");
}

void validate_engine_config(const EngineConfig& c, const RoleSet& roles) {
    validate_engine_config(c);
    // The execution penalty must strictly dominate the best possible
    // success-rate reward for every role, so per-step rewards stay negative.
    for (const auto& [name, role] : roles) {
        double penalty = c.reward.exec_penalty.amount() * role.cost;
        if (!(penalty > c.reward.success_rate_scale))
            throw Error(ErrorCode::SchemaViolation,
                        "role '" + name + "': exec penalty " + std::to_string(penalty) +
                            " must exceed success_rate_scale " + std::to_string(c.reward.success_rate_scale));
    }
}

namespace {

RewardComponent parse_component(const json& j, const std::string& where, const RewardComponent& defaults) {
    detail::require_keys(j, where, {"value", "scale"});
    RewardComponent out = defaults;
    out.value = detail::get_number(j, where, "value", defaults.value);
    out.scale = detail::get_number(j, where, "scale", defaults.scale);
    return out;
}

json component_to_json(const RewardComponent& c) {
    return json{{"value", c.value}, {"scale", c.scale}};
}

RewardConfig parse_reward(const json& j, const std::string& where) {
    detail::require_keys(j, where,
                         {"exec_penalty", "repeat_penalty", "edge_penalty", "task_success",
                          "success_rate_scale", "lambda_p", "min_path_len"});
    RewardConfig out;
    if (j.contains("exec_penalty")) out.exec_penalty = parse_component(j.at("exec_penalty"), where + ".exec_penalty", out.exec_penalty);
    if (j.contains("repeat_penalty")) out.repeat_penalty = parse_component(j.at("repeat_penalty"), where + ".repeat_penalty", out.repeat_penalty);
    if (j.contains("edge_penalty")) out.edge_penalty = parse_component(j.at("edge_penalty"), where + ".edge_penalty", out.edge_penalty);
    if (j.contains("task_success")) out.task_success = parse_component(j.at("task_success"), where + ".task_success", out.task_success);
    out.success_rate_scale = detail::get_number(j, where, "success_rate_scale", out.success_rate_scale);
    out.lambda_p = detail::get_number(j, where, "lambda_p", out.lambda_p);
    out.min_path_len = detail::get_int(j, where, "min_path_len", out.min_path_len);
    return out;
}

json reward_to_json(const RewardConfig& r) {
    return json{{"exec_penalty", component_to_json(r.exec_penalty)},
                {"repeat_penalty", component_to_json(r.repeat_penalty)},
                {"edge_penalty", component_to_json(r.edge_penalty)},
                {"task_success", component_to_json(r.task_success)},
                {"success_rate_scale", r.success_rate_scale},
                {"lambda_p", r.lambda_p},
                {"min_path_len", r.min_path_len}};
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoFailure, "cannot open '" + path.string() + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

std::vector<RoleSpec> parse_roles(const json& j, const std::filesystem::path& base_dir) {
    detail::require_array(j, "roles");
    std::vector<RoleSpec> out;
    for (const json& entry : j) {
        const std::string where = "roles[" + std::to_string(out.size()) + "]";
        detail::require_keys(entry, where,
                             {"name", "prompt", "prompt_file", "may_terminate", "cost", "description"});
        RoleSpec role;
        role.name = detail::require_string(entry, where, "name");
        if (entry.contains("prompt") && entry.contains("prompt_file"))
            throw Error(ErrorCode::SchemaViolation, where + ": give either prompt or prompt_file, not both");
        if (entry.contains("prompt_file"))
            role.prompt = read_text_file(base_dir / detail::require_string(entry, where, "prompt_file"));
        else
            role.prompt = detail::get_string(entry, where, "prompt", "");
        role.may_terminate = detail::get_bool(entry, where, "may_terminate", false);
        role.cost = detail::get_number(entry, where, "cost", 1.0);
        role.description = detail::get_string(entry, where, "description", "");
        out.push_back(std::move(role));
    }
    return out;
}

BackendSettings parse_backend(const json& j, const std::string& where) {
    detail::require_keys(j, where,
                         {"model", "temperature", "max_tokens", "max_retries", "timeout_ms",
                          "max_inflight", "prompt_price", "completion_price", "system_prompt_file",
                          "start_prompt_file"});
    BackendSettings out;
    out.model = detail::get_string(j, where, "model", "");
    out.temperature = detail::get_number(j, where, "temperature", out.temperature);
    out.max_tokens = detail::get_int(j, where, "max_tokens", out.max_tokens);
    out.max_retries = detail::get_int(j, where, "max_retries", out.max_retries);
    out.timeout_ms = detail::get_int(j, where, "timeout_ms", out.timeout_ms);
    out.max_inflight = detail::get_int(j, where, "max_inflight", out.max_inflight);
    out.prompt_price = detail::get_number(j, where, "prompt_price", 0.0);
    out.completion_price = detail::get_number(j, where, "completion_price", 0.0);
    out.system_prompt_file = detail::get_string(j, where, "system_prompt_file", "");
    out.start_prompt_file = detail::get_string(j, where, "start_prompt_file", "");
    return out;
}

} // namespace

EngineConfig engine_config_from_json(const json& j, const std::string& where) {
    detail::require_keys(j, where,
                         {"alpha", "gamma", "epsilon0", "epsilon_decay", "epsilon_min", "top_k",
                          "cold_start_episodes", "prune_threshold", "max_steps", "reward"});
    EngineConfig out;
    out.alpha = detail::get_number(j, where, "alpha", out.alpha);
    out.gamma = detail::get_number(j, where, "gamma", out.gamma);
    out.epsilon0 = detail::get_number(j, where, "epsilon0", out.epsilon0);
    out.epsilon_decay = detail::get_number(j, where, "epsilon_decay", out.epsilon_decay);
    out.epsilon_min = detail::get_number(j, where, "epsilon_min", out.epsilon_min);
    out.top_k = detail::get_int(j, where, "top_k", out.top_k);
    out.cold_start_episodes = detail::get_int(j, where, "cold_start_episodes", out.cold_start_episodes);
    out.prune_threshold = detail::get_number(j, where, "prune_threshold", out.prune_threshold);
    out.max_steps = detail::get_int(j, where, "max_steps", out.max_steps);
    if (j.contains("reward")) out.reward = parse_reward(j.at("reward"), where + ".reward");
    return out;
}

json engine_config_to_json(const EngineConfig& c) {
    return json{{"alpha", c.alpha},
                {"gamma", c.gamma},
                {"epsilon0", c.epsilon0},
                {"epsilon_decay", c.epsilon_decay},
                {"epsilon_min", c.epsilon_min},
                {"top_k", c.top_k},
                {"cold_start_episodes", c.cold_start_episodes},
                {"prune_threshold", c.prune_threshold},
                {"max_steps", c.max_steps},
                {"reward", reward_to_json(c.reward)}};
}

AppConfig load_app_config(const std::filesystem::path& path) {
    json j = detail::load_json_file(path);
    detail::require_keys(j, path.string(), {"engine", "roles", "backend"});

    AppConfig out;
    if (j.contains("engine")) out.engine = engine_config_from_json(j.at("engine"), "engine");
    if (j.contains("roles")) out.roles = parse_roles(j.at("roles"), path.parent_path());
    if (j.contains("backend")) out.backend = parse_backend(j.at("backend"), "backend");
    return out;
}

void save_app_config(const AppConfig& config, const std::filesystem::path& path) {
    json roles = json::array();
    for (const RoleSpec& role : config.roles) {
        roles.push_back(json{{"name", role.name},
                             {"prompt", role.prompt},
                             {"may_terminate", role.may_terminate},
                             {"cost", role.cost},
                             {"description", role.description}});
    }
    json backend{{"model", config.backend.model},
                 {"temperature", config.backend.temperature},
                 {"max_tokens", config.backend.max_tokens},
                 {"max_retries", config.backend.max_retries},
                 {"timeout_ms", config.backend.timeout_ms},
                 {"max_inflight", config.backend.max_inflight},
                 {"prompt_price", config.backend.prompt_price},
                 {"completion_price", config.backend.completion_price},
                 {"system_prompt_file", config.backend.system_prompt_file},
                 {"start_prompt_file", config.backend.start_prompt_file}};
    json j{{"engine", engine_config_to_json(config.engine)}, {"roles", roles}, {"backend", backend}};
    detail::save_json_file(j, path);
}

} // namespace qflow
