#include "qflow/reward.hpp"

#include <cmath>

namespace qflow {

RoleStats::RoleStats(const RoleSet& roles) {
    for (const auto& [name, role] : roles) rows_[name] = Row{};
}

const RoleStats::Row& RoleStats::row(const std::string& role) const {
    auto it = rows_.find(role);
    if (it == rows_.end()) throw Error(ErrorCode::UnknownRole, "no stats for role '" + role + "'");
    return it->second;
}

void RoleStats::add_execution(const std::string& role, std::uint64_t executions, std::uint64_t successes) {
    Row& r = rows_[role];
    r.n_execute += executions;
    r.n_success += successes;
    if (r.n_success > r.n_execute)
        throw Error(ErrorCode::InvalidArgument, "role '" + role + "' would have more successes than executions");
}

std::uint64_t RoleStats::executions(const std::string& role) const { return row(role).n_execute; }
std::uint64_t RoleStats::successes(const std::string& role) const { return row(role).n_success; }

std::vector<std::string> RoleStats::roles() const {
    std::vector<std::string> out;
    out.reserve(rows_.size());
    for (const auto& [name, r] : rows_) out.push_back(name);
    return out;
}

double component_reward(double value, double scale) {
    if (!std::isfinite(value) || !std::isfinite(scale))
        throw Error(ErrorCode::InvalidArgument, "reward component inputs must be finite");
    return value * scale;
}

double success_rate(const RoleStats& stats, const std::string& role) {
    std::uint64_t executions = stats.executions(role); // throws UnknownRole
    if (executions == 0) return 0.0;                   // a role that never ran carries no evidence
    return static_cast<double>(stats.successes(role)) / static_cast<double>(executions);
}

double step_reward(const State& s, const Action& next, const RoleSet& roles,
                   const RewardConfig& config, const RoleStats& stats) {
    if (next.is_end()) throw Error(ErrorCode::InvalidArgument, "step_reward is for non-terminal transitions");
    const RoleSpec& target = roles.at(next.role());

    double r = -component_reward(config.exec_penalty.value, config.exec_penalty.scale) * target.cost;
    r += config.success_rate_scale * success_rate(stats, target.name);
    if (!s.is_start() && s.current_role() == target.name)
        r -= component_reward(config.repeat_penalty.value, config.repeat_penalty.scale);
    return r;
}

double terminal_reward(int path_len, const RewardConfig& config) {
    double shortfall = std::max(0, config.min_path_len - path_len);
    return component_reward(config.task_success.value, config.task_success.scale) -
           config.lambda_p * shortfall;
}

void record_episode(RoleStats& stats, const EpisodeTrace& trace) {
    // Count executions per role, then fold in one batch per role.
    std::map<std::string, std::uint64_t> counts;
    for (const std::string& role : trace.executed) ++counts[role];
    bool success = trace.outcome == Outcome::Success;
    for (const auto& [role, n] : counts) stats.add_execution(role, n, success ? n : 0);
}

} // namespace qflow
