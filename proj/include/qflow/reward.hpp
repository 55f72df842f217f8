#pragma once
// Per-transition rewards and per-role success statistics.
//
// Non-terminal step: penalize executing the chosen role (weighted by its
// cost), penalize immediate repeats, reward the role's historical success
// rate. Terminal step: large task reward minus a short-path penalty.
// Under the default table every non-terminal step is strictly negative.

#include "qflow/config.hpp"
#include "qflow/types.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace qflow {

/// Execution / success counters per role. Written only between episodes;
/// read-only while an episode runs.
class RoleStats {
public:
    RoleStats() = default;
    /// Stats with a zeroed row for every role in the set.
    explicit RoleStats(const RoleSet& roles);

    void add_execution(const std::string& role, std::uint64_t executions, std::uint64_t successes);

    std::uint64_t executions(const std::string& role) const;
    std::uint64_t successes(const std::string& role) const;
    bool knows(const std::string& role) const { return rows_.count(role) != 0; }

    std::vector<std::string> roles() const;

    bool operator==(const RoleStats&) const = default;

private:
    struct Row {
        std::uint64_t n_execute = 0;
        std::uint64_t n_success = 0;
        bool operator==(const Row&) const = default;
    };
    const Row& row(const std::string& role) const;
    std::map<std::string, Row> rows_;
};

/// Scaled magnitude of one reward component: value * scale.
double component_reward(double value, double scale);

/// n_success / n_execute for the role; 0 when the role has never run.
double success_rate(const RoleStats& stats, const std::string& role);

/// Reward for a non-terminal transition from `s` to Goto(role):
///   -exec_penalty * cost(role) + success_rate_scale * success_rate(role)
///   - repeat_penalty if role == s.current_role.
double step_reward(const State& s, const Action& next, const RoleSet& roles,
                   const RewardConfig& config, const RoleStats& stats);

/// Reward for an agent-chosen End after `path_len` role executions:
///   task_success - lambda_p * max(0, min_path_len - path_len).
double terminal_reward(int path_len, const RewardConfig& config);

/// Folds a finalized trace into the stats: each executed role gains its
/// execution count, and its success count too when the episode succeeded.
void record_episode(RoleStats& stats, const EpisodeTrace& trace);

} // namespace qflow
