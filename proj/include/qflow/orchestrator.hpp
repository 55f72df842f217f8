#pragma once
// Episode driver. Runs one query end to end: builds decision spaces, invokes
// agents, forms weighted edges, enforces END gating, pruning and the step
// ceiling, and applies Q/stat updates only for episodes worth learning from
// (Success and StepLimit; pruned or failed episodes leave both untouched).

#include "qflow/agents.hpp"
#include "qflow/config.hpp"
#include "qflow/qtable.hpp"
#include "qflow/reward.hpp"
#include "qflow/types.hpp"

#include <filesystem>
#include <random>
#include <string>
#include <vector>

namespace qflow {

/// Mutable state of the episode in flight.
struct EpisodeContext {
    std::string query;
    int step = 0; // edges emitted so far
    State state = State::start();
    std::vector<std::string> executed;
    double cumulative_reward = 0.0;
    std::vector<TranscriptEntry> transcript;
    int episode_index = 0;
};

/// All Goto(r) for roles in the set, plus End iff something has executed and
/// the current role may terminate. START never offers End. Sorted by label.
std::vector<Action> available_actions(const State& s, const RoleSet& roles,
                                      const std::vector<std::string>& executed);

/// True when the episode must stop: cumulative reward fell below the prune
/// threshold (strict) or the step ceiling is reached. Threshold breaches are
/// reported as Pruned, ceiling exhaustion as StepLimit.
bool should_prune(const EpisodeContext& context, const EngineConfig& config);

/// Runs one episode. The backend chooses every transition, including the
/// opening one from START. On Success or StepLimit the Q-table is updated
/// edge by edge in path order and the stats absorb the trace; on Pruned or
/// AgentError both are returned exactly as given.
EpisodeTrace run_episode(const std::string& query, const RoleSet& roles, QTable& q,
                         RoleStats& stats, const EngineConfig& config, AgentBackend& backend,
                         int episode_index, std::mt19937_64& rng);

/// Trace file: one JSON document per episode with edges (from, to, reward,
/// step), outcome, cumulative reward, executed roles, offered decision
/// spaces, and the transcript.
void save_trace(const EpisodeTrace& trace, const std::filesystem::path& path);
EpisodeTrace load_trace(const std::filesystem::path& path);

// JSON-string forms used for .jsonl trace streams.
std::string trace_to_json(const EpisodeTrace& trace);
EpisodeTrace trace_from_json(const std::string& text);

} // namespace qflow
