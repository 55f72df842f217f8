#pragma once
// Synthetic environments and training loops. Scenarios drive the real
// orchestrator with scripted agents whose routing is a pure function of the
// visited role sequence (plus a seeded RNG), so learning dynamics can be
// reproduced and checked without an LLM. Also home of the value-iteration
// oracle used to verify convergence, and the Sankey flow export.

#include "qflow/agents.hpp"
#include "qflow/config.hpp"
#include "qflow/orchestrator.hpp"
#include "qflow/qtable.hpp"
#include "qflow/reward.hpp"
#include "qflow/types.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace qflow::bench {

// ---------------------------------------------------------------------------
// Scripted routing

/// How a matched rule picks among the offered actions.
struct RuleChoice {
    enum class Kind { Prefer, Uniform, UniformNoEnd };
    Kind kind = Kind::Uniform;
    std::vector<std::string> prefer; // action labels, first offered wins; "END" allowed
    double try_p = 1.0;              // probability gate; on failure the rule is skipped

    bool operator==(const RuleChoice&) const = default;
};

/// First rule whose state and visit conditions match, and whose choice
/// yields an offered action, decides the step. Falls through otherwise.
struct RoutingRule {
    std::string state = "*"; // state label or "*"
    std::map<std::string, int> min_visits; // role -> executed at least
    std::map<std::string, int> max_visits; // role -> executed at most
    RuleChoice choice;

    bool operator==(const RoutingRule&) const = default;
};

struct RoutingScript {
    std::vector<RoutingRule> rules;
    bool operator==(const RoutingScript&) const = default;
};

struct TaskSpec {
    std::string id;
    std::string difficulty;
    bool operator==(const TaskSpec&) const = default;
};

struct ScenarioSpec {
    std::string name;
    std::vector<RoleSpec> roles;
    std::map<std::string, RoutingScript> scripts; // keyed by difficulty
    std::vector<TaskSpec> task_mix;               // episodes cycle through this list
    int episodes = 0;
    std::uint64_t seed = 0;
    EngineConfig engine;
    double prompt_price = 0.0;
    double completion_price = 0.0;
};

/// Validates cross-references (script targets and task difficulties must
/// exist, roles must validate) and returns the role set.
RoleSet validate_scenario(const ScenarioSpec& spec);

/// Backend whose next-node decisions come from the scenario's routing rules.
class RoutingBackend : public AgentBackend {
public:
    RoutingBackend(RoleSet roles, std::map<std::string, RoutingScript> scripts);

    /// Selects the script and reseeds the per-episode RNG.
    void begin_episode(const std::string& task_id, const std::string& difficulty, std::uint64_t seed);

    AgentResponse invoke(const AgentRequest& request,
                         std::optional<std::chrono::milliseconds> timeout = {}) override;

private:
    RoleSet roles_;
    std::map<std::string, RoutingScript> scripts_;
    const RoutingScript* active_ = nullptr;
    std::string task_id_;
    std::mt19937_64 rng_;
};

// ---------------------------------------------------------------------------
// Reports

struct EpisodeRow {
    int episode = 0;
    std::string task_id;
    std::string difficulty;
    Outcome outcome = Outcome::AgentError;
    int length = 0; // number of edges
    double cumulative_reward = 0.0;
    double cost = 0.0;
};

struct RoleRow {
    std::string role;
    std::uint64_t n_execute = 0;
    std::uint64_t n_success = 0;
    double success_rate = 0.0;
};

struct RunReport {
    std::string scenario;
    int episodes = 0;
    std::vector<EpisodeRow> rows;
    std::vector<RoleRow> roles;
    QTable final_q;
    RoleStats final_stats;
    std::vector<EpisodeTrace> traces;
    double pass_rate = 0.0;
    bool pass_rate_defined = false; // false for 0-episode runs
    std::map<std::string, double> mean_length_by_difficulty;
    std::map<std::string, double> trained_mean_length_by_difficulty; // episodes past cold start
    double total_cost = 0.0;
};

/// Runs spec.episodes episodes through the orchestrator with the routing
/// backend. Fully deterministic given (spec, config): per-episode RNG seeds
/// derive from spec.seed and the episode index.
RunReport run_scenario(const ScenarioSpec& spec, const EngineConfig& config);

/// Report serialization: report.json plus episodes.csv / roles.csv tables.
void save_report(const RunReport& report, const std::filesystem::path& directory);

// ---------------------------------------------------------------------------
// Sankey export

/// One flow: at `column`, `count` traces moved source -> target.
struct SankeyFlow {
    int column = 0;
    std::string source;
    std::string target;
    std::uint64_t count = 0;

    auto operator<=>(const SankeyFlow&) const = default;
};

/// Aggregates traces into per-column flow triples. Successful traces end in
/// END; other traces end in a synthetic terminal named after their outcome
/// (PRUNED / STEP_LIMIT / AGENT_ERROR) so that flow is conserved at every
/// intermediate column.
std::vector<SankeyFlow> export_sankey(const std::vector<EpisodeTrace>& traces);

/// CSV with header "column,source,target,count".
void save_sankey_csv(const std::vector<SankeyFlow>& flows, const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Value-iteration oracle

/// Explicit finite deterministic MDP. Terminal transitions have no successor.
struct Mdp {
    struct Arc {
        std::string action;
        double reward = 0.0;
        std::optional<std::string> next; // empty = absorbing
    };
    std::map<std::string, std::vector<Arc>> arcs; // state -> available arcs
    double gamma = 0.9;
};

using QValues = std::map<std::pair<std::string, std::string>, double>;

/// Fixed point of the Bellman optimality operator, computed by exhaustive
/// sweeps until the max-norm change drops below `tol`. Independent of the
/// Q-learning code paths. Requires gamma < 1.
QValues value_iteration_oracle(const Mdp& mdp, double tol = 1e-12, int max_sweeps = 1000000);

/// Greedy action per state from a Q-value map, ties lexicographic.
std::map<std::string, std::string> oracle_greedy(const QValues& q);

/// The engine's episode dynamics as an explicit MDP: states are START plus
/// the roles, choosing Goto(r) moves to r, End absorbs. Only valid for
/// configurations with stationary rewards (success_rate_scale and
/// min_path_len must be 0).
Mdp stationary_mdp(const RoleSet& roles, const EngineConfig& config);

// ---------------------------------------------------------------------------
// Scenario persistence and the shipped scenario zoo

ScenarioSpec load_scenario(const std::filesystem::path& path);
void save_scenario(const ScenarioSpec& spec, const std::filesystem::path& path);

namespace scenarios {
/// Five useful roles plus a traitor whose participation derails the episode.
ScenarioSpec traitor();
/// Easy/hard task mix where hard tasks force repair loops.
ScenarioSpec adaptive_mix();
/// Two roles stuck in a self-loop; every episode prunes.
ScenarioSpec forced_loop();
/// Uniform-exploration scenarios for convergence checks.
ScenarioSpec chain3();
ScenarioSpec branch5();
ScenarioSpec traitor_layout();
} // namespace scenarios

} // namespace qflow::bench
