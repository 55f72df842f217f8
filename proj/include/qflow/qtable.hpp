#pragma once
// Tabular Q-learning: value storage, temporal-difference updates, top-k
// extraction, epsilon-greedy decision spaces, epsilon decay, persistence.
//
// The table is single-writer: the engine serializes all updates. Readers
// may copy the table and inspect the snapshot concurrently.

#include "qflow/types.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <random>
#include <vector>

namespace qflow {

class QTable {
public:
    /// Q(s, a); absent entries read as exactly 0.
    double value(const State& s, const Action& a) const;

    /// Number of td_update calls applied to (s, a).
    std::uint64_t update_count(const State& s, const Action& a) const;

    /// Bootstrap value of a successor state: max over all actions of
    /// Q(s, a'), where actions never updated contribute 0. Hence never
    /// negative. Callers handle the END/absorbing case (value 0) themselves.
    double state_value(const State& s) const;

    void set(const State& s, const Action& a, double q, std::uint64_t n);

    bool empty() const { return cells_.empty(); }
    std::size_t entry_count() const;

    /// State labels that have at least one entry, lexicographic.
    std::vector<std::string> states() const;
    /// (action, q) pairs recorded for a state, ordered by action label.
    std::vector<std::pair<Action, double>> entries(const State& s) const;

    // Hyperparameters the table was trained with; persisted as metadata.
    double alpha = 0.1;
    double gamma = 0.9;

    bool operator==(const QTable&) const = default;

private:
    struct Cell {
        double q = 0.0;
        std::uint64_t n = 0;
        bool operator==(const Cell&) const = default;
    };
    // state label -> action label -> cell; ordered for deterministic output
    std::map<std::string, std::map<std::string, Cell>> cells_;
};

/// One temporal-difference step:
///   Q(s,a) <- (1-alpha) * Q(s,a) + alpha * (r + gamma * V(s_next))
/// where V is QTable::state_value, and V of the absorbing successor reached
/// via End (s_next = nullopt) is 0. Increments the update counter of (s, a);
/// every other entry is untouched.
void td_update(QTable& q, const State& s, const Action& a, double reward,
               const std::optional<State>& s_next, double alpha, double gamma);

/// Argmax of Q(s, .) over `available`; ties break on lexicographic action label.
Action greedy_policy(const QTable& q, const State& s, const std::vector<Action>& available);

/// The k highest-Q actions from `available` (all of them if fewer), ordered
/// by descending Q then lexicographic label.
std::vector<Action> top_k(const QTable& q, const State& s, const std::vector<Action>& available, int k);

/// Actions offered to an agent, each tagged with how it got in.
struct DecisionSpace {
    std::vector<Action> actions;
    std::vector<Provenance> via; // parallel to actions

    bool contains(const Action& a) const;
    std::vector<std::pair<std::string, Provenance>> labels() const;
};

/// Builds the decision space for one step. During cold start the full
/// available set is offered. Otherwise the top-k actions are offered, plus
/// (with probability epsilon) one uniformly random action from the rest.
/// Exploration never removes a top-k action and adds at most one extra.
DecisionSpace decision_space(const QTable& q, const State& s, const std::vector<Action>& available,
                             int k, double epsilon, bool cold_start, std::mt19937_64& rng);

/// max(floor, epsilon * decay).
double decay_epsilon(double epsilon, double decay, double floor);

/// Epsilon in effect for a given episode: epsilon0 decayed once per
/// preceding episode, clamped at epsilon_min.
double epsilon_for_episode(double epsilon0, double decay, double floor, int episode_index);

/// File format: {"version":1,"alpha":..,"gamma":..,"entries":[{"state","action","q","n"},..]}
/// with entries sorted by (state, action) and numbers written with full
/// round-trip precision. load(save(q)) == q, update counts included.
void save_qtable(const QTable& q, const std::filesystem::path& path);
QTable load_qtable(const std::filesystem::path& path);

} // namespace qflow
