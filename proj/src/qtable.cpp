#include "qflow/qtable.hpp"

#include "json_util.hpp"

#include <algorithm>
#include <cmath>

namespace qflow {

namespace {

// Uniform double in [0,1) from the top 53 bits; identical across platforms,
// unlike std::uniform_real_distribution.
double canonical(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::size_t pick_index(std::mt19937_64& rng, std::size_t n) {
    return static_cast<std::size_t>(rng() % n);
}

} // namespace

double QTable::value(const State& s, const Action& a) const {
    auto row = cells_.find(s.label());
    if (row == cells_.end()) return 0.0;
    auto cell = row->second.find(a.label());
    return cell == row->second.end() ? 0.0 : cell->second.q;
}

std::uint64_t QTable::update_count(const State& s, const Action& a) const {
    auto row = cells_.find(s.label());
    if (row == cells_.end()) return 0;
    auto cell = row->second.find(a.label());
    return cell == row->second.end() ? 0 : cell->second.n;
}

double QTable::state_value(const State& s) const {
    // Absent actions read as 0, so the max over "all" actions is the max of
    // the recorded values and 0.
    double best = 0.0;
    auto row = cells_.find(s.label());
    if (row == cells_.end()) return best;
    for (const auto& [label, cell] : row->second) best = std::max(best, cell.q);
    return best;
}

void QTable::set(const State& s, const Action& a, double q, std::uint64_t n) {
    if (!std::isfinite(q)) throw Error(ErrorCode::InvalidArgument, "Q-values must be finite");
    cells_[s.label()][a.label()] = Cell{q, n};
}

std::size_t QTable::entry_count() const {
    std::size_t total = 0;
    for (const auto& [state, row] : cells_) total += row.size();
    return total;
}

std::vector<std::string> QTable::states() const {
    std::vector<std::string> out;
    out.reserve(cells_.size());
    for (const auto& [state, row] : cells_) out.push_back(state);
    return out;
}

std::vector<std::pair<Action, double>> QTable::entries(const State& s) const {
    std::vector<std::pair<Action, double>> out;
    auto row = cells_.find(s.label());
    if (row == cells_.end()) return out;
    for (const auto& [label, cell] : row->second) {
        Action a = (label == kEndLabel) ? Action::end() : Action::goto_role(label);
        out.emplace_back(a, cell.q);
    }
    return out;
}

void td_update(QTable& q, const State& s, const Action& a, double reward,
               const std::optional<State>& s_next, double alpha, double gamma) {
    if (!std::isfinite(reward)) throw Error(ErrorCode::NonFiniteReward, "reward must be finite");
    if (!(alpha > 0.0 && alpha < 1.0)) throw Error(ErrorCode::InvalidArgument, "alpha must be in (0,1)");
    if (!(gamma >= 0.0 && gamma < 1.0)) throw Error(ErrorCode::InvalidArgument, "gamma must be in [0,1)");

    double next_value = s_next ? q.state_value(*s_next) : 0.0;
    double target = reward + gamma * next_value;
    double updated = (1.0 - alpha) * q.value(s, a) + alpha * target;
    q.set(s, a, updated, q.update_count(s, a) + 1);
}

namespace {

// Descending Q, then lexicographic label. Shared by greedy and top-k.
std::vector<Action> ranked(const QTable& q, const State& s, const std::vector<Action>& available) {
    if (available.empty()) throw Error(ErrorCode::EmptyActionSet, "no actions available in state " + s.label());
    std::vector<Action> order = available;
    std::sort(order.begin(), order.end(), [&](const Action& lhs, const Action& rhs) {
        double ql = q.value(s, lhs), qr = q.value(s, rhs);
        if (ql != qr) return ql > qr;
        return lhs.label() < rhs.label();
    });
    return order;
}

} // namespace

Action greedy_policy(const QTable& q, const State& s, const std::vector<Action>& available) {
    return ranked(q, s, available).front();
}

std::vector<Action> top_k(const QTable& q, const State& s, const std::vector<Action>& available, int k) {
    if (k < 1) throw Error(ErrorCode::InvalidArgument, "k must be positive");
    std::vector<Action> order = ranked(q, s, available);
    if (static_cast<int>(order.size()) > k) order.resize(static_cast<std::size_t>(k));
    return order;
}

bool DecisionSpace::contains(const Action& a) const {
    return std::find(actions.begin(), actions.end(), a) != actions.end();
}

std::vector<std::pair<std::string, Provenance>> DecisionSpace::labels() const {
    std::vector<std::pair<std::string, Provenance>> out;
    out.reserve(actions.size());
    for (std::size_t i = 0; i < actions.size(); ++i) out.emplace_back(actions[i].label(), via[i]);
    return out;
}

DecisionSpace decision_space(const QTable& q, const State& s, const std::vector<Action>& available,
                             int k, double epsilon, bool cold_start, std::mt19937_64& rng) {
    if (available.empty()) throw Error(ErrorCode::EmptyActionSet, "no actions available in state " + s.label());
    if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw Error(ErrorCode::InvalidArgument, "epsilon must be in [0,1]");

    DecisionSpace space;
    if (cold_start) {
        space.actions = available;
        space.via.assign(available.size(), Provenance::ColdStart);
        return space;
    }

    space.actions = top_k(q, s, available, k);
    space.via.assign(space.actions.size(), Provenance::TopK);

    // The coin is drawn before looking at the remainder so the RNG stream
    // does not depend on the table contents.
    bool explore = canonical(rng) < epsilon;
    std::vector<Action> rest;
    for (const Action& a : available)
        if (!space.contains(a)) rest.push_back(a);
    if (explore && !rest.empty()) {
        std::sort(rest.begin(), rest.end(), [](const Action& l, const Action& r) { return l.label() < r.label(); });
        space.actions.push_back(rest[pick_index(rng, rest.size())]);
        space.via.push_back(Provenance::Exploration);
    }
    return space;
}

double decay_epsilon(double epsilon, double decay, double floor) {
    return std::max(floor, epsilon * decay);
}

double epsilon_for_episode(double epsilon0, double decay, double floor, int episode_index) {
    double epsilon = epsilon0;
    for (int i = 0; i < episode_index; ++i) {
        epsilon = decay_epsilon(epsilon, decay, floor);
        if (epsilon <= floor) return floor;
    }
    return epsilon;
}

void save_qtable(const QTable& q, const std::filesystem::path& path) {
    detail::json entries = detail::json::array();
    for (const std::string& state : q.states()) {
        State s = (state == kStartLabel) ? State::start() : State::of_role(state);
        for (const auto& [action, value] : q.entries(s)) {
            entries.push_back(detail::json{{"state", state},
                                           {"action", action.label()},
                                           {"q", value},
                                           {"n", q.update_count(s, action)}});
        }
    }
    detail::json j{{"version", 1}, {"alpha", q.alpha}, {"gamma", q.gamma}, {"entries", entries}};
    detail::save_json_file(j, path);
}

QTable load_qtable(const std::filesystem::path& path) {
    detail::json j = detail::load_json_file(path);
    detail::require_keys(j, path.string(), {"version", "alpha", "gamma", "entries"});
    if (detail::get_int(j, path.string(), "version", 1) != 1)
        throw Error(ErrorCode::SchemaViolation, "unsupported qtable version");

    QTable q;
    q.alpha = detail::require_number(j, path.string(), "alpha");
    q.gamma = detail::require_number(j, path.string(), "gamma");
    if (!j.contains("entries")) throw Error(ErrorCode::SchemaViolation, "qtable missing entries");
    detail::require_array(j.at("entries"), "entries");
    for (const auto& entry : j.at("entries")) {
        detail::require_keys(entry, "entries[]", {"state", "action", "q", "n"});
        std::string state_label = detail::require_string(entry, "entries[]", "state");
        std::string action_label = detail::require_string(entry, "entries[]", "action");
        double value = detail::require_number(entry, "entries[]", "q");
        if (!std::isfinite(value)) throw Error(ErrorCode::SchemaViolation, "entries[].q must be finite");
        std::uint64_t n = detail::get_uint64(entry, "entries[]", "n", 0);
        State s = (state_label == kStartLabel) ? State::start() : State::of_role(state_label);
        Action a = (action_label == kEndLabel) ? Action::end() : Action::goto_role(action_label);
        q.set(s, a, value, n);
    }
    return q;
}

} // namespace qflow
