#include "aicmab/policies.hpp"

#include <stdexcept>
#include <string>

namespace aicmab {

std::string_view to_string(PolicyKind p) {
    switch (p) {
        case PolicyKind::Oracle: return "oracle";
        case PolicyKind::EpsGreedy: return "eps-greedy";
        case PolicyKind::Thompson: return "lts";
        case PolicyKind::ActiveInference: return "ai";
    }
    return "unknown";
}

PolicyKind parse_policy_kind(std::string_view name) {
    if (name == "oracle") return PolicyKind::Oracle;
    if (name == "eps-greedy") return PolicyKind::EpsGreedy;
    if (name == "lts") return PolicyKind::Thompson;
    if (name == "ai") return PolicyKind::ActiveInference;
    throw std::invalid_argument("unknown policy: " + std::string(name));
}

AgentState AgentState::initial(std::size_t num_arms, Eigen::Index context_dim, PolicyKind policy,
                               FusionMethod fusion, double epsilon, PriorPreference pref, std::size_t n_samples) {
    detail::require(num_arms >= 1 && context_dim >= 1, "K and C must be positive");
    detail::require(epsilon >= 0.0 && epsilon <= 1.0, "epsilon must lie in [0,1]");
    AgentState s;
    s.beliefs.assign(num_arms, GaussianBeliefd::standard(context_dim));
    s.policy = policy;
    s.fusion = fusion;
    s.epsilon = epsilon;
    s.pref = pref;
    s.n_samples = n_samples;
    s.pull_counts.assign(num_arms, 0);
    return s;
}

namespace {

template <typename Score>
std::size_t argmax(std::size_t n, Score&& score) {
    std::size_t best = 0;
    double best_value = score(0);
    for (std::size_t k = 1; k < n; ++k) {
        const double v = score(k);
        if (v > best_value) {
            best = k;
            best_value = v;
        }
    }
    return best;
}

}  // namespace

std::size_t oracle_select(const std::vector<double>& true_probs) {
    if (true_probs.empty()) throw std::invalid_argument("oracle needs at least one arm");
    return argmax(true_probs.size(), [&](std::size_t k) { return true_probs[k]; });
}

std::size_t epsilon_greedy_select(const AgentState& state, const ContextVector& x, Rng& rng) {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    if (unif(rng) < state.epsilon) {
        std::uniform_int_distribution<std::size_t> pick(0, state.num_arms() - 1);
        return pick(rng);
    }
    return argmax(state.num_arms(),
                  [&](std::size_t k) { return sigmoid(state.beliefs[k].mean().dot(x.values())); });
}

std::size_t thompson_select(const AgentState& state, const ContextVector& x, Rng& rng) {
    std::vector<double> activation(state.num_arms());
    for (std::size_t k = 0; k < state.num_arms(); ++k) {
        activation[k] = sample_one(state.beliefs[k], rng).dot(x.values());
    }
    return argmax(activation.size(), [&](std::size_t k) { return activation[k]; });
}

std::size_t select_action(const AgentState& state, const ContextVector& x, const std::vector<double>& true_probs,
                          Rng& rng) {
    switch (state.policy) {
        case PolicyKind::Oracle: return oracle_select(true_probs);
        case PolicyKind::EpsGreedy: return epsilon_greedy_select(state, x, rng);
        case PolicyKind::Thompson: return thompson_select(state, x, rng);
        case PolicyKind::ActiveInference:
            return select_action_active_inference(state.beliefs, x, state.pref, state.fusion, rng, state.n_samples);
    }
    throw std::invalid_argument("unknown policy");
}

AgentState update_belief(AgentState state, std::size_t arm, const ContextVector& x, Outcome outcome, Rng& rng) {
    if (arm >= state.num_arms()) throw std::out_of_range("arm index out of range");
    if (state.policy != PolicyKind::Oracle) {
        FusionResult fused = fuse(state.fusion, state.beliefs[arm], x, outcome, state.n_samples, rng);
        state.beliefs[arm] = std::move(fused.posterior);
    }
    ++state.pull_counts[arm];
    return state;
}

}  // namespace aicmab
