#pragma once

#include "aicmab/bandit_env.hpp"
#include "aicmab/policies.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace aicmab {

/// One agent configuration of the comparison: policy plus update engine.
struct AgentConfig {
    PolicyKind policy = PolicyKind::Oracle;
    FusionMethod fusion = FusionMethod::Laplace;

    /// "none" for the oracle, which never updates beliefs.
    [[nodiscard]] std::string fusion_label() const;
    friend bool operator==(const AgentConfig&, const AgentConfig&) = default;
};

/// Oracle, then ε-greedy, LTS and AI each paired with VBIS and Laplace.
std::vector<AgentConfig> all_agent_configs();

struct ExperimentConfig {
    std::size_t num_arms = 5;
    Eigen::Index context_dim = 5;
    std::size_t iterations = 100;
    std::size_t mc_runs = 100;
    AgentConfig agent;
    double epsilon = kDefaultEpsilon;
    PriorPreference pref{0.001, 0.999};
    std::size_t n_samples = kDefaultSamples;
    std::uint64_t master_seed = 0;

    /// Throws std::invalid_argument naming the offending field.
    void validate() const;
};

struct IterationRecord {
    std::size_t arm;
    Outcome outcome;
    double instant_regret;
    double cum_regret;
    std::int64_t selection_time_ns;
};

/// Error raised from inside an episode, carrying the seed needed to replay it.
class EpisodeError : public std::runtime_error {
public:
    EpisodeError(const std::string& what, std::size_t run_index, std::uint64_t seed);
    std::size_t run_index;
    std::uint64_t seed;
};

/// Plays one episode on the stream stream_seed(master_seed, run_index).
///
/// Draw order on that stream: environment (arm means, covariances and
/// parameters per arm, then the context), then per iteration the agent's
/// selection draws, the outcome draw and the agent's update draws.
std::vector<IterationRecord> run_episode(const ExperimentConfig& config, std::size_t run_index);

/// Monte Carlo aggregate over `mc_runs` episodes.
struct RegretTrace {
    ExperimentConfig config;
    std::vector<std::vector<double>> cum_regret;             // [run][iteration]
    std::vector<std::vector<std::int64_t>> selection_time_ns;  // [run][iteration]
    std::vector<double> mean_regret;                         // per iteration
    std::vector<double> per_run_final;
    double mean_selection_time_s = 0;

    [[nodiscard]] double mean_final_regret() const;
    /// Sample standard deviation of final regrets over √runs (0 for one run).
    [[nodiscard]] double final_regret_stderr() const;
};

/// Runs episodes on up to `workers` threads. Results depend only on the config.
RegretTrace run_monte_carlo(const ExperimentConfig& config, std::size_t workers = 1);

}  // namespace aicmab
