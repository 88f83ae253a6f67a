#include "aicmab/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <thread>

namespace aicmab {

std::string AgentConfig::fusion_label() const {
    return policy == PolicyKind::Oracle ? "none" : std::string(to_string(fusion));
}

std::vector<AgentConfig> all_agent_configs() {
    std::vector<AgentConfig> out{{PolicyKind::Oracle, FusionMethod::Laplace}};
    for (const auto policy : {PolicyKind::EpsGreedy, PolicyKind::Thompson, PolicyKind::ActiveInference}) {
        for (const auto fusion : {FusionMethod::VBIS, FusionMethod::Laplace}) out.push_back({policy, fusion});
    }
    return out;
}

void ExperimentConfig::validate() const {
    detail::require(num_arms >= 1, "K must be positive");
    detail::require(context_dim >= 1, "C must be positive");
    detail::require(iterations >= 1, "T must be positive");
    detail::require(mc_runs >= 1, "runs must be positive");
    detail::require(epsilon >= 0.0 && epsilon <= 1.0, "epsilon must lie in [0,1]");
    detail::require(n_samples >= 2, "n-samples must be at least 2");
}

EpisodeError::EpisodeError(const std::string& what, std::size_t run, std::uint64_t s)
    : std::runtime_error(what + " (run " + std::to_string(run) + ", seed " + std::to_string(s) + ")"),
      run_index(run),
      seed(s) {}

std::vector<IterationRecord> run_episode(const ExperimentConfig& config, std::size_t run_index) {
    config.validate();
    const std::uint64_t seed = stream_seed(config.master_seed, run_index);
    try {
        Rng rng(seed);
        const Environment env = generate_environment(config.num_arms, config.context_dim, rng);
        AgentState state = AgentState::initial(config.num_arms, config.context_dim, config.agent.policy,
                                               config.agent.fusion, config.epsilon, config.pref, config.n_samples);

        std::vector<IterationRecord> records;
        records.reserve(config.iterations);
        double cum = 0.0;
        for (std::size_t t = 0; t < config.iterations; ++t) {
            const auto start = std::chrono::steady_clock::now();
            const std::size_t arm = select_action(state, env.context, env.true_probs, rng);
            const auto stop = std::chrono::steady_clock::now();

            const Outcome outcome = pull(env, arm, rng);
            state = update_belief(std::move(state), arm, env.context, outcome, rng);

            const double instant = env.best_prob - env.true_probs[arm];
            cum += instant;
            records.push_back({arm, outcome, instant, cum,
                               std::chrono::duration_cast<std::chrono::nanoseconds>(stop - start).count()});
        }
        return records;
    } catch (const EpisodeError&) {
        throw;
    } catch (const std::exception& e) {
        throw EpisodeError(e.what(), run_index, seed);
    }
}

double RegretTrace::mean_final_regret() const {
    return std::accumulate(per_run_final.begin(), per_run_final.end(), 0.0) /
           static_cast<double>(per_run_final.size());
}

double RegretTrace::final_regret_stderr() const {
    const std::size_t n = per_run_final.size();
    if (n < 2) return 0.0;
    const double mean = mean_final_regret();
    double ss = 0.0;
    for (const double v : per_run_final) ss += (v - mean) * (v - mean);
    return std::sqrt(ss / static_cast<double>(n - 1)) / std::sqrt(static_cast<double>(n));
}

RegretTrace run_monte_carlo(const ExperimentConfig& config, std::size_t workers) {
    config.validate();
    const std::size_t runs = config.mc_runs;
    std::vector<std::vector<IterationRecord>> episodes(runs);

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::size_t failed_run = runs;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (std::size_t r = next++; r < runs; r = next++) {
            try {
                episodes[r] = run_episode(config, r);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                // Report the lowest failing run so the error is independent of scheduling.
                if (r < failed_run) {
                    failed_run = r;
                    failure = std::current_exception();
                }
            }
        }
    };
    const std::size_t threads = std::clamp<std::size_t>(workers, 1, runs);
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t i = 0; i < threads; ++i) pool.emplace_back(worker);
    }
    if (failure) std::rethrow_exception(failure);

    RegretTrace trace;
    trace.config = config;
    trace.mean_regret.assign(config.iterations, 0.0);
    double time_sum = 0.0;
    for (std::size_t r = 0; r < runs; ++r) {
        std::vector<double> cum(config.iterations);
        std::vector<std::int64_t> times(config.iterations);
        for (std::size_t t = 0; t < config.iterations; ++t) {
            cum[t] = episodes[r][t].cum_regret;
            times[t] = episodes[r][t].selection_time_ns;
            trace.mean_regret[t] += cum[t];
            time_sum += static_cast<double>(times[t]);
        }
        trace.per_run_final.push_back(cum.back());
        trace.cum_regret.push_back(std::move(cum));
        trace.selection_time_ns.push_back(std::move(times));
    }
    for (double& m : trace.mean_regret) m /= static_cast<double>(runs);
    trace.mean_selection_time_s = time_sum * 1e-9 / static_cast<double>(runs * config.iterations);
    return trace;
}

}  // namespace aicmab
